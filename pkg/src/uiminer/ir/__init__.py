"""Textual three-address program representation and its tooling."""

from .model import Program  # noqa: F401
from .parser import parse_program, print_program  # noqa: F401
