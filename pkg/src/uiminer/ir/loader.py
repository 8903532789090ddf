"""Loading app code into a Program with the platform stubs present.

App code ships alongside the APK as a text file in the three-address
form (frontends that lift bytecode emit it). The loader parses the
bundled platform stubs first so every app parse happens against the
same framework surface.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Callable, Protocol

from ..errors import UiminerError
from .model import Program
from .parser import parse_program


class ProgramLoader(Protocol):
    """Turns raw code bytes into a Program that includes the stubs."""

    name: str

    def load(self, data: bytes) -> Program: ...


def _prelude_text() -> str:
    return resources.files("uiminer.data").joinpath("framework.air").read_text("utf-8")


_PRELUDE_CACHE: str | None = None


def load_prelude() -> Program:
    """A fresh Program containing only the platform stubs."""
    global _PRELUDE_CACHE
    if _PRELUDE_CACHE is None:
        _PRELUDE_CACHE = _prelude_text()
    return parse_program(_PRELUDE_CACHE)


class TextProgramLoader:
    """Loader for the textual three-address form (.air files)."""

    name = "air"

    def load(self, data: bytes) -> Program:
        return parse_program(data.decode("utf-8"), program=load_prelude())


_LOADERS: dict[str, Callable[[], ProgramLoader]] = {
    "air": TextProgramLoader,
}


def get_loader(name: str) -> ProgramLoader:
    try:
        factory = _LOADERS[name]
    except KeyError:
        raise UiminerError(f"no program loader named {name!r}") from None
    return factory()


def load_program(path: str | Path) -> Program:
    """Load a code file, picking the loader from the file suffix."""
    path = Path(path)
    suffix = path.suffix.lstrip(".").lower() or "air"
    return get_loader(suffix).load(path.read_bytes())
