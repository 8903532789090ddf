"""Listener registration knowledge shared by the analyses.

The table maps a registration method (as a resolved stub signature,
e.g. android.view.View.setOnClickListener/1) to the callback it will
eventually dispatch and to the arguments that dispatch receives. Both
the call-graph augmentation and the concrete executor consume it so
the two stay in agreement about callback shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

RECIPE_TOKENS = ("receiver", "null", "zero")


@dataclass(frozen=True)
class CallbackSpec:
    registration: str  # stub signature of the registration method
    callback: str  # method name invoked on the listener
    recipe: tuple[str, ...]  # arguments after the listener receiver

    @property
    def arity(self) -> int:
        return len(self.recipe)


@lru_cache(maxsize=1)
def load_listener_table() -> dict[str, CallbackSpec]:
    text = resources.files("uiminer.data").joinpath("callbacks.tsv").read_text("utf-8")
    table: dict[str, CallbackSpec] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        registration, callback, recipe_text = line.split("\t")
        recipe = tuple(recipe_text.split(","))
        unknown = [t for t in recipe if t not in RECIPE_TOKENS]
        if unknown:
            raise ValueError(f"bad recipe tokens {unknown} for {registration}")
        table[registration] = CallbackSpec(registration, callback, recipe)
    return table
