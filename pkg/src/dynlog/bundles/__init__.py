"""Worked example bundles shipped with the package.

``skyline`` is the airport shuttle automaton over three states with the full
Boolean algebra of propositions; ``apthbool`` is a partially known upper
functor on five of those propositions, used as synthesis input.
"""
from importlib.resources import files
from pathlib import Path

NAMES = ("skyline", "apthbool")


def path(bundle: str, name: str | None = None) -> Path:
    """Directory of a bundle, or one file inside it."""
    if bundle not in NAMES:
        raise KeyError(f"unknown bundle {bundle!r}; choose from {NAMES}")
    root = Path(str(files(__name__) / bundle))
    return root if name is None else root / name
