"""Bundled case-study rosters (CSV, see the package README for the schema)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

#: Roster files shipped with the package.
BUNDLED = ("napa.csv", "korca49.csv", "korca_case1.csv", "korca_case2.csv")


def path(name: str) -> Path:
    """Filesystem path of a bundled roster."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled roster named {name!r}; have {BUNDLED}")
    return Path(str(resources.files(__package__).joinpath(name)))


def read_text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")
