"""Golden fixture tables shipped with the package.

The CLI ``selftest`` subcommand and the test-suite both consume these:
small systems with hand-checked representation tables, expected
positionality verdicts, and expected weight prefixes.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Iterator

from .core import NumerationSystem, Substitution, make_system, substitution_from_text


def load_golden() -> dict:
    path = resources.files("dtnum").joinpath("data/golden.json")
    with path.open("r", encoding="utf-8") as f:
        return json.load(f)


def classic_fixtures() -> Iterator[tuple[dict, Substitution, str]]:
    """(entry, substitution, root letter) for the unsigned fixed-point tables."""
    for entry in load_golden()["classic"]:
        yield entry, substitution_from_text(entry["sub"]), entry["root"]


def complement_fixtures() -> Iterator[tuple[dict, NumerationSystem]]:
    """(entry, system) for the signed two-sided / one-sided tables."""
    for entry in load_golden()["complement"]:
        ns = make_system(entry["sub"], entry["seed"], residue=entry["residue"])
        yield entry, ns
