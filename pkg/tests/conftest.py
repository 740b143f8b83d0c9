from __future__ import annotations

import pytest

from dtnum.golden import classic_fixtures, complement_fixtures


@pytest.fixture(scope="session")
def golden_classic():
    return list(classic_fixtures())


@pytest.fixture(scope="session")
def golden_complement():
    return list(complement_fixtures())


@pytest.fixture(scope="session")
def fixture_substitutions(golden_classic, golden_complement):
    """Deduplicated substitutions from all golden fixtures."""
    subs = {}
    for entry, sub, _root in golden_classic:
        subs.setdefault(sub.to_dsl(), sub)
    for entry, ns in golden_complement:
        subs.setdefault(ns.substitution.to_dsl(), ns.substitution)
    return list(subs.values())
