"""Shared independent oracles for the test-suite.

Everything here is deliberately written against the definitions (string
rewriting, dense matrix powers, explicit tree scans) rather than reusing
the library's counting machinery, so tests cross two genuinely different
routes.
"""

from __future__ import annotations

import random

from dtnum import NumerationSystem, Substitution, find_seeds, make_system
from dtnum.errors import NumerationError


def expand_word(sub: Substitution, letter: str, level: int) -> tuple[str, ...]:
    """mu^level(letter) by direct string rewriting."""
    word = (letter,)
    for _ in range(level):
        out: list[str] = []
        for x in word:
            out.extend(sub.image(x))
        word = tuple(out)
    return word


def mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def mat_pow(m, e):
    n = len(m)
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [list(row) for row in m]
    while e:
        if e & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        e >>= 1
    return out


def descend_with_invariants(ns: NumerationSystem, n: int) -> list[int]:
    """Re-derive the digits of rep(n) with its own descent, asserting the
    partial-sum bound at every level (the decomposition-sum inequality)."""
    sub = ns.substitution
    if n >= 0:
        root = sub.letter_index(ns.right)
        k = ns.residue
        while sub.lengths.row(k)[root] <= n:
            k += ns.period
        t = n
    else:
        root = sub.letter_index(ns.left)
        k = ns.residue
        while sub.lengths.row(k)[root] < -n:
            k += ns.period
        t = sub.lengths.row(k)[root] + n
    digits = []
    x = root
    for level in range(k - 1, -1, -1):
        row = sub.lengths.row(level)
        im = sub.image_idx[x]
        acc = 0
        for i, y in enumerate(im):
            w = row[y]
            if t < acc + w:
                pos = i
                break
            acc += w
        # sum of the remaining decomposition is t, strictly below the
        # chosen child's upper cutoff |mu^level(m a)|
        assert t < acc + row[im[pos]]
        digits.append(pos)
        t -= acc
        x = im[pos]
    assert t == 0
    return digits


# -- random corpora ---------------------------------------------------------------

CORPUS_SEED = 20250809
LETTERS = "abcd"


def random_substitutions(rng: random.Random, count: int) -> list[Substitution]:
    """Valid random substitutions: alphabets <= 4 letters, images <= length 3."""
    out = []
    while len(out) < count:
        size = rng.randint(2, 4)
        letters = LETTERS[:size]
        images = tuple(
            tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
            for _ in letters
        )
        try:
            out.append(Substitution(tuple(letters), images))
        except NumerationError:
            continue
    return out


def corpus_systems(seed: int = CORPUS_SEED, min_systems: int = 200):
    """Deterministic stream of systems: all seeds and residues per substitution."""
    rng = random.Random(seed)
    systems: list[NumerationSystem] = []
    while len(systems) < min_systems:
        for sub in random_substitutions(rng, 5):
            for domain in ("Z", "N", "Zneg"):
                for spec in find_seeds(sub, domain):
                    for r in range(spec.period):
                        systems.append(NumerationSystem(sub, spec, r))
    return systems
