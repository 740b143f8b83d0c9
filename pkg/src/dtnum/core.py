"""Substitution algebra: parsing, validation, exact growth data, and seeds.

Letters are strings: single characters in the compact rule form
(``a->abc``), arbitrary identifiers in the spaced form (``a1 -> b a1``).
All image lengths are plain Python integers, so iterated lengths stay
exact at any depth; no string ``mu^k(a)`` is ever materialized by the
counting machinery.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal, Optional, Union

from .errors import (
    DslSyntaxError,
    EmptyImageError,
    InvalidSeedError,
    NoGrowingLetterError,
    UnknownLetterError,
)

Domain = Literal["N", "Zneg", "Z"]

DOMAINS: tuple[Domain, ...] = ("N", "Zneg", "Z")

_NAME_RE = re.compile(r"^[^\s,;|.]+$")


class _LengthTable:
    """Grow-on-demand rows of ``|mu^level(x)|`` per letter index.

    Rows are appended fully built and never mutated afterwards, so
    concurrent readers at worst redo a row; the visible contract stays
    pure.
    """

    __slots__ = ("_image_idx", "_rows")

    def __init__(self, image_idx: tuple[tuple[int, ...], ...]):
        self._image_idx = image_idx
        self._rows: list[list[int]] = [[1] * len(image_idx)]

    def row(self, level: int) -> list[int]:
        rows = self._rows
        img = self._image_idx
        while len(rows) <= level:
            prev = rows[-1]
            rows.append([sum(prev[y] for y in im) for im in img])
        return rows[level]


@dataclass(frozen=True)
class Substitution:
    """A morphism on a finite ordered alphabet with non-empty images.

    ``alphabet`` fixes letter order everywhere: adjacency columns, child
    order in trees, digit values. ``images[i]`` is the image of
    ``alphabet[i]`` as a tuple of letters. Instances are immutable and
    hashable; derived data (index maps, length tables) is cached lazily.
    """

    alphabet: tuple[str, ...]
    images: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.alphabet:
            raise DslSyntaxError("alphabet is empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DslSyntaxError("duplicate letters in alphabet")
        if len(self.images) != len(self.alphabet):
            raise DslSyntaxError("every letter needs exactly one image")
        known = set(self.alphabet)
        for letter, image in zip(self.alphabet, self.images):
            if len(image) == 0:
                raise EmptyImageError(f"image of {letter!r} is empty")
            for x in image:
                if x not in known:
                    raise UnknownLetterError(
                        f"image of {letter!r} uses undeclared letter {x!r}"
                    )
        if not self.growing:
            raise NoGrowingLetterError(
                "substitution has no growing letter: all iterated images stay bounded"
            )

    # -- derived structure ------------------------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def image_idx(self) -> tuple[tuple[int, ...], ...]:
        idx = self.index
        return tuple(tuple(idx[x] for x in im) for im in self.images)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Occurrence matrix: ``adjacency[i][j]`` counts letter ``i`` in the
        image of letter ``j``, so column sums equal image lengths."""
        n = len(self.alphabet)
        m = [[0] * n for _ in range(n)]
        for j, im in enumerate(self.image_idx):
            for y in im:
                m[y][j] += 1
        return tuple(tuple(row) for row in m)

    @cached_property
    def growing(self) -> frozenset[str]:
        """Letters whose iterated image lengths diverge.

        A letter grows exactly when it reaches, in the directed image
        graph, a letter with image length >= 2 that lies on a cycle.
        """
        n = len(self.alphabet)
        img = self.image_idx
        reach = [set(im) for im in img]  # reachable in >= 1 steps
        changed = True
        while changed:
            changed = False
            for i in range(n):
                extra: set[int] = set()
                for j in reach[i]:
                    extra |= set(img[j])
                if not extra <= reach[i]:
                    reach[i] |= extra
                    changed = True
        targets = {i for i in range(n) if i in reach[i] and len(img[i]) >= 2}
        return frozenset(
            self.alphabet[a]
            for a in range(n)
            if a in targets or reach[a] & targets
        )

    @cached_property
    def lengths(self) -> _LengthTable:
        return _LengthTable(self.image_idx)

    @property
    def digit_bound(self) -> int:
        """Largest digit value of the induced numeration: max image length - 1."""
        return max(len(im) for im in self.images) - 1

    # -- letter-level helpers ----------------------------------------------

    def letter_index(self, letter: str) -> int:
        try:
            return self.index[letter]
        except KeyError:
            raise UnknownLetterError(f"unknown letter {letter!r}") from None

    def image(self, letter: str) -> tuple[str, ...]:
        return self.images[self.letter_index(letter)]

    def is_growing(self, letter: str) -> bool:
        self.letter_index(letter)
        return letter in self.growing

    # -- text forms ---------------------------------------------------------

    def to_dsl(self) -> str:
        if all(len(a) == 1 for a in self.alphabet):
            return ",".join(
                f"{a}->{''.join(im)}" for a, im in zip(self.alphabet, self.images)
            )
        return ", ".join(
            f"{a} -> {' '.join(im)}" for a, im in zip(self.alphabet, self.images)
        )

    def to_json_dict(self) -> dict:
        single = all(len(a) == 1 for a in self.alphabet)
        images: dict[str, object] = {}
        for a, im in zip(self.alphabet, self.images):
            images[a] = "".join(im) if single else list(im)
        return {"alphabet": list(self.alphabet), "images": images}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Substitution":
        try:
            alphabet = tuple(data["alphabet"])
            raw = data["images"]
        except (KeyError, TypeError):
            raise DslSyntaxError("JSON form needs 'alphabet' and 'images'") from None
        images = []
        for a in alphabet:
            if a not in raw:
                raise DslSyntaxError(f"missing image for letter {a!r}")
            im = raw[a]
            # string images are split per character; multi-character
            # alphabets must use list images
            images.append(tuple(im))
        return cls(alphabet, tuple(images))


def parse_substitution(text: str) -> Substitution:
    """Parse rule text like ``a->abc,b->c,c->ac`` or ``a1 -> b a1, b -> a1``.

    Rules are separated by ``,`` or ``;``. With single-character letters
    the image letters are juxtaposed; any multi-character letter switches
    the whole text to spaced mode, where images are space-separated and
    every image token must be declared by some rule. Letter order follows
    first appearance.
    """
    if not text or not text.strip():
        raise DslSyntaxError("empty substitution text")
    rule_texts = [r for r in re.split(r"[,;]", text) if r.strip()]
    if not rule_texts:
        raise DslSyntaxError("no rules found")
    pairs: list[tuple[str, str]] = []
    for rt in rule_texts:
        if "->" not in rt:
            raise DslSyntaxError(f"rule {rt.strip()!r} lacks '->'")
        lhs, rhs = rt.split("->", 1)
        if "->" in rhs:
            raise DslSyntaxError(f"rule {rt.strip()!r} has more than one '->'")
        lhs = lhs.strip()
        if not lhs:
            raise DslSyntaxError(f"rule {rt.strip()!r} is missing its letter")
        if not _NAME_RE.match(lhs):
            raise DslSyntaxError(f"invalid letter name {lhs!r}")
        pairs.append((lhs, rhs.strip()))
    declared = [l for l, _ in pairs]
    if len(set(declared)) != len(declared):
        dupe = next(l for i, l in enumerate(declared) if l in declared[:i])
        raise DslSyntaxError(f"letter {dupe!r} has more than one rule")
    multi = any(len(l) > 1 for l in declared)
    declared_set = set(declared)

    images: dict[str, tuple[str, ...]] = {}
    for lhs, rhs in pairs:
        if multi:
            tokens = rhs.split()
            for t in tokens:
                if t not in declared_set:
                    raise UnknownLetterError(
                        f"image of {lhs!r} uses undeclared letter {t!r}"
                    )
            images[lhs] = tuple(tokens)
        else:
            chars = tuple(c for c in rhs if not c.isspace())
            for c in chars:
                if c not in declared_set:
                    raise DslSyntaxError(f"letter {c!r} has no rule")
            images[lhs] = chars

    order: list[str] = []
    seen: set[str] = set()
    for lhs, _ in pairs:
        if lhs not in seen:
            seen.add(lhs)
            order.append(lhs)
        for x in images[lhs]:
            if x not in seen:
                seen.add(x)
                order.append(x)
    alphabet = tuple(order)
    return Substitution(alphabet, tuple(images[a] for a in alphabet))


def substitution_from_text(text: str) -> Substitution:
    """Accept either the rule DSL or the canonical JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        import json

        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DslSyntaxError(f"bad JSON substitution: {e}") from None
        return Substitution.from_json_dict(data)
    return parse_substitution(text)


def image_length(sub: Substitution, letter: str, level: int) -> int:
    """Exact ``|mu^level(letter)|`` via the memoized length recursion."""
    if level < 0:
        raise ValueError("level must be >= 0")
    return sub.lengths.row(level)[sub.letter_index(letter)]


def is_primitive(sub: Substitution) -> bool:
    """Whether some power of the adjacency matrix is entrywise positive.

    Powers up to the Wielandt bound ``(n-1)^2 + 1`` are tested; beyond it
    a primitive matrix must already be positive.
    """
    n = len(sub.alphabet)
    full = (1 << n) - 1
    base = [0] * n
    for i, row in enumerate(sub.adjacency):
        mask = 0
        for j, c in enumerate(row):
            if c:
                mask |= 1 << j
        base[i] = mask
    power = list(base)
    bound = (n - 1) ** 2 + 1
    for _ in range(bound):
        if all(r == full for r in power):
            return True
        power = [
            _bool_row_mul(power[i], base) for i in range(n)
        ]
    return all(r == full for r in power)


def _bool_row_mul(row_mask: int, base: list[int]) -> int:
    out = 0
    k = 0
    m = row_mask
    while m:
        if m & 1:
            out |= base[k]
        m >>= 1
        k += 1
    return out


# -- seeds -------------------------------------------------------------------


@dataclass(frozen=True)
class SeedSpec:
    """Seed of a periodic point: left letter, right letter, and a period.

    One side may be absent; ``domain`` is derived from which sides are
    present. The period may be any positive multiple of the minimal one.
    """

    left: Optional[str]
    right: Optional[str]
    period: int

    def __post_init__(self):
        if self.left is None and self.right is None:
            raise InvalidSeedError("seed needs at least one side")
        if self.period < 1:
            raise InvalidSeedError("period must be >= 1")

    @property
    def domain(self) -> Domain:
        if self.left is not None and self.right is not None:
            return "Z"
        return "N" if self.right is not None else "Zneg"

    def text(self) -> str:
        return f"{self.left or '_'}|{self.right or '_'}"


def parse_seed(text: str) -> tuple[Optional[str], Optional[str]]:
    """Parse seed text ``b|a``, ``_|a`` or ``b|_`` into (left, right)."""
    if "|" not in text:
        raise DslSyntaxError(f"seed {text!r} must look like 'b|a', '_|a' or 'b|_'")
    left_s, right_s = (p.strip() for p in text.split("|", 1))
    left = None if left_s in ("", "_") else left_s
    right = None if right_s in ("", "_") else right_s
    if left is None and right is None:
        raise DslSyntaxError("seed has neither side")
    return left, right


def _cycle_length(step: dict[int, int], start: int, bound: int) -> Optional[int]:
    x = start
    for t in range(1, bound + 1):
        x = step[x]
        if x == start:
            return t
    return None


def _first_letter_map(sub: Substitution) -> dict[int, int]:
    return {i: im[0] for i, im in enumerate(sub.image_idx)}


def _last_letter_map(sub: Substitution) -> dict[int, int]:
    return {i: im[-1] for i, im in enumerate(sub.image_idx)}


def first_letter_cycle(sub: Substitution, letter: str) -> Optional[int]:
    """Length of the first-letter cycle through ``letter``, if it lies on one."""
    return _cycle_length(_first_letter_map(sub), sub.letter_index(letter), len(sub.alphabet))


def last_letter_cycle(sub: Substitution, letter: str) -> Optional[int]:
    return _cycle_length(_last_letter_map(sub), sub.letter_index(letter), len(sub.alphabet))


def validate_seed(sub: Substitution, seed: SeedSpec) -> None:
    """Raise InvalidSeedError unless ``seed`` determines a periodic point."""
    if seed.right is not None:
        if seed.right not in sub.index:
            raise InvalidSeedError(f"right seed letter {seed.right!r} not in alphabet")
        if not sub.is_growing(seed.right):
            raise InvalidSeedError(f"right seed letter {seed.right!r} is not growing")
        t = first_letter_cycle(sub, seed.right)
        if t is None:
            raise InvalidSeedError(
                f"no power of the substitution maps {seed.right!r} to a word starting with it"
            )
        if seed.period % t != 0:
            raise InvalidSeedError(
                f"period {seed.period} is not a multiple of the minimal right period {t}"
            )
    if seed.left is not None:
        if seed.left not in sub.index:
            raise InvalidSeedError(f"left seed letter {seed.left!r} not in alphabet")
        if not sub.is_growing(seed.left):
            raise InvalidSeedError(f"left seed letter {seed.left!r} is not growing")
        t = last_letter_cycle(sub, seed.left)
        if t is None:
            raise InvalidSeedError(
                f"no power of the substitution maps {seed.left!r} to a word ending with it"
            )
        if seed.period % t != 0:
            raise InvalidSeedError(
                f"period {seed.period} is not a multiple of the minimal left period {t}"
            )


def minimal_period(sub: Substitution, left: Optional[str], right: Optional[str]) -> int:
    """Minimal period of the periodic point with the given seed letters."""
    parts = []
    if right is not None:
        t = first_letter_cycle(sub, right)
        if t is None or not sub.is_growing(right):
            raise InvalidSeedError(f"{right!r} is not a valid right seed letter")
        parts.append(t)
    if left is not None:
        t = last_letter_cycle(sub, left)
        if t is None or not sub.is_growing(left):
            raise InvalidSeedError(f"{left!r} is not a valid left seed letter")
        parts.append(t)
    if not parts:
        raise InvalidSeedError("seed needs at least one side")
    return math.lcm(*parts)


def find_seeds(sub: Substitution, domain: Domain) -> list[SeedSpec]:
    """All seeds of the domain with their minimal periods.

    Right seeds are growing letters on a cycle of the first-letter map,
    left seeds symmetric with the last-letter map; two-sided seeds pair
    them with the lcm of the cycle lengths.
    """
    if domain not in DOMAINS:
        raise ValueError(f"domain must be one of {DOMAINS}")
    fmap = _first_letter_map(sub)
    gmap = _last_letter_map(sub)
    n = len(sub.alphabet)
    rights = []
    lefts = []
    for i, a in enumerate(sub.alphabet):
        if a not in sub.growing:
            continue
        t = _cycle_length(fmap, i, n)
        if t is not None:
            rights.append((a, t))
        t = _cycle_length(gmap, i, n)
        if t is not None:
            lefts.append((a, t))
    if domain == "N":
        return [SeedSpec(None, a, t) for a, t in rights]
    if domain == "Zneg":
        return [SeedSpec(b, None, t) for b, t in lefts]
    return [
        SeedSpec(b, a, math.lcm(tb, ta)) for b, tb in lefts for a, ta in rights
    ]


# -- numeration systems -------------------------------------------------------


@dataclass(frozen=True)
class NumerationSystem:
    """A substitution together with a validated seed and residue class."""

    substitution: Substitution
    seed: SeedSpec
    residue: int = 0

    def __post_init__(self):
        validate_seed(self.substitution, self.seed)
        if not 0 <= self.residue < self.seed.period:
            raise InvalidSeedError(
                f"residue {self.residue} must satisfy 0 <= r < period {self.seed.period}"
            )

    @property
    def period(self) -> int:
        return self.seed.period

    @property
    def left(self) -> Optional[str]:
        return self.seed.left

    @property
    def right(self) -> Optional[str]:
        return self.seed.right

    @property
    def domain(self) -> Domain:
        return self.seed.domain

    @property
    def digit_bound(self) -> int:
        return self.substitution.digit_bound

    def contains(self, n: int) -> bool:
        if n >= 0:
            return self.right is not None
        return self.left is not None

    def restricted(self) -> tuple["NumerationSystem", tuple[str, ...]]:
        """Drop letters unreachable from the seed; returns (system, dropped)."""
        roots = [x for x in (self.seed.left, self.seed.right) if x is not None]
        keep = reachable_letters(self.substitution, roots)
        if len(keep) == len(self.substitution.alphabet):
            return self, ()
        dropped = tuple(a for a in self.substitution.alphabet if a not in set(keep))
        sub = restrict(self.substitution, keep)
        return NumerationSystem(sub, self.seed, self.residue), dropped


def reachable_letters(sub: Substitution, roots: Iterable[str]) -> tuple[str, ...]:
    """Letters reachable from ``roots`` through iterated images, in alphabet order."""
    todo = [sub.letter_index(r) for r in roots]
    seen = set(todo)
    while todo:
        x = todo.pop()
        for y in sub.image_idx[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return tuple(a for i, a in enumerate(sub.alphabet) if i in seen)


def restrict(sub: Substitution, keep: Iterable[str]) -> Substitution:
    """Restriction of the substitution to the given letters (order preserved)."""
    keep_set = set(keep)
    alphabet = tuple(a for a in sub.alphabet if a in keep_set)
    images = []
    for a in alphabet:
        im = sub.image(a)
        for x in im:
            if x not in keep_set:
                raise UnknownLetterError(
                    f"cannot restrict: image of {a!r} leaves the kept alphabet at {x!r}"
                )
        images.append(im)
    return Substitution(alphabet, tuple(images))


def make_system(
    sub: Union[Substitution, str],
    seed: Union[SeedSpec, str],
    residue: int = 0,
    period: Optional[int] = None,
) -> NumerationSystem:
    """Convenience constructor from texts; ``period`` overrides the minimal one."""
    if isinstance(sub, str):
        sub = substitution_from_text(sub)
    if isinstance(seed, str):
        left, right = parse_seed(seed)
        p = minimal_period(sub, left, right)
        if period is not None:
            if period % p != 0:
                raise InvalidSeedError(
                    f"period {period} is not a multiple of the minimal period {p}"
                )
            p = period
        seed = SeedSpec(left, right, p)
    elif period is not None:
        seed = SeedSpec(seed.left, seed.right, period)
    return NumerationSystem(sub, seed, residue)
