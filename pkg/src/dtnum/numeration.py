"""Representation and evaluation maps for substitution numeration systems.

Integers map to digit words by descending the prefix-decomposition tree
with exact image lengths; ``mu^k(seed)`` is never expanded as a string,
so values with thousands of digits are fine. The sign digit 0/1 selects
the non-negative/negative subtree of a two-sided system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import NumerationSystem, Substitution
from .errors import (
    DigitOutOfRangeError,
    NotFixedPointSeedError,
    OffsetOutOfRangeError,
    SideMissingError,
)


@dataclass(frozen=True)
class AdmissibleStep:
    """One decomposition step: ``prefix`` then ``pivot`` prefixes the image above."""

    prefix: tuple[str, ...]
    pivot: str


@dataclass(frozen=True)
class AdmissibleSequence:
    """Steps indexed least-significant first: ``steps[i]`` is expanded by mu^i."""

    root: str
    steps: tuple[AdmissibleStep, ...]

    @property
    def digits(self) -> tuple[int, ...]:
        """Digit reading: prefix lengths, most significant first."""
        return tuple(len(s.prefix) for s in reversed(self.steps))


@dataclass(frozen=True)
class DigitWord:
    """Digits most significant first, with an optional sign digit in {0, 1}."""

    digits: tuple[int, ...]
    sign: Optional[int] = None

    def __post_init__(self):
        if self.sign not in (None, 0, 1):
            raise ValueError("sign digit must be 0, 1 or absent")
        if any(d < 0 for d in self.digits):
            raise ValueError("digits must be non-negative")

    def __len__(self) -> int:
        return len(self.digits) + (1 if self.sign is not None else 0)

    def text(self) -> str:
        parts = ([] if self.sign is None else [self.sign]) + list(self.digits)
        if not parts:
            return "ε"
        if max(parts) >= 10:
            return ".".join(str(p) for p in parts)
        return "".join(str(p) for p in parts)

    def __str__(self) -> str:
        return self.text()

    @classmethod
    def parse(cls, text: str, signed: bool) -> "DigitWord":
        """Parse the text form; dot-separated components when any digit >= 10."""
        text = text.strip()
        if text in ("", "ε", "eps", "epsilon"):
            if signed:
                raise ValueError("a signed word needs at least the sign digit")
            return cls(())
        if "." in text:
            try:
                parts = [int(p) for p in text.split(".")]
            except ValueError:
                raise ValueError(f"bad digit word {text!r}") from None
        else:
            if not text.isdigit():
                raise ValueError(f"bad digit word {text!r}")
            parts = [int(ch) for ch in text]
        if signed:
            if parts[0] not in (0, 1):
                raise ValueError("sign digit must be 0 or 1")
            return cls(tuple(parts[1:]), parts[0])
        return cls(tuple(parts))


# -- descent ------------------------------------------------------------------


def _descend_digits(sub: Substitution, root: int, k: int, offset: int) -> list[int]:
    """Child indices along the path left of column ``offset`` below ``root``."""
    lengths = sub.lengths
    image_idx = sub.image_idx
    digits: list[int] = []
    x = root
    t = offset
    for level in range(k - 1, -1, -1):
        row = lengths.row(level)
        im = image_idx[x]
        acc = 0
        pos = -1
        for i, y in enumerate(im):
            w = row[y]
            if t < acc + w:
                pos = i
                break
            acc += w
        if pos < 0:  # only possible on an out-of-range offset
            raise OffsetOutOfRangeError("offset beyond row width")
        digits.append(pos)
        t -= acc
        x = im[pos]
    return digits


def decompose_prefix(
    sub: Substitution, root: str, k: int, n: int
) -> AdmissibleSequence:
    """The unique admissible decomposition of the length-``n`` prefix of mu^k(root).

    Computed top-down with exact lengths: at each letter the child whose
    subtree covers the running offset is selected; the letters before it
    form the step's prefix.
    """
    root_idx = sub.letter_index(root)
    if k < 0:
        raise ValueError("k must be >= 0")
    total = sub.lengths.row(k)[root_idx]
    if not 0 <= n < total:
        raise OffsetOutOfRangeError(
            f"offset {n} outside [0, |mu^{k}({root})|) = [0, {total})"
        )
    lengths = sub.lengths
    images = sub.images
    image_idx = sub.image_idx
    steps_top_down: list[AdmissibleStep] = []
    x = root_idx
    t = n
    for level in range(k - 1, -1, -1):
        row = lengths.row(level)
        im = image_idx[x]
        acc = 0
        pos = 0
        for i, y in enumerate(im):
            w = row[y]
            if t < acc + w:
                pos = i
                break
            acc += w
        letters = images[x]
        steps_top_down.append(AdmissibleStep(letters[:pos], letters[pos]))
        t -= acc
        x = im[pos]
    return AdmissibleSequence(root, tuple(reversed(steps_top_down)))


# -- representation maps -------------------------------------------------------


def rep(ns: NumerationSystem, n: int) -> DigitWord:
    """The canonical digit word of ``n``: sign digit plus ``k`` digits with
    ``k`` congruent to the residue modulo the period."""
    sub = ns.substitution
    p = ns.period
    r = ns.residue
    if n >= 0:
        if ns.right is None:
            raise SideMissingError("system has no right seed: cannot represent n >= 0")
        root = sub.index[ns.right]
        k = r
        row = sub.lengths.row
        while row(k)[root] <= n:
            k += p
        # squeeze lower bound: the top block of the decomposition is non-empty
        assert k < p + r or row(k - p)[root] <= n
        return DigitWord(tuple(_descend_digits(sub, root, k, n)), 0)
    if ns.left is None:
        raise SideMissingError("system has no left seed: cannot represent n < 0")
    root = sub.index[ns.left]
    need = -n
    k = r
    row = sub.lengths.row
    while row(k)[root] < need:
        k += p
    # squeeze lower bound = the path avoiding the full left spine block
    assert k < p + r or row(k - p)[root] < need
    offset = row(k)[root] - need
    return DigitWord(tuple(_descend_digits(sub, root, k, offset)), 1)


def val(ns: NumerationSystem, word: Union[DigitWord, str]) -> tuple[int, bool]:
    """Evaluate any valid tree path and report whether it is canonical.

    Non-canonical words (paths reaching the column at a non-minimal
    level) evaluate fine; canonicality is decided by re-deriving the
    representation of the value.
    """
    if isinstance(word, str):
        word = DigitWord.parse(word, signed=True)
    if word.sign is None:
        raise ValueError("complement evaluation needs a sign digit; see val_classic_N")
    sub = ns.substitution
    side = ns.right if word.sign == 0 else ns.left
    if side is None:
        raise SideMissingError(
            f"word has sign {word.sign} but the system lacks that seed side"
        )
    value = _evaluate_path(sub, sub.index[side], word.digits, negative=word.sign == 1)
    canonical = word == rep(ns, value)
    return value, canonical


def _evaluate_path(
    sub: Substitution, root: int, digits: tuple[int, ...], negative: bool
) -> int:
    lengths = sub.lengths
    image_idx = sub.image_idx
    k = len(digits)
    x = root
    total = 0
    for i, d in enumerate(digits):
        im = image_idx[x]
        if d >= len(im):
            raise DigitOutOfRangeError(
                f"digit {d} >= |image({sub.alphabet[x]})| = {len(im)}"
            )
        if d:
            row = lengths.row(k - 1 - i)
            for y in im[:d]:
                total += row[y]
        x = im[d]
    if negative:
        return total - lengths.row(k)[root]
    return total


def rep_classic_N(sub: Substitution, root: str, n: int) -> DigitWord:
    """Unsigned representation over N for a fixed-point seed.

    ``rep(0)`` is the empty word; otherwise the digits of the unique
    shortest decomposition, whose leading digit is nonzero.
    """
    root_idx = sub.letter_index(root)
    if sub.images[root_idx][0] != root or root not in sub.growing:
        raise NotFixedPointSeedError(
            f"{root!r} is not the growing seed of a fixed point (image must start with it)"
        )
    if n < 0:
        raise ValueError("classic representation is defined for n >= 0")
    if n == 0:
        return DigitWord(())
    k = 0
    row = sub.lengths.row
    while row(k)[root_idx] <= n:
        k += 1
    return DigitWord(tuple(_descend_digits(sub, root_idx, k, n)))


def val_classic_N(
    sub: Substitution, root: str, word: Union[DigitWord, str]
) -> tuple[int, bool]:
    """Evaluate an unsigned word below a fixed-point seed; reports canonicality."""
    if isinstance(word, str):
        word = DigitWord.parse(word, signed=False)
    if word.sign is not None:
        raise ValueError("classic words carry no sign digit")
    root_idx = sub.letter_index(root)
    value = _evaluate_path(sub, root_idx, word.digits, negative=False)
    canonical = word == rep_classic_N(sub, root, value)
    return value, canonical


# -- two's complement baseline --------------------------------------------------


def twos_complement_rep(n: int) -> DigitWord:
    """The unique binary word avoiding leading 00/11 that evaluates to ``n``."""
    if n == 0:
        return DigitWord(())
    if n > 0:
        return DigitWord((0,) + tuple(int(b) for b in bin(n)[2:]))
    k = 1
    while -(1 << (k - 1)) > n:
        k += 1
    body = n + (1 << (k - 1))
    bits = bin(body)[2:].zfill(k - 1) if k > 1 else ""
    return DigitWord((1,) + tuple(int(b) for b in bits))


def twos_complement_val(word: Union[DigitWord, str]) -> int:
    """Evaluate binary digits with a negative weight on the leading one."""
    if isinstance(word, str):
        word = DigitWord.parse(word, signed=False)
    digits = word.digits if word.sign is None else (word.sign,) + word.digits
    if any(d > 1 for d in digits):
        raise DigitOutOfRangeError("two's complement words are over {0, 1}")
    if not digits:
        return 0
    k = len(digits)
    return -digits[0] * (1 << (k - 1)) + sum(
        d << (k - 2 - i) for i, d in enumerate(digits[1:])
    )
