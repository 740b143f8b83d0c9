"""Positionality analysis of substitution numeration systems.

The structural decision works on residue letter sets: for each residue
class j of tree levels, collect the letters that occur somewhere at such
a level with a younger sibling, track a column -2 adjustment next to the
left spine, and decide positionality by testing that iterated image
lengths are constant over each set (sampled finitely, which suffices by
the characteristic polynomial of the adjacency matrix). An exact
rational weight-fitting oracle cross-checks the verdict from collected
representations alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import NumerationSystem
from .errors import NotPositionalSystemError
from .numeration import DigitWord, rep


@dataclass(frozen=True)
class ConditionC:
    """Length obligation for the column -2 letter at literal level ``residue``:
    ``|mu^exponent(letter)|`` must match every letter of ``reference``."""

    residue: int
    letter: str
    exponent: int
    reference: tuple[str, ...]


@dataclass(frozen=True)
class ResidueSets:
    """Per-residue letter sets driving the positionality criterion."""

    period: int
    base: tuple[tuple[str, ...], ...]
    added: tuple[tuple[str, ...], ...]  # column -2 letters adjoined per residue
    obligations: tuple[ConditionC, ...]

    def full(self, j: int) -> tuple[str, ...]:
        return self.base[j] + self.added[j]


@dataclass(frozen=True)
class Counterexample:
    kind: str  # "length-mismatch" or "condition-C"
    residue: int
    exponent: int
    letters: tuple[str, str]
    lengths: tuple[int, int]

    def describe(self) -> str:
        a, b = self.letters
        la, lb = self.lengths
        if self.kind == "length-mismatch":
            return (
                f"residue {self.residue}: |mu^{self.exponent}({a})| = {la} "
                f"differs from |mu^{self.exponent}({b})| = {lb}"
            )
        return (
            f"column -2 obligation at level {self.residue}: "
            f"|mu^{self.exponent}({a})| = {la} differs from |mu^{self.exponent}({b})| = {lb}"
        )


@dataclass(frozen=True)
class WeightTable:
    """Positional weights: U for digit positions, V for the sign position."""

    U: tuple[int, ...]
    V: tuple[int, ...]
    unconstrained: tuple[int, ...]


@dataclass(frozen=True)
class PositionalityReport:
    positional: bool
    residue_sets: ResidueSets
    weights: Optional[WeightTable]
    counterexample: Optional[Counterexample]
    notes: tuple[str, ...]

    def to_json_dict(self) -> dict:
        rs = self.residue_sets
        data: dict = {
            "positional": self.positional,
            "E": {str(j): list(rs.full(j)) for j in range(rs.period)},
            "c2_added": {
                str(j): list(rs.added[j])
                for j in range(rs.period)
                if rs.added[j]
            },
            "condition_C": [
                {
                    "j": ob.residue,
                    "letter": ob.letter,
                    "exponent": ob.exponent,
                    "reference": list(ob.reference),
                }
                for ob in rs.obligations
            ],
        }
        if self.positional:
            assert self.weights is not None
            data["U"] = list(self.weights.U)
            data["V"] = list(self.weights.V)
            data["unconstrained"] = list(self.weights.unconstrained)
            data["counterexample"] = None
        else:
            assert self.counterexample is not None
            ce = self.counterexample
            data["U"] = None
            data["V"] = None
            data["unconstrained"] = None
            data["counterexample"] = {
                "kind": ce.kind,
                "j": ce.residue,
                "exponent": ce.exponent,
                "letters": list(ce.letters),
                "lengths": list(ce.lengths),
            }
        return data


# -- residue letter sets --------------------------------------------------------


def compute_residue_sets(
    ns: NumerationSystem, search_depth: Optional[int] = None
) -> ResidueSets:
    """Letter sets per residue class of tree levels.

    Runs a closure over occurrence states (letter, level residue, kind),
    where kind distinguishes nodes on the left spine (the column -1
    chain) from all others: a spine occurrence hides its second-to-last
    child position, whose younger sibling would land on column -1. The
    column -2 adjustment is then applied at the literal levels 1..p-1.

    ``search_depth`` bounds the closure's breadth-first steps; the
    default explores to the fixpoint, which is reached within the state
    bound 2 * |alphabet| * period.
    """
    ns, _ = ns.restricted()
    return _residue_sets(ns, search_depth)


def _residue_sets(ns: NumerationSystem, search_depth: Optional[int] = None) -> ResidueSets:
    sub = ns.substitution
    p = ns.period
    img = sub.image_idx
    n = len(sub.alphabet)

    general = [[False] * p for _ in range(n)]
    spine = [[False] * p for _ in range(n)]
    frontier: list[tuple[bool, int, int]] = []  # (is_spine, letter, residue)
    if ns.right is not None:
        i = sub.index[ns.right]
        general[i][0] = True
        frontier.append((False, i, 0))
    if ns.left is not None:
        i = sub.index[ns.left]
        spine[i][0] = True
        frontier.append((True, i, 0))

    steps = 0
    while frontier:
        if search_depth is not None and steps >= search_depth:
            break
        steps += 1
        next_frontier: list[tuple[bool, int, int]] = []
        for is_spine, x, i in frontier:
            j = (i + 1) % p
            im = img[x]
            if is_spine:
                last = im[-1]
                if not spine[last][j]:
                    spine[last][j] = True
                    next_frontier.append((True, last, j))
                body = im[:-1]
            else:
                body = im
            for y in body:
                if not general[y][j]:
                    general[y][j] = True
                    next_frontier.append((False, y, j))
        frontier = next_frontier

    base_sets: list[set[int]] = [set() for _ in range(p)]
    for x in range(n):
        im = img[x]
        for i in range(p):
            j = (i + 1) % p
            if general[x][i]:
                base_sets[j].update(im[:-1])
            if spine[x][i]:
                # the position next to the spine child is excluded: its
                # younger sibling sits on column -1
                base_sets[j].update(im[: len(im) - 2])

    added_sets: list[set[int]] = [set() for _ in range(p)]
    obligations: list[ConditionC] = []
    if ns.left is not None:
        spine_letter = sub.index[ns.left]
        for j in range(1, p):
            parent = spine_letter
            im = img[parent]
            spine_letter = im[-1]
            if len(im) < 2:
                continue  # column -2 node (if any) hangs off a different parent
            c, d = im[-2], im[-1]
            if sub.lengths.row(p - j)[d] > 1:
                if c not in base_sets[j]:
                    added_sets[j].add(c)
            elif j <= ns.residue:
                obligations.append(
                    ConditionC(
                        residue=j,
                        letter=sub.alphabet[c],
                        exponent=ns.residue - j,
                        reference=tuple(
                            sub.alphabet[i] for i in sorted(base_sets[j])
                        ),
                    )
                )

    names = sub.alphabet
    return ResidueSets(
        period=p,
        base=tuple(tuple(names[i] for i in sorted(s)) for s in base_sets),
        added=tuple(tuple(names[i] for i in sorted(s)) for s in added_sets),
        obligations=tuple(obligations),
    )


# -- the decision ----------------------------------------------------------------


def check_positional(ns: NumerationSystem, weight_count: int = 8) -> PositionalityReport:
    """Decide positionality; emit weights or a counterexample.

    Length constancy over a residue set need only be sampled at
    |alphabet| exponents per arithmetic progression: the difference of
    two length sequences satisfies the recurrence of the adjacency
    matrix's characteristic polynomial, so that many consecutive zero
    samples force it to vanish identically.
    """
    ns2, dropped = ns.restricted()
    sub = ns2.substitution
    p = ns2.period
    r = ns2.residue
    rs = _residue_sets(ns2)

    notes = []
    if dropped:
        notes.append(
            "alphabet restricted to letters reachable from the seed; dropped: "
            + ", ".join(dropped)
        )
    notes.append(
        f"length constancy sampled at {len(sub.alphabet)} exponents per residue; "
        "sufficient by the adjacency characteristic polynomial"
    )
    for level, letter in _column_minus2_letters(ns2, 2 * p):
        notes.append(f"column -2 letter at level {level}: {letter}")
    empty = [j for j in range(p) if not rs.full(j)]
    if empty:
        notes.append(
            "empty letter sets at residues "
            + ", ".join(str(j) for j in empty)
            + ": only the digit 0 occurs at the matching positions"
        )

    idx = sub.index
    samples = len(sub.alphabet)
    for j in range(p):
        letters = rs.full(j)
        if len(letters) < 2:
            continue
        first = letters[0]
        start = (r - j) % p
        for t in range(samples):
            exponent = start + t * p
            row = sub.lengths.row(exponent)
            v0 = row[idx[first]]
            for other in letters[1:]:
                v = row[idx[other]]
                if v != v0:
                    return PositionalityReport(
                        positional=False,
                        residue_sets=rs,
                        weights=None,
                        counterexample=Counterexample(
                            "length-mismatch", j, exponent, (first, other), (v0, v)
                        ),
                        notes=tuple(notes),
                    )
    for ob in rs.obligations:
        row = sub.lengths.row(ob.exponent)
        target = row[idx[ob.letter]]
        for e in ob.reference:
            v = row[idx[e]]
            if v != target:
                return PositionalityReport(
                    positional=False,
                    residue_sets=rs,
                    weights=None,
                    counterexample=Counterexample(
                        "condition-C", ob.residue, ob.exponent, (ob.letter, e), (target, v)
                    ),
                    notes=tuple(notes),
                )

    table = _weight_table(ns2, rs, weight_count)
    return PositionalityReport(
        positional=True,
        residue_sets=rs,
        weights=table,
        counterexample=None,
        notes=tuple(notes),
    )


def _column_minus2_letters(ns: NumerationSystem, level_bound: int):
    """Diagnostic: the column -2 letter of each left row below ``level_bound``."""
    if ns.left is None:
        return
    sub = ns.substitution
    spine = ns.left
    col2: Optional[str] = None
    for level in range(1, level_bound):
        im = sub.image(spine)
        if len(im) >= 2:
            col2 = im[-2]
        elif col2 is not None:
            col2 = sub.image(col2)[-1]
        spine = im[-1]
        if col2 is not None:
            yield level, col2


def _weight_table(ns: NumerationSystem, rs: ResidueSets, count: int) -> WeightTable:
    sub = ns.substitution
    idx = sub.index
    r = ns.residue
    p = ns.period
    condition_at = {ob.exponent: ob for ob in rs.obligations}
    U: list[int] = []
    unconstrained: list[int] = []
    for exponent in range(count):
        j = (r - exponent) % p
        letters = rs.full(j)
        if letters:
            U.append(sub.lengths.row(exponent)[idx[letters[0]]])
        elif exponent in condition_at:
            ob = condition_at[exponent]
            U.append(sub.lengths.row(exponent)[idx[ob.letter]])
        else:
            # only the digit 0 ever occurs at these positions
            U.append(0)
            unconstrained.append(exponent)
    if ns.left is not None:
        left = idx[ns.left]
        V = tuple(sub.lengths.row(exponent)[left] for exponent in range(count))
    else:
        V = ()
    return WeightTable(tuple(U), V, tuple(unconstrained))


def weights(ns: NumerationSystem, count: int) -> WeightTable:
    """Weight tables of a positional system; raises otherwise."""
    report = check_positional(ns, weight_count=count)
    if not report.positional:
        assert report.counterexample is not None
        raise NotPositionalSystemError(
            "system is not positional: " + report.counterexample.describe()
        )
    assert report.weights is not None
    return report.weights


def evaluate_with_weights(
    word: DigitWord, U, V=()
) -> int:
    """Positional evaluation: weighted digit sum, minus V at the sign position."""
    k = len(word.digits)
    total = 0
    for i, d in enumerate(word.digits):
        if d:
            total += d * U[k - 1 - i]
    if word.sign == 1:
        total -= V[k]
    return total


# -- weight-fitting oracle --------------------------------------------------------


@dataclass(frozen=True)
class ConsistentWeights:
    """Solved weight coordinates; positions never pinned by any collected
    representation are simply absent."""

    U: dict[int, int]
    V: dict[int, int]


@dataclass(frozen=True)
class WeightContradiction:
    witnesses: tuple[int, ...]
    detail: str


FitResult = Union[ConsistentWeights, WeightContradiction]


class _Row:
    __slots__ = ("coeffs", "rhs", "sources")

    def __init__(self, coeffs: dict, rhs: Fraction, sources: set):
        self.coeffs = coeffs
        self.rhs = rhs
        self.sources = sources


def _var_name(var: tuple[str, int]) -> str:
    return f"{var[0]}{var[1]}"


def _constraint_text(coeffs: dict, n: int) -> str:
    terms = [
        (f"{c}*" if c != 1 else "") + _var_name(v)
        for v, c in sorted(coeffs.items())
    ]
    lhs = " + ".join(terms) if terms else "0"
    return f"{lhs} = {n}"


def fit_weights_oracle(ns: NumerationSystem, lo: int, hi: int) -> FitResult:
    """Fit positional weights to the representations of ``[lo, hi]`` exactly.

    Builds one linear equation per integer in range (over the system's
    domain) from the positional evaluation shape, solves over the
    rationals, and returns either the solved coordinates or a
    contradiction certificate naming the witnessing integers. A solved
    coordinate that is negative or non-integral is also a contradiction:
    weights must be natural numbers.
    """
    pivots: dict[tuple[str, int], _Row] = {}
    for n in _domain_values(ns, lo, hi):
        word = rep(ns, n)
        k = len(word.digits)
        original: dict[tuple[str, int], int] = {}
        for i, d in enumerate(word.digits):
            if d:
                original[("U", k - 1 - i)] = d
        if word.sign == 1:
            original[("V", k)] = -1
        coeffs = {v: Fraction(c) for v, c in original.items()}
        rhs = Fraction(n)
        sources = {n}
        for var, prow in pivots.items():
            c = coeffs.pop(var, None)
            if c:
                for v2, c2 in prow.coeffs.items():
                    coeffs[v2] = coeffs.get(v2, Fraction(0)) - c * c2
                rhs -= c * prow.rhs
                sources |= prow.sources
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            if rhs != 0:
                others = sorted(sources - {n})
                return WeightContradiction(
                    tuple(sorted(sources)),
                    f"rep({n}) = {word} gives {_constraint_text(original, n)}, "
                    f"inconsistent with the weights forced by reps of {others}",
                )
            continue
        pivot_var = min(coeffs)
        c0 = coeffs.pop(pivot_var)
        new_row = _Row(
            {v: c / c0 for v, c in coeffs.items()}, rhs / c0, set(sources)
        )
        for prow in pivots.values():
            c = prow.coeffs.pop(pivot_var, None)
            if c:
                for v2, c2 in new_row.coeffs.items():
                    prow.coeffs[v2] = prow.coeffs.get(v2, Fraction(0)) - c * c2
                    if not prow.coeffs[v2]:
                        del prow.coeffs[v2]
                prow.rhs -= c * new_row.rhs
                prow.sources |= new_row.sources
        pivots[pivot_var] = new_row

    solved_u: dict[int, int] = {}
    solved_v: dict[int, int] = {}
    for var in sorted(pivots):
        row = pivots[var]
        if row.coeffs:
            continue  # underdetermined coordinate
        value = row.rhs
        if value.denominator != 1 or value < 0:
            return WeightContradiction(
                tuple(sorted(row.sources)),
                f"{_var_name(var)} is forced to {value}, not a natural number",
            )
        if var[0] == "U":
            solved_u[var[1]] = int(value)
        else:
            solved_v[var[1]] = int(value)
    return ConsistentWeights(solved_u, solved_v)


def _domain_values(ns: NumerationSystem, lo: int, hi: int):
    start = lo if ns.left is not None else max(lo, 0)
    stop = hi if ns.right is not None else min(hi, -1)
    return range(start, stop + 1)
