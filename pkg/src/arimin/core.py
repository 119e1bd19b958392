"""Clusterings, contingency tables and exact pair-counting indices.

Every index value is a :class:`fractions.Fraction`; floats only show up when
a value is rendered for display (see :func:`format_decimal`).
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence, Union

from .errors import InputError, InternalConsistencyError, UndefinedIndexError

ExactRatio = Fraction


@dataclass(frozen=True)
class Clustering:
    """A labeling of n objects; each distinct label is one (non-empty) cluster."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise InputError("a clustering needs at least one object")
        for lab in labels:
            if not isinstance(lab, Hashable):
                raise InputError(f"label {lab!r} is not hashable")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def clusters(self) -> tuple:
        """Distinct labels in order of first appearance."""
        return tuple(dict.fromkeys(self.labels))

    @property
    def size(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class ContingencyTable:
    """An r x s table of non-negative counts with every marginal >= 1."""

    entries: tuple

    def __post_init__(self):
        try:
            rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        except (TypeError, ValueError) as exc:
            raise InputError(f"table entries must be integers: {exc}") from None
        if not rows or not rows[0]:
            raise InputError("a contingency table needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise InputError(f"row {i} has {len(row)} entries, expected {width}")
            if any(v < 0 for v in row):
                raise InputError(f"row {i} has a negative entry")
        for i, row in enumerate(rows):
            if sum(row) == 0:
                raise InputError(f"row {i} is empty (clusters must be non-empty)")
        for j in range(width):
            if sum(row[j] for row in rows) == 0:
                raise InputError(f"column {j} is empty (clusters must be non-empty)")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "ContingencyTable":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def s(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.r, self.s

    @property
    def row_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    @property
    def col_totals(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries))

    @property
    def n(self) -> int:
        return sum(self.row_totals)

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(tuple(zip(*self.entries)))

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "ContingencyTable":
        if sorted(row_order) != list(range(self.r)) or sorted(col_order) != list(range(self.s)):
            raise InputError("row_order/col_order must be permutations of the table axes")
        return ContingencyTable(
            tuple(tuple(self.entries[i][j] for j in col_order) for i in row_order)
        )

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class PairCounts:
    """Pair tallies across two clusterings.

    a: together in both, b: together in the first only, c: together in the
    second only, d: apart in both.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InputError(f"pair count {name} must be a non-negative integer, got {v!r}")

    @property
    def N(self) -> int:
        return self.a + self.b + self.c + self.d

    def swap_bc(self) -> "PairCounts":
        return PairCounts(self.a, self.c, self.b, self.d)

    def swap_ad(self) -> "PairCounts":
        return PairCounts(self.d, self.b, self.c, self.a)


TableOrCounts = Union[ContingencyTable, PairCounts]


def contingency_from_labels(x, y) -> ContingencyTable:
    """Cross-tabulate two aligned labelings.

    Rows follow the first-appearance order of labels in ``x``, columns the
    first-appearance order in ``y``.
    """
    if not isinstance(x, Clustering):
        x = Clustering(tuple(x))
    if not isinstance(y, Clustering):
        y = Clustering(tuple(y))
    if x.n != y.n:
        raise InputError(f"labelings have different lengths ({x.n} vs {y.n})")
    row_index = {lab: i for i, lab in enumerate(x.clusters)}
    col_index = {lab: j for j, lab in enumerate(y.clusters)}
    counts = [[0] * len(col_index) for _ in row_index]
    for u, v in zip(x.labels, y.labels):
        counts[row_index[u]][col_index[v]] += 1
    return ContingencyTable.from_rows(counts)


def _half(value: int, what: str) -> int:
    if value % 2:
        raise InternalConsistencyError(f"2{what} = {value} is odd")
    return value // 2


def pair_counts(t: ContingencyTable) -> PairCounts:
    n = t.n
    sq_cells = sum(v * v for row in t.entries for v in row)
    sq_rows = sum(v * v for v in t.row_totals)
    sq_cols = sum(v * v for v in t.col_totals)
    p = PairCounts(
        _half(sq_cells - n, "a"),
        _half(sq_rows - sq_cells, "b"),
        _half(sq_cols - sq_cells, "c"),
        _half(sq_cells + n * n - sq_rows - sq_cols, "d"),
    )
    if p.N != n * (n - 1) // 2:
        raise InternalConsistencyError(f"a+b+c+d = {p.N} but C({n},2) = {n * (n - 1) // 2}")
    return p


def _as_counts(p: TableOrCounts) -> PairCounts:
    if isinstance(p, ContingencyTable):
        return pair_counts(p)
    return p


def _chance_term(p: PairCounts) -> int:
    # N^2 * E[RI]
    a, b, c, d = p.a, p.b, p.c, p.d
    return (a + b) * (a + c) + (c + d) * (b + d)


def _require_pairs(p: PairCounts) -> None:
    if p.N == 0:
        raise UndefinedIndexError("index undefined for fewer than two objects (N = 0)")


def rand_index(p: TableOrCounts) -> Fraction:
    p = _as_counts(p)
    _require_pairs(p)
    return Fraction(p.a + p.d, p.N)


def expected_rand_index(p: TableOrCounts) -> Fraction:
    """Expected RI under random assignment with the same marginals."""
    p = _as_counts(p)
    _require_pairs(p)
    return Fraction(_chance_term(p), p.N * p.N)


def adjusted_rand_index(p: TableOrCounts) -> Fraction:
    p = _as_counts(p)
    _require_pairs(p)
    chance = _chance_term(p)
    den = p.N * p.N - chance
    if den == 0:
        raise UndefinedIndexError("ARI undefined: chance-corrected denominator is zero")
    return Fraction(p.N * (p.a + p.d) - chance, den)


def adjusted_rand_distance(p: TableOrCounts) -> Fraction:
    """ARD = 1 - ARI, evaluated through N(b+c) / {(a+b)(b+d) + (a+c)(c+d)}."""
    p = _as_counts(p)
    _require_pairs(p)
    a, b, c, d = p.a, p.b, p.c, p.d
    den = (a + b) * (b + d) + (a + c) * (c + d)
    if den == 0:
        raise UndefinedIndexError("ARD undefined: denominator is zero")
    return Fraction(p.N * (b + c), den)


def is_a_zero(t: ContingencyTable) -> bool:
    return all(v <= 1 for row in t.entries for v in row)


def is_d_zero(t: ContingencyTable) -> bool:
    return min(t.r, t.s) == 1


def format_decimal(x: Fraction, digits: int = 6) -> str:
    """Round ``x`` to ``digits`` significant digits (half-even), fixed-point notation."""
    if digits < 1:
        raise InputError("digits must be >= 1")
    x = Fraction(x)
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    q = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
    if q == 0:
        return "0"
    return format(q, "f")


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
