"""Lower bound of the ARI for clusterings of given sizes, and the table attaining it."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt
from typing import Sequence

from .core import (
    ContingencyTable,
    PairCounts,
    adjusted_rand_index,
    pair_counts,
)
from .errors import InputError, UndefinedIndexError


def _check_sizes(r: int, s: int) -> None:
    if not isinstance(r, int) or not isinstance(s, int):
        raise InputError(f"cluster counts must be integers, got r={r!r}, s={s!r}")
    if r < 1 or s < 1:
        raise InputError(f"cluster counts must be >= 1, got r={r}, s={s}")
    if r == s == 1:
        raise UndefinedIndexError("ARI is undefined when both clusterings have a single cluster")


def min_ari(r: int, s: int) -> Fraction:
    """Closed-form minimum ARI for two clusterings with r and s clusters.

    Zero when one clustering is a single cluster, otherwise
    ``1 / (1 - C(r+s-1, 2) * (1/C(r,2) + 1/C(s,2)) / 2)``, which the
    table from :func:`extremal_table` attains.

    Exhaustive search (:mod:`arimin.oracle`) confirms this is the true
    minimum for r == s at every size it can reach, but not for every
    unequal pair: with r=2, s=3 the table [[0,1,1],[1,1,1]] has ARI -4/11,
    below the value -1/3 returned here.
    """
    _check_sizes(r, s)
    if min(r, s) == 1:
        return Fraction(0)
    inner = Fraction(comb(r + s - 1, 2), 2) * (Fraction(1, comb(r, 2)) + Fraction(1, comb(s, 2)))
    return 1 / (1 - inner)


def min_ari_equal_sizes(r: int) -> Fraction:
    if not isinstance(r, int) or r < 2:
        raise InputError(f"r must be an integer >= 2, got {r!r}")
    return Fraction(-r, 3 * r - 2)


def approx_min_ari(r: int, s: int) -> Fraction:
    """Large-(r, s) approximation of :func:`min_ari`, using C(k, 2) ~ k^2 / 2."""
    if not isinstance(r, int) or not isinstance(s, int) or r < 2 or s < 2:
        raise InputError(f"approximation needs r, s >= 2, got r={r!r}, s={s!r}")
    return Fraction(-2 * r**2 * s**2, r**4 + 2 * r**3 * s + 2 * r * s**3 + s**4)


@dataclass(frozen=True)
class BoundReport:
    r: int
    s: int
    min_ari: Fraction
    witness_n: int
    witness: ContingencyTable
    witness_pair_counts: PairCounts


def extremal_table(r: int, s: int) -> BoundReport:
    """Canonical minimizer: first row and first column all ones, zeroes elsewhere.

    For min(r, s) == 1 the witness is the all-ones row (or column) vector.
    Any row/column permutation of the witness attains the same value.
    """
    _check_sizes(r, s)
    if min(r, s) == 1:
        rows = [[1] * s for _ in range(r)]
        n = max(r, s)
    else:
        rows = [[1 if i == 0 or j == 0 else 0 for j in range(s)] for i in range(r)]
        n = r + s - 1
    table = ContingencyTable.from_rows(rows)
    return BoundReport(
        r=r,
        s=s,
        min_ari=min_ari(r, s),
        witness_n=n,
        witness=table,
        witness_pair_counts=pair_counts(table),
    )


def normalized_ard(p, r: int, s: int) -> Fraction:
    """(1 - ARI) / (1 - min_ari(r, s)): 0 at perfect agreement, 1 at the bound.

    ``p`` is a PairCounts or a ContingencyTable. A table must have shape
    (r, s); pair counts are checked against the sizes where they can be.
    The value is not clamped, so tables beating the closed form for
    unequal sizes give values above 1.
    """
    if isinstance(p, ContingencyTable):
        if p.shape != (r, s):
            raise InputError(f"table has shape {p.shape} but sizes ({r}, {s}) were given")
        p = pair_counts(p)
    _check_sizes(r, s)
    _check_counts_against_sizes(p, r, s)
    return (1 - adjusted_rand_index(p)) / (1 - min_ari(r, s))


def _check_counts_against_sizes(p: PairCounts, r: int, s: int) -> None:
    # a single cluster in the first clustering puts every pair together there: c = d = 0
    if (r == 1) != (p.c + p.d == 0):
        raise InputError(f"pair counts {p} are inconsistent with r={r}")
    if (s == 1) != (p.b + p.d == 0):
        raise InputError(f"pair counts {p} are inconsistent with s={s}")
    # two clusterings with at least two clusters each always have a pair apart in both
    if min(r, s) >= 2 and p.d == 0:
        raise InputError(f"pair counts {p} have d = 0, impossible for r={r}, s={s}")
    # n objects, n(n-1)/2 = N
    n = (1 + _isqrt_exact(1 + 8 * p.N)) // 2
    if max(r, s) > n:
        raise InputError(f"{n} objects cannot form {max(r, s)} non-empty clusters")


def _isqrt_exact(x: int) -> int:
    root = isqrt(x)
    if root * root != x:
        raise InputError(f"pair total {(x - 1) // 8} is not a binomial C(n, 2)")
    return root


@dataclass(frozen=True)
class NormalizedDistance:
    value: Fraction
    ari: Fraction
    min_ari: Fraction
    warnings: tuple[str, ...] = field(default=())

    @property
    def below_minimum(self) -> bool:
        return self.ari < self.min_ari


def normalized_ard_from_ari(ari, r: int, s: int) -> NormalizedDistance:
    """Normalize a reported ARI value (e.g. from a published table) for sizes (r, s).

    ``ari`` may be a Fraction, int or a decimal string such as ``"0.81"``;
    strings are parsed exactly. Nothing is clamped: an ARI below
    ``min_ari(r, s)`` gives a value above 1 and a warning entry.
    """
    if isinstance(ari, float):
        raise InputError("pass ARI as a string or Fraction; binary floats are not exact")
    try:
        ari = Fraction(ari)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse ARI value {ari!r}: {exc}") from None
    if ari > 1:
        raise InputError(f"ARI cannot exceed 1, got {ari}")
    _check_sizes(r, s)
    lo = min_ari(r, s)
    value = (1 - ari) / (1 - lo)
    warnings = ()
    if ari < lo:
        warnings = (f"ARI {ari} is below the closed-form minimum {lo} for sizes ({r}, {s})",)
    return NormalizedDistance(value=value, ari=ari, min_ari=lo, warnings=warnings)


@dataclass(frozen=True)
class LemmaInstance:
    """Maximize sum(x_i^2) subject to sum(x_i) = total and x_i >= floors[i]."""

    floors: tuple
    total: Fraction

    def __post_init__(self):
        floors = tuple(Fraction(a) for a in self.floors)
        total = Fraction(self.total)
        if not floors:
            raise InputError("need at least one coordinate")
        if any(floors[i] < floors[i + 1] for i in range(len(floors) - 1)):
            raise InputError("floors must be sorted in non-increasing order")
        if total < sum(floors):
            raise InputError(f"total {total} is below the sum of floors {sum(floors)}")
        object.__setattr__(self, "floors", floors)
        object.__setattr__(self, "total", total)

    @property
    def p(self) -> int:
        return len(self.floors)


def max_sum_squares(inst: LemmaInstance) -> tuple[tuple[Fraction, ...], Fraction]:
    """Put all slack on the largest floor, keep the others at their floors."""
    rest = inst.floors[1:]
    head = inst.total - sum(rest)
    x = (head,) + rest
    return x, sum(v * v for v in x)


def swap_gain(a, b, c) -> bool:
    """Whether moving ``c >= 0`` from the smaller part ``a`` to the larger ``b`` does not lower a^2 + b^2."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a > b or c < 0:
        raise InputError("requires a <= b and c >= 0")
    return a * a + b * b <= (a - c) ** 2 + (b + c) ** 2


def floors_from(values: Sequence) -> tuple[Fraction, ...]:
    """Sort arbitrary floors into the non-increasing order LemmaInstance expects."""
    return tuple(sorted((Fraction(v) for v in values), reverse=True))
