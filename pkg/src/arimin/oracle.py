"""Brute-force checks of the minimum-ARI bound and the sum-of-squares lemma.

The table search knows nothing about the shape of the optimum: it walks
every r x s table with positive marginals up to ``n_max`` objects and keeps
the exact minimum ARI together with every table attaining it.

Two engines scan the same space. ``"reference"`` iterates
:func:`enumerate_tables` and evaluates each table with
:func:`arimin.core.adjusted_rand_index`. ``"vectorized"`` stacks the last
few rows into numpy blocks and evaluates whole slices at once; it only
uses floats to locate candidates, and every reported value is settled with
integer cross-multiplication.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Optional

import numpy as np

from .bounds import extremal_table, min_ari
from .core import ContingencyTable, adjusted_rand_index
from .errors import BudgetExceededError, InputError, UndefinedIndexError

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
# rows per vectorized block are added while the block stays below this many stacks
_BLOCK_LIMIT = 2_000_000
# int64 cross-multiplication of ARI terms stays exact while n**8 < 2**63
_VECTORIZED_N_MAX = 200


@dataclass(frozen=True)
class EnumerationSpec:
    r: int
    s: int
    n_max: int
    zero_one_only: bool = False

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise InputError(f"cluster counts must be >= 1, got r={self.r}, s={self.s}")
        if self.n_max < max(self.r, self.s):
            raise InputError(
                f"n_max={self.n_max} is below max(r, s)={max(self.r, self.s)}; no valid table exists"
            )
        if self.zero_one_only and self.n_max > self.r * self.s:
            # a 0/1 table holds at most r*s objects
            object.__setattr__(self, "n_max", self.r * self.s)

    @property
    def n_min(self) -> int:
        return max(self.r, self.s)

    @property
    def cap(self) -> Optional[int]:
        return 1 if self.zero_one_only else None


def count_tables(spec: EnumerationSpec) -> int:
    """Number of tables :func:`enumerate_tables` yields, by inclusion-exclusion on empty rows/columns."""
    r, s = spec.r, spec.s
    total = 0
    for n in range(spec.n_min, spec.n_max + 1):
        for i in range(r + 1):
            for j in range(s + 1):
                cells = (r - i) * (s - j)
                if spec.zero_one_only:
                    free = comb(cells, n)
                elif cells == 0:
                    free = 0
                else:
                    free = comb(n + cells - 1, n)
                total += (-1) ** (i + j) * comb(r, i) * comb(s, j) * free
    return total


def _compositions(total: int, parts: int, cap: Optional[int]) -> Iterator[tuple]:
    """Non-negative integer vectors of length ``parts`` summing to ``total``, lex ascending."""
    if parts == 1:
        if cap is None or total <= cap:
            yield (total,)
        return
    hi = total if cap is None else min(total, cap)
    for first in range(hi + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def enumerate_tables(spec: EnumerationSpec) -> Iterator[ContingencyTable]:
    """Every r x s table with no empty row or column, grouped by ascending n, lex order within n."""
    r, s, cap = spec.r, spec.s, spec.cap
    for n in range(spec.n_min, spec.n_max + 1):
        for flat in _compositions(n, r * s, cap):
            rows = [flat[i * s:(i + 1) * s] for i in range(r)]
            if not all(any(row) for row in rows):
                continue
            if not all(any(col) for col in zip(*rows)):
                continue
            yield ContingencyTable(tuple(rows))


@dataclass(frozen=True)
class OracleResult:
    spec: EnumerationSpec
    best_ari: Fraction
    best_tables: tuple  # ContingencyTable, sorted by (n, row-major entries)
    tables_scanned: int
    n_at_optimum: frozenset
    undefined_skipped: int = 0


def _table_key(t: ContingencyTable) -> tuple:
    return (t.n,) + tuple(v for row in t.entries for v in row)


@dataclass
class _Partial:
    best: Optional[Fraction] = None
    witnesses: list = field(default_factory=list)
    scanned: int = 0
    undefined: int = 0

    def offer(self, value: Fraction, tables) -> None:
        if self.best is None or value < self.best:
            self.best = value
            self.witnesses = list(tables)
        elif value == self.best:
            self.witnesses.extend(tables)


def _merge(a: _Partial, b: _Partial) -> _Partial:
    out = _Partial(scanned=a.scanned + b.scanned, undefined=a.undefined + b.undefined)
    for part in (a, b):
        if part.best is not None:
            out.offer(part.best, part.witnesses)
    out.witnesses.sort(key=_table_key)
    return out


def _finish(spec: EnumerationSpec, part: _Partial) -> OracleResult:
    if part.best is None:
        raise UndefinedIndexError(f"ARI is undefined on every table for r={spec.r}, s={spec.s}")
    witnesses = tuple(sorted(part.witnesses, key=_table_key))
    return OracleResult(
        spec=spec,
        best_ari=part.best,
        best_tables=witnesses,
        tables_scanned=part.scanned,
        n_at_optimum=frozenset(t.n for t in witnesses),
        undefined_skipped=part.undefined,
    )


def _scan_reference(spec: EnumerationSpec) -> _Partial:
    part = _Partial()
    for t in enumerate_tables(spec):
        part.scanned += 1
        try:
            value = adjusted_rand_index(t)
        except UndefinedIndexError:
            part.undefined += 1
            continue
        part.offer(value, [t])
    return part


# -- vectorized engine -------------------------------------------------------


@lru_cache(maxsize=None)
def _row_vectors(s: int, n_max: int, cap: Optional[int]) -> np.ndarray:
    rows = [v for total in range(1, n_max + 1) for v in _compositions(total, s, cap)]
    return np.array(rows, dtype=np.int64).reshape(-1, s)


@dataclass(frozen=True)
class _Block:
    """All stacks of ``k`` non-empty rows with at most ``n_max`` objects, sorted by object count."""

    rows: np.ndarray     # (P, k) indices into the row-vector list
    colsum: np.ndarray   # (P, s)
    total: np.ndarray    # (P,)
    cell_sq: np.ndarray  # (P,) sum of squared entries
    row_sq: np.ndarray   # (P,) sum of squared row totals
    end: np.ndarray      # end[m] = number of stacks with total <= m


def _stack_count(vec_totals: np.ndarray, k: int, n_max: int) -> int:
    per_total = np.bincount(vec_totals, minlength=n_max + 1).astype(object)
    dist = np.zeros(n_max + 1, dtype=object)
    dist[0] = 1
    for _ in range(k):
        nxt = np.zeros(n_max + 1, dtype=object)
        for t in range(n_max + 1):
            if dist[t]:
                nxt[t:] += dist[t] * per_total[: n_max + 1 - t]
        dist = nxt
    return int(dist.sum())


@lru_cache(maxsize=8)
def _block(s: int, n_max: int, cap: Optional[int], k: int) -> _Block:
    vecs = _row_vectors(s, n_max, cap)
    vtot = vecs.sum(axis=1)
    rows = np.arange(len(vecs)).reshape(-1, 1)
    colsum, total = vecs.copy(), vtot.copy()
    cell_sq = (vecs**2).sum(axis=1)
    row_sq = vtot**2
    for _ in range(k - 1):
        order = np.argsort(total, kind="stable")
        rows, colsum, total, cell_sq, row_sq = (
            rows[order], colsum[order], total[order], cell_sq[order], row_sq[order]
        )
        end = np.searchsorted(total, np.arange(n_max + 1), side="right")
        parts = []
        for i, v in enumerate(vecs):
            m = end[n_max - vtot[i]] if vtot[i] <= n_max else 0
            if m == 0:
                continue
            parts.append((
                np.concatenate([np.full((m, 1), i), rows[:m]], axis=1),
                colsum[:m] + v,
                total[:m] + vtot[i],
                cell_sq[:m] + _sq(v),
                row_sq[:m] + vtot[i] ** 2,
            ))
        rows, colsum, total, cell_sq, row_sq = (np.concatenate(x) for x in zip(*parts))
    order = np.argsort(total, kind="stable")
    total = total[order]
    return _Block(
        rows=rows[order],
        colsum=colsum[order],
        total=total,
        cell_sq=cell_sq[order],
        row_sq=row_sq[order],
        end=np.searchsorted(total, np.arange(n_max + 1), side="right"),
    )


def _sq(v: np.ndarray) -> int:
    return int((v * v).sum())


def _block_depth(spec: EnumerationSpec) -> int:
    vecs = _row_vectors(spec.s, spec.n_max, spec.cap)
    vtot = vecs.sum(axis=1)
    k = 1
    while k < spec.r and _stack_count(vtot, k + 1, spec.n_max) <= _BLOCK_LIMIT:
        k += 1
    return k


def _ari_terms(n, cell_sq, row_sq, col_sq):
    """4*numerator and 4*denominator of the ARI from the squared-sum statistics."""
    two_a = cell_sq - n
    two_b = row_sq - cell_sq
    two_c = col_sq - cell_sq
    two_d = cell_sq + n * n - row_sq - col_sq
    two_N = n * (n - 1)
    chance = (two_a + two_b) * (two_a + two_c) + (two_c + two_d) * (two_b + two_d)
    return two_N * (two_a + two_d) - chance, two_N * two_N - chance


def _exact_block_min(num: np.ndarray, den: np.ndarray) -> int:
    """Index of an exact minimum of num/den (den > 0), found via float argmin then refined."""
    idx = int(np.argmin(num / den))
    while True:
        lower = num * den[idx] < num[idx] * den
        if not lower.any():
            return idx
        cand = np.flatnonzero(lower)
        idx = int(cand[np.argmin(num[cand] / den[cand])])


def _scan_vectorized(spec: EnumerationSpec, first_rows: Optional[tuple] = None) -> _Partial:
    r, s, n_max, cap = spec.r, spec.s, spec.n_max, spec.cap
    k = _block_depth(spec)
    block = _block(s, n_max, cap, k)
    vecs = _row_vectors(s, n_max, cap)
    vtot = vecs.sum(axis=1)
    prefix_len = r - k
    part = _Partial()

    def visit(prefix: list, colsum, total, cell_sq, row_sq):
        m = int(block.end[n_max - total])
        if m == 0:
            return
        cs = block.colsum[:m] + colsum
        ok = (cs > 0).all(axis=1)
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return
        cs = cs[idx]
        n = block.total[idx] + total
        num, den = _ari_terms(
            n,
            block.cell_sq[idx] + cell_sq,
            block.row_sq[idx] + row_sq,
            (cs * cs).sum(axis=1),
        )
        part.scanned += idx.size
        defined = den != 0
        part.undefined += int(idx.size - defined.sum())
        if not defined.any():
            return
        idx, num, den = idx[defined], num[defined], den[defined]
        j = _exact_block_min(num, den)
        value = Fraction(int(num[j]), int(den[j]))
        if part.best is not None and value > part.best:
            return
        hits = idx[num * int(den[j]) == int(num[j]) * den]
        tables = [
            ContingencyTable(tuple(tuple(int(x) for x in vecs[i]) for i in list(prefix) + list(block.rows[h])))
            for h in hits
        ]
        part.offer(value, tables)

    def descend(prefix, colsum, total, cell_sq, row_sq):
        if len(prefix) == prefix_len:
            visit(prefix, colsum, total, cell_sq, row_sq)
            return
        # every row still to come holds at least one object
        room = n_max - total - (r - len(prefix) - 1)
        choices = range(len(vecs)) if first_rows is None or prefix else first_rows
        for i in choices:
            t = int(vtot[i])
            if t > room:
                continue
            v = vecs[i]
            descend(prefix + [i], colsum + v, total + t, cell_sq + _sq(v), row_sq + t * t)

    descend([], np.zeros(s, dtype=np.int64), 0, 0, 0)
    return part


def _scan_vectorized_task(args):
    spec, first_rows = args
    return _scan_vectorized(spec, first_rows)


def brute_force_min_ari(
    spec: EnumerationSpec,
    budget: int = DEFAULT_BUDGET,
    engine: str = "vectorized",
    workers: int = 1,
) -> OracleResult:
    """Exact minimum ARI over every table in ``spec``, with all tables attaining it.

    ``workers > 1`` splits the vectorized scan by the first row of the table
    across processes; the merged result does not depend on the split.
    """
    size = count_tables(spec)
    if size > budget:
        raise BudgetExceededError(
            f"search space for r={spec.r}, s={spec.s}, n<={spec.n_max}"
            f"{' (0/1 entries)' if spec.zero_one_only else ''} has {size} tables, budget is {budget}",
            space_size=size,
            budget=budget,
        )
    if engine == "reference":
        part = _scan_reference(spec)
    elif engine == "vectorized":
        if spec.n_max > _VECTORIZED_N_MAX:
            raise InputError(f"vectorized engine supports n_max <= {_VECTORIZED_N_MAX}")
        if workers > 1 and spec.r > _block_depth(spec):
            n_first = len(_row_vectors(spec.s, spec.n_max, spec.cap))
            chunks = [tuple(range(w, n_first, workers)) for w in range(workers)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_scan_vectorized_task, [(spec, c) for c in chunks]))
            part = _Partial()
            for p in parts:
                part = _merge(part, p)
        else:
            part = _scan_vectorized(spec)
    else:
        raise InputError(f"unknown engine {engine!r}")
    if part.scanned != size:
        raise AssertionError(f"scanned {part.scanned} tables, expected {size}")
    log.debug("r=%d s=%d n<=%d: %d tables scanned", spec.r, spec.s, spec.n_max, part.scanned)
    return _finish(spec, part)


# -- verdicts ----------------------------------------------------------------


def _same_up_to_permutation(t: ContingencyTable, ref: ContingencyTable) -> bool:
    if t.shape != ref.shape:
        return False
    ref_cols = sorted(zip(*ref.entries))
    for order in itertools.permutations(range(t.r)):
        rows = [t.entries[i] for i in order]
        if sorted(zip(*rows)) == ref_cols:
            return True
    return False


@dataclass(frozen=True)
class TheoremVerdict:
    r: int
    s: int
    n_range: tuple[int, int]
    zero_one_only: bool
    passed: bool
    formula_min: Fraction
    oracle_min: Fraction
    tables_scanned: int
    n_at_optimum: tuple[int, ...]
    witnesses: int
    checks: dict
    diagnostics: tuple[str, ...]


def verify_theorem(
    r: int,
    s: int,
    n_max: int,
    zero_one_only: bool = False,
    budget: int = DEFAULT_BUDGET,
    engine: str = "vectorized",
    workers: int = 1,
) -> TheoremVerdict:
    """Compare the exhaustive minimum over n <= n_max with the closed-form bound.

    A mismatch is a failed verdict, not an exception. Oracle errors
    (budget, bad spec) propagate.
    """
    spec = EnumerationSpec(r, s, n_max, zero_one_only)
    res = brute_force_min_ari(spec, budget=budget, engine=engine, workers=workers)
    report = extremal_table(r, s)
    target_n = report.witness_n
    diagnostics = []

    value_ok = res.best_ari == report.min_ari
    if not value_ok:
        diagnostics.append(f"oracle minimum {res.best_ari} differs from closed form {report.min_ari}")
    n_ok = target_n in res.n_at_optimum
    if not n_ok:
        if target_n > spec.n_max:
            diagnostics.append(f"swept range n<={spec.n_max} does not reach n={target_n}")
        else:
            diagnostics.append(f"optimum found at n in {sorted(res.n_at_optimum)}, not at n={target_n}")
    at_target = [t for t in res.best_tables if t.n == target_n]
    odd = [t for t in at_target if not _same_up_to_permutation(t, report.witness)]
    shape_ok = not odd and bool(at_target)
    for t in odd[:3]:
        diagnostics.append(f"witness {t.tolist()} is not a permutation of the extremal table")

    checks = {"value": value_ok, "object_count": n_ok, "witness_shape": shape_ok}
    return TheoremVerdict(
        r=r,
        s=s,
        n_range=(spec.n_min, spec.n_max),
        zero_one_only=spec.zero_one_only,
        passed=all(checks.values()),
        formula_min=report.min_ari,
        oracle_min=res.best_ari,
        tables_scanned=res.tables_scanned,
        n_at_optimum=tuple(sorted(res.n_at_optimum)),
        witnesses=len(res.best_tables),
        checks=checks,
        diagnostics=tuple(diagnostics),
    )


@dataclass(frozen=True)
class LemmaVerdict:
    p: int
    total: int
    floor_value: int
    passed: bool
    max_found: int
    expected: int
    maximizers: tuple
    points_scanned: int


def verify_lemma1(p: int, t: int, floor_value: int, budget: int = DEFAULT_BUDGET) -> LemmaVerdict:
    """Exhaustively maximize sum(x_i^2) over integer x with x_i >= floor_value and sum(x) = t."""
    if p < 1:
        raise InputError("p must be >= 1")
    slack = t - p * floor_value
    if slack < 0:
        raise InputError(f"t={t} is below p * floor = {p * floor_value}")
    size = comb(slack + p - 1, p - 1)
    if size > budget:
        raise BudgetExceededError(
            f"{size} integer points for p={p}, t={t}, floor={floor_value}; budget is {budget}",
            space_size=size,
            budget=budget,
        )
    best, argmax, scanned = None, [], 0
    for extra in _compositions(slack, p, None):
        x = tuple(floor_value + e for e in extra)
        scanned += 1
        value = sum(v * v for v in x)
        if best is None or value > best:
            best, argmax = value, [x]
        elif value == best:
            argmax.append(x)
    expected = (t - (p - 1) * floor_value) ** 2 + (p - 1) * floor_value**2
    stated = (t - (p - 1) * floor_value,) + (floor_value,) * (p - 1)
    passed = best == expected and stated in argmax
    return LemmaVerdict(
        p=p,
        total=t,
        floor_value=floor_value,
        passed=passed,
        max_found=best,
        expected=expected,
        maximizers=tuple(argmax),
        points_scanned=scanned,
    )
