import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arimin import (
    ContingencyTable,
    InputError,
    LemmaInstance,
    PairCounts,
    UndefinedIndexError,
    adjusted_rand_index,
    approx_min_ari,
    contingency_from_labels,
    extremal_table,
    max_sum_squares,
    min_ari,
    min_ari_equal_sizes,
    normalized_ard,
    normalized_ard_from_ari,
    pair_counts,
)
from arimin.bounds import swap_gain

from conftest import EXTREMAL_5x5, count_pairs_directly, table_to_labels


def max_ard_closed_form(r, s):
    """The same bound written as a maximum distance: 1 / (1 - 2 C(r,2) C(s,2) / (C(n,2) (C(r,2)+C(s,2))))."""
    cr, cs, cn = comb(r, 2), comb(s, 2), comb(r + s - 1, 2)
    return 1 / (1 - Fraction(2 * cr * cs, cn * (cr + cs)))


@pytest.mark.parametrize("r, s, expected", [
    (5, 5, Fraction(-5, 13)),
    (2, 2, Fraction(-1, 2)),
    (3, 2, Fraction(-1, 3)),
    (2, 3, Fraction(-1, 3)),
])
def test_min_ari_fixtures(r, s, expected):
    assert min_ari(r, s) == expected
    assert 1 - max_ard_closed_form(r, s) == expected


@pytest.mark.parametrize("s", range(2, 11))
def test_min_ari_single_cluster(s):
    assert min_ari(1, s) == 0
    assert min_ari(s, 1) == 0


def test_min_ari_errors():
    with pytest.raises(UndefinedIndexError):
        min_ari(1, 1)
    with pytest.raises(InputError):
        min_ari(0, 3)
    with pytest.raises(InputError):
        min_ari(2, -1)


def test_min_ari_matches_distance_form_on_grid():
    for r in range(2, 31):
        for s in range(2, 31):
            assert min_ari(r, s) == 1 - max_ard_closed_form(r, s)


def test_min_ari_symmetry_and_range():
    for r in range(2, 51):
        for s in range(2, 51):
            v = min_ari(r, s)
            assert v == min_ari(s, r)
            assert Fraction(-1, 2) <= v < 0
            assert (v == Fraction(-1, 2)) == (r == s == 2)


def test_equal_sizes_simplification():
    for r in range(2, 51):
        assert min_ari(r, r) == min_ari_equal_sizes(r) == Fraction(-r, 3 * r - 2)
    with pytest.raises(InputError):
        min_ari_equal_sizes(1)


def test_equal_sizes_large_r():
    v = min_ari_equal_sizes(1000)
    assert v == Fraction(-1000, 2998) == min_ari(1000, 1000)
    # -1000/2998 + 1/3 = -1/4497 (about 2.22e-4), slightly more than 2e-4
    assert v + Fraction(1, 3) == Fraction(-1, 4497)
    assert abs(v + Fraction(1, 3)) < Fraction(1, 4000)


def test_equal_sizes_decrease_toward_minus_one_third():
    values = [min_ari_equal_sizes(r) for r in range(2, 60)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(v < Fraction(-1, 3) for v in values)


def test_huge_sizes_exact():
    r = 10**6
    assert min_ari(r, r) == Fraction(-r, 3 * r - 2)
    assert min_ari(r, r + 1) == min_ari(r + 1, r)


def test_approx_min_ari():
    # -2*16 / (16 + 32 + 32 + 16)
    assert approx_min_ari(2, 2) == Fraction(-32, 96)
    for r in (3, 7, 100, 12345):
        assert approx_min_ari(r, r) == Fraction(-1, 3)
    ratio = approx_min_ari(100, 200) / min_ari(100, 200)
    assert abs(ratio - 1) <= Fraction(2, 100)
    with pytest.raises(InputError):
        approx_min_ari(1, 5)


def test_extremal_5x5():
    rep = extremal_table(5, 5)
    assert rep.witness.tolist() == EXTREMAL_5x5
    assert rep.witness_n == rep.witness.n == 9
    assert adjusted_rand_index(rep.witness) == Fraction(-5, 13) == rep.min_ari


def test_extremal_2x2_and_3x2():
    assert extremal_table(2, 2).witness.tolist() == [[1, 1], [1, 0]]
    assert adjusted_rand_index(extremal_table(2, 2).witness) == Fraction(-1, 2)
    rep = extremal_table(3, 2)
    assert rep.witness.tolist() == [[1, 1], [1, 0], [1, 0]]
    assert rep.witness_n == 4
    # (0, 1, 3, 2) counted pair by pair
    p = rep.witness_pair_counts
    assert (p.a, p.b, p.c, p.d) == (0, 1, 3, 2)
    assert (p.a, p.b, p.c, p.d) == count_pairs_directly(*table_to_labels(rep.witness.entries))
    assert adjusted_rand_index(p) == Fraction(-1, 3)


def test_extremal_single_cluster():
    rep = extremal_table(1, 3)
    assert rep.witness.tolist() == [[1, 1, 1]]
    assert rep.witness_n == 3 and adjusted_rand_index(rep.witness) == 0
    assert extremal_table(4, 1).witness.tolist() == [[1]] * 4
    with pytest.raises(UndefinedIndexError):
        extremal_table(1, 1)


def test_extremal_pair_counts_grid():
    for r in range(2, 13):
        for s in range(2, 13):
            rep = extremal_table(r, s)
            p = rep.witness_pair_counts
            n = r + s - 1
            assert (p.a, p.b, p.c, p.d) == (0, comb(s, 2), comb(r, 2), (r - 1) * (s - 1))
            assert p.d == comb(n, 2) - comb(r, 2) - comb(s, 2)
            assert adjusted_rand_index(p) == rep.min_ari


def test_formula_is_not_a_lower_bound_for_some_unequal_sizes():
    # found by the exhaustive oracle; cross-checked pair by pair here
    t = ContingencyTable.from_rows([[0, 1, 1], [1, 1, 1]])
    assert count_pairs_directly(*table_to_labels(t.entries)) == (0, 4, 2, 4)
    assert adjusted_rand_index(t) == Fraction(-4, 11) < min_ari(2, 3)
    assert normalized_ard(t, 2, 3) == Fraction(45, 44)


# -- normalized distance ---------------------------------------------------------


def test_normalized_from_reported_ari():
    sal = normalized_ard_from_ari("0.81", 2, 2)
    gmm = normalized_ard_from_ari("0.56", 3, 2)
    assert sal.value == Fraction(19, 150)
    assert gmm.value == Fraction(33, 100)
    assert not sal.warnings and not gmm.warnings
    assert round(float(sal.value), 2) == 0.13
    assert round(float(gmm.value), 2) == 0.33


def test_normalized_from_ari_edges():
    assert normalized_ard_from_ari(1, 4, 6).value == 0
    assert normalized_ard_from_ari(Fraction(-5, 13), 5, 5).value == 1
    assert normalized_ard_from_ari("-5/13", 5, 5).value == 1
    low = normalized_ard_from_ari("-0.5", 3, 3)
    assert low.value > 1 and low.below_minimum and low.warnings
    with pytest.raises(InputError):
        normalized_ard_from_ari(0.81, 2, 2)
    with pytest.raises(InputError):
        normalized_ard_from_ari("1.01", 2, 2)
    with pytest.raises(InputError):
        normalized_ard_from_ari("abc", 2, 2)
    with pytest.raises(UndefinedIndexError):
        normalized_ard_from_ari("0.5", 1, 1)


def test_normalized_ard_table_path():
    assert normalized_ard(extremal_table(5, 5).witness, 5, 5) == 1
    same = contingency_from_labels("aabbc", "xxyyz")
    assert normalized_ard(same, 3, 3) == 0
    with pytest.raises(InputError):
        normalized_ard(same, 3, 2)


def test_normalized_ard_rejects_inconsistent_counts():
    p = pair_counts(ContingencyTable.from_rows([[1, 1], [0, 1]]))
    assert normalized_ard(p, 2, 2) == normalized_ard_from_ari(adjusted_rand_index(p), 2, 2).value
    with pytest.raises(InputError):
        normalized_ard(p, 1, 2)
    with pytest.raises(InputError):
        normalized_ard(p, 5, 5)
    with pytest.raises(InputError):
        normalized_ard(PairCounts(1, 1, 1, 0), 2, 2)


@st.composite
def equal_size_tables(draw, max_size=8, max_n=30):
    k = draw(st.integers(2, max_size))
    n = draw(st.integers(k + 1, max_n))
    x = draw(st.permutations(list(range(k)) + draw(st.lists(st.integers(0, k - 1), min_size=n - k, max_size=n - k))))
    y = draw(st.permutations(list(range(k)) + draw(st.lists(st.integers(0, k - 1), min_size=n - k, max_size=n - k))))
    return contingency_from_labels(x, y)


@given(equal_size_tables())
@settings(max_examples=200, deadline=None)
def test_normalized_ard_in_unit_interval_equal_sizes(t):
    v = normalized_ard(t, t.r, t.s)
    assert 0 <= v <= 1


# -- sum of squares --------------------------------------------------------------


def brute_max_sum_squares(p, t, floor):
    best, arg = None, []
    for x in itertools.product(range(floor, t + 1), repeat=p):
        if sum(x) != t:
            continue
        v = sum(e * e for e in x)
        if best is None or v > best:
            best, arg = v, [x]
        elif v == best:
            arg.append(x)
    return best, arg


def test_max_sum_squares_fixture():
    x, v = max_sum_squares(LemmaInstance((1, 1, 1), 5))
    assert x == (3, 1, 1) and v == 11
    best, arg = brute_max_sum_squares(3, 5, 1)
    assert best == 11 and (3, 1, 1) in arg


def test_max_sum_squares_tight_region():
    floors = (Fraction(5, 2), 2, 1)
    x, v = max_sum_squares(LemmaInstance(floors, sum(floors)))
    assert x == floors and v == sum(f * f for f in floors)


@pytest.mark.parametrize("r, n", [(2, 5), (3, 7), (4, 4), (5, 12)])
def test_max_sum_squares_cluster_sizes(r, n):
    _, v = max_sum_squares(LemmaInstance((1,) * r, n))
    assert v == (n - (r - 1)) ** 2 + (r - 1)
    assert v == brute_max_sum_squares(r, n, 1)[0]


def test_lemma_instance_validation():
    with pytest.raises(InputError):
        LemmaInstance((1, 2), 5)
    with pytest.raises(InputError):
        LemmaInstance((2, 1), 2)
    with pytest.raises(InputError):
        LemmaInstance((), 2)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def feasible_points(draw):
    floors = sorted(draw(st.lists(rationals, min_size=1, max_size=6)), reverse=True)
    slack = draw(st.fractions(min_value=0, max_value=30, max_denominator=12))
    weights = draw(st.lists(st.integers(0, 10), min_size=len(floors), max_size=len(floors)))
    if sum(weights) == 0:
        weights[0] = 1
    x = [f + slack * Fraction(w, sum(weights)) for f, w in zip(floors, weights)]
    return LemmaInstance(tuple(floors), sum(floors) + slack), x


@given(feasible_points())
@settings(max_examples=300)
def test_lemma_dominance(case):
    inst, x = case
    assert sum(x) == inst.total and all(xi >= a for xi, a in zip(x, inst.floors))
    best_x, best = max_sum_squares(inst)
    assert sum(best_x) == inst.total
    assert all(xi >= a for xi, a in zip(best_x, inst.floors))
    assert sum(v * v for v in x) <= best


@given(rationals, rationals, st.fractions(min_value=0, max_value=20, max_denominator=12))
def test_swap_gain(a, b, c):
    a, b = min(a, b), max(a, b)
    assert swap_gain(a, b, c)
