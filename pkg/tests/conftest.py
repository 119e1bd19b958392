import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from arimin import ContingencyTable, contingency_from_labels

STEINLEY = ContingencyTable.from_rows([
    [1, 0, 1, 1, 0],
    [0, 1, 0, 0, 1],
    [1, 0, 1, 0, 1],
    [0, 1, 0, 1, 0],
    [1, 0, 1, 0, 1],
])

EXTREMAL_5x5 = [
    [1, 1, 1, 1, 1],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0],
]


def table_to_labels(table):
    """Expand a table into two aligned label lists (object by object)."""
    x, y = [], []
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            x += [i] * v
            y += [j] * v
    return x, y


def count_pairs_directly(x, y):
    """a, b, c, d by looking at every unordered pair of objects."""
    a = b = c = d = 0
    for i, j in itertools.combinations(range(len(x)), 2):
        same_x, same_y = x[i] == x[j], y[i] == y[j]
        if same_x and same_y:
            a += 1
        elif same_x:
            b += 1
        elif same_y:
            c += 1
        else:
            d += 1
    return a, b, c, d


def expected_ri_by_permutation(x, y):
    """Mean Rand index over every reassignment of y's labels to objects (marginals fixed)."""
    total, count = Fraction(0), 0
    n_pairs = len(x) * (len(x) - 1) // 2
    for perm in itertools.permutations(y):
        a, _, _, d = count_pairs_directly(x, perm)
        total += Fraction(a + d, n_pairs)
        count += 1
    return total / count


def random_labels(rng: random.Random, k: int, n: int):
    labels = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
    rng.shuffle(labels)
    return labels


def random_table(rng: random.Random, max_size=6, max_n=40):
    """A valid table with 1 <= r, s <= max_size, max(r, s) >= 2 and n <= max_n."""
    while True:
        r, s = rng.randint(1, max_size), rng.randint(1, max_size)
        if max(r, s) >= 2:
            break
    n = rng.randint(max(r, s), max_n)
    return contingency_from_labels(random_labels(rng, r, n), random_labels(rng, s, n))


@st.composite
def labelings(draw, max_size=5, max_n=14, min_r=1):
    """Two aligned labelings; every label in range(r) / range(s) is used at least once."""
    r = draw(st.integers(min_r, max_size))
    s = draw(st.integers(1, max_size))
    n = draw(st.integers(max(r, s, 2), max_n))
    x = list(range(r)) + draw(st.lists(st.integers(0, r - 1), min_size=n - r, max_size=n - r))
    y = list(range(s)) + draw(st.lists(st.integers(0, s - 1), min_size=n - s, max_size=n - s))
    x = draw(st.permutations(x))
    y = draw(st.permutations(y))
    return x, y


@st.composite
def tables(draw, max_size=5, max_n=14, nontrivial=True):
    """Valid tables; ``nontrivial`` excludes the 1 x 1 case (and then r >= 2 up to transposition)."""
    x, y = draw(labelings(max_size=max_size, max_n=max_n, min_r=2 if nontrivial else 1))
    t = contingency_from_labels(x, y)
    return t.transpose() if draw(st.booleans()) else t


# -- acceptance reporting ----------------------------------------------------

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and return the verdict."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" :: {detail}" if detail else "")
        _CRITERIA.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
