"""Exact pair-counting clustering comparison and the minimum adjusted Rand index."""

from .bounds import (
    BoundReport,
    LemmaInstance,
    NormalizedDistance,
    approx_min_ari,
    extremal_table,
    max_sum_squares,
    min_ari,
    min_ari_equal_sizes,
    normalized_ard,
    normalized_ard_from_ari,
)
from .core import (
    Clustering,
    ContingencyTable,
    ExactRatio,
    PairCounts,
    adjusted_rand_distance,
    adjusted_rand_index,
    contingency_from_labels,
    expected_rand_index,
    is_a_zero,
    is_d_zero,
    pair_counts,
    rand_index,
)
from .errors import BudgetExceededError, InputError, InternalConsistencyError, UndefinedIndexError

__version__ = "0.1.0"
