"""Discovery e-vectors and e-matrices, plus brute-force oracles."""

from ._types import DiscoveryMatrix, SortedEValues, as_rejection_set
from .matrix import (
    am_discovery_matrix,
    am_discovery_row,
    bonferroni_discovery_matrix,
    discovery_matrix,
    discovery_matrix_generic,
    iter_am_rows,
    simes_discovery_matrix,
)
from .oracle import (
    brute_force_discovery_vector,
    closed_testing_true_discoveries,
    p_discovery_vector_brute,
)
from .vector import discovery_value, discovery_vector

__all__ = [
    "DiscoveryMatrix",
    "SortedEValues",
    "as_rejection_set",
    "am_discovery_matrix",
    "am_discovery_row",
    "bonferroni_discovery_matrix",
    "brute_force_discovery_vector",
    "closed_testing_true_discoveries",
    "discovery_matrix",
    "discovery_matrix_generic",
    "discovery_value",
    "discovery_vector",
    "iter_am_rows",
    "p_discovery_vector_brute",
    "simes_discovery_matrix",
]
