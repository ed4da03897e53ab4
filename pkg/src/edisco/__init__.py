"""Bounds on the number of true discoveries from e-values.

Most users need :func:`discovery_matrix` (or :func:`discovery_vector` for a
fixed rejection set) applied to a vector of base e-values.
"""

from . import conformal, discovery, evalues, render, rng, simulation
from .discovery import (
    DiscoveryMatrix,
    SortedEValues,
    am_discovery_matrix,
    am_discovery_row,
    bonferroni_discovery_matrix,
    discovery_matrix,
    discovery_matrix_generic,
    discovery_vector,
    simes_discovery_matrix,
)
from .errors import DomainError, EdiscoError, ParseError, ScoreError, SizeError
from .evalues import (
    MergeKind,
    arithmetic_mean_merge,
    bonferroni_merge,
    calibrate_p_to_e,
    e_to_p,
    simes_merge,
    vs_bound,
)

__version__ = "0.1.0"

__all__ = [
    "conformal",
    "discovery",
    "evalues",
    "render",
    "rng",
    "simulation",
    "DiscoveryMatrix",
    "SortedEValues",
    "am_discovery_matrix",
    "am_discovery_row",
    "bonferroni_discovery_matrix",
    "discovery_matrix",
    "discovery_matrix_generic",
    "discovery_vector",
    "simes_discovery_matrix",
    "DomainError",
    "EdiscoError",
    "ParseError",
    "ScoreError",
    "SizeError",
    "MergeKind",
    "arithmetic_mean_merge",
    "bonferroni_merge",
    "calibrate_p_to_e",
    "e_to_p",
    "simes_merge",
    "vs_bound",
]
