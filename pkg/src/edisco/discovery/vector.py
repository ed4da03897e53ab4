"""Discovery e-vector for an arbitrary rejection set."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..evalues import MergeKind
from ._types import SortedEValues, as_rejection_set


def discovery_vector(merge, evalues, rejected, length: int | None = None) -> np.ndarray:
    """Lower-bound evidence for the number of true discoveries in ``rejected``.

    Entry ``j - 1`` of the result is the smallest merged e-value over all
    index sets ``I`` with ``|R \\ I| < j``.  The minimum is attained at
    ``R_j`` (``R`` without its ``j - 1`` largest elements) joined with some
    prefix ``{0, ..., i - 1}`` of the sorted e-values, so only ``K + 1``
    candidate sets are examined per entry.

    Parameters
    ----------
    merge : MergeKind or str
        Symmetric e-merging function.
    evalues : SortedEValues or ascending array-like
    rejected : iterable of int
        Sorted positions (0-based) of the rejected hypotheses.  Use
        :meth:`SortedEValues.positions_of` to translate original indices.
    length : int, optional
        Number of entries to return, ``|R|`` by default.  Entries past
        ``|R|`` are well defined (the empty set joins the candidates, with
        merged value 1) and are used when checking monotonicity.

    Returns
    -------
    numpy.ndarray
        Non-increasing vector; entry ``j - 1`` holds ``D^R(j)``.
    """
    merge = MergeKind.parse(merge)
    ev = SortedEValues.coerce(evalues)
    values = ev.values
    K = ev.K
    R = as_rejection_set(rejected, K)
    n = R.size if length is None else int(length)
    if n < 0:
        raise DomainError("length must be nonnegative")

    out = np.empty(n)
    for j in range(1, n + 1):
        # R is ascending by sorted position, so its largest elements come last;
        # ties in value therefore drop the larger original index first.
        core = R[: max(R.size - (j - 1), 0)]
        mask = np.zeros(K, dtype=bool)
        mask[core] = True
        best = merge(values[mask])
        for i in range(K):
            if mask[i]:
                # already in R_j: the union is unchanged, so is F
                continue
            mask[i] = True
            e = merge(values[mask])
            if e < best:
                best = e
        out[j - 1] = best
    return out


def discovery_value(merge, evalues, rejected, j: int) -> float:
    """Single entry ``D^R(j)``; ``j = 0`` gives ``inf`` (minimum over an empty family)."""
    if j < 0:
        raise DomainError("j must be nonnegative")
    if j == 0:
        return math.inf
    return float(discovery_vector(merge, evalues, rejected, length=j)[-1])
