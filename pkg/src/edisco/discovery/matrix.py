"""Discovery e-matrices for the nested rejection sets of the ``r`` largest e-values.

Row ``r`` of a discovery matrix is the discovery vector of
``R_r = {K-r+1, ..., K}`` (1-based, ascending order), which dominates every
other rejection set of size ``r``.
"""

from __future__ import annotations

from itertools import accumulate

import numpy as np

from .._parallel import ordered_map
from ..errors import DomainError
from ..evalues import MergeKind
from ._types import DiscoveryMatrix, SortedEValues

__all__ = [
    "discovery_matrix",
    "discovery_matrix_generic",
    "am_discovery_matrix",
    "am_discovery_row",
    "iter_am_rows",
    "bonferroni_discovery_matrix",
    "simes_discovery_matrix",
]

# elements per vectorised block in the O(K^3) loops; keeps blocks cache-resident
_BLOCK = 1 << 16


def discovery_matrix_generic(merge, evalues) -> DiscoveryMatrix:
    """Discovery matrix for any symmetric merge by direct evaluation, ``O(K^4)``.

    For each ``(r, j)`` the candidates are ``S_{r,j} = {K-r+1, ..., K-j+1}``
    alone and joined with each prefix ``{1, ..., i}``.  Prefixes run over all
    ``i <= K``, not just the non-rejected ``i <= K - r``: for Bonferroni the
    minimum can require the ``j - 1`` dropped (larger) rejected e-values,
    e.g. ``e = (1, 1.5)`` has ``D_{2,2} = 0.75`` from ``{1, 2}``.
    Meant as a reference; use :func:`discovery_matrix` for speed.
    """
    merge = MergeKind.parse(merge)
    ev = SortedEValues.coerce(evalues)
    values, K = ev.values, ev.K
    out = DiscoveryMatrix.empty(K, merge)
    for r in range(1, K + 1):
        row = out.row(r)
        for j in range(1, r + 1):
            core = values[K - r : K - j + 1]
            best = merge(core)
            for i in range(1, K - r + 1):
                e = merge(np.concatenate((values[:i], core)))
                if e < best:
                    best = e
            for i in range(K - j + 2, K + 1):
                e = merge(values[:i])
                if e < best:
                    best = e
            row[j - 1] = best
    return out


def _am_row_block(values, s, r: int) -> np.ndarray:
    # sigma[j-1] = e_{K-r+1} + ... + e_{K-j+1}, accumulated from the small end
    K = values.size
    top = values[K - r :]
    sigma = np.cumsum(top)[::-1]
    size = r - np.arange(r)  # |S_{r,j}| = r - j + 1
    prefix = s[: K - r + 1]  # s_0 .. s_{K-r}
    idx = np.arange(K - r + 1)
    out = np.empty(r)
    step = max(1, _BLOCK // (K - r + 1))
    for lo in range(0, r, step):
        hi = min(r, lo + step)
        num = sigma[lo:hi, None] + prefix[None, :]
        den = size[lo:hi, None] + idx[None, :]
        out[lo:hi] = (num / den).min(axis=1)
    return out


def am_discovery_matrix(evalues, workers: int | None = None) -> DiscoveryMatrix:
    """Arithmetic-mean discovery matrix from prefix sums, ``O(K^3)`` total.

    Entry ``(r, j)`` is ``min_i (sigma_{r,j} + s_i) / (r - j + 1 + i)`` over
    ``i = 0, ..., K - r``, where ``s_i`` sums the ``i`` smallest e-values
    and ``sigma_{r,j}`` sums ``S_{r,j}``.  Rows are independent and may be
    computed on ``workers`` threads; the output does not depend on it.
    """
    ev = SortedEValues.coerce(evalues)
    values, K = ev.values, ev.K
    s = np.concatenate(([0.0], np.cumsum(values)))
    rows = ordered_map(lambda r: _am_row_block(values, s, r), range(1, K + 1), workers)
    return DiscoveryMatrix(K, np.concatenate(rows), MergeKind.ARITHMETIC_MEAN)


def _am_row_walk(values: list, prefix: list, r: int) -> list:
    K = len(values)
    sigma = list(accumulate(values[K - r :]))  # sigma[r-j] is sigma_j
    k = K - r
    row = []
    for j in range(1, r + 1):
        sj = sigma[r - j]
        base = r - j + 1
        slope = (prefix[k] + sj) / (k + base)
        for i in range(k - 1, -1, -1):
            new_slope = (prefix[i] + sj) / (i + base)
            if new_slope > slope:
                break
            k = i
            slope = new_slope
        row.append(slope)
    return row


def am_discovery_row(evalues, r: int) -> np.ndarray:
    """Row ``r`` of the arithmetic-mean discovery matrix in ``O(K)`` time.

    The points ``P_k = (k, s_k)`` form a convex chain because the e-values
    are ascending.  Entry ``j`` is the smallest slope of a line from
    ``Q_j = -(r - j + 1, sigma_j)`` to the chain; the touching vertex only
    moves left as ``j`` grows, so a single pointer sweep covers the row.
    """
    ev = SortedEValues.coerce(evalues)
    K = ev.K
    if not 1 <= r <= K:
        raise DomainError(f"row {r} out of range 1..{K}")
    values = ev.values.tolist()
    prefix = [0.0, *accumulate(values[: K - r])]
    return np.array(_am_row_walk(values, prefix, r))


def iter_am_rows(evalues, rows=None):
    """Yield ``(r, row)`` pairs of the arithmetic-mean matrix one at a time.

    Shares one prefix-sum array across rows, so memory stays ``O(K)`` and
    matrices far larger than memory can be streamed.
    """
    ev = SortedEValues.coerce(evalues)
    K = ev.K
    values = ev.values.tolist()
    prefix = [0.0, *accumulate(values)]
    for r in range(1, K + 1) if rows is None else rows:
        if not 1 <= r <= K:
            raise DomainError(f"row {r} out of range 1..{K}")
        yield r, np.array(_am_row_walk(values, prefix, r))


def bonferroni_discovery_matrix(evalues) -> DiscoveryMatrix:
    """Bonferroni discovery matrix; its columns are constant, ``O(K^2)`` to write out.

    Column ``j`` holds the running minimum of ``e_{K-j'+1} / (K-j'+1)`` over
    ``j' <= j``.
    """
    ev = SortedEValues.coerce(evalues)
    values, K = ev.values, ev.K
    column = np.empty(K)
    a = np.inf
    for j in range(1, K + 1):
        b = values[K - j] / (K - j + 1)
        if a > b:
            a = b
        column[j - 1] = a
    data = np.concatenate([column[:r] for r in range(1, K + 1)])
    return DiscoveryMatrix(K, data, MergeKind.BONFERRONI)


def simes_discovery_matrix(evalues) -> DiscoveryMatrix:
    """Simes discovery matrix in ``O(K^3)`` vectorised time and ``O(K^2)`` memory.

    For the candidate set ``S_{r,j}`` joined with prefix ``{1..i}`` the
    descending order puts ``S_{r,j}`` first, so the Simes numerator splits
    into ``M_{r,j} = max_l l * e_{K-j+2-l}`` over ``S_{r,j}`` and
    ``A_{m,i} = max_{u <= i} (m + i + 1 - u) e_u`` over the prefix, with
    ``m = r - j + 1``.  Both obey one-step recursions.
    """
    ev = SortedEValues.coerce(evalues)
    values, K = ev.values, ev.K
    # A[m, i] = max(A[m+1, i-1], (m+1) e_i); only m + i <= K is ever read
    A = np.zeros((K + 2, K + 1))
    for m in range(K, 0, -1):
        A[m, 1:] = np.maximum(A[m + 1, :-1], (m + 1) * values)
    out = DiscoveryMatrix.empty(K, MergeKind.SIMES)
    M = np.empty(0)
    for r in range(1, K + 1):
        new = values[K - r]  # e_{K-r+1}
        size = r - np.arange(r)  # m_j = r - j + 1
        M = np.append(np.maximum(M, size[:-1] * new), new)
        width = K - r + 1
        idx = np.arange(width)
        row = out.row(r)
        step = max(1, _BLOCK // width)
        for lo in range(0, r, step):
            hi = min(r, lo + step)
            num = np.maximum(M[lo:hi, None], A[size[lo:hi], :width])
            den = size[lo:hi, None] + idx[None, :]
            row[lo:hi] = (num / den).min(axis=1)
    return out


def discovery_matrix(evalues, merge="am", workers: int | None = None) -> DiscoveryMatrix:
    """Discovery matrix for ``merge`` using the fastest exact routine available."""
    merge = MergeKind.parse(merge)
    if merge is MergeKind.ARITHMETIC_MEAN:
        return am_discovery_matrix(evalues, workers=workers)
    if merge is MergeKind.BONFERRONI:
        return bonferroni_discovery_matrix(evalues)
    return simes_discovery_matrix(evalues)
