"""Exhaustive-enumeration oracles for desk-scale problems.

These evaluate the defining min/max over *all* index sets and share no
code with the fast algorithms, so agreement between the two is evidence of
correctness rather than of a shared bug.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, SizeError
from ..evalues import MergeKind, PMergeKind, check_evalues, check_pvalues

MAX_ENUMERATION_K = 20
MAX_CLOSED_TESTING_K = 12


def _rejection_mask(rejected, K: int) -> int:
    idx = sorted(set(int(i) for i in rejected))
    if not idx:
        raise DomainError("the rejection set must be nonempty")
    if idx[0] < 0 or idx[-1] >= K:
        raise DomainError(f"rejection set indices must lie in [0, {K - 1}]")
    mask = 0
    for i in idx:
        mask |= 1 << i
    return mask


def _members(mask: int, K: int) -> list[int]:
    return [i for i in range(K) if mask >> i & 1]


def _best_by_missed(merge, values, rmask: int, maximize: bool) -> list[float]:
    """For each ``m = |R \\ I|``, the extreme merged value over all ``I`` missing ``m`` of ``R``."""
    K = len(values)
    size_r = bin(rmask).count("1")
    best = [None] * (size_r + 1)
    for imask in range(1 << K):
        missed = bin(rmask & ~imask).count("1")
        f = merge([values[i] for i in _members(imask, K)])
        cur = best[missed]
        if cur is None or (f > cur if maximize else f < cur):
            best[missed] = f
    return best


def brute_force_discovery_vector(merge, evalues, rejected, length: int | None = None) -> np.ndarray:
    """``D^R(j) = min_{I : |R \\ I| < j} F(e_i : i in I)`` by enumerating all ``2^K`` sets.

    ``evalues`` may be in any order; ``rejected`` indexes into it.  An empty
    feasible family yields ``inf``.  Refuses ``K > 20``.
    """
    merge = MergeKind.parse(merge)
    values = check_evalues(evalues).tolist()
    K = len(values)
    if K > MAX_ENUMERATION_K:
        raise SizeError(f"enumeration over 2^{K} subsets refused (K > {MAX_ENUMERATION_K})")
    rmask = _rejection_mask(rejected, K)
    best = _best_by_missed(merge, values, rmask, maximize=False)
    n = bin(rmask).count("1") if length is None else int(length)
    out = np.empty(n)
    running = math.inf
    for j in range(1, n + 1):
        if j - 1 < len(best):
            running = min(running, best[j - 1])
        out[j - 1] = running
    return out


def p_discovery_vector_brute(pmerge, pvalues, rejected, length: int | None = None) -> np.ndarray:
    """``D_p^R(j) = max_{I : |R \\ I| < j} F(p_i : i in I)`` by full enumeration.

    The merged value of the empty set is taken to be 1.  Refuses ``K > 20``.
    """
    pmerge = PMergeKind.parse(pmerge)
    values = check_pvalues(pvalues).tolist()
    K = len(values)
    if K > MAX_ENUMERATION_K:
        raise SizeError(f"enumeration over 2^{K} subsets refused (K > {MAX_ENUMERATION_K})")
    rmask = _rejection_mask(rejected, K)
    best = _best_by_missed(pmerge, values, rmask, maximize=True)
    n = bin(rmask).count("1") if length is None else int(length)
    out = np.empty(n)
    running = -math.inf
    for j in range(1, n + 1):
        if j - 1 < len(best):
            running = max(running, best[j - 1])
        out[j - 1] = running
    return out


def closed_testing_true_discoveries(pmerge, pvalues, rejected, alpha: float) -> int:
    """Lower confidence bound ``f_alpha(R)`` on the true discoveries in ``R`` by closed testing.

    Builds ``U`` (index sets whose merged p-value is at most ``alpha``) and
    ``X`` (sets all of whose supersets lie in ``U``, i.e. those rejected by
    closed testing), then returns ``|R| - max{|I| : I subset of R, I not in X}``.
    The empty set never belongs to ``U``.  Refuses ``K > 12``.
    """
    pmerge = PMergeKind.parse(pmerge)
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    values = check_pvalues(pvalues).tolist()
    K = len(values)
    if K > MAX_CLOSED_TESTING_K:
        raise SizeError(f"closed testing over 2^{K} sets refused (K > {MAX_CLOSED_TESTING_K})")
    rmask = _rejection_mask(rejected, K)
    n_sets = 1 << K

    in_u = np.zeros(n_sets, dtype=bool)
    for imask in range(1, n_sets):
        in_u[imask] = pmerge([values[i] for i in _members(imask, K)]) <= alpha

    # some superset of I (I included) lies outside U; superset sums one bit at a time
    escapes = ~in_u
    masks = np.arange(n_sets)
    for b in range(K):
        without = masks[(masks >> b & 1) == 0]
        escapes[without] |= escapes[without | (1 << b)]
    in_x = ~escapes

    t = 0
    sub = rmask
    while True:
        if not in_x[sub]:
            t = max(t, bin(sub).count("1"))
        if sub == 0:
            break
        sub = (sub - 1) & rmask
    return bin(rmask).count("1") - t
