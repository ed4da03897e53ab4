"""Symmetric e-merging functions and calibrators between p-values and e-values.

E-values are nonnegative extended reals (``math.inf`` is allowed) and
p-values lie in ``[0, 1]``.  Everything here is a pure function of its
arguments and works in 64-bit floating point.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "MergeKind",
    "PMergeKind",
    "arithmetic_mean_merge",
    "bonferroni_merge",
    "simes_merge",
    "bonferroni_p_merge",
    "simes_p_merge",
    "calibrate_p_to_e",
    "vs_bound",
    "e_to_p",
    "harmonic_number",
    "check_evalues",
    "check_pvalues",
]


def check_evalues(evalues) -> np.ndarray:
    """Return ``evalues`` as a 1-d float array, raising if any entry is negative or NaN."""
    x = np.asarray(evalues, dtype=float)
    if x.ndim != 1:
        x = x.reshape(-1)
    if x.size and not (x >= 0).all():
        raise DomainError("e-values must be nonnegative (NaN is not allowed)")
    return x


def check_pvalues(pvalues) -> np.ndarray:
    x = np.asarray(pvalues, dtype=float)
    if x.ndim != 1:
        x = x.reshape(-1)
    if x.size and not ((x >= 0) & (x <= 1)).all():
        raise DomainError("p-values must lie in [0, 1]")
    return x


def arithmetic_mean_merge(evalues) -> float:
    """Arithmetic mean of the e-values; 1 for an empty input.

    >>> arithmetic_mean_merge([1, 3, 8])
    4.0
    """
    x = check_evalues(evalues)
    if x.size == 0:
        return 1.0
    return float(x.sum() / x.size)


def bonferroni_merge(evalues) -> float:
    """Largest e-value divided by the number of e-values; 1 for an empty input."""
    x = check_evalues(evalues)
    if x.size == 0:
        return 1.0
    return float(x.max() / x.size)


def simes_merge(evalues) -> float:
    """``max_i i * e_[i] / n`` over the descending rearrangement ``e_[1] >= ... >= e_[n]``.

    Returns 1 for an empty input.
    """
    x = check_evalues(evalues)
    n = x.size
    if n == 0:
        return 1.0
    desc = np.sort(x)[::-1]
    with np.errstate(invalid="ignore"):
        scaled = desc * np.arange(1, n + 1)
    # inf * i is inf; 0 * i never produces NaN, so scaled is NaN-free.
    return float(scaled.max() / n)


class MergeKind(enum.Enum):
    """Which symmetric e-merging function drives a computation.

    Pointwise ``BONFERRONI <= SIMES <= ARITHMETIC_MEAN``.
    """

    ARITHMETIC_MEAN = "am"
    BONFERRONI = "bonferroni"
    SIMES = "simes"

    def __call__(self, evalues) -> float:
        return _E_MERGES[self](evalues)

    @classmethod
    def parse(cls, value) -> "MergeKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"mean": "am", "arithmetic_mean": "am", "arithmetic": "am", "bm": "bonferroni"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown merge kind {value!r}") from None


_E_MERGES = {
    MergeKind.ARITHMETIC_MEAN: arithmetic_mean_merge,
    MergeKind.BONFERRONI: bonferroni_merge,
    MergeKind.SIMES: simes_merge,
}


def bonferroni_p_merge(pvalues) -> float:
    """``min(1, n * min_i p_i)``; 1 for an empty input."""
    x = check_pvalues(pvalues)
    if x.size == 0:
        return 1.0
    return float(min(1.0, x.size * x.min()))


def simes_p_merge(pvalues) -> float:
    """``min(1, min_i n * p_(i) / i)`` over the ascending order statistics; 1 for an empty input.

    Valid under independence (and positive dependence), not under
    arbitrary dependence.
    """
    x = check_pvalues(pvalues)
    n = x.size
    if n == 0:
        return 1.0
    asc = np.sort(x)
    return float(min(1.0, (n * asc / np.arange(1, n + 1)).min()))


class PMergeKind(enum.Enum):
    """Symmetric p-merging rules supported by the closed-testing oracle."""

    BONFERRONI = "bonferroni"
    SIMES = "simes"

    def __call__(self, pvalues) -> float:
        return _P_MERGES[self](pvalues)

    @classmethod
    def parse(cls, value) -> "PMergeKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"unknown p-merging rule {value!r}") from None


_P_MERGES = {
    PMergeKind.BONFERRONI: bonferroni_p_merge,
    PMergeKind.SIMES: simes_p_merge,
}


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p-value {p!r} is outside [0, 1]")
    return p


def calibrate_p_to_e(p, kappa: float):
    """Calibrate a p-value into an e-value with ``kappa * p**(kappa - 1)``.

    ``p`` may be a scalar or an array.  ``p = 0`` maps to ``inf`` for
    ``kappa < 1``.  With ``kappa = 1`` the calibrator is constant 1.
    """
    kappa = float(kappa)
    if not 0.0 < kappa <= 1.0:
        raise DomainError(f"kappa must lie in (0, 1], got {kappa!r}")
    if np.ndim(p) == 0:
        p = _check_p(p)
        if kappa == 1.0:
            return 1.0
        if p == 0.0:
            return math.inf
        return kappa * p ** (kappa - 1.0)
    x = check_pvalues(p)
    if kappa == 1.0:
        return np.ones_like(x)
    with np.errstate(divide="ignore"):
        return kappa * np.power(x, kappa - 1.0)


_INV_E = math.exp(-1.0)


def vs_bound(p):
    """Pointwise supremum over ``kappa`` of ``calibrate_p_to_e(p, kappa)``.

    Equals ``-exp(-1) / (p ln p)`` for ``p <= exp(-1)`` and 1 otherwise.
    This is an upper bound that is only attained in hindsight; applied to
    a p-variable it does *not* in general give an e-variable.
    """
    if np.ndim(p) == 0:
        p = _check_p(p)
        if p == 0.0:
            return math.inf
        if p > _INV_E:
            return 1.0
        return -_INV_E / (p * math.log(p))
    x = check_pvalues(p)
    out = np.ones_like(x)
    small = x <= _INV_E
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -_INV_E / (x[small] * np.log(x[small]))
    v[x[small] == 0.0] = np.inf
    out[small] = v
    return out


def e_to_p(e):
    """The e-to-p calibrator ``min(1, 1/e)``; ``e = 0`` gives 1 and ``e = inf`` gives 0."""
    if np.ndim(e) == 0:
        e = float(e)
        if not e >= 0:
            raise DomainError(f"e-value {e!r} must be nonnegative")
        if e <= 1.0:
            return 1.0
        return 1.0 / e
    x = check_evalues(e)
    out = np.ones_like(x)
    big = x > 1.0
    out[big] = 1.0 / x[big]
    return out


def harmonic_number(n: int) -> float:
    """``H_n = 1 + 1/2 + ... + 1/n`` (0 for ``n = 0``)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return math.fsum(1.0 / k for k in range(1, n + 1))
