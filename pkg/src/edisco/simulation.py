"""Gaussian testbed: observations, base e-values and p-values, and FDR baselines.

Null hypotheses are ``N(0, 1)`` and alternatives ``N(delta, 1)`` with
``delta < 0``, so evidence against the null is a small observation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from . import rng
from .errors import DomainError
from .evalues import check_pvalues, harmonic_number

__all__ = [
    "GaussianScenario",
    "generate_observations",
    "likelihood_ratio_e",
    "generalized_bayes_e",
    "gaussian_p",
    "bh_rejections",
    "by_rejections",
    "read_scenario_config",
]


@dataclass(frozen=True)
class GaussianScenario:
    """``K`` hypotheses, the first ``round(K * fraction_false)`` of them false.

    ``eta`` is the learning rate used by :func:`generalized_bayes_e`.
    """

    K: int
    delta: float = -3.0
    eta: float = 1.0
    seed: int = 1
    fraction_false: float = 0.5

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise DomainError("K must be an integer >= 2")
        if not math.isfinite(self.delta):
            raise DomainError("delta must be finite")
        if not self.eta > 0:
            raise DomainError("eta must be positive")
        if not 0.0 < self.fraction_false <= 1.0:
            raise DomainError("fraction_false must lie in (0, 1]")

    @property
    def n_false(self) -> int:
        # round half up, not to even
        return int(math.floor(self.K * self.fraction_false + 0.5))


def generate_observations(s: GaussianScenario) -> tuple[np.ndarray, np.ndarray]:
    """Draw the observations and the ground truth.

    Returns
    -------
    x : numpy.ndarray
        ``K`` observations; the first ``s.n_false`` come from ``N(delta, 1)``.
    is_false : numpy.ndarray of bool
        True where the null hypothesis is false.
    """
    z = rng.standard_normals(rng.stream(s.seed), s.K)
    is_false = np.zeros(s.K, dtype=bool)
    is_false[: s.n_false] = True
    return z + np.where(is_false, s.delta, 0.0), is_false


def _scalar_or_array(v, x):
    return float(v) if np.ndim(x) == 0 else v


def likelihood_ratio_e(x, delta: float):
    """Likelihood ratio of ``N(delta, 1)`` to ``N(0, 1)``: ``exp(delta x - delta^2 / 2)``."""
    v = np.exp(delta * np.asarray(x, dtype=float) - delta * delta / 2.0)
    return _scalar_or_array(v, x)


def generalized_bayes_e(x, delta: float, eta: float):
    """Normalised ``E(x)**eta``, equal to ``exp(eta delta x - eta^2 delta^2 / 2)``.

    This is the likelihood ratio against the shifted alternative
    ``N(eta * delta, 1)``; ``eta > 1`` boosts a weak signal.
    """
    if not eta > 0:
        raise DomainError("eta must be positive")
    ed = eta * delta
    v = np.exp(ed * np.asarray(x, dtype=float) - ed * ed / 2.0)
    return _scalar_or_array(v, x)


def gaussian_p(x):
    """Left-tail p-value ``Phi(x)`` (the alternative mean is negative)."""
    return _scalar_or_array(ndtr(np.asarray(x, dtype=float)), x)


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError("q must lie in (0, 1)")
    return q


def bh_rejections(pvalues, q: float) -> int:
    """Number of hypotheses rejected by the Benjamini-Hochberg step-up procedure.

    The largest ``k`` with ``p_(k) <= k q / K``; 0 when there is none.
    """
    q = _check_q(q)
    p = np.sort(check_pvalues(pvalues))
    K = p.size
    if K == 0:
        return 0
    ok = np.nonzero(p <= q * np.arange(1, K + 1) / K)[0]
    return int(ok[-1] + 1) if ok.size else 0


def by_rejections(pvalues, q: float) -> int:
    """Benjamini-Yekutieli: Benjamini-Hochberg at ``q / H_K``, valid under arbitrary dependence."""
    q = _check_q(q)
    K = np.size(pvalues)
    if K == 0:
        return 0
    return bh_rejections(pvalues, q / harmonic_number(K))


_CONFIG_TYPES = {"K": int, "delta": float, "eta": float, "seed": int, "fraction_false": float}


def read_scenario_config(text: str) -> dict:
    """Parse ``key=value`` lines (``#`` comments allowed) into scenario keyword arguments."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _CONFIG_TYPES:
            raise DomainError(f"config line {lineno}: expected one of {sorted(_CONFIG_TYPES)} as key=value")
        try:
            out[key] = _CONFIG_TYPES[key](value.strip())
        except ValueError:
            raise DomainError(f"config line {lineno}: bad value for {key}") from None
    return out
