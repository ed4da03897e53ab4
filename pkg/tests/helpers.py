"""Random instance generators and matrix checks shared by the test modules."""

import numpy as np

from edisco.discovery import DiscoveryMatrix


def random_evalues(rng, K, ties=True):
    """Ascending e-values with a mix of scales, zeros and (optionally) ties."""
    style = rng.integers(4)
    if style == 0:
        e = rng.exponential(size=K)
    elif style == 1:
        e = np.exp(rng.normal(0, 2, size=K))
    elif style == 2:
        e = rng.uniform(0, 5, size=K)
    else:
        e = rng.choice([0.0, 0.5, 1.0, 2.0, 7.0], size=K)
    if ties and K > 1 and rng.random() < 0.3:
        e[rng.integers(K)] = e[rng.integers(K)]
    return np.sort(e)


def random_rejection(rng, K):
    size = int(rng.integers(1, K + 1))
    return np.sort(rng.choice(K, size=size, replace=False))


def check_matrix_monotone(m: DiscoveryMatrix, rtol=1e-12):
    """Rows non-increasing in j, columns non-decreasing in r, diagonals non-increasing."""
    d = m.to_dense(fill=np.nan)
    slack = rtol * np.nan_to_num(np.abs(d), nan=0.0, posinf=0.0)
    K = m.K
    for r in range(K):
        row = d[r, : r + 1]
        assert (row[1:] <= row[:-1] + slack[r, 1 : r + 1]).all(), f"row {r + 1}"
    for r in range(1, K):
        assert (d[r, :r] >= d[r - 1, :r] - slack[r - 1, :r]).all(), f"column step at row {r + 1}"
        assert (d[r, 1 : r + 1] <= d[r - 1, :r] + slack[r - 1, :r]).all(), f"diagonal step at row {r + 1}"


def close(a, b, rtol):
    a, b = np.asarray(a, float), np.asarray(b, float)
    if a.shape != b.shape:
        return False
    same_inf = np.isinf(a) & np.isinf(b) & (np.sign(a) == np.sign(b))
    with np.errstate(invalid="ignore"):
        near = np.abs(a - b) <= rtol * np.maximum(np.abs(a), np.abs(b)) + 1e-300
    return bool((same_inf | near).all())
