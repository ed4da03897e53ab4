from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from ..errors import DomainError
from ..evalues import MergeKind, check_evalues


class SortedEValues:
    """E-values in ascending order together with the permutation that sorted them.

    Sorting is stable on ``(value, original index)``.  ``order[pos]`` is the
    original (0-based) index of the hypothesis at sorted position ``pos``.

    Parameters
    ----------
    evalues : array-like
        Base e-values in any order.
    """

    __slots__ = ("values", "order")

    def __init__(self, evalues):
        x = check_evalues(evalues)
        if x.size == 0:
            raise DomainError("at least one e-value is required")
        order = np.argsort(x, kind="stable")
        values = x[order]
        values.setflags(write=False)
        order.setflags(write=False)
        self.values = values
        self.order = order

    @classmethod
    def coerce(cls, evalues) -> "SortedEValues":
        """Wrap ``evalues``, which must already be ascending unless it is a SortedEValues.

        Used by routines whose rejection sets are expressed as sorted
        positions: silently re-sorting would change their meaning.
        """
        if isinstance(evalues, cls):
            return evalues
        x = check_evalues(evalues)
        if x.size > 1 and not (np.diff(x) >= 0).all():
            raise DomainError(
                "e-values must be ascending; wrap unsorted input in SortedEValues"
            )
        return cls(x)

    @property
    def K(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def positions_of(self, original_indices: Iterable[int]) -> np.ndarray:
        """Sorted positions of the hypotheses with the given original indices."""
        inverse = np.empty_like(self.order)
        inverse[self.order] = np.arange(self.K)
        idx = np.asarray(list(original_indices), dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= self.K):
            raise DomainError("hypothesis index out of range")
        return inverse[idx]

    def original_indices(self, positions) -> np.ndarray:
        return self.order[np.asarray(positions, dtype=np.intp)]

    def __repr__(self) -> str:
        return f"SortedEValues(K={self.K})"


def as_rejection_set(rejected, K: int) -> np.ndarray:
    """Validate a rejection set and return its positions as a sorted unique array."""
    idx = np.unique(np.asarray(list(rejected), dtype=np.intp))
    if idx.size == 0:
        raise DomainError("the rejection set must be nonempty")
    if idx[0] < 0 or idx[-1] >= K:
        raise DomainError(f"rejection set indices must lie in [0, {K - 1}]")
    return idx


class DiscoveryMatrix:
    """Lower-triangular ``K x K`` matrix of discovery values.

    Entry ``(r, j)`` (both 1-based, ``1 <= j <= r <= K``) is the bound for
    "at least ``j`` true discoveries among the ``r`` most significant
    hypotheses".  Storage is packed row-major: row ``r`` occupies
    ``data[r(r-1)/2 : r(r+1)/2]``.

    ``merge`` records the e-merging function used, or is ``None`` for a
    p-matrix or a transformed matrix.
    """

    __slots__ = ("K", "data", "merge")

    def __init__(self, K: int, data, merge: MergeKind | None = None):
        data = np.asarray(data, dtype=float)
        if data.shape != (K * (K + 1) // 2,):
            raise DomainError(f"packed data for K={K} must have {K * (K + 1) // 2} entries")
        self.K = int(K)
        self.data = data
        self.merge = merge

    @staticmethod
    def offset(r: int) -> int:
        return r * (r - 1) // 2

    @classmethod
    def empty(cls, K: int, merge: MergeKind | None = None) -> "DiscoveryMatrix":
        return cls(K, np.empty(K * (K + 1) // 2), merge)

    @classmethod
    def from_rows(cls, rows, merge: MergeKind | None = None) -> "DiscoveryMatrix":
        rows = [np.asarray(row, dtype=float) for row in rows]
        for r, row in enumerate(rows, start=1):
            if row.shape != (r,):
                raise DomainError(f"row {r} must have {r} entries, got {row.size}")
        K = len(rows)
        data = np.concatenate(rows) if rows else np.empty(0)
        return cls(K, data, merge)

    @classmethod
    def from_dense(cls, dense, merge: MergeKind | None = None) -> "DiscoveryMatrix":
        a = np.asarray(dense, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("dense matrix must be square")
        return cls.from_rows([a[r, : r + 1] for r in range(a.shape[0])], merge)

    def row(self, r: int) -> np.ndarray:
        """Entries ``(r, 1), ..., (r, r)`` as a view."""
        if not 1 <= r <= self.K:
            raise DomainError(f"row {r} out of range 1..{self.K}")
        o = self.offset(r)
        return self.data[o : o + r]

    def rows(self) -> Iterator[np.ndarray]:
        for r in range(1, self.K + 1):
            yield self.row(r)

    def __getitem__(self, rj) -> float:
        r, j = rj
        if not 1 <= j <= r <= self.K:
            raise DomainError(f"entry ({r}, {j}) is outside the lower triangle")
        return float(self.data[self.offset(r) + j - 1])

    def to_dense(self, fill: float = np.nan) -> np.ndarray:
        out = np.full((self.K, self.K), fill)
        rr, jj = np.tril_indices(self.K)
        out[rr, jj] = self.data
        return out

    def map(self, func, merge: MergeKind | None = None) -> "DiscoveryMatrix":
        """Apply an elementwise transform (e.g. ``e_to_p``) and return a new matrix."""
        return DiscoveryMatrix(self.K, np.asarray(func(self.data), dtype=float), merge)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.K, self.K)

    def __len__(self) -> int:
        return self.K

    def __repr__(self) -> str:
        tag = self.merge.value if self.merge is not None else "none"
        return f"DiscoveryMatrix(K={self.K}, merge={tag})"
