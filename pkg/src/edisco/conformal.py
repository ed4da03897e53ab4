"""Permutation-based base e-values and p-values for two-group expression data.

Each gene's nonconformity score is ``|t|**d`` for the Welch two-sample
t-statistic ``t``.  The conformal e-value compares the observed score with
``B`` scores for randomly permuted labels of the *same* gene, so it needs
neither independence across genes nor gene exchangeability.  The pooled
variants (pooled e-value, conformal and Storey-Tibshirani p-values) compare
against the null scores of all genes and are only justified under gene
exchangeability.  They are provided for comparison.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from ._parallel import ordered_map
from .errors import DomainError, ParseError, ScoreError

__all__ = [
    "ExpressionDataset",
    "PermutationConfig",
    "ScorePanel",
    "welch_t",
    "nonconformity_score",
    "score_panel",
    "conformal_e_values",
    "simplified_e_values",
    "pooled_conformal_e_values",
    "conformal_p_values",
    "st_p_values",
    "load_expression_dataset",
    "read_group_labels",
    "gene_table",
    "write_gene_table",
]

RAW_THRESHOLD = 20.0
# infinite or overflowing scores are clamped here
MAX_SCORE = sys.float_info.max


@dataclass
class ExpressionDataset:
    """Genes x samples matrix of log2 expression values with two-group labels.

    Parameters
    ----------
    matrix : array of shape (G, N)
        log2 of the raw (positive) expression values.
    gene_ids : list of str
    groups : array of shape (N,)
        Group tag 1 or 2 for each sample column.
    dropped : int
        Number of raw rows removed by filtering.
    """

    matrix: np.ndarray
    gene_ids: list
    groups: np.ndarray
    dropped: int = 0

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2:
            raise DomainError("expression matrix must be 2-dimensional")
        self.groups = np.asarray(self.groups, dtype=int).reshape(-1)
        G, N = self.matrix.shape
        if self.groups.size != N:
            raise DomainError(f"{self.groups.size} group labels for {N} samples")
        if not np.isin(self.groups, (1, 2)).all():
            raise DomainError("group labels must be 1 or 2")
        if len(self.gene_ids) != G:
            raise DomainError("one gene id per row is required")
        if self.n1 < 2 or self.n2 < 2:
            raise DomainError("each group needs at least 2 samples")
        if not np.isfinite(self.matrix).all():
            raise DomainError("expression values must be finite")

    @classmethod
    def from_raw(cls, raw, gene_ids, groups, threshold: float = RAW_THRESHOLD):
        """Drop rows with any entry above ``threshold`` and take log2 of the rest."""
        raw = np.asarray(raw, dtype=float)
        if raw.ndim != 2:
            raise DomainError("raw matrix must be 2-dimensional")
        if not (raw > 0).all():
            r, c = np.argwhere(~(raw > 0))[0]
            raise ParseError("expression values must be positive", row=int(r) + 1, column=int(c) + 1)
        keep = (raw <= threshold).all(axis=1)
        ids = [g for g, k in zip(gene_ids, keep) if k]
        return cls(np.log2(raw[keep]), ids, groups, dropped=int((~keep).sum()))

    @property
    def G(self) -> int:
        return self.matrix.shape[0]

    @property
    def N(self) -> int:
        return self.matrix.shape[1]

    @property
    def n1(self) -> int:
        return int((self.groups == 1).sum())

    @property
    def n2(self) -> int:
        return int((self.groups == 2).sum())


@dataclass(frozen=True)
class PermutationConfig:
    """Number of permutations ``B``, master ``seed`` and score exponent ``d``."""

    B: int = 10000
    seed: int = 1
    d: float = 10.0

    def __post_init__(self):
        if int(self.B) != self.B or self.B < 1:
            raise DomainError("B must be a positive integer")
        if not self.d > 0:
            raise DomainError("d must be positive")


def welch_t(group1, group2) -> float:
    """``(mean2 - mean1) / sqrt(s1^2/n1 + s2^2/n2)`` with unpooled unbiased variances.

    Raises
    ------
    DomainError
        If a group has fewer than 2 elements.
    ScoreError
        If both sample variances are zero.
    """
    a = np.asarray(group1, dtype=float)
    b = np.asarray(group2, dtype=float)
    if a.size < 2 or b.size < 2:
        raise DomainError("each group needs at least 2 values")
    va, vb = a.var(ddof=1), b.var(ddof=1)
    if va == 0 and vb == 0:
        raise ScoreError("t-statistic undefined: both groups have zero variance")
    return float((b.mean() - a.mean()) / math.sqrt(va / a.size + vb / b.size))


def nonconformity_score(t, d: float):
    """``|t| ** d``."""
    if not d > 0:
        raise DomainError("d must be positive")
    with np.errstate(over="ignore"):
        v = np.abs(np.asarray(t, dtype=float)) ** d
    return float(v) if np.ndim(t) == 0 else v


def _welch_rows(x: np.ndarray, in1: np.ndarray):
    """Welch t for one gene under each row of a (B, N) group-1 mask.

    Degenerate rows (both variances zero) give 0 when the means agree and
    signed infinity otherwise; the second return value counts them.
    """
    n1 = in1.sum(axis=1)
    n2 = in1.shape[1] - n1
    xb = np.broadcast_to(x, in1.shape)
    s1 = np.where(in1, xb, 0.0).sum(axis=1)
    s2 = x.sum() - s1
    m1, m2 = s1 / n1, s2 / n2
    dev = xb - np.where(in1, m1[:, None], m2[:, None])
    sq = dev * dev
    ss1 = np.where(in1, sq, 0.0).sum(axis=1)
    ss2 = sq.sum(axis=1) - ss1
    se2 = ss1 / ((n1 - 1) * n1) + ss2 / ((n2 - 1) * n2)
    diff = m2 - m1
    degenerate = se2 == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = diff / np.sqrt(se2)
    t[degenerate & (diff == 0)] = 0.0
    return t, int(degenerate.sum())


@dataclass
class ScorePanel:
    """Observed and permutation-null statistics for every gene.

    ``t`` has shape (G,) and ``null_abs_t`` shape (G, B); scores are
    ``|t|**d`` clamped to the largest finite double.  ``degenerate`` counts
    t-statistics (observed or null) whose variances were both zero.
    """

    t: np.ndarray
    null_abs_t: np.ndarray
    d: float
    degenerate: int = 0
    _scores: np.ndarray | None = field(default=None, repr=False)
    _null_scores: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).reshape(-1)
        self.null_abs_t = np.abs(np.asarray(self.null_abs_t, dtype=float))
        if self.null_abs_t.ndim == 1:
            self.null_abs_t = self.null_abs_t[None, :]
        if self.null_abs_t.shape[0] != self.t.size:
            raise DomainError("one row of null statistics per gene is required")

    @property
    def B(self) -> int:
        return self.null_abs_t.shape[1]

    @property
    def G(self) -> int:
        return self.null_abs_t.shape[0]

    @property
    def scores(self) -> np.ndarray:
        if self._scores is None:
            self._scores = _clamped_score(np.abs(self.t), self.d)
        return self._scores

    @property
    def null_scores(self) -> np.ndarray:
        if self._null_scores is None:
            self._null_scores = _clamped_score(self.null_abs_t, self.d)
        return self._null_scores


def _clamped_score(abs_t, d):
    with np.errstate(over="ignore"):
        s = abs_t**d
    return np.minimum(s, MAX_SCORE)


def _gene_stats(data: ExpressionDataset, cfg: PermutationConfig, k: int):
    x = data.matrix[k]
    in1 = data.groups == 1
    t_obs, deg_obs = _welch_rows(x, in1[None, :])
    perms = rng.random_permutations(rng.stream(cfg.seed, k), cfg.B, data.N)
    t_null, deg_null = _welch_rows(x, in1[perms])
    return t_obs[0], np.abs(t_null), deg_obs + deg_null


def score_panel(data: ExpressionDataset, cfg: PermutationConfig, workers: int | None = None) -> ScorePanel:
    """Compute observed and permuted t-statistics for all genes.

    Gene ``k`` draws its ``B`` label permutations from its own substream of
    ``cfg.seed``, so results do not depend on ``workers`` or on order.
    """
    res = ordered_map(lambda k: _gene_stats(data, cfg, k), range(data.G), workers)
    t = np.array([r[0] for r in res])
    if res:
        null = np.vstack([r[1] for r in res])
    else:
        null = np.empty((0, cfg.B))
    return ScorePanel(t=t, null_abs_t=null, d=cfg.d, degenerate=sum(r[2] for r in res))


def _panel(source, cfg) -> ScorePanel:
    if isinstance(source, ScorePanel):
        if cfg is not None and (source.B != cfg.B or source.d != cfg.d):
            raise DomainError("score panel does not match the permutation config")
        return source
    if cfg is None:
        raise DomainError("a PermutationConfig is required to score a dataset")
    return score_panel(source, cfg)


def _ratio(num, den, zero_zero=1.0):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    out[(num == 0) & (den == 0)] = zero_zero
    return out


def conformal_e_values(source, cfg: PermutationConfig | None = None) -> np.ndarray:
    """``e_k = T_k / ((sum_b T_k^b + T_k) / (B + 1))`` with ``0/0 := 1``.

    Valid without independence or exchangeability across genes; every
    value lies in ``[0, B + 1]``.
    """
    p = _panel(source, cfg)
    T, null = p.scores, p.null_scores
    # rescale per gene so sums of clamped scores cannot overflow
    scale = np.maximum(T, null.max(axis=1, initial=0.0))
    scale[scale == 0] = 1.0
    Ts = T / scale
    den = (null / scale[:, None]).sum(axis=1) + Ts
    return np.clip(_ratio((p.B + 1) * Ts, den), 0.0, p.B + 1)


def simplified_e_values(source, cfg: PermutationConfig | None = None) -> np.ndarray:
    """``T_k / mean_b T_k^b``; ``inf`` when the null scores are all 0 and ``T_k > 0``.

    Only approximately valid for large ``B``: these are *not* guaranteed
    e-values and are provided to check whether ``B`` is large enough.
    """
    p = _panel(source, cfg)
    T, null = p.scores, p.null_scores
    scale = np.maximum(T, null.max(axis=1, initial=0.0))
    scale[scale == 0] = 1.0
    return _ratio(p.B * (T / scale), (null / scale[:, None]).sum(axis=1))


def pooled_conformal_e_values(source, cfg: PermutationConfig | None = None) -> np.ndarray:
    """Conformal e-values against the null scores of *all* genes.

    ``e_k = T_k / ((sum_j sum_b T_j^b + T_k) / (G B + 1))``.  An e-variable
    only if genes are exchangeable under the null.
    """
    p = _panel(source, cfg)
    T, null = p.scores, p.null_scores
    scale = max(float(T.max(initial=0.0)), float(null.max(initial=0.0))) or 1.0
    pooled = (null / scale).sum()
    Ts = T / scale
    return _ratio((p.G * p.B + 1) * Ts, pooled + Ts)


def _pooled_counts(p: ScorePanel) -> np.ndarray:
    # number of pooled null |t| values >= |t_k|
    pooled = np.sort(p.null_abs_t, axis=None)
    return pooled.size - np.searchsorted(pooled, np.abs(p.t), side="left")


def conformal_p_values(source, cfg: PermutationConfig | None = None) -> np.ndarray:
    """``(#{pooled null |t| >= |t_k|} + 1) / (G B + 1)``; valid under gene exchangeability, never 0."""
    p = _panel(source, cfg)
    return (_pooled_counts(p) + 1.0) / (p.G * p.B + 1.0)


def st_p_values(source, cfg: PermutationConfig | None = None) -> np.ndarray:
    """``#{pooled null |t| >= |t_k|} / (G B)``.

    Can be exactly 0, so these are not valid p-values; returned for
    comparison with the conformal p-values.
    """
    p = _panel(source, cfg)
    return _pooled_counts(p) / float(p.G * p.B)


def _sniff_delimiter(line: str) -> str:
    return "\t" if "\t" in line else ","


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_expression_table(path):
    """Read a delimited expression file into ``(gene_ids, raw matrix, sample names)``.

    Comma or tab delimited (auto-detected); the first column holds gene
    ids; an optional first row of sample names is recognised by a
    non-numeric entry.
    """
    path = Path(path)
    # OSError propagates to the caller: it is an I/O problem, not a parse problem
    text = path.read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty expression file")
    delim = _sniff_delimiter(lines[0])
    rows = list(csv.reader(lines, delimiter=delim))
    header = None
    first_data_line = 1
    if not all(_is_number(c) for c in rows[0][1:]):
        header, rows = rows[0][1:], rows[1:]
        first_data_line = 2
    if not rows:
        raise ParseError(f"{path}: no data rows")
    width = len(rows[0])
    ids, raw = [], np.empty((len(rows), width - 1))
    for i, row in enumerate(rows):
        lineno = i + first_data_line
        if len(row) != width:
            raise ParseError(f"{path}: expected {width} fields, got {len(row)}", row=lineno)
        ids.append(row[0].strip())
        for c, cell in enumerate(row[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: not a number: {cell!r}", row=lineno, column=c + 2) from None
            if not v > 0 or not math.isfinite(v):
                raise ParseError(f"{path}: expression value {cell!r} is not positive and finite", row=lineno, column=c + 2)
            raw[i, c] = v
    return ids, raw, header


def load_expression_dataset(path, group_labels, threshold: float = RAW_THRESHOLD) -> ExpressionDataset:
    """Load, filter (rows with any raw value above ``threshold``) and log2-transform."""
    ids, raw, _ = read_expression_table(path)
    return ExpressionDataset.from_raw(raw, ids, _parse_labels(group_labels), threshold)


def _parse_labels(labels) -> np.ndarray:
    if isinstance(labels, str):
        labels = labels.replace(",", " ").split()
    try:
        return np.array([int(str(v).strip()) for v in labels])
    except ValueError:
        raise DomainError("group labels must be 1 or 2") from None


def read_group_labels(path) -> np.ndarray:
    """Read a one-line label file of N entries from {1, 2}, comma or whitespace separated."""
    return _parse_labels(Path(path).read_text())


def gene_table(data: ExpressionDataset, cfg: PermutationConfig, workers: int | None = None) -> dict:
    """All per-gene outputs as columns, computing the score panel once."""
    p = score_panel(data, cfg, workers)
    return {
        "gene_id": list(data.gene_ids),
        "t": p.t,
        "T": p.scores,
        "e_conformal": conformal_e_values(p),
        "e_simplified": simplified_e_values(p),
        "p_conformal": conformal_p_values(p),
        "p_st": st_p_values(p),
    }


def write_gene_table(path_or_file, table: dict) -> None:
    cols = list(table)
    close = False
    if isinstance(path_or_file, (str, Path)):
        fh = open(path_or_file, "w", newline="")
        close = True
    else:
        fh = path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for i in range(len(table["gene_id"])):
            w.writerow(
                [table["gene_id"][i]] + [format(float(table[c][i]), ".17g") for c in cols[1:]]
            )
    finally:
        if close:
            fh.close()
