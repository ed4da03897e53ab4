"""Colour-coded images and CSV export of discovery matrices.

Images are binary PPM (P6): one pixel per cell, row ``r`` top to bottom,
column ``j`` left to right, cells above the diagonal in the background
colour.  Convert with e.g. ``magick out.ppm out.png`` if a PNG is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discovery import DiscoveryMatrix
from .errors import DomainError, ParseError

DARK_GREEN = (0, 100, 0)
GREEN = (0, 200, 0)
YELLOW = (255, 255, 0)
RED = (255, 0, 0)
DARK_RED = (139, 0, 0)
BLACK = (0, 0, 0)
WHITE = (255, 255, 255)


@dataclass(frozen=True)
class ColorMap:
    """Step-function colouring: ``palette[i]`` covers ``[edges[i-1], edges[i])``.

    With ``descending=True`` the scale runs the other way (small values are
    strong evidence, as for p-values) and bins are ``(edges[i-1], edges[i]]``.
    Either way a value on an edge goes to the stronger-evidence bin.
    """

    scale: str
    edges: tuple
    palette: tuple
    background: tuple = WHITE
    descending: bool = False

    def __post_init__(self):
        if len(self.palette) != len(self.edges) + 1:
            raise DomainError("a colour map needs one more colour than edges")

    def bins(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        side = "left" if self.descending else "right"
        return np.searchsorted(np.asarray(self.edges), v, side=side)

    def colors(self, values) -> np.ndarray:
        """``(..., 3)`` uint8 array; NaN cells get the background colour."""
        v = np.asarray(values, dtype=float)
        pal = np.array(self.palette + (self.background,), dtype=np.uint8)
        idx = self.bins(np.nan_to_num(v, nan=0.0))
        idx = np.where(np.isnan(v), len(self.palette), idx)
        return pal[idx]

    def color(self, value) -> tuple:
        return tuple(int(c) for c in self.colors(value))


# Jeffreys grades at 10^0, 10^0.5, 10^1, 10^1.5, 10^2
JEFFREYS = ColorMap(
    "jeffreys",
    (1.0, math.sqrt(10.0), 10.0, 10.0**1.5, 100.0),
    (DARK_GREEN, GREEN, YELLOW, RED, DARK_RED, BLACK),
)
# Fisher grades: highly significant (<= 1%), significant (<= 5%), not significant
FISHER = ColorMap("fisher", (0.01, 0.05), (RED, YELLOW, GREEN), descending=True)

_SCALES = {"jeffreys": JEFFREYS, "fisher": FISHER}


def color_map(scale) -> ColorMap:
    if isinstance(scale, ColorMap):
        return scale
    try:
        return _SCALES[str(scale).lower()]
    except KeyError:
        raise DomainError(f"unknown colour scale {scale!r}") from None


def jeffreys_color(e) -> tuple:
    """RGB for an e-value on Jeffreys's scale."""
    if not float(e) >= 0:
        raise DomainError("e-value must be nonnegative")
    return JEFFREYS.color(e)


def fisher_color(p) -> tuple:
    """RGB for a p-value on Fisher's 1% / 5% scale."""
    if not 0.0 <= float(p) <= 1.0:
        raise DomainError("p-value must lie in [0, 1]")
    return FISHER.color(p)


def _as_dense(matrix) -> np.ndarray:
    if isinstance(matrix, DiscoveryMatrix):
        return matrix.to_dense()
    if isinstance(matrix, np.ndarray) and matrix.ndim == 2:
        return matrix.astype(float)
    rows = [np.asarray(r, dtype=float).reshape(-1) for r in matrix]
    width = max((r.size for r in rows), default=0)
    out = np.full((len(rows), width), np.nan)
    for i, r in enumerate(rows):
        out[i, : r.size] = r
    return out


def render_matrix(matrix, cmap="jeffreys", crop=None) -> bytes:
    """Binary PPM of ``matrix`` coloured by ``cmap``.

    ``matrix`` is a DiscoveryMatrix, a dense 2-d array (NaN = undefined
    cell) or a list of rows.  ``crop=(rows, cols)`` keeps the top-left
    corner.
    """
    cmap = color_map(cmap)
    if isinstance(matrix, DiscoveryMatrix) and crop is not None:
        rows, cols = _check_crop(crop, matrix.K, matrix.K)
        dense = np.full((rows, cols), np.nan)
        for r in range(1, rows + 1):
            row = matrix.row(r)[:cols]
            dense[r - 1, : row.size] = row
    else:
        dense = _as_dense(matrix)
        if crop is not None:
            rows, cols = _check_crop(crop, *dense.shape)
            dense = dense[:rows, :cols]
    h, w = dense.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + cmap.colors(dense).astype(np.uint8).tobytes()


def _check_crop(crop, n_rows, n_cols):
    rows, cols = (int(c) for c in crop)
    if not (1 <= rows <= n_rows and 1 <= cols <= n_cols):
        raise DomainError(f"crop {rows}x{cols} outside a {n_rows}x{n_cols} matrix")
    return rows, cols


def write_ppm(path, matrix, cmap="jeffreys", crop=None) -> None:
    with open(path, "wb") as fh:
        fh.write(render_matrix(matrix, cmap, crop))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_csv(matrix) -> str:
    """Triangular CSV: row ``r`` has ``r`` fields, 17 significant digits, ``inf`` for infinity."""
    if not isinstance(matrix, DiscoveryMatrix):
        matrix = DiscoveryMatrix.from_rows(matrix)
    return "".join(",".join(_fmt(x) for x in row) + "\n" for row in matrix.rows())


def read_matrix_csv(text: str, merge=None) -> DiscoveryMatrix:
    """Inverse of :func:`export_csv`; trailing empty fields are ignored."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.strip().split(",")
        while fields and fields[-1].strip() == "":
            fields.pop()
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise ParseError("matrix entries must be numbers", row=lineno) from None
    try:
        return DiscoveryMatrix.from_rows(rows, merge)
    except DomainError as exc:
        raise ParseError(f"not a lower-triangular matrix: {exc}") from None
