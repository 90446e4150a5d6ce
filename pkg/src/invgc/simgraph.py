"""Cosine similarity matrices and the adjacency variants derived from them.

Three adjacency constructions feed the convolution ops:

full    the raw cosine matrix, optionally centered by subtracting the
        scalar mean of all entries
local   per row, keep entries >= the m-th largest value verbatim and
        zero the rest, m = max(1, ceil(k_percent/100 * row length))
binary  same row threshold, but retained entries become 1 and the rest 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .embio import EmbeddingSet


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Accumulation must stay in index order so results are bit-identical
    # under any BLAS thread setting; einsum contracts on a single thread.
    return np.einsum("ij,jk->ik", a, b)


@dataclass
class SimMatrix:
    row_ids: list
    col_ids: list
    values: np.ndarray


@dataclass
class Adjacency:
    values: np.ndarray
    variant: str            # "full" | "local" | "binary"
    param: float | None = None  # k_percent (local) or p_percent (binary)
    centered: bool = False


def unit_rows(X: np.ndarray, ids: list | None = None) -> np.ndarray:
    """Divide each row by its norm; a zero-norm row is an error here."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    bad = np.nonzero(norms < 1e-12)[0]
    if bad.size:
        which = ids[bad[0]] if ids is not None else str(bad[0])
        raise ValueError(f"zero-norm embedding row, id {which!r}")
    return X / norms[:, None]


def cosine_similarity_matrix(rows: EmbeddingSet, cols: EmbeddingSet) -> SimMatrix:
    """Pairwise cosines, clamped to [-1, 1] to absorb rounding drift."""
    if rows.d != cols.d:
        raise ValueError(f"dimension mismatch: {rows.d} vs {cols.d}")
    vals = _mm(unit_rows(rows.data, rows.ids), unit_rows(cols.data, cols.ids).T)
    np.clip(vals, -1.0, 1.0, out=vals)
    return SimMatrix(list(rows.ids), list(cols.ids), vals)


def _check_percent(name: str, pct: float) -> None:
    if not (0.0 < pct <= 100.0):
        raise ValueError(f"{name} must lie in (0, 100], got {pct}")


def row_percentile_threshold(row, k_percent: float) -> float:
    """The m-th largest value of the row, m = max(1, ceil(k%/100 * len)).

    Callers retain ties by comparing with >=, so equal values at the
    threshold all survive.
    """
    row = np.asarray(row, dtype=np.float64).ravel()
    if row.size == 0:
        raise ValueError("empty row")
    _check_percent("k_percent", k_percent)
    m = max(1, math.ceil(k_percent / 100.0 * row.size))
    return float(np.partition(row, row.size - m)[row.size - m])


def _row_thresholds(values: np.ndarray, percent: float) -> np.ndarray:
    n_cols = values.shape[1]
    m = max(1, math.ceil(percent / 100.0 * n_cols))
    return np.partition(values, n_cols - m, axis=1)[:, n_cols - m]


def adjacency_full(sim: SimMatrix, center: bool) -> Adjacency:
    vals = sim.values.copy()
    if center:
        vals -= vals.mean()
    return Adjacency(vals, "full", None, bool(center))


def adjacency_local(sim: SimMatrix, k_percent: float) -> Adjacency:
    _check_percent("k_percent", k_percent)
    thr = _row_thresholds(sim.values, k_percent)
    vals = np.where(sim.values >= thr[:, None], sim.values, 0.0)
    return Adjacency(vals, "local", float(k_percent), False)


def adjacency_binary(sim: SimMatrix, p_percent: float) -> Adjacency:
    _check_percent("p_percent", p_percent)
    thr = _row_thresholds(sim.values, p_percent)
    vals = (sim.values >= thr[:, None]).astype(np.float64)
    return Adjacency(vals, "binary", float(p_percent), False)
