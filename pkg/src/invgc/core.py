"""Inverse and forward graph convolution updates on embedding sets.

The dual update corrects a gallery G against two reference sets:

    G' = 1/2 * [ norm(G - r_g * S_g @ refG) + norm(G - r_q * S_q @ refQ) ]

where S_g and S_q are adjacencies built independently over G x refG and
G x refQ with the configured variant, and norm() divides each row by its
Euclidean norm.  G is row-normalized on entry so the cosine adjacency
and the subtraction see consistent unit-scale vectors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .embio import EmbeddingSet
from .simgraph import (
    Adjacency,
    SimMatrix,
    _mm,
    adjacency_binary,
    adjacency_full,
    adjacency_local,
    cosine_similarity_matrix,
    unit_rows,
)

VARIANTS = ("full", "local", "avgpool")


@dataclass
class InvGCConfig:
    """Variant selector plus step sizes and threshold percentages."""

    variant: str = "full"
    r_g: float = 0.0
    r_q: float = 0.0
    k_percent: float = 1.0      # used by the local variant
    p_percent: float = 100.0    # used by the avgpool variant

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        for name, r in (("r_g", self.r_g), ("r_q", self.r_q)):
            if not (math.isfinite(r) and r >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {r}")
        for name, pct in (("k_percent", self.k_percent), ("p_percent", self.p_percent)):
            if not (0.0 < pct <= 100.0):
                raise ValueError(f"{name} must lie in (0, 100], got {pct}")


def build_adjacency(sim: SimMatrix, cfg: InvGCConfig) -> Adjacency:
    """Map a similarity matrix to the configured adjacency variant."""
    if cfg.variant == "full":
        return adjacency_full(sim, center=True)
    if cfg.variant == "local":
        return adjacency_local(sim, cfg.k_percent)
    return adjacency_binary(sim, cfg.p_percent)


def row_normalize(M: np.ndarray) -> np.ndarray:
    """Divide each row by its Euclidean norm.

    Rows with norm below 1e-12 pass through as all zeros; their count is
    reported via RuntimeWarning rather than aborting the batch.
    """
    M = np.asarray(M, dtype=np.float64)
    norms = np.linalg.norm(M, axis=1)
    degenerate = norms < 1e-12
    n_bad = int(np.count_nonzero(degenerate))
    if n_bad:
        warnings.warn(
            f"{n_bad} zero-norm rows left unnormalized", RuntimeWarning, stacklevel=2
        )
    out = M / np.where(degenerate, 1.0, norms)[:, None]
    out[degenerate] = 0.0
    return out


def _self_excluded(values: np.ndarray, x_ids: list, r_ids: list) -> np.ndarray:
    # The self pair contributes only when the operand set is the reference
    # set itself; identity is detected by matching id lists.
    if list(x_ids) == list(r_ids):
        values = values.copy()
        np.fill_diagonal(values, 0.0)
    return values


def _check_conv_args(X: EmbeddingSet, S: Adjacency, R: EmbeddingSet) -> None:
    if X.d != R.d:
        raise ValueError(f"dimension mismatch: {X.d} vs {R.d}")
    if S.values.shape != (X.n, R.n):
        raise ValueError(
            f"adjacency shape {S.values.shape} does not match {X.n} x {R.n}"
        )


def inverse_convolve_single(X: EmbeddingSet, S: Adjacency, R: EmbeddingSet, r: float) -> EmbeddingSet:
    """X'_i = X_i - r * sum_j S_ij R_j, without normalization."""
    _check_conv_args(X, S, R)
    vals = _self_excluded(S.values, X.ids, R.ids)
    return EmbeddingSet(list(X.ids), X.data - r * _mm(vals, R.data))


def forward_convolve(X: EmbeddingSet, S: Adjacency, R: EmbeddingSet) -> EmbeddingSet:
    """X'_i = X_i + sum_j S_ij R_j, the additive aggregation baseline."""
    _check_conv_args(X, S, R)
    vals = _self_excluded(S.values, X.ids, R.ids)
    return EmbeddingSet(list(X.ids), X.data + _mm(vals, R.data))


def inverse_convolve_dual(
    G: EmbeddingSet, refG: EmbeddingSet, refQ: EmbeddingSet, cfg: InvGCConfig
) -> EmbeddingSet:
    """Correct G against both reference sets and average the two halves."""
    for ref in (refG, refQ):
        if G.d != ref.d:
            raise ValueError(f"dimension mismatch: {G.d} vs {ref.d}")
    Gn = unit_rows(G.data, G.ids)
    Gset = EmbeddingSet(list(G.ids), Gn)
    halves = []
    for ref, r in ((refG, cfg.r_g), (refQ, cfg.r_q)):
        S = build_adjacency(cosine_similarity_matrix(Gset, ref), cfg)
        vals = _self_excluded(S.values, G.ids, ref.ids)
        halves.append(row_normalize(Gn - r * _mm(vals, ref.data)))
    return EmbeddingSet(list(G.ids), 0.5 * (halves[0] + halves[1]))


def score_queries(Q: EmbeddingSet, Gp: EmbeddingSet) -> SimMatrix:
    """Similarity of every query against every corrected gallery row."""
    return cosine_similarity_matrix(Q, Gp)
