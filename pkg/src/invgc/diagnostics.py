"""Degeneration diagnostics: mean similarity, MeanSim@k, NN histograms.

The degeneration score of a set is the mean cosine similarity between
each point and its nearest neighbor, i.e. MeanSim@1.  Intra reports look
within one set (self pairs excluded); cross reports anchor on gallery
rows and look at queries, excluding each gallery item's matched queries
so the score reflects unrelated neighbors only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embio import EmbeddingSet
from .simgraph import cosine_similarity_matrix


@dataclass
class DegenerationReport:
    mean_sim: float
    mean_sim_at: dict
    histogram: list            # (bin_lower, bin_upper, count) triples
    excluded_pairs: int
    std_sim: float
    min_sim: float


def _nn_histogram(nn_values: np.ndarray, bins: int) -> list:
    # Equal-width bins over [-1, 1]; a value on a bin boundary lands in
    # the higher bin, except the global maximum 1.0 which stays in the
    # top bin so the partition is exact.
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    width = 2.0 / bins
    idx = np.floor((nn_values + 1.0) / width).astype(int)
    idx = np.minimum(idx, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return [
        (-1.0 + i * width, -1.0 + (i + 1) * width, int(counts[i])) for i in range(bins)
    ]


def _check_ks(ks, limit: int | None) -> list:
    ks = [int(k) for k in ks]
    if not ks or any(k < 1 for k in ks):
        raise ValueError(f"k values must be positive, got {ks}")
    if limit is not None and max(ks) > limit:
        raise ValueError(f"k={max(ks)} exceeds the {limit} available neighbors")
    return ks


def intra_mean_sim(G: EmbeddingSet, ks, bins: int = 20) -> DegenerationReport:
    """Similarity structure within one set, self pairs excluded."""
    if G.n < 2:
        raise ValueError("need at least 2 points")
    ks = _check_ks(ks, G.n - 1)
    sims = cosine_similarity_matrix(G, G).values
    off_diag = ~np.eye(G.n, dtype=bool)
    pool = sims[off_diag]
    ranked = np.sort(np.where(off_diag, sims, -np.inf), axis=1)[:, ::-1]
    mean_at = {k: float(ranked[:, :k].mean()) for k in ks}
    return DegenerationReport(
        mean_sim=float(pool.mean()),
        mean_sim_at=mean_at,
        histogram=_nn_histogram(ranked[:, 0], bins),
        excluded_pairs=G.n,
        std_sim=float(pool.std()),
        min_sim=float(pool.min()),
    )


def cross_mean_sim(G: EmbeddingSet, Q: EmbeddingSet, rel: dict, ks, bins: int = 20) -> DegenerationReport:
    """Similarity from each gallery row to all non-matched queries.

    rel maps query id to the set of gallery ids it matches; each matched
    (gallery, query) pair is excluded from the pool.  A gallery row whose
    every query is matched has no neighbors left, which is an error.
    Neighbor counts use min(k, available) per row since exclusions can
    leave rows with fewer than k candidates.
    """
    ks = _check_ks(ks, None)
    sims = cosine_similarity_matrix(G, Q).values
    g_index = {g: i for i, g in enumerate(G.ids)}
    q_index = {q: j for j, q in enumerate(Q.ids)}
    excluded = np.zeros((G.n, Q.n), dtype=bool)
    for q, gs in rel.items():
        j = q_index.get(q)
        if j is None:
            continue
        for g in gs:
            i = g_index.get(g)
            if i is not None:
                excluded[i, j] = True
    available = Q.n - excluded.sum(axis=1)
    if (available == 0).any():
        i = int(np.argmin(available))
        raise ValueError(f"gallery row {G.ids[i]!r} has no unmatched queries left")
    pool = sims[~excluded]
    ranked = np.sort(np.where(excluded, -np.inf, sims), axis=1)[:, ::-1]
    sums = np.cumsum(ranked, axis=1)
    mean_at = {}
    for k in ks:
        counts = np.minimum(k, available)
        mean_at[k] = float((sums[np.arange(G.n), counts - 1] / counts).mean())
    return DegenerationReport(
        mean_sim=float(pool.mean()),
        mean_sim_at=mean_at,
        histogram=_nn_histogram(ranked[:, 0], bins),
        excluded_pairs=int(excluded.sum()),
        std_sim=float(pool.std()),
        min_sim=float(pool.min()),
    )


def nn_similarity_histogram(G: EmbeddingSet, bins: int) -> list:
    """Histogram of each point's nearest-neighbor similarity."""
    if G.n < 2:
        raise ValueError("need at least 2 points")
    sims = cosine_similarity_matrix(G, G).values
    np.fill_diagonal(sims, -np.inf)
    return _nn_histogram(sims.max(axis=1), bins)


def degeneration_score(G: EmbeddingSet) -> float:
    """Mean nearest-neighbor cosine within the set (MeanSim@1)."""
    return intra_mean_sim(G, [1], bins=1).mean_sim_at[1]
