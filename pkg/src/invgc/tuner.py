"""Hyperparameter grid search and one-dimensional ablation sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import InvGCConfig, inverse_convolve_dual
from .diagnostics import degeneration_score
from .embio import EmbeddingSet
from .retrieval import RetrievalReport, evaluate

DEFAULT_R_GRID = (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0)

SWEEP_PARAMS = ("rg", "rq", "k", "ratio")


@dataclass
class TuneResult:
    best_cfg: InvGCConfig
    best_report: RetrievalReport
    grid_trace: list  # (cfg, R@1, R@5, MnR) per grid cell


@dataclass
class SweepCurve:
    param_name: str
    points: list  # (param_value, R@1, degeneration score) per value


def grid_search(
    valQ: EmbeddingSet,
    valG: EmbeddingSet,
    refG: EmbeddingSet,
    refQ: EmbeddingSet,
    rel: dict,
    variant: str = "full",
    rg_grid=None,
    rq_grid=None,
    k_percent: float = 1.0,
    p_percent: float = 100.0,
    recall_ks=(1, 5, 10),
) -> TuneResult:
    """Exhaustive search over (r_g, r_q) pairs.

    Objective: maximize R@1; ties broken by higher R@5, then lower MnR,
    then smaller r_g + r_q, then first cell in grid order.
    """
    rg_grid = list(DEFAULT_R_GRID if rg_grid is None else rg_grid)
    rq_grid = list(DEFAULT_R_GRID if rq_grid is None else rq_grid)
    if not rg_grid or not rq_grid:
        raise ValueError("grids must be non-empty")
    ks = sorted(set(recall_ks) | {1, 5})
    trace = []
    best = None
    best_key = None
    for rg in rg_grid:
        for rq in rq_grid:
            cfg = InvGCConfig(variant, rg, rq, k_percent, p_percent)
            corrected = inverse_convolve_dual(valG, refG, refQ, cfg)
            report = evaluate(valQ, corrected, rel, ks)
            r1, r5 = report.recall_at[1], report.recall_at[5]
            mnr = report.mean_rank
            trace.append((cfg, r1, r5, mnr))
            key = (r1, r5, -mnr, -(rg + rq))
            if best_key is None or key > best_key:
                best, best_key = (cfg, report), key
    return TuneResult(best_cfg=best[0], best_report=best[1], grid_trace=trace)


def subsample_reference(refG: EmbeddingSet, refQ: EmbeddingSet, ratio: float, seed: int):
    """Uniformly sample ceil(ratio * N) rows from each reference set.

    Selected indices are sorted so the surviving rows keep their original
    relative order; the draw is deterministic for a fixed seed.
    """
    if not (0.0 < ratio <= 1.0):
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    rng = np.random.default_rng(seed)

    def pick(es: EmbeddingSet) -> EmbeddingSet:
        m = max(1, math.ceil(ratio * es.n))
        idx = np.sort(rng.choice(es.n, size=m, replace=False))
        return EmbeddingSet([es.ids[i] for i in idx], es.data[idx])

    return pick(refG), pick(refQ)


def sweep_param(
    base_cfg: InvGCConfig,
    param: str,
    values,
    valQ: EmbeddingSet,
    valG: EmbeddingSet,
    refG: EmbeddingSet,
    refQ: EmbeddingSet,
    rel: dict,
    seed: int = 0,
) -> SweepCurve:
    """Evaluate one parameter over a value list, all else held fixed.

    Emits (value, R@1, degeneration score of the corrected gallery) per
    point, sorted by value.  param "ratio" subsamples both reference
    sets; the other params override the corresponding config field.
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"param must be one of {SWEEP_PARAMS}, got {param!r}")
    values = sorted(float(v) for v in values)
    if not values:
        raise ValueError("values must be non-empty")
    points = []
    for v in values:
        cfg, rG, rQ = base_cfg, refG, refQ
        if param == "rg":
            cfg = replace(base_cfg, r_g=v)
        elif param == "rq":
            cfg = replace(base_cfg, r_q=v)
        elif param == "k":
            cfg = replace(base_cfg, k_percent=v)
        else:
            rG, rQ = subsample_reference(refG, refQ, v, seed)
        corrected = inverse_convolve_dual(valG, rG, rQ, cfg)
        report = evaluate(valQ, corrected, rel, (1,))
        points.append((v, report.recall_at[1], degeneration_score(corrected)))
    return SweepCurve(param_name=param, points=points)
