"""Correct a degenerate gallery and compare retrieval before and after.

Tunes the step sizes for the full and the local-threshold adjacency on
the default synthetic dataset, applies the best cell of each, and
prints recall, rank, and degeneration numbers side by side.  The
inverse update both tightens retrieval and lowers the mean
nearest-neighbor similarity; an additive forward aggregation does the
opposite, which is the motivating contrast.

Run:  python3 demos/correct_and_evaluate.py [--seed N]
"""

import argparse

from invgc import (
    ConeConfig,
    EmbeddingSet,
    adjacency_full,
    cosine_similarity_matrix,
    degeneration_score,
    evaluate,
    forward_convolve,
    generate_cone_dataset,
    grid_search,
    inverse_convolve_dual,
    unit_rows,
)


def row(label, rep, score):
    r = rep.recall_at
    print(
        f"{label:<28} {r[1]:>6.1f} {r[5]:>6.1f} {r[10]:>6.1f}"
        f" {rep.median_rank:>5.1f} {rep.mean_rank:>6.3f} {score:>10.4f}"
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    cfg = ConeConfig(seed=args.seed)
    G, Q, refG, refQ, rel = generate_cone_dataset(cfg)
    print(f"dataset: {G.n} pairs, {refG.n} reference rows, d={G.d}\n")
    print(
        f"{'setting':<28} {'R@1':>6} {'R@5':>6} {'R@10':>6}"
        f" {'MdR':>5} {'MnR':>6} {'MeanSim@1':>10}"
    )
    row("baseline", evaluate(Q, G, rel), degeneration_score(G))

    for label, variant, k in (
        ("inverse, full adjacency", "full", 1.0),
        ("inverse, local threshold", "local", 1.0),
    ):
        res = grid_search(Q, G, refG, refQ, rel, variant=variant, k_percent=k)
        corrected = inverse_convolve_dual(G, refG, refQ, res.best_cfg)
        tag = f"{label} (rg={res.best_cfg.r_g}, rq={res.best_cfg.r_q})"
        row(tag, evaluate(Q, corrected, rel), degeneration_score(corrected))

    Gn = EmbeddingSet(list(G.ids), unit_rows(G.data, G.ids))
    S = adjacency_full(cosine_similarity_matrix(Gn, refG), center=False)
    aggregated = forward_convolve(Gn, S, refG)
    row("forward aggregation", evaluate(Q, aggregated, rel), degeneration_score(aggregated))

    print()
    print("Forward aggregation pushes every row toward the crowd mean,")
    print("so the set collapses further; the inverse update removes the")
    print("shared component and recovers the items the hub rows captured.")


if __name__ == "__main__":
    main()
