"""Command-line entry point.

Subcommands: diagnose, apply, eval, tune, sweep, synth, verify-theory.
Metric reports go to stdout as "key<TAB>value" lines; verify-theory and
sweep print multi-column TSV rows instead, one row per check or point.
Anything else (logs, errors) goes to stderr.

Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 any failed check in a verify-theory run marked --strict.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import embio
from .core import InvGCConfig, inverse_convolve_dual
from .diagnostics import cross_mean_sim, intra_mean_sim
from .retrieval import evaluate
from .synth import ConeConfig, generate_cone_dataset
from .theory import run_theory_suite
from .tuner import DEFAULT_R_GRID, SWEEP_PARAMS, grid_search, sweep_param

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_THEORY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; this surface reserves 2
    # for data errors, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(key, value) -> None:
    print(f"{key}\t{_fmt(value)}")


def _parse_values(spec: str) -> list:
    """Parse "start:stop[:step]" (stop inclusive) or a comma list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"bad range {spec!r}, want start:stop[:step]")
        try:
            start, stop = float(parts[0]), float(parts[1])
            step = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise UsageError(f"bad range {spec!r}") from None
        if step <= 0:
            raise UsageError("range step must be > 0")
        vals, i = [], 0
        while True:
            v = start + i * step
            if v > stop + 1e-9 * max(1.0, step):
                break
            vals.append(round(v, 12))
            i += 1
        if not vals:
            raise UsageError(f"range {spec!r} is empty")
        return vals
    try:
        vals = [float(t) for t in spec.split(",") if t]
    except ValueError:
        raise UsageError(f"bad list {spec!r}") from None
    if not vals:
        raise UsageError(f"list {spec!r} is empty")
    return vals


def _parse_ints(spec: str) -> list:
    vals = _parse_values(spec)
    out = []
    for v in vals:
        if int(v) != v:
            raise UsageError(f"expected integers, got {v}")
        out.append(int(v))
    return out


def _format_for(path) -> str:
    return "tsv" if str(path).endswith(".tsv") else "binary"


def _load_set(path) -> embio.EmbeddingSet:
    return embio.load_embeddings(path, _format_for(path))


def _cfg_from_args(args) -> InvGCConfig:
    if args.k is not None and args.variant != "local":
        raise UsageError("--k applies only to --variant local")
    if args.p is not None and args.variant != "avgpool":
        raise UsageError("--p applies only to --variant avgpool")
    k = 1.0 if args.k is None else args.k
    p = 100.0 if args.p is None else args.p
    for name, pct in (("--k", k), ("--p", p)):
        if not (0.0 < pct <= 100.0):
            raise UsageError(f"{name} must lie in (0, 100], got {pct}")
    rg = getattr(args, "rg", 0.0)
    rq = getattr(args, "rq", 0.0)
    return InvGCConfig(args.variant, rg, rq, k, p)


def _emit_degeneration(report, mode: str) -> None:
    _emit("mode", mode)
    _emit("mean_sim", report.mean_sim)
    for k in sorted(report.mean_sim_at):
        _emit(f"mean_sim_at_{k}", report.mean_sim_at[k])
    _emit("std_sim", report.std_sim)
    _emit("min_sim", report.min_sim)
    _emit("excluded_pairs", report.excluded_pairs)


def _dump_histogram(histogram, path) -> None:
    with open(Path(path), "w", encoding="utf-8") as f:
        for lo, hi, count in histogram:
            f.write(f"{_fmt(lo)}\t{_fmt(hi)}\t{count}\n")


def cmd_diagnose(args) -> int:
    ks = _parse_ints(args.topk)
    G = _load_set(args.gallery)
    if (args.query is None) != (args.relevance is None):
        raise UsageError("--query and --relevance must be given together")
    if args.query is not None:
        Q = _load_set(args.query)
        rel = embio.load_relevance(args.relevance)
        report = cross_mean_sim(G, Q, rel, ks, bins=args.bins)
        _emit_degeneration(report, "cross")
    else:
        report = intra_mean_sim(G, ks, bins=args.bins)
        _emit_degeneration(report, "intra")
    if args.dump_hist:
        _dump_histogram(report.histogram, args.dump_hist)
    return EXIT_OK


def cmd_apply(args) -> int:
    cfg = _cfg_from_args(args)
    G = _load_set(args.gallery)
    refG = _load_set(args.ref_gallery)
    refQ = _load_set(args.ref_query)
    corrected = inverse_convolve_dual(G, refG, refQ, cfg)
    embio.save_embeddings(corrected, args.out, _format_for(args.out))
    _emit("out", args.out)
    _emit("rows", corrected.n)
    _emit("dims", corrected.d)
    return EXIT_OK


def cmd_eval(args) -> int:
    Ks = _parse_ints(args.recall_at)
    Q = _load_set(args.query)
    G = _load_set(args.gallery)
    rel = embio.load_relevance(args.relevance)
    report = evaluate(Q, G, rel, Ks)
    for k in sorted(report.recall_at):
        _emit(f"R@{k}", report.recall_at[k])
    _emit("MdR", report.median_rank)
    _emit("MnR", report.mean_rank)
    return EXIT_OK


def _cfg_label(cfg: InvGCConfig) -> str:
    parts = [cfg.variant]
    if cfg.variant == "local":
        parts.append(f"k={_fmt(cfg.k_percent)}")
    if cfg.variant == "avgpool":
        parts.append(f"p={_fmt(cfg.p_percent)}")
    parts.append(f"rg={_fmt(cfg.r_g)}")
    parts.append(f"rq={_fmt(cfg.r_q)}")
    return ",".join(parts)


def cmd_tune(args) -> int:
    cfg = _cfg_from_args(args)
    valQ = _load_set(args.val_query)
    valG = _load_set(args.val_gallery)
    refG = _load_set(args.ref_gallery)
    refQ = _load_set(args.ref_query)
    rel = embio.load_relevance(args.relevance)
    rg_grid = _parse_values(args.rg_grid) if args.rg_grid else DEFAULT_R_GRID
    rq_grid = _parse_values(args.rq_grid) if args.rq_grid else DEFAULT_R_GRID
    result = grid_search(
        valQ, valG, refG, refQ, rel,
        variant=cfg.variant, rg_grid=rg_grid, rq_grid=rq_grid,
        k_percent=cfg.k_percent, p_percent=cfg.p_percent,
    )
    best = result.best_cfg
    _emit("variant", best.variant)
    if best.variant == "local":
        _emit("k", best.k_percent)
    if best.variant == "avgpool":
        _emit("p", best.p_percent)
    _emit("rg", best.r_g)
    _emit("rq", best.r_q)
    for k in sorted(result.best_report.recall_at):
        _emit(f"R@{k}", result.best_report.recall_at[k])
    _emit("MdR", result.best_report.median_rank)
    _emit("MnR", result.best_report.mean_rank)
    if args.trace:
        with open(Path(args.trace), "w", encoding="utf-8") as f:
            for cell_cfg, r1, r5, mnr in result.grid_trace:
                f.write(
                    f"{_cfg_label(cell_cfg)}\t{_fmt(r1)}\t{_fmt(r5)}\t{_fmt(mnr)}\t-\n"
                )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _cfg_from_args(args)
    if args.param == "k" and cfg.variant != "local":
        raise UsageError("--param k requires --variant local")
    values = _parse_values(args.values)
    valQ = _load_set(args.val_query)
    valG = _load_set(args.val_gallery)
    refG = _load_set(args.ref_gallery)
    refQ = _load_set(args.ref_query)
    rel = embio.load_relevance(args.relevance)
    curve = sweep_param(
        cfg, args.param, values, valQ, valG, refG, refQ, rel, seed=args.seed
    )
    for v, r1, ddeg in curve.points:
        print(f"{curve.param_name}={_fmt(v)}\t{_fmt(r1)}\t-\t-\t{_fmt(ddeg)}")
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = ConeConfig(
        n_items=args.items,
        n_ref=args.refs,
        dim=args.dim,
        cone_spread=args.spread,
        query_noise=args.qnoise,
        seed=args.seed,
    )
    G, Q, refG, refQ, rel = generate_cone_dataset(cfg)
    prefix = args.out_prefix
    paths = {
        "gallery": f"{prefix}.gallery.emb",
        "query": f"{prefix}.query.emb",
        "ref_gallery": f"{prefix}.refg.emb",
        "ref_query": f"{prefix}.refq.emb",
    }
    for key, es in (
        ("gallery", G), ("query", Q), ("ref_gallery", refG), ("ref_query", refQ)
    ):
        embio.save_embeddings(es, paths[key], "binary")
    rel_path = f"{prefix}.rel.tsv"
    embio.save_relevance(rel, rel_path)
    for key in ("gallery", "query", "ref_gallery", "ref_query"):
        _emit(key, paths[key])
    _emit("relevance", rel_path)
    return EXIT_OK


def cmd_verify_theory(args) -> int:
    ns = _parse_ints(args.n)
    bs = _parse_values(args.b)
    checks = run_theory_suite(
        ns, bs,
        mc_samples=args.mc_samples,
        seed=args.seed,
        include_thm1=args.include_thm1,
    )
    dash = "-"
    for c in checks:
        b_cell = dash if c.b is None else _fmt(c.b)
        if c.b2 is not None:
            b_cell = f"{b_cell},{_fmt(c.b2)}"
        mc_cell = dash if c.mc_estimate is None else _fmt(c.mc_estimate)
        print(
            f"{c.name}\t{c.n}\t{b_cell}\t{_fmt(c.exact_fraction)}\t{mc_cell}"
            f"\t{_fmt(c.lower_bound)}\t{_fmt(c.upper_bound)}\t{_fmt(c.holds)}"
        )
    failed = sum(1 for c in checks if not c.holds)
    if failed:
        print(f"{failed} of {len(checks)} checks failed", file=sys.stderr)
    if args.strict and failed:
        return EXIT_THEORY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="invgc",
        description="Diagnose and correct representation degeneration in "
        "retrieval embedding sets; verify the supporting cap geometry.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("diagnose", help="degeneration report for a gallery")
    p.add_argument("--gallery", required=True)
    p.add_argument("--query")
    p.add_argument("--relevance")
    p.add_argument("--topk", default="1,10", help="comma list of k values")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--dump-hist", help="write the NN histogram TSV here")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("apply", help="correct a gallery against reference sets")
    p.add_argument("--gallery", required=True)
    p.add_argument("--ref-gallery", required=True)
    p.add_argument("--ref-query", required=True)
    p.add_argument("--variant", required=True, choices=("full", "local", "avgpool"))
    p.add_argument("--k", type=float, help="percent, local variant only")
    p.add_argument("--p", type=float, help="percent, avgpool variant only")
    p.add_argument("--rg", type=float, required=True)
    p.add_argument("--rq", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("eval", help="R@K / MdR / MnR for a query set")
    p.add_argument("--query", required=True)
    p.add_argument("--gallery", required=True)
    p.add_argument("--relevance", required=True)
    p.add_argument("--recall-at", default="1,5,10")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tune", help="grid-search r_g and r_q")
    p.add_argument("--val-query", required=True)
    p.add_argument("--val-gallery", required=True)
    p.add_argument("--ref-gallery", required=True)
    p.add_argument("--ref-query", required=True)
    p.add_argument("--relevance", required=True)
    p.add_argument("--variant", required=True, choices=("full", "local", "avgpool"))
    p.add_argument("--k", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--rg-grid", help="comma list or start:stop[:step]")
    p.add_argument("--rq-grid", help="comma list or start:stop[:step]")
    p.add_argument("--trace", help="write the full grid trace TSV here")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("sweep", help="one-parameter ablation curve")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--values", required=True, help="comma list or start:stop[:step]")
    p.add_argument("--val-query", required=True)
    p.add_argument("--val-gallery", required=True)
    p.add_argument("--ref-gallery", required=True)
    p.add_argument("--ref-query", required=True)
    p.add_argument("--relevance", required=True)
    p.add_argument("--variant", default="full", choices=("full", "local", "avgpool"))
    p.add_argument("--k", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--rg", type=float, default=0.0)
    p.add_argument("--rq", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0, help="ratio subsampling seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="generate a cone-degenerate dataset")
    p.add_argument("--items", type=int, default=200)
    p.add_argument("--refs", type=int, default=1000)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--spread", type=float, default=0.15)
    p.add_argument("--qnoise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify-theory", help="cap-geometry bound suite")
    p.add_argument("--n", default="2:16", help="dimensions, list or range")
    p.add_argument("--b", default="0.05:0.95:0.05", help="radii, list or range")
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--include-thm1", action="store_true")
    p.set_defaults(func=cmd_verify_theory)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"invgc {args.subcommand}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        print(f"invgc {args.subcommand}: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
