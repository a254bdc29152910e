"""Command-line interface.

Exit codes: 0 success or verified, 1 verification mismatch, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict

from .config import GHConfig, RunStats
from .graph import GraphError
from .maxflow import count_flows
from .io import FAMILIES, emit_graph, emit_tree, generate, parse_graph, parse_tree
from .pipeline import default_c, gh_tree_classic, gh_tree_fast, query_mincut, verify_gh_tree

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

BENCH_COLUMNS = ["n", "m", "algo", "maxflow_calls", "wall_ms", "verified"]
CLUSTER_COLUMNS = [
    "graph", "n", "d", "cluster", "terminal", "size", "phi", "rounds",
    "ssc_calls", "ssc_flows_max", "swap_flows", "total_flows", "budget", "within_budget",
]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GHFORGE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise GraphError(f"GHFORGE_SEED is not an integer: {env!r}") from None


def _header(command: str, settings: dict) -> None:
    print(f"c ghforge {command} " + json.dumps(settings, sort_keys=True), file=sys.stderr)


def _choose_c(args, n: int, m: int) -> int:
    if args.c is not None:
        return args.c
    if args.profile == "sparse":
        return max(1, math.ceil(math.sqrt(m / max(n, 1))))
    return default_c(n)


def _config(args) -> GHConfig:
    return GHConfig(
        seed=_seed(args),
        rounds_c=args.rounds_constant,
        backend=args.backend,
        jobs=args.jobs,
        verify=getattr(args, "verify", False),
    )


def cmd_build(args) -> int:
    g = parse_graph(_read(args.input))
    cfg = _config(args)
    c = _choose_c(args, g.n, g.m)
    _header("build", {"input": args.input, "algo": args.algo, "c": c, "profile": args.profile, **cfg.as_dict()})
    tree = gh_tree_fast(g, c, cfg) if args.algo == "fast" else gh_tree_classic(g)
    _write(args.out, emit_tree(tree))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = parse_graph(_read(args.graph))
    t = parse_tree(_read(args.tree))
    if len(t.part_of) != g.n:
        raise GraphError(f"tree has {len(t.part_of)} vertices, graph has {g.n}")
    report = verify_gh_tree(g, t)
    for u, v, got, want in report.mismatches:
        print(f"mismatch {u + 1} {v + 1} tree={got} mincut={want}")
    print(f"pairs={report.pairs} mismatches={len(report.mismatches)}")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_query(args) -> int:
    t = parse_tree(_read(args.tree))
    print(query_mincut(t, args.u - 1, args.v - 1))
    return EXIT_OK


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise GraphError(f"parameter {item!r} is not key=value")
        try:
            out[key] = float(value) if "." in value else int(value)
        except ValueError:
            out[key] = value
    return out


def family_params(family: str, size: int, extra: dict) -> dict:
    """Generator parameters for a bench size (roughly ``size`` vertices)."""
    if family == "barbell":
        base = {"size": max(1, size // 2)}
    elif family == "grid":
        side = max(1, math.isqrt(size))
        base = {"rows": side, "cols": max(1, size // side)}
    elif family == "gnp":
        base = {"n": size, "p": 0.5}
    elif family == "regular-ish":
        base = {"n": size, "d": min(4, size - 1)}
    elif family == "planted-clusters":
        base = {"n": size, "k": 3, "p_in": 0.8, "p_out": 0.05}
    else:
        raise GraphError(f"unknown family {family!r}")
    base.update(extra)
    return base


def _csv(path: str | None, columns, rows) -> None:
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_bench(args) -> int:
    cfg = _config(args)
    extra = _parse_params(args.param)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    algos = [a for a in args.algo.split(",") if a]
    for a in algos:
        if a not in ("fast", "classic"):
            raise GraphError(f"unknown algorithm {a!r}")
    _header("bench", {"family": args.family, "sizes": sizes, "seeds": args.seeds, "algo": algos,
                      "params": extra, **cfg.as_dict()})
    rows, cluster_rows, depths = [], [], []
    ok = True
    for size in sizes:
        for s in range(args.seeds):
            g = generate(args.family, family_params(args.family, size, extra), cfg.seed + s)
            for algo in algos:
                stats = RunStats()
                t0 = time.perf_counter()
                if algo == "fast":
                    tree = gh_tree_fast(g, _choose_c(args, g.n, g.m), cfg, stats)
                    calls = stats.maxflow_calls
                else:
                    with count_flows() as counter:
                        tree = gh_tree_classic(g)
                    calls = counter.calls
                wall = (time.perf_counter() - t0) * 1000
                verified = verify_gh_tree(g, tree).ok if args.check else ""
                ok = ok and verified is not False
                rows.append({"n": g.n, "m": g.m, "algo": algo, "maxflow_calls": calls,
                             "wall_ms": f"{wall:.2f}", "verified": verified})
                if algo == "fast":
                    depths.extend(stats.tree.depths)
                    for rec in stats.clusters:
                        row = asdict(rec)
                        row.update(graph=f"{args.family}-{size}-{cfg.seed + s}", n=g.n,
                                   budget=rec.budget, within_budget=rec.within_budget)
                        cluster_rows.append(row)
    _csv(args.out, BENCH_COLUMNS, rows)
    if args.clusters_out:
        _csv(args.clusters_out, CLUSTER_COLUMNS, cluster_rows)
    if args.plot_dir:
        from .report import render

        for p in render(args.plot_dir, rows, cluster_rows, depths):
            print(f"c wrote {p}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_generate(args) -> int:
    params = _parse_params(args.param)
    seed = _seed(args)
    _header("generate", {"family": args.family, "params": params, "seed": seed})
    _write(args.out, emit_graph(generate(args.family, params, seed)))
    return EXIT_OK


def _algo_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=int, default=None, help="bootstrap threshold (default ceil(sqrt(n)))")
    p.add_argument("--profile", choices=("fast", "sparse"), default="fast")
    p.add_argument("--seed", type=int, default=None, help="falls back to $GHFORGE_SEED, then 0")
    p.add_argument("--rounds-constant", type=float, default=4.0, help="sampler rounds constant")
    p.add_argument("--backend", choices=("auto", "exact", "heuristic"), default="auto")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghforge", description="Exact Gomory-Hu trees for simple graphs.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a Gomory-Hu tree")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", choices=("fast", "classic"), default="fast")
    p.add_argument("--out", default=None)
    p.add_argument("--verify", action="store_true", help="check all pairs and retry on mismatch")
    _algo_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check a tree against all-pairs max-flow")
    p.add_argument("--graph", required=True)
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("query", help="mincut between two vertices (1-based)")
    p.add_argument("--tree", required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="time and count flows over a generated family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--algo", default="fast,classic")
    p.add_argument("--param", action="append", help="generator override key=value")
    p.add_argument("--no-check", dest="check", action="store_false", help="skip all-pairs verification")
    p.add_argument("--out", default=None, help="CSV path (stdout by default)")
    p.add_argument("--clusters-out", default=None, help="per-cluster CSV path")
    p.add_argument("--plot-dir", default=None, help="directory for PNG figures")
    _algo_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="emit a generated graph")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--param", action="append", help="key=value, e.g. n=10")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
