"""Gomory-Hu tree construction: the fast doubling pipeline, the classical
``n - 1`` flow baseline, and an all-pairs verifier."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .certificate import sparsify
from .config import GHConfig, RunStats
from .graph import CapGraph, GraphError, SimpleGraph, as_capgraph
from .maxflow import count_flows, max_flow_value
from .partial_tree import (
    PartialTree,
    PartialTreeError,
    PartialTreeStats,
    bruteforce_ssc_oracle,
    partial_tree,
    split_part,
    trivial_tree,
)
from .refine import RefineIntegrityError, refine
from .wellinked import partition_high_degree

log = logging.getLogger(__name__)

# a partial tree whose terminals are all vertices
GHTree = PartialTree


def default_c(n: int) -> int:
    return max(1, math.isqrt(max(n - 1, 0)) + 1) if n > 1 else 1


def doubling_levels(c: int, n: int) -> list[int]:
    """``c, 2c, 4c, ...`` up to and including the first ``d`` with
    ``2d >= n - 1``."""
    if c < 1:
        raise GraphError("c must be positive")
    out = [c]
    while 2 * out[-1] < n - 1:
        out.append(2 * out[-1])
    return out


def small_conn(g: SimpleGraph | CapGraph, c: int, rng=None, stats: PartialTreeStats | None = None) -> PartialTree:
    """Partial tree capturing every mincut of size at most ``c`` and none
    larger, built with the brute-force verification oracle."""
    if c < 1:
        raise GraphError("c must be positive")
    return partial_tree(g, range(g.n), c, bruteforce_ssc_oracle(c), rng, stats)


def _as_ghtree(pt: PartialTree, n: int) -> GHTree:
    if set(pt.terminals) != set(range(n)):
        raise RefineIntegrityError("final tree does not have every vertex as a terminal")
    return GHTree(pt.terminals, tuple(sorted((min(a, b), max(a, b), w) for a, b, w in pt.tree_edges)), dict(pt.part_of))


def _fast_once(g: SimpleGraph, c: int, cfg: GHConfig, stats: RunStats) -> GHTree:
    n = g.n
    rng = np.random.default_rng([cfg.seed & (2**63 - 1), 0])
    pt = small_conn(g, c, rng, stats.tree)
    for d in doubling_levels(c, n):
        stats.levels.append(d)
        h = sparsify(g, 3 * d)
        clusters = partition_high_degree(h, d, cfg.backend, cfg.exact_limit)
        log.debug("level d=%d: %d clusters", d, len(clusters))
        for i, cluster in enumerate(clusters):
            pt = refine(g, h, pt, cluster, d, cfg, stats, i)
    return _as_ghtree(pt, n)


def gh_tree_fast(
    g: SimpleGraph,
    c: int | None = None,
    cfg: GHConfig | None = None,
    stats: RunStats | None = None,
) -> GHTree:
    """Gomory-Hu tree by bootstrapping with a small-connectivity partial tree
    and refining with well-linked clusters at doubling thresholds.

    With ``cfg.verify`` the result is checked against all-pairs flows and
    the run repeated with a fresh seed on mismatch or integrity failure.
    """
    cfg = cfg or GHConfig()
    if stats is None:
        stats = RunStats()
    n = g.n
    if n == 0:
        raise GraphError("empty graph")
    if n == 1:
        return GHTree(frozenset((0,)), (), {0: 0})
    c = default_c(n) if c is None else c
    with count_flows() as counter:
        for attempt in range(cfg.max_attempts):
            stats.attempts = attempt + 1
            run_cfg = replace(cfg, seed=cfg.seed + attempt)
            try:
                tree = _fast_once(g, c, run_cfg, stats)
            except RefineIntegrityError as exc:
                log.warning("attempt %d failed integrity checks: %s", attempt + 1, exc)
                if attempt + 1 == cfg.max_attempts:
                    raise
                continue
            if not cfg.verify or verify_gh_tree(g, tree).ok:
                break
            log.warning("attempt %d produced a wrong tree; retrying", attempt + 1)
        else:
            raise RefineIntegrityError("no attempt produced a verified tree")
    stats.maxflow_calls = counter.calls
    return tree


def gh_tree_classic(g: SimpleGraph | CapGraph) -> GHTree:
    """Gomory-Hu tree by ``n - 1`` split steps, each one flow in the graph
    with the other subtrees contracted.  Disconnected inputs get weight-0
    edges between components."""
    g = as_capgraph(g)
    if g.n == 0:
        raise GraphError("empty graph")
    pt = trivial_tree(range(g.n), 0)
    pending = [0]
    while pending:
        a = pending[-1]
        rest = [v for v, t in pt.part_of.items() if t == a and v != a]
        if not rest:
            pending.pop()
            continue
        b = min(rest)
        pt, _ = split_part(g, pt, a, b)
        pending.append(b)
    return _as_ghtree(pt, g.n)


def query_mincut(t: GHTree, u: int, v: int) -> int:
    """Minimum edge weight on the tree path between ``u`` and ``v``."""
    if u == v:
        raise PartialTreeError("query needs two distinct vertices")
    for x in (u, v):
        if x not in t.part_of:
            raise PartialTreeError(f"unknown vertex {x}")
    return t.path_min(t.part_of[u], t.part_of[v])


@dataclass
class VerifyReport:
    pairs: int = 0
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)
    flows: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_gh_tree(g: SimpleGraph | CapGraph, t: GHTree) -> VerifyReport:
    """Compare every pair's tree path minimum with a max-flow value.

    Mismatches are ``(u, v, tree value, true value)``.
    """
    if set(t.terminals) != set(range(g.n)) or len(t.tree_edges) != g.n - 1:
        raise PartialTreeError("tree does not span the graph")
    t.validate()
    cg = as_capgraph(g)
    report = VerifyReport()
    with count_flows() as counter:
        for u in range(g.n):
            from_u = t.path_min_from(u)
            for v in range(u + 1, g.n):
                true = max_flow_value(cg, u, v)
                report.pairs += 1
                if from_u[v] != true:
                    report.mismatches.append((u, v, from_u[v], true))
    report.flows = counter.calls
    return report
