"""Partial Gomory-Hu trees and the recursive construction from a capped
single-source verification oracle.

A partial tree is a tree on a terminal subset together with a partition of
the vertices, one terminal per part.  ``partial_tree(g, U, k, oracle)``
returns one that separates every pair of ``U`` whose mincut is at most ``k``
with the exact mincut as the minimum edge weight on their tree path, and has
no edge heavier than ``k``.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .graph import CapGraph, Cut, GraphError, SimpleGraph, VertexGrouping, as_capgraph, contract
from .isolating import isolating_cuts
from .maxflow import max_flow_value, st_mincut_minimal

log = logging.getLogger(__name__)

RETRY_CAP = 20

# (graph, terminal set, source, claimed values) -> verdict per claimed vertex
SSCOracle = Callable[[CapGraph, frozenset, int, Mapping[int, int]], Mapping[int, bool]]


class PartialTreeError(GraphError):
    pass


@dataclass(frozen=True)
class PartialTree:
    """Tree on ``terminals`` with ``part_of`` mapping each vertex to the
    terminal of its part.  Keys of ``part_of`` are vertex ids; during
    recombination they may also be contracted-vertex labels."""

    terminals: frozenset
    tree_edges: tuple[tuple[int, int, int], ...]
    part_of: Mapping[Hashable, int]

    def parts(self) -> dict[int, set]:
        out: dict[int, set] = {t: set() for t in self.terminals}
        for v, t in self.part_of.items():
            out[t].add(v)
        return out

    def neighbours(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {t: [] for t in self.terminals}
        for a, b, w in self.tree_edges:
            adj[a].append((b, w))
            adj[b].append((a, w))
        return adj

    def path_min_from(self, a: int) -> dict[int, float]:
        """Minimum edge weight on the tree path from ``a`` to each terminal
        (``inf`` for ``a`` itself)."""
        adj = self.neighbours()
        best = {a: math.inf}
        stack = [a]
        while stack:
            u = stack.pop()
            for w, c in adj[u]:
                if w not in best:
                    best[w] = min(best[u], c)
                    stack.append(w)
        return best

    def path_min(self, a: int, b: int) -> float:
        return self.path_min_from(a)[b]

    def validate(self, k: float | None = None) -> None:
        terms = self.terminals
        if not terms:
            raise PartialTreeError("a partial tree needs at least one terminal")
        if len(self.tree_edges) != len(terms) - 1:
            raise PartialTreeError("tree edge count must be one less than the terminal count")
        for t in terms:
            if self.part_of.get(t) != t:
                raise PartialTreeError(f"terminal {t} is not in its own part")
        if set(self.part_of.values()) - terms:
            raise PartialTreeError("partition refers to a non-terminal")
        for a, b, w in self.tree_edges:
            if a not in terms or b not in terms:
                raise PartialTreeError(f"tree edge ({a}, {b}) leaves the terminal set")
            if k is not None and w > k:
                raise PartialTreeError(f"tree edge ({a}, {b}) weight {w} exceeds {k}")
        if len(self.path_min_from(next(iter(terms)))) != len(terms):
            raise PartialTreeError("tree is disconnected")


def trivial_tree(vertices: Iterable[Hashable], terminal: int) -> PartialTree:
    return PartialTree(frozenset((terminal,)), (), {v: terminal for v in vertices})


@dataclass
class PartialTreeStats:
    max_depth: int = 0
    calls: int = 0
    steps: int = 0
    retries: int = 0
    fallbacks: int = 0
    depths: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class StepResult:
    level: int
    D: frozenset[int]
    cuts: dict[int, Cut]
    R_levels: tuple[tuple[int, ...], ...]


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def steiner_argmin(g: CapGraph | SimpleGraph, U: Iterable[int]) -> tuple[float, int | None, int | None]:
    """``(lambda, u0, v)`` where ``mincut(u0, v)`` attains the Steiner
    connectivity ``lambda`` of ``U`` for the fixed ``u0 = min(U)``."""
    U = sorted(set(U))
    if not U:
        raise PartialTreeError("Steiner connectivity of an empty set")
    if len(U) == 1:
        return math.inf, None, None
    g = as_capgraph(g)
    u0 = U[0]
    best, arg = math.inf, None
    for v in U[1:]:
        f = max_flow_value(g, u0, v)
        if f < best:
            best, arg = f, v
    return best, u0, arg


def steiner_connectivity(g: CapGraph | SimpleGraph, U: Iterable[int]) -> float:
    return steiner_argmin(g, U)[0]


def bruteforce_ssc_oracle(k: int) -> SSCOracle:
    """Verification oracle computing ``min(mincut(s, v), k)`` with one flow
    per queried vertex, on whatever graph it is queried with."""

    def oracle(graph, X, s, claims):
        return {v: claims[v] == min(max_flow_value(graph, s, v), k) for v in claims}

    return oracle


def partial_tree_step(
    g: CapGraph | SimpleGraph,
    s: int,
    U: Iterable[int],
    k: int,
    oracle: SSCOracle,
    rng,
) -> StepResult:
    """Collect verified unbalanced ``(s, v)``-mincuts at each sampling level
    and return the level whose union of terminal sides is largest."""
    g = as_capgraph(g)
    U = frozenset(U)
    if s not in U:
        raise PartialTreeError(f"source {s} is not in U")
    rng = _as_rng(rng)
    base = int(rng.integers(2**63))
    levels = int(math.floor(math.log2(len(U))))
    R = sorted(U)
    chain = []
    best = StepResult(0, frozenset(), {}, ())
    for i in range(levels + 1):
        chain.append(tuple(R))
        if len(R) >= 2:
            iso = isolating_cuts(g, R)
            claims = {v: iso[v].value for v in R if v != s}
            verdict = oracle(g, U, s, claims)
            cuts = {}
            for v in claims:
                side = iso[v].side
                if verdict[v] and 2 * len(side & U) <= len(U):
                    cuts[v] = iso[v]
            D = frozenset().union(*(c.side & U for c in cuts.values()))
            if len(D) > len(best.D):
                best = StepResult(i, D, cuts, ())
        level_rng = np.random.default_rng([base, i])
        R = [v for v in R if v == s or level_rng.random() < 0.5]
    return StepResult(best.level, best.D, best.cuts, tuple(chain))


def combine(
    t_large: PartialTree,
    subtrees: Mapping[int, PartialTree],
    cuts: Mapping[int, Cut],
    anchors: Mapping[int, tuple[Hashable, Hashable]] | None = None,
) -> PartialTree:
    """Join ``t_large`` and the subtrees with one edge of weight
    ``cuts[v].value`` per ``v`` between the part holding ``x_v`` in
    ``subtrees[v]`` and the part holding ``y_v`` in ``t_large``.

    ``anchors[v] = (x_v, y_v)``; the default labels are ``("x", v)`` and
    ``("y", v)``.  The partition keeps only integer vertex keys.
    """
    terminals = set(t_large.terminals)
    edges = list(t_large.tree_edges)
    part_of = {v: t for v, t in t_large.part_of.items() if isinstance(v, (int, np.integer))}
    for v, sub in subtrees.items():
        x, y = anchors[v] if anchors else (("x", v), ("y", v))
        if x not in sub.part_of or y not in t_large.part_of:
            raise PartialTreeError(f"missing anchor for {v}")
        if terminals & sub.terminals:
            raise PartialTreeError("subtree terminals overlap")
        terminals |= sub.terminals
        edges.extend(sub.tree_edges)
        edges.append((sub.part_of[x], t_large.part_of[y], cuts[v].value))
        for w, t in sub.part_of.items():
            if isinstance(w, (int, np.integer)):
                part_of[w] = t
    return PartialTree(frozenset(terminals), tuple(edges), part_of)


def _relabel(pt: PartialTree, label: Callable[[int], Hashable]) -> PartialTree:
    return PartialTree(
        frozenset(label(t) for t in pt.terminals),
        tuple((label(a), label(b), w) for a, b, w in pt.tree_edges),
        {label(v): label(t) for v, t in pt.part_of.items()},
    )


def partial_tree(
    g: CapGraph | SimpleGraph,
    U: Iterable[int],
    k: int,
    oracle: SSCOracle,
    rng=None,
    stats: PartialTreeStats | None = None,
    retry_cap: int = RETRY_CAP,
    _depth: int = 0,
) -> PartialTree:
    """Partial tree over ``g`` capturing all mincuts of size at most ``k``
    separating ``U`` and none larger than ``k``."""
    g = as_capgraph(g)
    U = frozenset(U)
    if not U:
        raise PartialTreeError("U must be nonempty")
    rng = _as_rng(rng)
    if stats is not None:
        stats.calls += 1
        stats.depths.append(_depth)
        stats.max_depth = max(stats.max_depth, _depth)
    lam, u0, v_min = steiner_argmin(g, U)
    if lam > k:
        return trivial_tree(range(g.n), min(U))

    order = sorted(U)
    step = None
    for attempt in range(retry_cap + 1):
        s = order[int(rng.integers(len(order)))]
        step = partial_tree_step(g, s, U, k, oracle, rng)
        if stats is not None:
            stats.steps += 1
        if step.D:
            break
        if stats is not None:
            stats.retries += 1
    cuts = dict(step.cuts) if step and step.D else {}
    if not cuts:
        # one classical split on the pair attaining the Steiner connectivity
        log.info("no progress after %d attempts; splitting (%s, %s)", retry_cap + 1, v_min, u0)
        if stats is not None:
            stats.fallbacks += 1
        cuts = {v_min: st_mincut_minimal(g, v_min, u0)}
    D = frozenset().union(*(c.side & U for c in cuts.values()))

    seeds = rng.integers(2**63, size=len(cuts) + 1)
    subtrees = {}
    for j, (v, cut) in enumerate(sorted(cuts.items())):
        outside = [w for w in range(g.n) if w not in cut.side]
        grouping = VertexGrouping.from_blocks(g.n, [outside])
        gv = contract(g, grouping)
        members = grouping.members()
        xv = grouping.mapping[outside[0]]
        Uv = [grouping.mapping[w] for w in cut.side & U]
        sub = partial_tree(gv, Uv, k, oracle, np.random.default_rng(seeds[j]), stats, retry_cap, _depth + 1)
        subtrees[v] = _relabel(sub, lambda w, xv=xv, members=members, v=v: ("x", v) if w == xv else members[w][0])

    blocks = [sorted(cut.side) for _, cut in sorted(cuts.items())]
    grouping = VertexGrouping.from_blocks(g.n, blocks)
    g_large = contract(g, grouping)
    members = grouping.members()
    y_of = {grouping.mapping[b[0]]: v for b, v in zip(blocks, sorted(cuts))}
    U_large = [grouping.mapping[w] for w in U - D]
    large = partial_tree(g_large, U_large, k, oracle, np.random.default_rng(seeds[-1]), stats, retry_cap, _depth + 1)
    large = _relabel(large, lambda w: ("y", y_of[w]) if w in y_of else members[w][0])
    return combine(large, subtrees, cuts)


def split_part(
    g: CapGraph | SimpleGraph,
    pt: PartialTree,
    a: int,
    b: int,
    limit: float | None = None,
) -> tuple[PartialTree | None, int]:
    """Split the part of terminal ``a`` with a minimum ``(b, a)``-cut in the
    graph where every component of ``T - a`` is contracted.

    Returns ``(new tree, cut value)``; the tree is ``None`` when the value
    exceeds ``limit``.  ``b`` becomes the terminal of its new part.
    """
    g = as_capgraph(g)
    if pt.part_of[b] != a or a == b:
        raise PartialTreeError(f"{b} is not a non-terminal of the part of {a}")
    adj = pt.neighbours()
    comp_of: dict[int, int] = {}
    for root, _ in adj[a]:
        comp_of[root] = root
        stack = [root]
        while stack:
            u = stack.pop()
            for w, _ in adj[u]:
                if w != a and w not in comp_of:
                    comp_of[w] = root
                    stack.append(w)
    blocks: dict[int, list[int]] = defaultdict(list)
    for v, t in pt.part_of.items():
        if t != a:
            blocks[comp_of[t]].append(v)
    roots = sorted(blocks)
    grouping = VertexGrouping.from_blocks(g.n, [blocks[r] for r in roots])
    q = contract(g, grouping)
    cut = st_mincut_minimal(q, grouping.mapping[b], grouping.mapping[a])
    if limit is not None and cut.value > limit:
        return None, cut.value
    moved = {r for r in roots if grouping.mapping[blocks[r][0]] in cut.side}
    part_of = dict(pt.part_of)
    for v, t in pt.part_of.items():
        if t == a and grouping.mapping[v] in cut.side:
            part_of[v] = b
    edges = []
    for x, y, w in pt.tree_edges:
        if x == a and comp_of[y] in moved:
            x = b
        elif y == a and comp_of[x] in moved:
            y = b
        edges.append((x, y, w))
    edges.append((a, b, cut.value))
    return PartialTree(pt.terminals | {b}, tuple(edges), part_of), cut.value


def is_refinement(coarse: PartialTree, fine: PartialTree) -> bool:
    """Whether contracting groups of ``fine`` terminals recovers ``coarse``.

    Each fine part must lie inside one coarse part, the fine terminals of a
    coarse part must span a subtree, and the remaining fine edges must match
    the coarse edges with equal weights.
    """
    if set(coarse.part_of) != set(fine.part_of):
        return False
    group = {}
    for t in fine.terminals:
        group[t] = coarse.part_of[t]
    for v, t in fine.part_of.items():
        if coarse.part_of[v] != group[t]:
            return False
    inner: dict[int, list[tuple[int, int]]] = defaultdict(list)
    outer = []
    for a, b, w in fine.tree_edges:
        if group[a] == group[b]:
            inner[group[a]].append((a, b))
        else:
            outer.append((min(group[a], group[b]), max(group[a], group[b]), w))
    sizes: dict[int, int] = defaultdict(int)
    for t in fine.terminals:
        sizes[group[t]] += 1
    for c in coarse.terminals:
        if len(inner[c]) != sizes[c] - 1:
            return False
    want = sorted((min(a, b), max(a, b), w) for a, b, w in coarse.tree_edges)
    return sorted(outer) == want
