"""Refining a partial tree with a well-linked set.

For each terminal ``u_i`` whose part meets ``X``, the auxiliary graph
``H_i`` is ``H`` with every component of ``T - u_i`` contracted to one
vertex.  A partial tree of ``H_i`` on ``X_i = X & V_i`` with threshold
``2d`` is built with the single-source sampler as verification oracle, then
``u_i`` is made a terminal again and the fragment is spliced into ``T``.
"""

from __future__ import annotations

import contextvars
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import ClusterRecord, EdgeBoundRecord, GHConfig, RunStats
from .graph import CapGraph, GraphError, SimpleGraph, VertexGrouping, contract
from .maxflow import count_flows
from .partial_tree import (
    PartialTree,
    PartialTreeStats,
    SSCOracle,
    is_refinement,
    partial_tree,
    split_part,
)
from .sstmincut import SamplerConfig, ValTable, single_source_mincut
from .wellinked import WellLinkedCluster

log = logging.getLogger(__name__)


class RefineIntegrityError(GraphError):
    """A structural check on a refinement failed.

    The sampler is correct only with high probability; callers may retry
    the run with another seed.
    """


class EdgeBoundError(RefineIntegrityError):
    pass


@dataclass(frozen=True)
class AuxiliaryGraph:
    h_i: CapGraph
    terminal: int
    # u_i as a vertex of h_i
    local_terminal: int
    X_i: frozenset[int]
    # tree neighbour w of u_i -> h_i vertex holding its component
    component_of: dict[int, int] = field(default_factory=dict)

    @property
    def back_map(self) -> tuple[frozenset[int], ...]:
        return self.h_i.origin

    @property
    def n_i(self) -> int:
        return self.h_i.n

    @property
    def m_i(self) -> int:
        return self.h_i.total_capacity


def _components_without(pt: PartialTree, u: int) -> dict[int, int]:
    """Terminal -> neighbour of ``u`` rooting its component of ``T - u``."""
    adj = pt.neighbours()
    comp: dict[int, int] = {}
    for root, _ in adj[u]:
        comp[root] = root
        stack = [root]
        while stack:
            a = stack.pop()
            for b, _ in adj[a]:
                if b != u and b not in comp:
                    comp[b] = root
                    stack.append(b)
    return comp


def build_auxiliary_graphs(
    h: SimpleGraph | CapGraph,
    pt: PartialTree,
    X: Iterable[int] | None = None,
    d: int | None = None,
    stats: RunStats | None = None,
) -> list[AuxiliaryGraph]:
    """One auxiliary graph per terminal whose part meets ``X`` (every
    terminal when ``X`` is omitted).

    The size bounds ``sum n_i <= 3n`` and ``sum m_i <= min(3m, 5nd)``, and
    the tree weight bound ``min(2m, 2nd)``, are checked over all terminals;
    the ``d`` terms only when ``d`` is given.
    """
    n = h.n
    if set(pt.part_of) != set(range(n)):
        raise GraphError("partition does not cover the vertex set")
    m = h.total_capacity if isinstance(h, CapGraph) else h.m
    parts = pt.parts()
    want = set(pt.terminals) if X is None else {pt.part_of[x] for x in X}
    out = []
    sum_n = sum_m = 0
    for u in sorted(pt.terminals):
        comp = _components_without(pt, u)
        roots = sorted(set(comp.values()))
        blocks = {r: [] for r in roots}
        for t, r in comp.items():
            blocks[r].extend(parts[t])
        grouping = VertexGrouping.from_blocks(n, [sorted(blocks[r]) for r in roots])
        h_i = contract(h, grouping)
        sum_n += h_i.n
        sum_m += h_i.total_capacity
        if u not in want:
            continue
        Xi = frozenset(grouping.mapping[x] for x in (X if X is not None else parts[u]) if pt.part_of[x] == u)
        out.append(
            AuxiliaryGraph(
                h_i,
                u,
                grouping.mapping[u],
                Xi,
                {t: grouping.mapping[blocks[comp[t]][0]] for t, _ in pt.neighbours()[u]},
            )
        )
    weight = sum(w for _, _, w in pt.tree_edges)
    record = EdgeBoundRecord(d or 0, n, m, sum_n, sum_m, weight)
    if stats is not None:
        stats.edge_bounds.append(record)
    if sum_n > 3 * n or sum_m > 3 * m:
        raise EdgeBoundError(f"auxiliary graphs too large: {record}")
    if d is not None and not record.ok:
        raise EdgeBoundError(f"auxiliary graphs exceed the degree bounds: {record}")
    return out


class SSCVerifier:
    """Verification oracle backed by the single-source sampler on ``h_i``.

    Sources and claimed vertices of recursion graphs are translated to
    ``h_i`` through their ``origin`` sets; one value table per source is
    computed and cached.
    """

    def __init__(self, aux: AuxiliaryGraph, d: int, phi: float, cfg: SamplerConfig):
        self.aux = aux
        self.d = d
        self.phi = phi
        self.cfg = cfg
        self.tables: dict[int, ValTable] = {}
        self.flows: list[int] = []

    def _local(self, graph: CapGraph, v: int) -> int:
        (base,) = graph.origin[v]
        local = self.aux.h_i.vertex_of(base)
        if local is None:
            raise RefineIntegrityError(f"vertex {v} has no counterpart in the auxiliary graph")
        return local

    def table(self, p: int) -> ValTable:
        if p not in self.tables:
            with count_flows() as counter:
                self.tables[p] = single_source_mincut(
                    self.aux.h_i, self.aux.X_i, self.d, self.phi, p, self.cfg
                )
            self.flows.append(counter.calls)
        return self.tables[p]

    def __call__(self, graph, X, s, claims):
        val = self.table(self._local(graph, s))
        return {v: claims[v] == val[self._local(graph, v)] for v in claims}


def refine_part(
    aux: AuxiliaryGraph,
    d: int,
    phi: float,
    cfg: SamplerConfig,
    rng=None,
    tree_stats: PartialTreeStats | None = None,
    oracle: SSCOracle | None = None,
) -> tuple[PartialTree, dict]:
    """Fragment over the vertices of ``aux.h_i`` with ``u_i`` as a terminal.

    Returns the fragment and a dict of flow counts for reporting.
    """
    rng = np.random.default_rng(rng)
    k = 2 * d
    u = aux.local_terminal
    verifier = SSCVerifier(aux, d, phi, cfg) if oracle is None else None
    with count_flows() as total:
        frag = partial_tree(aux.h_i, aux.X_i, k, oracle or verifier, rng, tree_stats)
        try:
            frag.validate(k)
        except GraphError as exc:
            raise RefineIntegrityError(str(exc)) from exc
        x = frag.part_of[u]
        swap_flows = 0
        if x != u:
            swap_flows = 1
            split, _ = split_part(aux.h_i, frag, x, u, limit=k)
            if split is not None:
                frag = split
            else:
                frag = _rename_terminal(frag, x, u)
    info = {
        "ssc_calls": len(verifier.flows) if verifier else 0,
        "ssc_flows_max": max(verifier.flows, default=0) if verifier else 0,
        "swap_flows": swap_flows,
        "total_flows": total.calls,
    }
    return frag, info


def _rename_terminal(pt: PartialTree, old: int, new: int) -> PartialTree:
    r = lambda t: new if t == old else t
    return PartialTree(
        frozenset(r(t) for t in pt.terminals),
        tuple((r(a), r(b), w) for a, b, w in pt.tree_edges),
        {v: r(t) for v, t in pt.part_of.items()},
    )


def splice(pt: PartialTree, fragments: dict[int, tuple[AuxiliaryGraph, PartialTree]]) -> PartialTree:
    """Replace each refined terminal ``u`` of ``pt`` by its fragment.

    An old edge ``(u, w)`` is reattached, at each refined endpoint, to the
    fragment terminal whose part holds the contracted vertex of the other
    endpoint's component.
    """
    part_of = dict(pt.part_of)
    terminals = set(pt.terminals)
    edges = []
    for u, (aux, frag) in fragments.items():
        back = aux.back_map
        name = lambda t, back=back: next(iter(back[t]))
        terminals.discard(u)
        terminals |= {name(t) for t in frag.terminals}
        edges.extend((name(a), name(b), w) for a, b, w in frag.tree_edges)
        for v, t in frag.part_of.items():
            if len(back[v]) == 1 and v not in aux.component_of.values():
                part_of[name(v)] = name(t)

    def attach(u: int, w: int) -> int:
        if u not in fragments:
            return u
        aux, frag = fragments[u]
        return next(iter(aux.back_map[frag.part_of[aux.component_of[w]]]))

    for a, b, w in pt.tree_edges:
        edges.append((attach(a, b), attach(b, a), w))
    return PartialTree(frozenset(terminals), tuple(edges), part_of)


def refine(
    g: SimpleGraph,
    h: SimpleGraph,
    pt: PartialTree,
    X: WellLinkedCluster,
    d: int,
    cfg: GHConfig | None = None,
    stats: RunStats | None = None,
    cluster_index: int = 0,
) -> PartialTree:
    """Refinement of ``pt`` capturing all mincuts of size at most ``2d``
    separating ``X`` and the terminals, and none larger than ``2d``."""
    cfg = cfg or GHConfig()
    if stats is None:
        stats = RunStats()
    auxes = build_auxiliary_graphs(h, pt, X.members, d, stats)

    def work(aux: AuxiliaryGraph):
        sampler = SamplerConfig.for_instance(
            aux.h_i.n, X.phi, cfg.rounds_c, seed=_seed(cfg.seed, d, cluster_index, aux.terminal, 1)
        )
        tstats = PartialTreeStats()
        frag, info = refine_part(
            aux, d, X.phi, sampler, _seed(cfg.seed, d, cluster_index, aux.terminal, 2), tstats
        )
        return aux, frag, info, sampler, tstats

    if cfg.jobs > 1 and len(auxes) > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            futures = [pool.submit(contextvars.copy_context().run, work, a) for a in auxes]
            results = [f.result() for f in futures]
    else:
        results = [work(a) for a in auxes]

    fragments = {}
    for aux, frag, info, sampler, tstats in results:
        fragments[aux.terminal] = (aux, frag)
        stats.clusters.append(
            ClusterRecord(
                d=d,
                cluster=cluster_index,
                terminal=aux.terminal,
                size=len(aux.X_i),
                phi=X.phi,
                rounds=sampler.rounds,
                **info,
            )
        )
        ts = stats.tree
        ts.calls += tstats.calls
        ts.steps += tstats.steps
        ts.retries += tstats.retries
        ts.fallbacks += tstats.fallbacks
        ts.depths.extend(tstats.depths)
        ts.max_depth = max(ts.max_depth, tstats.max_depth)
    out = splice(pt, fragments)
    try:
        out.validate(2 * d)
    except GraphError as exc:
        raise RefineIntegrityError(str(exc)) from exc
    if not is_refinement(pt, out):
        raise RefineIntegrityError("spliced tree does not refine its input")
    return out


def _seed(*parts: int) -> int:
    seq = np.random.SeedSequence([int(p) & (2**63 - 1) for p in parts])
    return int(seq.generate_state(1, np.uint64)[0])
