"""Minimal isolating cuts for a terminal set.

Each terminal gets a binary label; one set-vs-set minimum cut per bit
splits the terminals by that bit, and intersecting a terminal's sides over
all bits gives a region that contains its minimal isolating cut.  One more
flow per terminal, with everything outside the region contracted to a sink,
extracts that cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import CapGraph, Cut, GraphError, SimpleGraph, VertexGrouping, as_capgraph, contract
from .maxflow import count_flows, set_mincut, st_mincut_minimal


@dataclass(frozen=True)
class IsolatingCutsResult:
    cuts: dict[int, Cut]
    maxflow_call_count: int

    def __getitem__(self, t: int) -> Cut:
        return self.cuts[t]


def isolating_cuts(g: CapGraph | SimpleGraph, terminals: Iterable[int]) -> IsolatingCutsResult:
    """For every ``t`` in ``terminals`` the ``t``-minimal ``(t, T - t)``-mincut.

    Uses at most ``ceil(log2 |T|) + |T|`` max-flow calls.
    """
    g = as_capgraph(g)
    terms = sorted(set(terminals))
    if len(terms) < 2:
        raise GraphError("isolating cuts need at least two terminals")
    bits = (len(terms) - 1).bit_length()
    # region[v] holds the label pattern of v over all bit cuts; a terminal's
    # region is the set of vertices sharing its pattern
    pattern = [0] * g.n
    with count_flows() as counter:
        for i in range(bits):
            zeros = [t for j, t in enumerate(terms) if not (j >> i) & 1]
            ones = [t for j, t in enumerate(terms) if (j >> i) & 1]
            if not zeros or not ones:
                continue
            side = set_mincut(g, zeros, ones).side
            for v in range(g.n):
                if v not in side:
                    pattern[v] |= 1 << i
        cuts: dict[int, Cut] = {}
        for j, t in enumerate(terms):
            region = [v for v in range(g.n) if pattern[v] == j]
            if len(region) == 1:
                side = frozenset(region)
                cuts[t] = Cut(side, _boundary(g, side))
                continue
            outside = [v for v in range(g.n) if pattern[v] != j]
            grouping = VertexGrouping.from_blocks(g.n, [outside])
            q = contract(g, grouping)
            cut = st_mincut_minimal(q, grouping.mapping[t], grouping.mapping[outside[0]])
            members = grouping.members()
            side = frozenset(v for gid in cut.side for v in members[gid])
            cuts[t] = Cut(side, cut.value)
    return IsolatingCutsResult(cuts, counter.calls)


def _boundary(g: CapGraph, side: frozenset[int]) -> int:
    return sum(c for v in side for w, c in g.adj[v].items() if w not in side)
