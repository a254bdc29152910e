"""Exact integral s-t max-flow and canonical minimum cuts on :class:`CapGraph`.

The solver is Dinic's blocking-flow method, compiled with numba.  Every
public entry point that solves a flow problem bumps the active
:func:`count_flows` counters once.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Iterable, Iterator

import numba
import numpy as np

from .graph import CapGraph, Cut, GraphError, SimpleGraph, VertexGrouping, as_capgraph, contract


class FlowError(GraphError):
    pass


@numba.njit(cache=True, nogil=True)
def _dinic(indptr, head, rev, cap0, s, t):
    n = indptr.size - 1
    cap = cap0.copy()
    level = np.empty(n, np.int64)
    it = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    path = np.empty(n, np.int64)
    flow = 0
    while True:
        level[:] = -1
        level[s] = 0
        qh, qt = 0, 1
        queue[0] = s
        while qh < qt:
            u = queue[qh]
            qh += 1
            for a in range(indptr[u], indptr[u + 1]):
                w = head[a]
                if cap[a] > 0 and level[w] < 0:
                    level[w] = level[u] + 1
                    queue[qt] = w
                    qt += 1
        if level[t] < 0:
            break
        for u in range(n):
            it[u] = indptr[u]
        while True:
            depth = 0
            u = s
            while u != t:
                advanced = False
                while it[u] < indptr[u + 1]:
                    a = it[u]
                    w = head[a]
                    if cap[a] > 0 and level[w] == level[u] + 1:
                        path[depth] = a
                        depth += 1
                        u = w
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    if depth == 0:
                        break
                    level[u] = -1
                    depth -= 1
                    u = head[rev[path[depth]]]
                    it[u] += 1
            if u != t:
                break
            push = cap[path[0]]
            for j in range(1, depth):
                if cap[path[j]] < push:
                    push = cap[path[j]]
            for j in range(depth):
                a = path[j]
                cap[a] -= push
                cap[rev[a]] += push
            flow += push
    # residual reachability from s
    seen = np.zeros(n, np.bool_)
    seen[s] = True
    queue[0] = s
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for a in range(indptr[u], indptr[u + 1]):
            w = head[a]
            if cap[a] > 0 and not seen[w]:
                seen[w] = True
                queue[qt] = w
                qt += 1
    return flow, seen


_active: contextvars.ContextVar[tuple["FlowCounter", ...]] = contextvars.ContextVar(
    "ghforge_flow_counters", default=()
)


@dataclass
class FlowCounter:
    calls: int = 0


@contextlib.contextmanager
def count_flows() -> Iterator[FlowCounter]:
    """Count max-flow invocations made inside the ``with`` block.

    Counters nest: an inner block's calls are also seen by outer blocks.
    """
    counter = FlowCounter()
    token = _active.set(_active.get() + (counter,))
    try:
        yield counter
    finally:
        _active.reset(token)


def _solve(g: CapGraph, s: int, t: int) -> tuple[int, np.ndarray]:
    if s == t:
        raise FlowError("source and sink coincide")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise FlowError(f"terminal out of range for n={g.n}")
    for c in _active.get():
        c.calls += 1
    indptr, head, rev, cap = g.arcs
    flow, seen = _dinic(indptr, head, rev, cap, s, t)
    return int(flow), seen


def max_flow_value(g: CapGraph | SimpleGraph, s: int, t: int) -> int:
    return _solve(as_capgraph(g), s, t)[0]


def st_mincut_minimal(g: CapGraph | SimpleGraph, s: int, t: int) -> Cut:
    """The minimum (s, t)-cut whose s-side is inclusion-minimal.

    That side is the residual-reachable set from ``s`` after any maximum
    flow, hence independent of which maximum flow the solver finds.
    """
    flow, seen = _solve(as_capgraph(g), s, t)
    return Cut(frozenset(np.flatnonzero(seen).tolist()), flow)


def set_mincut(g: CapGraph | SimpleGraph, a: Iterable[int], b: Iterable[int]) -> Cut:
    """Minimum cut separating vertex sets ``a`` and ``b``; ``a``-side minimal."""
    a, b = frozenset(a), frozenset(b)
    if not a or not b:
        raise FlowError("both terminal sets must be nonempty")
    if a & b:
        raise FlowError("terminal sets overlap")
    if len(a) == 1 and len(b) == 1:
        return st_mincut_minimal(g, next(iter(a)), next(iter(b)))
    grouping = VertexGrouping.from_blocks(g.n, [sorted(a), sorted(b)])
    q = contract(g, grouping)
    cut = st_mincut_minimal(q, grouping.mapping[min(a)], grouping.mapping[min(b)])
    members = grouping.members()
    side = frozenset(v for gid in cut.side for v in members[gid])
    return Cut(side, cut.value)
