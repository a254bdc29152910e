"""Graph values shared by every stage: simple graphs, capacitated quotient
graphs, vertex groupings and cuts.

All graph objects are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Base class for graph validation failures."""


class VertexRangeError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class GroupingError(GraphError):
    pass


class CutSideError(GraphError):
    pass


class SimpleGraph:
    """Unweighted simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adj", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(edges))
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adj)

    def high_degree(self, d: int) -> frozenset[int]:
        """The vertices of degree at least ``d``."""
        return frozenset(v for v in range(self.n) if len(self.adj[v]) >= d)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def to_capgraph(self) -> CapGraph:
        return CapGraph(self.n, ((u, v, 1) for u, v in self.edges))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


def build_simple_graph(n: int, pairs: Iterable[tuple[int, int]]) -> SimpleGraph:
    """Validate ``pairs`` and build a :class:`SimpleGraph`.

    Raises :class:`VertexRangeError`, :class:`SelfLoopError` or
    :class:`DuplicateEdgeError`; unordered pairs ``(u, v)`` and ``(v, u)``
    count as duplicates.
    """
    if n < 0:
        raise VertexRangeError(f"negative vertex count {n}")
    seen: set[tuple[int, int]] = set()
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
    return SimpleGraph(n, seen)


class CapGraph:
    """Undirected graph with positive integer capacities.

    Parallel input edges are merged by summing capacity and self-loops are
    dropped, so a contracted multigraph is stored compactly.  ``origin[v]``
    is the set of base vertices that ``v`` stands for; it is composed through
    repeated contraction so any cut side can be expanded back.
    """

    __slots__ = ("n", "edges", "origin", "__dict__")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, int]],
        origin: Sequence[frozenset[int]] | None = None,
    ):
        merged: dict[tuple[int, int], int] = {}
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside [0, {n})")
            if c < 1 or int(c) != c:
                raise GraphError(f"capacity {c!r} on ({u}, {v}) is not a positive integer")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0) + int(c)
        self.n = n
        self.edges: tuple[tuple[int, int, int], ...] = tuple(
            (u, v, c) for (u, v), c in sorted(merged.items())
        )
        if origin is None:
            origin = [frozenset((v,)) for v in range(n)]
        elif len(origin) != n:
            raise GraphError("origin must list one base-vertex set per vertex")
        self.origin: tuple[frozenset[int], ...] = tuple(origin)

    @property
    def m(self) -> int:
        """Number of distinct (merged) edges."""
        return len(self.edges)

    @cached_property
    def total_capacity(self) -> int:
        """Edge count of the underlying multigraph."""
        return sum(c for _, _, c in self.edges)

    @cached_property
    def adj(self) -> tuple[dict[int, int], ...]:
        adj: list[dict[int, int]] = [{} for _ in range(self.n)]
        for u, v, c in self.edges:
            adj[u][v] = c
            adj[v][u] = c
        return tuple(adj)

    def weighted_degree(self, v: int) -> int:
        return sum(self.adj[v].values())

    @cached_property
    def arcs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """CSR residual layout ``(indptr, head, rev, cap)`` for the flow solver.

        Each undirected edge becomes two arcs of equal capacity that are each
        other's reverse.
        """
        n = self.n
        m = len(self.edges)
        tails = np.empty(2 * m, dtype=np.int64)
        heads = np.empty(2 * m, dtype=np.int64)
        caps = np.empty(2 * m, dtype=np.int64)
        for i, (u, v, c) in enumerate(self.edges):
            tails[2 * i], heads[2 * i], caps[2 * i] = u, v, c
            tails[2 * i + 1], heads[2 * i + 1], caps[2 * i + 1] = v, u, c
        order = np.argsort(tails, kind="stable")
        pos = np.empty(2 * m, dtype=np.int64)
        pos[order] = np.arange(2 * m)
        partner = np.arange(2 * m) ^ 1
        rev = pos[partner][order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(tails, minlength=n), out=indptr[1:])
        return indptr, heads[order], rev, caps[order]

    @cached_property
    def _origin_index(self) -> dict[frozenset[int], int]:
        return {o: v for v, o in enumerate(self.origin)}

    def vertex_of(self, base: int) -> int | None:
        """Local id of the uncontracted vertex standing for ``base``, if any."""
        return self._origin_index.get(frozenset((base,)))

    def expand(self, side: Iterable[int]) -> frozenset[int]:
        """Base vertices represented by the local vertex set ``side``."""
        out: set[int] = set()
        for v in side:
            out |= self.origin[v]
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CapGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"CapGraph(n={self.n}, m={self.m}, cap={self.total_capacity})"


def as_capgraph(g: SimpleGraph | CapGraph) -> CapGraph:
    return g if isinstance(g, CapGraph) else g.to_capgraph()


def _edge_triples(g: SimpleGraph | CapGraph) -> Iterable[tuple[int, int, int]]:
    if isinstance(g, CapGraph):
        return g.edges
    return ((u, v, 1) for u, v in g.edges)


class VertexGrouping:
    """Total map from vertices ``0..n-1`` to dense group ids ``0..groups-1``."""

    __slots__ = ("mapping", "groups")

    def __init__(self, mapping: Sequence[int]):
        mapping = tuple(int(x) for x in mapping)
        groups = max(mapping) + 1 if mapping else 0
        if any(x < 0 for x in mapping) or len(set(mapping)) != groups:
            raise GroupingError("group ids must be dense in [0, groups)")
        self.mapping = mapping
        self.groups = groups

    @classmethod
    def identity(cls, n: int) -> VertexGrouping:
        return cls(range(n))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> VertexGrouping:
        """Merge each block into one group; uncovered vertices stay singletons.

        Groups are numbered by first appearance in vertex order, so the
        result is deterministic for a given input.
        """
        owner = list(range(n))
        for b, block in enumerate(blocks):
            for v in block:
                if owner[v] != v:
                    raise GroupingError(f"vertex {v} listed in two blocks")
                owner[v] = n + b
        dense: dict[int, int] = {}
        return cls([dense.setdefault(o, len(dense)) for o in owner])

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.groups)]
        for v, gid in enumerate(self.mapping):
            out[gid].append(v)
        return out

    def image(self, side: Iterable[int]) -> frozenset[int]:
        return frozenset(self.mapping[v] for v in side)


def contract(g: SimpleGraph | CapGraph, grouping: VertexGrouping) -> CapGraph:
    """Quotient of ``g`` by ``grouping`` with merged capacities."""
    if len(grouping.mapping) != g.n:
        raise GroupingError(f"grouping covers {len(grouping.mapping)} vertices, graph has {g.n}")
    gm = grouping.mapping
    base = g.origin if isinstance(g, CapGraph) else tuple(frozenset((v,)) for v in range(g.n))
    origin: list[set[int]] = [set() for _ in range(grouping.groups)]
    for v, gid in enumerate(gm):
        origin[gid] |= base[v]
    return CapGraph(
        grouping.groups,
        ((gm[u], gm[v], c) for u, v, c in _edge_triples(g)),
        [frozenset(o) for o in origin],
    )


def _check_side(n: int, side: frozenset[int]) -> None:
    if not side or len(side) >= n:
        raise CutSideError("cut side must be nonempty and proper")
    if any(not 0 <= v < n for v in side):
        raise VertexRangeError("cut side has a vertex out of range")


def cut_value(g: SimpleGraph | CapGraph, side: Iterable[int]) -> int:
    """Total capacity of edges with exactly one endpoint in ``side``."""
    side = frozenset(side)
    _check_side(g.n, side)
    return sum(c for u, v, c in _edge_triples(g) if (u in side) != (v in side))


@dataclass(frozen=True)
class Cut:
    """A cut given by its designated side and crossing capacity."""

    side: frozenset[int]
    value: int

    def __contains__(self, v: int) -> bool:
        return v in self.side
