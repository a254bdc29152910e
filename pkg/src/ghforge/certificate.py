"""k-connectivity certificates by forest decomposition."""

from __future__ import annotations

from .graph import GraphError, SimpleGraph


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def forest_decomposition(g: SimpleGraph, k: int) -> list[list[tuple[int, int]]]:
    """First ``k`` maximal spanning forests ``F1, F2, ...`` where each ``Fi``
    is maximal in ``G - (F1 + ... + F(i-1))``.  Edges are scanned in sorted
    order, so the result is deterministic."""
    remaining = list(g.edges)
    forests = []
    for _ in range(k):
        if not remaining:
            break
        dsu = _DisjointSet(g.n)
        forest, rest = [], []
        for u, v in remaining:
            (forest if dsu.union(u, v) else rest).append((u, v))
        forests.append(forest)
        remaining = rest
    return forests


def sparsify(g: SimpleGraph, k: int) -> SimpleGraph:
    """A subgraph ``H`` with ``min(|dG S|, k) <= |dH S| <= |dG S|`` for every
    side ``S`` and at most ``min(m, k(n-1))`` edges.

    If a crossing edge of ``S`` is missing from ``H``, each of the ``k``
    forests already joined its endpoints and so crosses ``S`` itself.
    """
    if k < 1:
        raise GraphError(f"certificate parameter must be >= 1, got {k}")
    edges = [e for forest in forest_decomposition(g, k) for e in forest]
    return SimpleGraph(g.n, edges)
