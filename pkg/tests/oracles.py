"""Independent reference computations used only by the tests.

Nothing here calls into the library's flow solver: small instances are
solved by enumerating every cut side, larger ones with networkx.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np


def side_masks(n: int) -> np.ndarray:
    """All sides not containing vertex ``n - 1``, as bitmasks (nonempty)."""
    return np.arange(1, 1 << (n - 1), dtype=np.int64)


def cut_table(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    """``(masks, cut value per mask)`` over every proper side."""
    masks = side_masks(n)
    cut = np.zeros(masks.size, dtype=np.int64)
    for e in edges:
        u, v, c = e if len(e) == 3 else (*e, 1)
        cut += c * (((masks >> u) & 1) ^ ((masks >> v) & 1))
    return masks, cut


def all_pairs_mincut_enum(n: int, edges) -> dict[tuple[int, int], int]:
    masks, cut = cut_table(n, edges)
    out = {}
    for u, v in itertools.combinations(range(n), 2):
        sep = ((masks >> u) & 1) != ((masks >> v) & 1)
        out[(u, v)] = int(cut[sep].min())
    return out


def minimal_side_enum(n: int, edges, s_set, t_set) -> tuple[frozenset, int]:
    """Intersection of all minimum sides containing ``s_set`` and avoiding
    ``t_set``, with the minimum value."""
    best = None
    sides = []
    for mask in range(1, (1 << n) - 1):
        side = {v for v in range(n) if mask >> v & 1}
        if not set(s_set) <= side or side & set(t_set):
            continue
        val = 0
        for e in edges:
            u, v, c = e if len(e) == 3 else (*e, 1)
            val += c * ((u in side) != (v in side))
        if best is None or val < best:
            best, sides = val, [side]
        elif val == best:
            sides.append(side)
    return frozenset(set.intersection(*sides)), best


def nx_graph(n: int, edges) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for e in edges:
        u, v, c = e if len(e) == 3 else (*e, 1)
        if g.has_edge(u, v):
            g[u][v]["capacity"] += c
        else:
            g.add_edge(u, v, capacity=c)
    return g


def mincut_nx(n: int, edges, u: int, v: int) -> int:
    return int(nx.minimum_cut_value(nx_graph(n, edges), u, v))


def all_pairs_mincut(n: int, edges) -> dict[tuple[int, int], int]:
    """Exhaustive for small ``n``; otherwise a networkx Gomory-Hu tree."""
    edges = list(edges)
    if n <= 14:
        return all_pairs_mincut_enum(n, edges)
    g = nx_graph(n, edges)
    out = {}
    for comp in nx.connected_components(g):
        comp = sorted(comp)
        if len(comp) == 1:
            continue
        t = nx.gomory_hu_tree(g.subgraph(comp))
        for a in comp:
            dist = {a: float("inf")}
            stack = [a]
            while stack:
                x = stack.pop()
                for y in t[x]:
                    if y not in dist:
                        dist[y] = min(dist[x], t[x][y]["weight"])
                        stack.append(y)
            for b in comp:
                if a < b:
                    out[(a, b)] = int(dist[b])
    for u, v in itertools.combinations(range(n), 2):
        out.setdefault((u, v), 0)
    return out


def path_min(tree_edges, a, b) -> float:
    adj: dict = {}
    for x, y, w in tree_edges:
        adj.setdefault(x, []).append((y, w))
        adj.setdefault(y, []).append((x, w))
    best = {a: float("inf")}
    stack = [a]
    while stack:
        x = stack.pop()
        for y, w in adj.get(x, ()):
            if y not in best:
                best[y] = min(best[x], w)
                stack.append(y)
    return best[b]


def expansion_enum(n: int, edges, demands, verts=None) -> float:
    """Min over sides S of ``G[verts]`` of ``|dS| / min(d(S), d(rest))``
    (sides with zero demand on either side are skipped)."""
    verts = list(range(n)) if verts is None else sorted(verts)
    inside = set(verts)
    sub = [e for e in edges if e[0] in inside and e[1] in inside]
    best = float("inf")
    k = len(verts)
    total = sum(demands[v] for v in verts)
    for r in range(1, k):
        for side in itertools.combinations(verts, r):
            if verts[-1] in side:
                continue
            s = set(side)
            ds = sum(demands[v] for v in s)
            low = min(ds, total - ds)
            if low <= 0:
                continue
            cut = sum((e[2] if len(e) == 3 else 1) for e in sub if (e[0] in s) != (e[1] in s))
            best = min(best, cut / low)
    return best


def wellinked_phi_enum(n: int, edges, X, d) -> float:
    """Largest phi with ``mincut(A, B) >= d phi min(|A|, |B|)`` for all
    bipartitions of ``X``, by enumerating every cut side."""
    X = sorted(X)
    masks, cut = cut_table(n, edges)
    best = float("inf")
    first, rest = X[0], X[1:]
    for r in range(len(rest)):
        for extra in itertools.combinations(rest, r):
            A = (first, *extra)
            B = [v for v in rest if v not in extra]
            a_in = np.ones(masks.size, dtype=bool)
            b_out = np.ones(masks.size, dtype=bool)
            a_out = np.ones(masks.size, dtype=bool)
            b_in = np.ones(masks.size, dtype=bool)
            for v in A:
                bit = ((masks >> v) & 1).astype(bool)
                a_in &= bit
                a_out &= ~bit
            for v in B:
                bit = ((masks >> v) & 1).astype(bool)
                b_in &= bit
                b_out &= ~bit
            sep = (a_in & b_out) | (a_out & b_in)
            best = min(best, cut[sep].min() / (d * min(len(A), len(B))))
    return best
