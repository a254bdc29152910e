"""Text formats and graph generators.

Graphs::

    c optional comment
    p ghcut <n> <m>
    e <u> <v>            (m lines, 1-based ids)

Trees::

    t ghtree <n>
    te <u> <v> <w>       (n - 1 lines, 1-based, sorted by (u, v), u < v)
"""

from __future__ import annotations

import itertools
from typing import Any, Mapping

import numpy as np

from .graph import GraphError, SimpleGraph, build_simple_graph
from .partial_tree import PartialTree


class ParseError(GraphError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {no}: expected an integer, got {tok!r}") from None


def parse_graph(text: str) -> SimpleGraph:
    header = None
    pairs = []
    for no, tok in _lines(text):
        if tok[0] == "p":
            if header is not None:
                raise ParseError(f"line {no}: second header")
            if len(tok) != 4 or tok[1] != "ghcut":
                raise ParseError(f"line {no}: malformed header")
            header = (_int(tok[2], no), _int(tok[3], no))
        elif tok[0] == "e":
            if header is None:
                raise ParseError(f"line {no}: edge before header")
            if len(tok) != 3:
                raise ParseError(f"line {no}: malformed edge line")
            u, v = _int(tok[1], no), _int(tok[2], no)
            if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                raise ParseError(f"line {no}: vertex id out of range 1..{header[0]}")
            pairs.append((u - 1, v - 1))
        else:
            raise ParseError(f"line {no}: unknown line type {tok[0]!r}")
    if header is None:
        raise ParseError("missing header")
    n, m = header
    if n < 0 or m < 0:
        raise ParseError("negative counts in header")
    if len(pairs) != m:
        raise ParseError(f"header declares {m} edges, found {len(pairs)}")
    return build_simple_graph(n, pairs)


def emit_graph(g: SimpleGraph) -> str:
    lines = [f"p ghcut {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def emit_tree(t: PartialTree) -> str:
    n = len(t.part_of)
    edges = sorted((min(a, b), max(a, b), w) for a, b, w in t.tree_edges)
    lines = [f"t ghtree {n}"]
    lines += [f"te {u + 1} {v + 1} {int(w)}" for u, v, w in edges]
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> PartialTree:
    n = None
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "t":
            if n is not None or len(tok) != 3 or tok[1] != "ghtree":
                raise ParseError(f"line {no}: malformed tree header")
            n = _int(tok[2], no)
        elif tok[0] == "te":
            if n is None or len(tok) != 4:
                raise ParseError(f"line {no}: malformed tree edge")
            u, v, w = (_int(x, no) for x in tok[1:])
            if not (1 <= u <= n and 1 <= v <= n) or u == v or w < 0:
                raise ParseError(f"line {no}: invalid tree edge")
            edges.append((u - 1, v - 1, w))
        else:
            raise ParseError(f"line {no}: unknown line type {tok[0]!r}")
    if n is None:
        raise ParseError("missing tree header")
    if len(edges) != max(n - 1, 0):
        raise ParseError(f"a tree on {n} vertices needs {n - 1} edges, found {len(edges)}")
    t = PartialTree(frozenset(range(n)), tuple(sorted(edges)), {v: v for v in range(n)})
    try:
        t.validate()
    except GraphError as exc:
        raise ParseError(str(exc)) from exc
    return t


FAMILIES = ("gnp", "barbell", "grid", "regular-ish", "planted-clusters")


def _need(params: Mapping[str, Any], *names: str) -> list:
    missing = [k for k in names if k not in params]
    if missing:
        raise GraphError(f"missing parameters {missing}")
    return [params[k] for k in names]


def generate(family: str, params: Mapping[str, Any], seed: int = 0) -> SimpleGraph:
    """Deterministic graph for ``(family, params, seed)``."""
    rng = np.random.default_rng(seed)
    if family == "gnp":
        n, p = _need(params, "n", "p")
        n, p = int(n), float(p)
        if n < 1 or not 0 <= p <= 1:
            raise GraphError("gnp needs n >= 1 and p in [0, 1]")
        pairs = list(itertools.combinations(range(n), 2))
        keep = rng.random(len(pairs)) < p
        return SimpleGraph(n, [e for e, k in zip(pairs, keep) if k])
    if family == "barbell":
        (k,) = _need(params, "size")
        k = int(k)
        if k < 1:
            raise GraphError("barbell size must be positive")
        edges = list(itertools.combinations(range(k), 2))
        edges += [(u + k, v + k) for u, v in edges]
        edges.append((k - 1, k))
        return SimpleGraph(2 * k, edges)
    if family == "grid":
        r, c = (int(x) for x in _need(params, "rows", "cols"))
        if r < 1 or c < 1:
            raise GraphError("grid dimensions must be positive")
        idx = lambda i, j: i * c + j
        edges = [(idx(i, j), idx(i, j + 1)) for i in range(r) for j in range(c - 1)]
        edges += [(idx(i, j), idx(i + 1, j)) for i in range(r - 1) for j in range(c)]
        return SimpleGraph(r * c, edges)
    if family == "regular-ish":
        n, d = (int(x) for x in _need(params, "n", "d"))
        if n < 1 or not 0 <= d < n:
            raise GraphError("regular-ish needs 0 <= d < n")
        # configuration model; loops and repeated pairs are dropped
        stubs = rng.permutation(np.repeat(np.arange(n), d))
        edges = set()
        for u, v in zip(stubs[::2].tolist(), stubs[1::2].tolist()):
            if u != v:
                edges.add((min(u, v), max(u, v)))
        return SimpleGraph(n, edges)
    if family == "planted-clusters":
        n, k, p_in, p_out = _need(params, "n", "k", "p_in", "p_out")
        n, k, p_in, p_out = int(n), int(k), float(p_in), float(p_out)
        if n < 1 or not 1 <= k <= n:
            raise GraphError("planted-clusters needs 1 <= k <= n")
        label = np.arange(n) % k
        pairs = list(itertools.combinations(range(n), 2))
        draw = rng.random(len(pairs))
        edges = [
            (u, v)
            for (u, v), x in zip(pairs, draw)
            if x < (p_in if label[u] == label[v] else p_out)
        ]
        return SimpleGraph(n, edges)
    raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
