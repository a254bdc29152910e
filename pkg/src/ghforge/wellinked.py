"""Partitioning high-degree vertices into well-linked sets.

A set ``X`` is ``(d, phi)``-well-linked when every member has degree at
least ``d`` and every bipartition ``(A, B)`` of ``X`` has
``mincut(A, B) >= d * phi * min(|A|, |B|)``.

The clusters come from a demand-weighted expander decomposition.  Two
decomposers are provided: an exact one that finds the sparsest cut of a
piece by enumerating every side (pieces of at most ``exact_limit``
vertices) and a spectral sweep with local search for larger pieces.  Both
report, per cluster, an expansion value they have actually certified.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import CapGraph, GraphError, SimpleGraph, as_capgraph
from .maxflow import set_mincut

log = logging.getLogger(__name__)

EXACT_LIMIT = 20
VERIFY_CAP = 12
# slack for comparing float expansion certificates against integer cuts
_EPS = 1e-9


class WellLinkedError(GraphError):
    pass


class VerificationInfeasible(WellLinkedError):
    """Exhaustive verification was requested above the size cap."""


@dataclass(frozen=True)
class WellLinkedCluster:
    members: frozenset[int]
    d: int
    phi: float
    # the decomposition cluster the members were taken from
    region: frozenset[int] = frozenset()


@dataclass(frozen=True)
class DecompositionResult:
    clusters: tuple[frozenset[int], ...]
    inter_cluster_edges: int
    achieved_phi: float
    cluster_phi: tuple[float, ...]
    budget: float = 1.0
    backend: str = "auto"


def _check_demands(n: int, demands: Sequence[float]) -> np.ndarray:
    dem = np.asarray(demands, dtype=float)
    if dem.shape != (n,):
        raise WellLinkedError(f"expected {n} demands, got shape {dem.shape}")
    if (dem < 0).any():
        raise WellLinkedError("demands must be nonnegative")
    return dem


class _Piece:
    """Induced subgraph on ``verts`` with local indexing."""

    def __init__(self, g: CapGraph, verts: Sequence[int], dem: np.ndarray):
        self.verts = list(verts)
        index = {v: i for i, v in enumerate(self.verts)}
        self.edges = [
            (index[u], index[v], c)
            for u, v, c in g.edges
            if u in index and v in index
        ]
        self.dem = dem[self.verts]

    def components(self) -> list[list[int]]:
        k = len(self.verts)
        adj: list[list[int]] = [[] for _ in range(k)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = [False] * k
        comps = []
        for s in range(k):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


def _exact_sparsest(piece: _Piece) -> tuple[float, np.ndarray | None]:
    """Minimum of ``cut / min(d(S), d(W - S))`` over sides with positive
    demand on both sides, and a minimizing side as a boolean mask."""
    k = len(piece.verts)
    total = piece.dem.sum()
    if k < 2 or np.count_nonzero(piece.dem) < 2:
        return math.inf, None
    masks = np.arange(1, 1 << (k - 1), dtype=np.int64)
    bits = [((masks >> i) & 1).astype(np.int8) for i in range(k - 1)]
    bits.append(np.zeros(masks.size, dtype=np.int8))
    cut = np.zeros(masks.size, dtype=np.int64)
    for u, v, c in piece.edges:
        cut += c * (bits[u] ^ bits[v])
    dem_s = np.zeros(masks.size, dtype=float)
    for i in range(k):
        if piece.dem[i]:
            dem_s += piece.dem[i] * bits[i]
    low = np.minimum(dem_s, total - dem_s)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(low > 0, cut / np.where(low > 0, low, 1.0), np.inf)
    j = int(np.argmin(ratio))
    side = np.array([bool((masks[j] >> i) & 1) for i in range(k - 1)] + [False])
    return float(ratio[j]), side


def _ratio(piece: _Piece, side: np.ndarray) -> float:
    total = piece.dem.sum()
    ds = piece.dem[side].sum()
    low = min(ds, total - ds)
    if low <= 0:
        return math.inf
    cut = sum(c for u, v, c in piece.edges if side[u] != side[v])
    return cut / low


def _spectral_sparse_cut(piece: _Piece) -> tuple[float, np.ndarray | None, float]:
    """Sweep cut over the Fiedler vector refined by single-vertex moves.

    Returns ``(ratio, side, certificate)`` where ``certificate`` is the
    lower bound ``lambda2 / (2 * max demand)`` on the expansion of the piece.
    """
    k = len(piece.verts)
    lap = np.zeros((k, k))
    for u, v, c in piece.edges:
        lap[u, v] -= c
        lap[v, u] -= c
        lap[u, u] += c
        lap[v, v] += c
    vals, vecs = np.linalg.eigh(lap)
    lam2 = max(float(vals[1]), 0.0)
    dmax = float(piece.dem.max())
    certificate = lam2 * (1 - 1e-9) / (2 * dmax) if dmax > 0 else math.inf

    order = np.argsort(vecs[:, 1], kind="stable")
    best, best_side = math.inf, None
    side = np.zeros(k, dtype=bool)
    for j in range(k - 1):
        side[order[j]] = True
        r = _ratio(piece, side)
        if r < best:
            best, best_side = r, side.copy()
    if best_side is None:
        return best, None, certificate
    improved = True
    rounds = 0
    while improved and rounds < 4 * k:
        improved = False
        rounds += 1
        for v in range(k):
            trial = best_side.copy()
            trial[v] = not trial[v]
            if not trial.any() or trial.all():
                continue
            r = _ratio(piece, trial)
            if r < best - _EPS:
                best, best_side, improved = r, trial, True
    return best, best_side, certificate


def expander_decompose(
    g: SimpleGraph | CapGraph,
    demands: Sequence[float],
    phi: float,
    backend: str = "auto",
    exact_limit: int = EXACT_LIMIT,
) -> DecompositionResult:
    """Split ``V`` into clusters whose induced graphs are ``(phi, demand)``-
    expanders, recursively cutting along sparse cuts.

    ``backend`` is ``"exact"``, ``"heuristic"`` or ``"auto"`` (exact for
    pieces of at most ``exact_limit`` vertices).  The exact backend refuses
    larger pieces.
    """
    if not 0 < phi <= 1:
        raise WellLinkedError(f"phi must lie in (0, 1], got {phi}")
    if backend not in ("auto", "exact", "heuristic"):
        raise WellLinkedError(f"unknown backend {backend!r}")
    cg = as_capgraph(g)
    dem = _check_demands(cg.n, demands)
    pending: list[list[int]] = [list(range(cg.n))] if cg.n else []
    clusters: list[frozenset[int]] = []
    certified: list[float] = []
    while pending:
        verts = pending.pop()
        piece = _Piece(cg, verts, dem)
        comps = piece.components()
        if len(comps) > 1:
            for comp in comps:
                pending.append([piece.verts[i] for i in comp])
            continue
        if np.count_nonzero(piece.dem) < 2:
            clusters.append(frozenset(verts))
            certified.append(math.inf)
            continue
        use_exact = backend == "exact" or (backend == "auto" and len(verts) <= exact_limit)
        if use_exact:
            if len(verts) > max(exact_limit, 1) and backend == "exact":
                raise WellLinkedError(
                    f"exact backend limited to {exact_limit} vertices, piece has {len(verts)}"
                )
            ratio, side = _exact_sparsest(piece)
            certificate = ratio
        else:
            ratio, side, certificate = _spectral_sparse_cut(piece)
        if side is not None and ratio < phi:
            pending.append([v for i, v in enumerate(piece.verts) if side[i]])
            pending.append([v for i, v in enumerate(piece.verts) if not side[i]])
            continue
        if certificate < phi:
            log.info(
                "piece of %d vertices certified only to %.4g < %.4g", len(verts), certificate, phi
            )
        clusters.append(frozenset(verts))
        certified.append(certificate)
    order = sorted(range(len(clusters)), key=lambda i: min(clusters[i]))
    clusters = [clusters[i] for i in order]
    certified = [certified[i] for i in order]
    owner = [0] * cg.n
    for i, c in enumerate(clusters):
        for v in c:
            owner[v] = i
    crossing = sum(c for u, v, c in cg.edges if owner[u] != owner[v])
    finite = [x for x in certified if math.isfinite(x)]
    return DecompositionResult(
        clusters=tuple(clusters),
        inter_cluster_edges=crossing,
        achieved_phi=min(finite) if finite else 1.0,
        cluster_phi=tuple(certified),
        budget=1.0,
        backend=backend,
    )


def boundary_scores(
    g: SimpleGraph | CapGraph, clusters: Sequence[frozenset[int]], U: Iterable[int]
) -> dict[int, float]:
    """``x(v) = |E(V_i, V - V_i)| / |U & V_i|`` for each ``v`` in ``U``."""
    cg = as_capgraph(g)
    U = frozenset(U)
    owner = {}
    for i, c in enumerate(clusters):
        for v in c:
            owner[v] = i
    boundary = [0] * len(clusters)
    for u, v, c in cg.edges:
        if owner[u] != owner[v]:
            boundary[owner[u]] += c
            boundary[owner[v]] += c
    scores = {}
    for i, c in enumerate(clusters):
        inside = c & U
        for v in inside:
            scores[v] = boundary[i] / len(inside)
    return scores


def wellinked_subsets(
    g: SimpleGraph,
    U: Iterable[int],
    d: int,
    backend: str = "auto",
    exact_limit: int = EXACT_LIMIT,
    budget: float = 1.0,
) -> list[WellLinkedCluster]:
    """Disjoint well-linked subsets of ``U`` covering at least half of it.

    Decomposes with demand ``d`` on ``U`` at ``phi = 1 / (8 * budget)``;
    while the crossing edges exceed ``budget * phi * d * |U|`` the
    decomposition is redone at half the ``phi``.  Clusters whose boundary
    score ``x(v)`` is at most ``d / 2`` are kept.
    """
    U = frozenset(U)
    if not U:
        return []
    if d < 1:
        raise WellLinkedError("degree threshold must be positive")
    low = [u for u in U if g.degree(u) < d]
    if low:
        raise WellLinkedError(f"vertices {sorted(low)[:5]} have degree below {d}")
    demands = [d if v in U else 0 for v in range(g.n)]
    phi = 1.0 / (8 * budget)
    while True:
        dec = expander_decompose(g, demands, phi, backend, exact_limit)
        if dec.inter_cluster_edges <= budget * phi * d * len(U):
            break
        log.info("crossing %d over budget at phi=%.4g; halving", dec.inter_cluster_edges, phi)
        phi /= 2
    scores = boundary_scores(g, dec.clusters, U)
    out = []
    for region, cert in zip(dec.clusters, dec.cluster_phi):
        members = region & U
        if not members or scores[min(members)] > d / 2:
            continue
        if 2 * len(region) < d:
            # cannot happen for a simple graph: some member keeps d/2
            # neighbours inside the region
            raise WellLinkedError(f"cluster of {len(region)} vertices is smaller than d/2 = {d / 2}")
        out.append(WellLinkedCluster(members, d, min(1.0, cert), region))
    return out


def partition_high_degree(
    g: SimpleGraph,
    d: int,
    backend: str = "auto",
    exact_limit: int = EXACT_LIMIT,
) -> list[WellLinkedCluster]:
    """Partition of the vertices with degree at least ``d`` into well-linked
    clusters, peeling at least half of the remainder per round."""
    U = set(g.high_degree(d))
    clusters: list[WellLinkedCluster] = []
    while U:
        found = wellinked_subsets(g, U, d, backend, exact_limit)
        if not found:
            raise WellLinkedError("no progress in well-linked partitioning")
        for c in found:
            U -= c.members
        clusters.extend(found)
    return clusters


def verify_wellinked(
    g: SimpleGraph | CapGraph,
    X: Iterable[int],
    d: int,
    phi: float,
    cap: int = VERIFY_CAP,
) -> bool:
    """Exhaustively check the well-linked definition with one set-vs-set
    mincut per bipartition of ``X``."""
    X = sorted(set(X))
    if len(X) > cap:
        raise VerificationInfeasible(f"|X| = {len(X)} exceeds the verification cap {cap}")
    cg = as_capgraph(g)
    if any(cg.weighted_degree(v) < d for v in X):
        return False
    first, rest = X[0], X[1:]
    for r in range(0, len(rest)):
        for extra in combinations(rest, r):
            a = (first, *extra)
            b = [v for v in rest if v not in extra]
            need = d * phi * min(len(a), len(b))
            if set_mincut(cg, a, b).value + _EPS < need:
                return False
    return True


def wellinked_phi(g: SimpleGraph | CapGraph, X: Iterable[int], d: int, cap: int = VERIFY_CAP) -> float:
    """Largest ``phi`` for which ``X`` is ``(d, phi)``-well-linked (degree
    condition aside); ``inf`` for a singleton."""
    X = sorted(set(X))
    if len(X) > cap:
        raise VerificationInfeasible(f"|X| = {len(X)} exceeds the verification cap {cap}")
    cg = as_capgraph(g)
    best = math.inf
    first, rest = X[0], X[1:]
    for r in range(0, len(rest)):
        for extra in combinations(rest, r):
            a = (first, *extra)
            b = [v for v in rest if v not in extra]
            best = min(best, set_mincut(cg, a, b).value / (d * min(len(a), len(b))))
    return best
