"""Capped single-source mincut values inside a well-linked set.

Each round samples terminals from ``X`` at rate ``phi / 2``, adds the source
``p`` and computes isolating cuts; every isolating cut that separates ``p``
from some sampled ``x`` is a genuine ``(p, x)``-cut and may lower ``val[x]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import CapGraph, Cut, GraphError, SimpleGraph, as_capgraph
from .isolating import isolating_cuts

DEFAULT_C = 4.0


@dataclass(frozen=True)
class SamplerConfig:
    rate: float
    rounds: int
    c: float = DEFAULT_C
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rate <= 0.5:
            raise GraphError(f"sampling rate must lie in (0, 1/2], got {self.rate}")
        if self.rounds < 1:
            raise GraphError("at least one round is required")

    @classmethod
    def for_instance(cls, n: int, phi: float, c: float = DEFAULT_C, seed: int = 0) -> SamplerConfig:
        """``rate = phi / 2`` and ``rounds = ceil(c ln n / phi)``."""
        phi = min(phi, 1.0)
        rounds = max(1, math.ceil(c * math.log(max(n, 2)) / phi))
        return cls(rate=phi / 2, rounds=rounds, c=c, seed=seed)


@dataclass
class ValTable:
    source: int
    cap: int
    val: dict[int, int]
    # a cut achieving val[x], when one was found
    witness: dict[int, Cut] = field(default_factory=dict)
    rounds_run: int = 0
    maxflow_calls: int = 0

    def __getitem__(self, x: int) -> int:
        return self.val[x]

    def update(self, x: int, cut: Cut) -> None:
        if cut.value < self.val[x]:
            self.val[x] = cut.value
            self.witness[x] = cut


def round_rng(seed: int, r: int) -> np.random.Generator:
    return np.random.default_rng([seed & (2**64 - 1), r])


def single_source_mincut(
    g: CapGraph | SimpleGraph,
    X: Iterable[int],
    d: int,
    phi: float,
    p: int,
    cfg: SamplerConfig | None = None,
) -> ValTable:
    """``min(mincut(p, x), 2d)`` for every ``x`` in ``X - {p}``, correct with
    high probability when ``X`` is ``(d, phi)``-well-linked.

    Every value is the size of some ``(p, x)``-cut or the cap, so it never
    undershoots the true capped value.
    """
    g = as_capgraph(g)
    X = sorted(set(X))
    if p not in X:
        raise GraphError(f"source {p} is not in X")
    if len(X) < 2:
        raise GraphError("X needs at least two vertices")
    if cfg is None:
        cfg = SamplerConfig.for_instance(g.n, phi)
    table = ValTable(p, 2 * d, {x: 2 * d for x in X if x != p})
    others = np.array([x for x in X if x != p], dtype=np.int64)
    for r in range(cfg.rounds):
        rng = round_rng(cfg.seed, r)
        sample = others[rng.random(others.size) < cfg.rate]
        table.rounds_run += 1
        if sample.size == 0:
            continue
        terminals = [p, *sample.tolist()]
        res = isolating_cuts(g, terminals)
        table.maxflow_calls += res.maxflow_call_count
        cp = res[p]
        for x in sample.tolist():
            cx = res[x]
            if p not in cx:
                table.update(x, cx)
            if x not in cp:
                table.update(x, cp)
    return table
