"""Run configuration and statistics for the fast pipeline."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .partial_tree import RETRY_CAP, PartialTreeStats
from .sstmincut import DEFAULT_C
from .wellinked import EXACT_LIMIT


@dataclass(frozen=True)
class GHConfig:
    seed: int = 0
    # rounds constant of the single-source sampler
    rounds_c: float = DEFAULT_C
    backend: str = "auto"
    exact_limit: int = EXACT_LIMIT
    retry_cap: int = RETRY_CAP
    jobs: int = 1
    # re-run with a fresh seed when the final all-pairs check fails
    verify: bool = False
    max_attempts: int = 3

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ClusterRecord:
    d: int
    cluster: int
    terminal: int
    size: int
    phi: float
    rounds: int
    ssc_calls: int
    ssc_flows_max: int
    swap_flows: int
    total_flows: int

    @property
    def budget(self) -> int:
        t = self.size
        return self.rounds * ((t - 1).bit_length() + t) + 2 if t > 1 else 2

    @property
    def within_budget(self) -> bool:
        return self.ssc_flows_max + self.swap_flows <= self.budget


@dataclass
class EdgeBoundRecord:
    d: int
    n: int
    m: int
    sum_n: int
    sum_m: int
    tree_weight: int

    @property
    def ok(self) -> bool:
        return (
            self.sum_n <= 3 * self.n
            and self.sum_m <= min(3 * self.m, 5 * self.n * self.d)
            and self.tree_weight <= min(2 * self.m, 2 * self.n * self.d)
        )


@dataclass
class RunStats:
    levels: list[int] = field(default_factory=list)
    clusters: list[ClusterRecord] = field(default_factory=list)
    edge_bounds: list[EdgeBoundRecord] = field(default_factory=list)
    tree: PartialTreeStats = field(default_factory=PartialTreeStats)
    maxflow_calls: int = 0
    attempts: int = 1
