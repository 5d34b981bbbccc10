"""QoS grading: keep only nodes whose delay, jitter and loss are below thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .topology import Demand, Link, Topology


@dataclass(frozen=True)
class QosThresholds:
    delay_max: float  # seconds
    jitter_max: float  # milliseconds
    loss_max: float  # fraction

    def __post_init__(self):
        if not (self.delay_max > 0 and self.jitter_max > 0 and self.loss_max > 0):
            raise ValueError("all QoS thresholds must be strictly positive")
        if self.loss_max > 1:
            raise ValueError("loss_max must be <= 1")


NO_THRESHOLDS = QosThresholds(float("inf"), float("inf"), 1.0)


def node_delay(message_size: float, node_bandwidth: float) -> float:
    """Per-node delay in seconds; propagation and processing delay are ignored."""
    if not node_bandwidth > 0:
        raise ValueError(f"node bandwidth must be > 0, got {node_bandwidth}")
    return message_size / node_bandwidth


@dataclass(frozen=True)
class GradedSubgraph:
    base: Topology
    admitted: frozenset
    links: tuple[Link, ...]

    @cached_property
    def adjacency(self) -> dict:
        nbrs = {v: set() for v in self.admitted}
        for link in self.links:
            nbrs[link.u].add(link.v)
            nbrs[link.v].add(link.u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def has_link(self, a: int, b: int) -> bool:
        return a in self.admitted and b in self.adjacency[a]

    def link(self, a: int, b: int) -> Link | None:
        return self.base.link(a, b) if self.has_link(a, b) else None


def passes(topology: Topology, node: int, thresholds: QosThresholds, demand: Demand) -> bool:
    q = topology.nodes[node]
    return (
        node_delay(demand.message_size, q.bandwidth) < thresholds.delay_max
        and q.jitter < thresholds.jitter_max
        and q.loss < thresholds.loss_max
    )


def grade_nodes(topology: Topology, thresholds: QosThresholds, demand: Demand) -> GradedSubgraph:
    """Induced subgraph on nodes passing all three thresholds.

    The demand's endpoints are always admitted: a route cannot exist without them.
    """
    demand.check_against(topology)
    admitted = {v for v in range(topology.node_count) if passes(topology, v, thresholds, demand)}
    admitted |= {demand.source, demand.destination}
    links = tuple(l for l in topology.links if l.u in admitted and l.v in admitted)
    return GradedSubgraph(topology, frozenset(admitted), links)
