"""Breadth-first enumeration of every simple source-to-destination path.

A chromosome is a plain tuple of node ids. The pool groups paths by hop
count, shortest first, and orders each group lexicographically so pool
positions (and the C1, C2, ... labels derived from them) are reproducible.

Enumerating all paths is exponential on dense graphs; ``max_hops`` bounds it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import groupby

from .errors import EmptyPoolError
from .grading import GradedSubgraph
from .topology import Demand

Chromosome = tuple


def hop_count(path) -> int:
    return len(path) - 1


@dataclass(frozen=True)
class PathPool:
    groups: tuple  # ((hops, (path, ...)), ...) ascending by hops

    @cached_property
    def paths(self) -> tuple:
        return tuple(p for _, group in self.groups for p in group)

    def __len__(self):
        return sum(len(group) for _, group in self.groups)

    @property
    def shortest(self) -> tuple:
        return self.groups[0][1] if self.groups else ()

    def dump(self) -> str:
        lines = []
        for hops, group in self.groups:
            lines.extend(f"len={hops}: " + " ".join(map(str, p)) for p in group)
        return "\n".join(lines) + ("\n" if lines else "")


def enumerate_paths(graded: GradedSubgraph, demand: Demand, max_hops: int | None = None) -> PathPool:
    """All simple paths with at most ``max_hops`` hops, grouped by length.

    Raises EmptyPoolError if the destination is unreachable within the bound.
    """
    src, dst = demand.source, demand.destination
    if max_hops is None:
        max_hops = graded.base.node_count - 1
    adjacency = graded.adjacency
    found = []
    if src in adjacency and dst in adjacency:
        frontier = deque([(src,)])
        while frontier:
            path = frontier.popleft()
            if len(path) - 1 >= max_hops:
                continue
            for nxt in sorted(adjacency[path[-1]]):
                if nxt in path:
                    continue
                if nxt == dst:
                    found.append(path + (nxt,))
                else:
                    frontier.append(path + (nxt,))
    if not found:
        raise EmptyPoolError(f"no path from {src} to {dst} within {max_hops} hops")
    found.sort(key=lambda p: (len(p), p))
    groups = tuple((hops, tuple(g)) for hops, g in groupby(found, key=hop_count))
    return PathPool(groups)
