"""Exhaustive reference search used to check the GA on small graphs.

Deliberately shares no traversal code with ``paths``: recursive depth-first
search over a plain adjacency map.
"""

from __future__ import annotations

from .errors import NoRouteError
from .ga import RouteResult
from .topology import available_bandwidth


def all_simple_paths_dfs(adjacency, source, target, max_hops):
    out = []
    path = [source]
    on_path = {source}

    def walk(node):
        if node == target:
            out.append(tuple(path))
            return
        if len(path) - 1 == max_hops:
            return
        for nxt in adjacency[node]:
            if nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                walk(nxt)
                path.pop()
                on_path.discard(nxt)

    if source in adjacency and target in adjacency:
        walk(source)
    return out


def brute_force_optimal(graded, demand, max_hops=None) -> RouteResult:
    """Fewest-hop route whose every link has positive available bandwidth.

    Ties go to the widest bottleneck, then the lexicographically smallest path.
    """
    if max_hops is None:
        max_hops = graded.base.node_count - 1
    adjacency = {v: [] for v in graded.admitted}
    surplus = {}
    for link in graded.links:
        adjacency[link.u].append(link.v)
        adjacency[link.v].append(link.u)
        surplus[(link.u, link.v)] = surplus[(link.v, link.u)] = available_bandwidth(link, demand)

    best = None
    for path in all_simple_paths_dfs(adjacency, demand.source, demand.destination, max_hops):
        width = min(surplus[e] for e in zip(path, path[1:]))
        if width <= 0:
            continue
        key = (len(path), -width, path)
        if best is None or key < best[0]:
            best = (key, path, width)
    if best is None:
        raise NoRouteError(f"no feasible route from {demand.source} to {demand.destination}")
    _, path, width = best
    return RouteResult(path, len(path) - 1, width)
