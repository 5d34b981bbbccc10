"""Network graph model, text format, seeded generator and link bandwidth.

Links are undirected and carry a single static utility (bits/second).
Nodes carry the QoS attributes used for grading: bandwidth (bits/second),
jitter (milliseconds) and loss (fraction of packets).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import TopologyParseError, TopologyValidationError


@dataclass(frozen=True)
class NodeQoS:
    bandwidth: float
    jitter: float
    loss: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError(f"node bandwidth must be > 0, got {self.bandwidth}")
        if not self.jitter >= 0:
            raise ValueError(f"node jitter must be >= 0, got {self.jitter}")
        if not 0 <= self.loss <= 1:
            raise ValueError(f"node loss must be in [0, 1], got {self.loss}")


@dataclass(frozen=True)
class Link:
    """Undirected link; endpoints are stored with ``u < v``."""

    u: int
    v: int
    utility: float

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"self-loop on node {self.u}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)
        if not self.utility >= 0:
            raise ValueError(f"link utility must be >= 0, got {self.utility}")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Demand:
    """A routing request: move ``message_size`` bits at ``required_bandwidth``."""

    source: int
    destination: int
    required_bandwidth: float
    message_size: float

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError("demand source and destination must differ")
        if self.source < 0 or self.destination < 0:
            raise ValueError("node ids are non-negative")
        if not self.required_bandwidth > 0:
            raise ValueError("required bandwidth must be > 0")
        if not self.message_size > 0:
            raise ValueError("message size must be > 0")

    def check_against(self, topology: Topology) -> None:
        n = len(topology.nodes)
        for name, node in (("source", self.source), ("destination", self.destination)):
            if not 0 <= node < n:
                raise ValueError(f"demand {name} {node} is not a node of a {n}-node topology")


@dataclass(frozen=True)
class Topology:
    nodes: tuple[NodeQoS, ...]
    links: tuple[Link, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        n = len(self.nodes)
        if n < 1:
            raise TopologyValidationError("topology has no nodes")
        index = {}
        for link in self.links:
            if link.v >= n:
                raise TopologyValidationError(f"link {link.u}-{link.v} names a missing node")
            if link.endpoints in index:
                raise TopologyValidationError(f"duplicate link {link.u}-{link.v}")
            index[link.endpoints] = link
        object.__setattr__(self, "_index", index)
        if not is_connected(n, index.keys()):
            raise TopologyValidationError("graph is not connected")

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs = [set() for _ in self.nodes]
        for link in self.links:
            nbrs[link.u].add(link.v)
            nbrs[link.v].add(link.u)
        return tuple(frozenset(s) for s in nbrs)

    def link(self, a: int, b: int) -> Link | None:
        key = (a, b) if a < b else (b, a)
        return self._index.get(key)

    def has_link(self, a: int, b: int) -> bool:
        return self.link(a, b) is not None


def is_connected(n, edges) -> bool:
    """BFS reachability from node 0 over an undirected edge list."""
    nbrs = [[] for _ in range(n)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


def available_bandwidth(link: Link, demand: Demand) -> float:
    """Link utility minus the demand's required bandwidth; may be negative."""
    return link.utility - demand.required_bandwidth


def link_participates(link: Link, demand: Demand) -> bool:
    return available_bandwidth(link, demand) > 0


# --- text format -----------------------------------------------------------

def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        yield lineno, stripped.split()


def _number(token, lineno, what):
    try:
        value = float(token)
    except ValueError:
        raise TopologyParseError(f"{what}: {token!r} is not a decimal literal", lineno) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise TopologyParseError(f"{what}: {token!r} is not finite", lineno)
    return value


def _integer(token, lineno, what):
    try:
        return int(token)
    except ValueError:
        raise TopologyParseError(f"{what}: {token!r} is not an integer", lineno) from None


def load_topology(text: str) -> Topology:
    """Parse topology text; node order is preserved from the file."""
    lines = list(_lines(text))
    pos = 0

    def take(keyword, arity):
        nonlocal pos
        if pos >= len(lines):
            raise TopologyParseError(f"unexpected end of file, expected '{keyword}'")
        lineno, fields = lines[pos]
        if fields[0] != keyword:
            raise TopologyParseError(f"expected '{keyword}', got '{fields[0]}'", lineno)
        if len(fields) != arity + 1:
            raise TopologyParseError(
                f"'{keyword}' takes {arity} field(s), got {len(fields) - 1}", lineno
            )
        pos += 1
        return lineno, fields[1:]

    lineno, (count,) = take("nodes", 1)
    n = _integer(count, lineno, "node count")
    if n < 1:
        raise TopologyParseError("node count must be >= 1", lineno)

    nodes = []
    for expected in range(n):
        lineno, (ident, bw, jitter, loss) = take("node", 4)
        if _integer(ident, lineno, "node id") != expected:
            raise TopologyParseError(f"node ids must be 0..{n - 1} in order; expected {expected}", lineno)
        try:
            nodes.append(NodeQoS(
                _number(bw, lineno, "bandwidth"),
                _number(jitter, lineno, "jitter"),
                _number(loss, lineno, "loss"),
            ))
        except ValueError as exc:
            if isinstance(exc, TopologyParseError):
                raise
            raise TopologyParseError(str(exc), lineno) from None

    lineno, (count,) = take("links", 1)
    m = _integer(count, lineno, "link count")
    if m < 0:
        raise TopologyParseError("link count must be >= 0", lineno)

    links = []
    seen = set()
    for _ in range(m):
        lineno, (a, b, utility) = take("link", 3)
        u, v = _integer(a, lineno, "endpoint"), _integer(b, lineno, "endpoint")
        if u == v:
            raise TopologyParseError(f"self-loop on node {u}", lineno)
        for endpoint in (u, v):
            if not 0 <= endpoint < n:
                raise TopologyParseError(f"link endpoint {endpoint} is not a node", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise TopologyParseError(f"duplicate link {key[0]}-{key[1]}", lineno)
        seen.add(key)
        try:
            links.append(Link(u, v, _number(utility, lineno, "utility")))
        except ValueError as exc:
            if isinstance(exc, TopologyParseError):
                raise
            raise TopologyParseError(str(exc), lineno) from None

    if pos != len(lines):
        raise TopologyParseError("trailing content after link list", lines[pos][0])
    if not is_connected(n, seen):
        raise TopologyValidationError("graph is not connected", lineno)
    return Topology(tuple(nodes), tuple(links))


def dump_topology(topology: Topology) -> str:
    """Serialize to the text format; ``repr`` of a float round-trips exactly."""
    out = [f"nodes {topology.node_count}"]
    for i, q in enumerate(topology.nodes):
        out.append(f"node {i} {q.bandwidth!r} {q.jitter!r} {q.loss!r}")
    out.append(f"links {len(topology.links)}")
    for link in topology.links:
        out.append(f"link {link.u} {link.v} {link.utility!r}")
    return "\n".join(out) + "\n"


def canonical_form(topology: Topology) -> str:
    """Serialization with links sorted; equal graphs give equal text."""
    ordered = Topology(topology.nodes, tuple(sorted(topology.links, key=lambda l: l.endpoints)))
    return dump_topology(ordered)


# --- generator -------------------------------------------------------------

@dataclass(frozen=True)
class TopologyRanges:
    """Uniform sampling ranges for generated attributes."""

    bandwidth: tuple[float, float] = (1.0e6, 10.0e6)
    jitter: tuple[float, float] = (0.0, 50.0)
    loss: tuple[float, float] = (0.0, 0.1)
    utility: tuple[float, float] = (1.0e6, 10.0e6)


def generate_random_topology(n: int, density: float, seed: int,
                             ranges: TopologyRanges = TopologyRanges()) -> Topology:
    """Random spanning tree plus each remaining node pair with probability ``density``."""
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    rng = random.Random(seed)

    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in edges and rng.random() < density:
                edges.add((a, b))

    nodes = tuple(
        NodeQoS(rng.uniform(*ranges.bandwidth), rng.uniform(*ranges.jitter), rng.uniform(*ranges.loss))
        for _ in range(n)
    )
    links = tuple(Link(a, b, rng.uniform(*ranges.utility)) for a, b in sorted(edges))
    return Topology(nodes, links)
