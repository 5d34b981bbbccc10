import random

import pytest

from qosroute.cli import demo_topology_text
from qosroute.topology import Link, NodeQoS, Topology, load_topology

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_topology(n, edges, qos=None):
    """Topology from ``(u, v, utility)`` triples; nodes get benign QoS unless given."""
    nodes = qos or [NodeQoS(1.0e7, 1.0, 0.0)] * n
    return Topology(tuple(nodes), tuple(Link(u, v, w) for u, v, w in edges))


@pytest.fixture
def demo():
    return load_topology(demo_topology_text())


@pytest.fixture
def triangle():
    # s=0, a=1, d=2
    return make_topology(3, [(0, 1, 10.0), (1, 2, 10.0), (0, 2, 10.0)])


@pytest.fixture
def rng():
    return random.Random(1234)
