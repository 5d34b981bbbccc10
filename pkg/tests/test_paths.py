import random

import pytest
from hypothesis import given, settings, strategies as st

from qosroute.errors import EmptyPoolError
from qosroute.ga import validate
from qosroute.grading import NO_THRESHOLDS, QosThresholds, grade_nodes
from qosroute.oracle import all_simple_paths_dfs
from qosroute.paths import enumerate_paths
from qosroute.topology import Demand, NodeQoS, generate_random_topology

from conftest import make_topology


def dfs_paths(graded, demand, max_hops):
    adj = {v: sorted(graded.adjacency[v]) for v in graded.admitted}
    return set(all_simple_paths_dfs(adj, demand.source, demand.destination, max_hops))


def test_triangle_pool(triangle):
    d = Demand(0, 2, 1.0, 100)
    pool = enumerate_paths(grade_nodes(triangle, NO_THRESHOLDS, d), d)
    assert pool.groups == ((1, ((0, 2),)), (2, ((0, 1, 2),)))
    assert len(pool) == 2
    assert pool.dump() == "len=1: 0 2\nlen=2: 0 1 2\n"


def test_unreachable_destination_is_empty_pool():
    # node 1 is the only way to node 2 and is graded out
    qos = [NodeQoS(1e6, 0, 0), NodeQoS(1e6, 99, 0), NodeQoS(1e6, 0, 0)]
    t = make_topology(3, [(0, 1, 5), (1, 2, 5)], qos)
    d = Demand(0, 2, 1, 100)
    with pytest.raises(EmptyPoolError):
        enumerate_paths(grade_nodes(t, QosThresholds(1, 10, 1), d), d)


def test_hop_cap():
    t = generate_random_topology(8, 0.6, 4)
    d = Demand(0, 7, 1.0, 100)
    g = grade_nodes(t, NO_THRESHOLDS, d)
    pool = enumerate_paths(g, d, max_hops=2)
    assert all(len(p) - 1 <= 2 for p in pool.paths)
    assert set(pool.paths) == dfs_paths(g, d, 2)


def test_seed_one_count_matches_dfs():
    t = generate_random_topology(10, 0.4, 1)
    d = Demand(0, 9, 1.0, 100)
    g = grade_nodes(t, NO_THRESHOLDS, d)
    pool = enumerate_paths(g, d)
    assert len(pool) == len(dfs_paths(g, d, 9))


@settings(max_examples=200, deadline=None)
@given(n=st.integers(2, 9), density=st.floats(0.05, 1.0), seed=st.integers(0, 10**6))
def test_pool_matches_dfs_and_is_well_formed(n, density, seed):
    t = generate_random_topology(n, density, seed)
    src, dst = random.Random(seed).sample(range(n), 2)
    d = Demand(src, dst, 1.0, 100)
    g = grade_nodes(t, NO_THRESHOLDS, d)
    pool = enumerate_paths(g, d)
    paths = pool.paths
    assert len(set(paths)) == len(paths)
    assert set(paths) == dfs_paths(g, d, n - 1)
    lengths = [hops for hops, _ in pool.groups]
    assert lengths == sorted(set(lengths))
    for hops, group in pool.groups:
        assert list(group) == sorted(group)
        assert all(len(p) - 1 == hops for p in group)
    assert all(validate(p, g, d) for p in paths)
