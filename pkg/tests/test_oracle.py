import pytest

from qosroute.errors import NoRouteError
from qosroute.ga import path_available_bandwidth
from qosroute.grading import NO_THRESHOLDS, grade_nodes
from qosroute.oracle import brute_force_optimal
from qosroute.paths import enumerate_paths
from qosroute.topology import Demand, generate_random_topology

from conftest import make_topology


def test_saturated_direct_link_forces_detour():
    t = make_topology(3, [(0, 1, 10.0), (1, 2, 10.0), (0, 2, 4.0)])
    d = Demand(0, 2, 4.0, 100)
    r = brute_force_optimal(grade_nodes(t, NO_THRESHOLDS, d), d)
    assert r.path == (0, 1, 2)
    assert r.hop_count == 2
    assert r.bottleneck_ab == 6.0


def test_direct_link_wins_when_feasible(triangle):
    d = Demand(0, 2, 4.0, 100)
    r = brute_force_optimal(grade_nodes(triangle, NO_THRESHOLDS, d), d)
    assert r.path == (0, 2)


def test_bottleneck_breaks_hop_ties():
    # two 3-hop routes 0-1-2-5 (bottleneck 10-4=6) and 0-3-4-5 (bottleneck 8-4=4)
    edges = [(0, 1, 12), (1, 2, 10), (2, 5, 11), (0, 3, 8), (3, 4, 20), (4, 5, 20)]
    t = make_topology(6, edges)
    d = Demand(0, 5, 4.0, 100)
    g = grade_nodes(t, NO_THRESHOLDS, d)
    r = brute_force_optimal(g, d)
    # exhaustive re-check over the enumerated pool
    feasible = [(len(p), -path_available_bandwidth(p, g, d), p)
                for p in enumerate_paths(g, d).paths if path_available_bandwidth(p, g, d) > 0]
    assert r.path == min(feasible)[2] == (0, 1, 2, 5)
    assert r.bottleneck_ab == 6.0


def test_no_feasible_route():
    t = make_topology(3, [(0, 1, 1.0), (1, 2, 10.0)])
    d = Demand(0, 2, 4.0, 100)
    with pytest.raises(NoRouteError):
        brute_force_optimal(grade_nodes(t, NO_THRESHOLDS, d), d)


def test_oracle_route_is_optimal_and_stable():
    for seed in range(1, 40):
        t = generate_random_topology(9, 0.35, seed)
        d = Demand(0, 8, 4.0e6, 100)
        g = grade_nodes(t, NO_THRESHOLDS, d)
        feasible = [p for p in enumerate_paths(g, d).paths if path_available_bandwidth(p, g, d) > 0]
        if not feasible:
            with pytest.raises(NoRouteError):
                brute_force_optimal(g, d)
            continue
        r = brute_force_optimal(g, d)
        assert r.path in feasible
        assert r.hop_count == min(len(p) - 1 for p in feasible)
        assert brute_force_optimal(g, d) == r
