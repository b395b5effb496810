import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import AB, BC, CD, DE, ca_x, ca_y, chain, instances
import oracles
from wmnca.conflict import (COLOCATION, build_conflict_graph, hop_distances, interference_degree,
                            link_distance, total_interference_degree)
from wmnca.model import ChannelAssignment, ValidationError, WmnGraph, build_link_channel_map


def cg_for(ca, x, mode="conventional"):
    g = chain()
    return build_conflict_graph(g, build_link_channel_map(g, ca, (1, 2)), x, mode)


@pytest.mark.parametrize("a, b, expected", [(AB, BC, 0), (AB, CD, 1), (AB, DE, 2), (DE, AB, 2)])
def test_link_distance_chain(a, b, expected):
    assert link_distance(chain(), a, b) == expected


def test_link_distance_disconnected():
    g = WmnGraph.from_edges(4, [(0, 1), (2, 3)])
    assert link_distance(g, (0, 1), (2, 3)) == math.inf


def test_link_distance_unknown_link():
    with pytest.raises(ValidationError):
        link_distance(chain(), AB, (0, 4))


def test_ca_x_impact_1_conflict_free():
    cg = cg_for(ca_x(), 1)
    assert cg.conflicts == frozenset()
    assert total_interference_degree(cg) == 0


def test_ca_y_impact_1_two_conflicts():
    cg = cg_for(ca_y(), 1)
    assert cg.conflicts == {(AB, BC), (CD, DE)}
    assert total_interference_degree(cg) == 2
    assert interference_degree(cg, AB) == 1


def test_ca_x_impact_2_conflicts():
    cg = cg_for(ca_x(), 2)
    assert cg.conflicts == {(AB, CD), (BC, DE)}
    assert total_interference_degree(cg) == total_interference_degree(cg_for(ca_y(), 2)) == 2


def test_interference_degree_matches_pair_enumeration():
    g = chain()
    lcm = build_link_channel_map(g, ca_y(), (1, 2))
    cg = build_conflict_graph(g, lcm, 2)
    naive = oracles.conflict_set(5, list(g.edges), [{1}, {1}, {1, 2}, {2}, {2}], 2)
    expected = sum(1 for pair in naive if BC in pair)
    assert interference_degree(cg, BC) == expected == 1


def test_dead_link_isolated():
    g = WmnGraph.from_edges(3, [(0, 1), (1, 2)])
    ca = ChannelAssignment.from_lists([{1}, {1}, {2}])
    cg = build_conflict_graph(g, build_link_channel_map(g, ca, (1, 2)), 3, COLOCATION)
    assert interference_degree(cg, (1, 2)) == 0


def test_empty_graph_tid_zero():
    g = WmnGraph.from_edges(1, [])
    cg = build_conflict_graph(g, build_link_channel_map(g, ChannelAssignment.from_lists([{1}]), (1,)), 1)
    assert total_interference_degree(cg) == 0


def test_unknown_link_degree():
    with pytest.raises(ValidationError):
        interference_degree(cg_for(ca_y(), 1), (0, 4))


@pytest.mark.parametrize("x", [0, -1])
def test_bad_impact(x):
    g = chain()
    with pytest.raises(ValidationError):
        build_conflict_graph(g, build_link_channel_map(g, ca_y(), (1, 2)), x)


def test_colocation_adds_shared_node_conflicts():
    g = chain()
    lcm = build_link_channel_map(g, ca_x(), (1, 2))
    cg = build_conflict_graph(g, lcm, 1, COLOCATION)
    assert cg.conflicts == {(AB, BC), (BC, CD), (CD, DE)}


@given(instances(), st.integers(1, 3), st.sampled_from(["conventional", "colocation"]))
def test_matches_all_pairs_oracle(inst, x, mode):
    g = inst["g"]
    lcm = build_link_channel_map(g, inst["ca"], inst["channels"])
    cg = build_conflict_graph(g, lcm, x, mode)
    naive = oracles.conflict_set(inst["n"], inst["edges"], inst["per_node"], x, mode)
    assert set(cg.conflicts) == naive
    # halving identity
    assert sum(interference_degree(cg, l) for l in cg.vertices) == 2 * len(naive)
    assert total_interference_degree(cg) == len(naive)


@given(instances(), st.integers(1, 3), st.sampled_from(["conventional", "colocation"]))
def test_tid_monotone_in_impact(inst, x, mode):
    g = inst["g"]
    lcm = build_link_channel_map(g, inst["ca"], inst["channels"])
    assert (total_interference_degree(build_conflict_graph(g, lcm, x, mode))
            <= total_interference_degree(build_conflict_graph(g, lcm, x + 1, mode)))


@given(instances(pins=True), st.integers(1, 3), st.randoms(use_true_random=False))
def test_channel_relabelling_invariance(inst, x, rnd):
    g, cs = inst["g"], inst["channels"]
    perm = dict(zip(cs, rnd.sample(cs, len(cs))))
    ca = inst["ca"]
    relabelled = ChannelAssignment.from_lists(
        [{perm[c] for c in s} for s in ca.per_node],
        {l: {perm[c] for c in s} for l, s in ca.link_channels.items()})
    cg1 = build_conflict_graph(g, build_link_channel_map(g, ca, cs), x)
    cg2 = build_conflict_graph(g, build_link_channel_map(g, relabelled, cs), x)
    assert cg1.conflicts == cg2.conflicts


@given(instances())
def test_link_distance_symmetric_and_matches_floyd(inst):
    g = inst["g"]
    fw = oracles.floyd_warshall(g.n, inst["edges"])
    dist = hop_distances(g)
    for a, b in itertools.combinations(g.links, 2):
        d = link_distance(g, a, b, dist)
        assert d == link_distance(g, b, a, dist)
        assert d == min(fw[u][v] for u in a for v in b)
        assert (d == 0) == bool(set(a) & set(b))
