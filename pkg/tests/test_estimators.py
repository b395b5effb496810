import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import AB, BC, CD, DE, ca_x, ca_y, chain, instances
import oracles
from wmnca.estimators import (XLinkSet, cdal_cost, channel_link_counts, cxls_wt, enumerate_xls,
                              xls_weight)
from wmnca.model import ChannelAssignment, LinkChannelMap, ValidationError, WmnGraph, build_link_channel_map


def lcm_of(*sets):
    links = [(i, i + 1) for i in range(len(sets))]
    return links, LinkChannelMap({l: frozenset(s) for l, s in zip(links, sets)})


def test_enumerate_chain_x2():
    sets = enumerate_xls(chain(), 2)
    assert [s.links for s in sets] == [(AB, BC), (BC, CD), (CD, DE)]


def test_enumerate_chain_x1_is_link_set():
    assert [s.links[0] for s in enumerate_xls(chain(), 1)] == [AB, BC, CD, DE]


@pytest.mark.parametrize("m, x", [(4, 1), (4, 2), (4, 4), (6, 3), (3, 5)])
def test_path_graph_count(m, x):
    g = chain(m + 1)
    assert len(enumerate_xls(g, x)) == max(m - x + 1, 0)


def test_triangle_x2():
    g = WmnGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    sets = enumerate_xls(g, 2)
    assert len(sets) == 3
    assert {s.nodes for s in sets} == oracles.simple_paths(3, list(g.edges), 2)


def test_enumerate_rejects_bad_impact():
    with pytest.raises(ValidationError):
        enumerate_xls(chain(), 0)


def test_xls_canonical_orientation():
    assert XLinkSet((3, 2, 1)).nodes == (1, 2, 3)
    with pytest.raises(ValidationError):
        XLinkSet((1, 2, 1))


@given(instances(), st.integers(1, 4))
def test_enumeration_matches_permutation_oracle(inst, x):
    sets = enumerate_xls(inst["g"], x)
    nodes = [s.nodes for s in sets]
    assert len(nodes) == len(set(nodes))
    assert set(nodes) == oracles.simple_paths(inst["n"], inst["edges"], x)
    for s in sets:
        assert len(s.links) == x


@pytest.mark.parametrize("sets, expected", [
    (({1}, {2}), 2),
    (({1}, {1}), 0),
    (({1, 2}, {1, 2}), 1),
    (({1}, {1}, {2}), 1),
    (({1}, {2}, {3}), 3),
])
def test_xls_weight_cases(sets, expected):
    links, lcm = lcm_of(*sets)
    w = xls_weight(links, lcm)
    assert w.value == expected and not w.sampled and not w.dead


def test_xls_weight_mixed_pattern():
    # combinations of ({1,2},{1},{2}): (1,1,2) -> 1, (2,1,2) -> 1
    links, lcm = lcm_of({1, 2}, {1}, {2})
    assert xls_weight(links, lcm).value == 1


def test_xls_weight_dead_link():
    links, lcm = lcm_of({1}, set())
    w = xls_weight(links, lcm)
    assert w.value == 0 and w.dead


def test_xls_weight_sampled_above_cap():
    links, lcm = lcm_of({1, 2, 3}, {1, 2, 3}, {1, 2, 3})
    exact = xls_weight(links, lcm)
    sampled = xls_weight(links, lcm, cap=5)
    assert sampled.sampled and not exact.sampled
    assert abs(float(sampled.value) - float(exact.value)) < 0.05
    assert xls_weight(links, lcm, cap=5) == sampled


def test_cxls_chain_pair():
    g = chain()
    rx = cxls_wt(g, ca_x(), (1, 2), 2)
    ry = cxls_wt(g, ca_y(), (1, 2), 2)
    assert [w.value for w in rx.per_set.values()] == [2, 2, 2]
    assert [w.value for w in ry.per_set.values()] == [0, 2, 0]
    assert rx.total == 6 and ry.total == 2


def test_cxls_no_edges_warns():
    g = WmnGraph.from_edges(3, [])
    res = cxls_wt(g, ChannelAssignment.from_lists([{1}] * 3), (1,), 2)
    assert res.total == 0 and res.warnings


@given(instances(pins=True), st.integers(1, 3))
def test_cxls_matches_naive(inst, x):
    res = cxls_wt(inst["g"], inst["ca"], inst["channels"], x)
    naive = oracles.cxls(inst["n"], inst["edges"], inst["per_node"], x, inst["pins"])
    assert res.total == naive
    assert res.total == sum(w.value for w in res.per_set.values())
    for w in res.per_set.values():
        assert 0 <= w.value <= x
    assert 0 <= res.total <= x * len(res.per_set)


@given(instances(pins=True), st.integers(1, 3), st.randoms(use_true_random=False))
def test_relabelling_invariance(inst, x, rnd):
    g, cs, ca = inst["g"], inst["channels"], inst["ca"]
    perm = dict(zip(cs, rnd.sample(cs, len(cs))))
    other = ChannelAssignment.from_lists(
        [{perm[c] for c in s} for s in ca.per_node],
        {l: {perm[c] for c in s} for l, s in ca.link_channels.items()})
    r1, r2 = cxls_wt(g, ca, cs, x), cxls_wt(g, other, cs, x)
    assert r1.total == r2.total
    assert [w.value for w in r1.per_set.values()] == [w.value for w in r2.per_set.values()]
    c1 = cdal_cost(g, build_link_channel_map(g, ca, cs), cs)
    c2 = cdal_cost(g, build_link_channel_map(g, other, cs), cs)
    assert c1 == pytest.approx(c2, abs=1e-12)


def test_extremes():
    g = chain(6)
    # channels 1,2,3 repeating: every 3-link path uses three distinct singletons
    per_node = [{1}, {1, 2}, {2, 3}, {3, 1}, {1, 2}, {2}]
    pins = {(0, 1): {1}, (1, 2): {2}, (2, 3): {3}, (3, 4): {1}, (4, 5): {2}}
    ca = ChannelAssignment.from_lists(per_node, pins)
    res = cxls_wt(g, ca, (1, 2, 3), 3)
    assert res.total == 3 * len(res.per_set)
    single = ChannelAssignment.from_lists([{1}] * 6)
    assert cxls_wt(g, single, (1, 2, 3), 3).total == 0


def test_cdal_chain_pair_equal():
    g = chain()
    lx = build_link_channel_map(g, ca_x(), (1, 2))
    ly = build_link_channel_map(g, ca_y(), (1, 2))
    assert channel_link_counts(lx, (1, 2)) == {1: 2, 2: 2}
    assert channel_link_counts(ly, (1, 2)) == {1: 2, 2: 2}
    assert cdal_cost(g, lx, (1, 2)) == cdal_cost(g, ly, (1, 2)) == 0


def test_cdal_all_on_one_channel():
    g = chain(radios=1)
    lcm = build_link_channel_map(g, ChannelAssignment.from_lists([{1}] * 5), (1, 2))
    # counts (4, 0): mean 2, population variance 4
    assert cdal_cost(g, lcm, (1, 2)) == 2


def test_cdal_split_link():
    g = WmnGraph.from_edges(2, [(0, 1)], radios=2)
    lcm = build_link_channel_map(g, ChannelAssignment.from_lists([{1, 2}, {1, 2}]), (1, 2))
    assert channel_link_counts(lcm, (1, 2)) == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert cdal_cost(g, lcm, (1, 2)) == 0


def test_cdal_ignores_dead_links():
    g = WmnGraph.from_edges(2, [(0, 1)])
    lcm = build_link_channel_map(g, ChannelAssignment.from_lists([{1}, {2}]), (1, 2))
    assert channel_link_counts(lcm, (1, 2)) == {1: 0, 2: 0}


def test_cdal_empty_channel_set():
    g = WmnGraph.from_edges(1, [])
    with pytest.raises(ValidationError):
        cdal_cost(g, LinkChannelMap({}), ())
