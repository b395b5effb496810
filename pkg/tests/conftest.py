import random

import pytest
from hypothesis import strategies as st

from wmnca.model import ChannelAssignment, WmnGraph

A, B, C, D, E = range(5)
AB, BC, CD, DE = (A, B), (B, C), (C, D), (D, E)


def chain(n=5, radios=2):
    return WmnGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], radios,
                               names=[chr(ord("A") + i) for i in range(n)])


def ca_x():
    """Link channels (1, 2, 1, 2) on the A-E chain.

    B, C and D each hold both channels, so the alternation needs the links
    pinned to one channel each.
    """
    return ChannelAssignment.from_lists(
        [{1}, {1, 2}, {1, 2}, {1, 2}, {2}],
        {AB: {1}, BC: {2}, CD: {1}, DE: {2}})


def ca_y():
    """Link channels (1, 1, 2, 2); expressible with node sets alone."""
    return ChannelAssignment.from_lists([{1}, {1}, {1, 2}, {2}, {2}])


@pytest.fixture
def chain_pair():
    return chain(), (1, 2), ca_x(), ca_y()


def random_instance(rng, max_n=7, max_channels=3, max_radios=2, pins=False):
    """Random graph + channel set + valid CA; returns plain data and model objects."""
    n = rng.randint(1, max_n)
    p = rng.random()
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    channels = list(range(1, rng.randint(1, max_channels) + 1))
    radios = [rng.randint(1, max_radios) for _ in range(n)]
    per_node = []
    for r in radios:
        k = rng.randint(1, min(r, len(channels)))
        per_node.append(set(rng.sample(channels, k)))
    link_pins = {}
    if pins:
        for a, b in edges:
            common = sorted(per_node[a] & per_node[b])
            if len(common) > 1 and rng.random() < 0.3:
                link_pins[(a, b)] = set(rng.sample(common, rng.randint(1, len(common))))
    g = WmnGraph.from_edges(n, edges, radios)
    ca = ChannelAssignment.from_lists(per_node, link_pins)
    return dict(n=n, edges=edges, channels=channels, radios=radios, per_node=per_node,
                pins=link_pins, g=g, ca=ca)


@st.composite
def instances(draw, max_n=7, max_channels=3, max_radios=2, pins=False):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(random.Random(seed), max_n, max_channels, max_radios, pins)
