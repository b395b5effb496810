"""Link conflict graphs, interference degree (ID) and total interference degree (TID)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .model import Link, LinkChannelMap, ValidationError, WmnGraph

CONVENTIONAL = "conventional"
COLOCATION = "colocation"
MODES = (CONVENTIONAL, COLOCATION)

INFINITE = math.inf


def hop_distances(g: WmnGraph) -> list[list[float]]:
    """All-pairs hop counts; unreachable pairs are ``math.inf``."""
    nxg = nx.Graph()
    nxg.add_nodes_from(g.nodes)
    nxg.add_edges_from(g.edges)
    dist = [[INFINITE] * g.n for _ in range(g.n)]
    for src, lengths in nx.all_pairs_shortest_path_length(nxg):
        row = dist[src]
        for dst, d in lengths.items():
            row[dst] = d
    return dist


def link_distance(g: WmnGraph, a: Link, b: Link, dist: list[list[float]] | None = None) -> float:
    """Minimum hop distance between any endpoint of ``a`` and any endpoint of ``b``.

    Zero iff the links share a node; ``math.inf`` if they lie in different
    components.
    """
    for link in (a, b):
        if link not in g.edges:
            raise ValidationError(f"{link} is not a link of the graph")
    if dist is None:
        dist = hop_distances(g)
    return min(dist[u][v] for u in a for v in b)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValidationError(f"unknown conflict-graph mode {mode!r}; expected one of {MODES}")
    return mode


def check_impact(x: int) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise ValidationError(f"impact factor must be an integer >= 1, got {x!r}")
    return x


def links_conflict(a: Link, b: Link, ch_a: frozenset[int], ch_b: frozenset[int],
                   distance: float, x: int, mode: str) -> bool:
    """Pairwise conflict rule shared by the builder and the CA search."""
    if not ch_a or not ch_b:
        return False
    if mode == COLOCATION and distance == 0:
        return True
    return distance <= x - 1 and not ch_a.isdisjoint(ch_b)


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[Link, ...]
    conflicts: frozenset[tuple[Link, Link]]
    mode: str
    impact: int

    @cached_property
    def _degree(self) -> dict[Link, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for a, b in self.conflicts:
            deg[a] += 1
            deg[b] += 1
        return deg

    @cached_property
    def neighbours(self) -> dict[Link, frozenset[Link]]:
        nb: dict[Link, set[Link]] = {v: set() for v in self.vertices}
        for a, b in self.conflicts:
            nb[a].add(b)
            nb[b].add(a)
        return {v: frozenset(s) for v, s in nb.items()}

    def conflict(self, a: Link, b: Link) -> bool:
        return (min(a, b), max(a, b)) in self.conflicts


def conflict_pairs(g: WmnGraph, x: int,
                   dist: list[list[float]] | None = None) -> list[tuple[Link, Link, float]]:
    """Link pairs close enough that a channel assignment could make them conflict."""
    if dist is None:
        dist = hop_distances(g)
    reach = x - 1
    links = g.links
    out = []
    for i, a in enumerate(links):
        for b in links[i + 1:]:
            d = min(dist[u][v] for u in a for v in b)
            if d <= reach:
                out.append((a, b, d))
    return out


def build_conflict_graph(g: WmnGraph, lcm: LinkChannelMap, x: int,
                         mode: str = CONVENTIONAL) -> ConflictGraph:
    check_impact(x)
    check_mode(mode)
    conflicts = set()
    for a, b, d in conflict_pairs(g, x):
        if links_conflict(a, b, lcm[a], lcm[b], d, x, mode):
            conflicts.add((a, b))
    return ConflictGraph(g.links, frozenset(conflicts), mode, x)


def interference_degree(cg: ConflictGraph, link: Link) -> int:
    try:
        return cg._degree[link]
    except KeyError:
        raise ValidationError(f"unknown link {link}") from None


def total_interference_degree(cg: ConflictGraph) -> int:
    total = sum(cg._degree.values())
    # half the degree sum is always the conflict-edge count
    assert total % 2 == 0
    return total // 2


def tid(g: WmnGraph, lcm: LinkChannelMap, x: int, mode: str = CONVENTIONAL) -> int:
    return total_interference_degree(build_conflict_graph(g, lcm, x, mode))
