"""Interference estimators over a channel assignment.

``cxls_wt`` sums, over every path of exactly X links, the expected number of
interference-free links when each link picks one of its common channels
uniformly at random. A link is interference-free within a combination when
no other link of the same path picked its channel.

``cdal_cost`` measures how evenly channels are spread over links: the
population standard deviation of per-channel link counts, where a link with
k common channels adds 1/k to each of them. This is a reconstruction; it is
link-count based and blind to where links sit, which is exactly what the
spatial estimator is meant to fix.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .conflict import check_impact
from .model import (ChannelAssignment, Link, LinkChannelMap, ValidationError, WmnGraph,
                    build_link_channel_map, validate_channels)

log = logging.getLogger(__name__)

DEFAULT_COMBINATION_CAP = 10**6
SAMPLING_SEED = 0x5EED
SAMPLE_SIZE = 20_000


@dataclass(frozen=True, order=True)
class XLinkSet:
    """A simple path of X links, stored as its X+1 nodes.

    The end with the smaller node id comes first, so each undirected path has
    exactly one representation.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValidationError("an X-link-set needs at least one link")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError(f"repeated node in path {self.nodes}")
        if self.nodes[0] > self.nodes[-1]:
            object.__setattr__(self, "nodes", self.nodes[::-1])

    @property
    def x(self) -> int:
        return len(self.nodes) - 1

    @property
    def links(self) -> tuple[Link, ...]:
        return tuple((min(a, b), max(a, b)) for a, b in zip(self.nodes, self.nodes[1:]))


@dataclass(frozen=True)
class XlsWeight:
    value: Fraction
    sampled: bool = False
    dead: bool = False


@dataclass
class CxlsResult:
    total: Fraction
    per_set: dict[XLinkSet, XlsWeight]
    x: int
    dead_links: tuple[Link, ...] = ()
    sampled: bool = False
    warnings: list[str] = field(default_factory=list)

    def as_dict(self, g: WmnGraph | None = None, detail: bool = False) -> dict:
        def name(link):
            return g.link_name(link) if g is not None else list(link)

        out = {
            "metric": "cxls",
            "value": float(self.total),
            "exact": str(self.total),
            "impact": self.x,
            "xls_count": len(self.per_set),
            "dead_links": [name(l) for l in self.dead_links],
            "sampled": self.sampled,
            "warnings": list(self.warnings),
        }
        if detail:
            out["per_xls"] = [
                {"links": [name(l) for l in xls.links], "weight": float(w.value),
                 "exact": str(w.value), "sampled": w.sampled, "dead": w.dead}
                for xls, w in self.per_set.items()]
        return out


def enumerate_xls(g: WmnGraph, x: int) -> list[XLinkSet]:
    """All simple paths of exactly ``x`` edges, each once, in canonical order."""
    check_impact(x)
    found = []

    def extend(path: list[int], on_path: set[int]):
        if len(path) == x + 1:
            if path[0] < path[-1]:
                found.append(XLinkSet(tuple(path)))
            return
        for nb in sorted(g.adjacency(path[-1])):
            if nb not in on_path:
                path.append(nb)
                on_path.add(nb)
                extend(path, on_path)
                on_path.discard(nb)
                path.pop()

    for start in g.nodes:
        extend([start], {start})
    found.sort()
    return found


def unique_channel_count(combo: Sequence[int]) -> int:
    """Links in one channel combination whose channel no other link uses."""
    counts = Counter(combo)
    return sum(1 for c in combo if counts[c] == 1)


def _weight_of_sets(channel_sets: tuple[tuple[int, ...], ...], cap: int) -> XlsWeight:
    if any(not s for s in channel_sets):
        return XlsWeight(Fraction(0), dead=True)
    size = math.prod(len(s) for s in channel_sets)
    if size <= cap:
        total = sum(unique_channel_count(c) for c in itertools.product(*channel_sets))
        return XlsWeight(Fraction(total, size))
    rng = random.Random(SAMPLING_SEED)
    total = sum(unique_channel_count([rng.choice(s) for s in channel_sets])
                for _ in range(SAMPLE_SIZE))
    return XlsWeight(Fraction(total, SAMPLE_SIZE), sampled=True)


def xls_weight(xls: XLinkSet | Sequence[Link], lcm: LinkChannelMap,
               cap: int = DEFAULT_COMBINATION_CAP) -> XlsWeight:
    """Mean number of interference-free links over all equally likely channel picks.

    A path containing a dead link (no common channel) weighs 0 and is flagged.
    Above ``cap`` combinations the mean is estimated from a fixed-seed sample.
    """
    links = xls.links if isinstance(xls, XLinkSet) else tuple(xls)
    sets = tuple(tuple(sorted(lcm[l])) for l in links)
    return _weight_of_sets(sets, cap)


def cxls_wt(g: WmnGraph, ca: ChannelAssignment, cs: Iterable[int], x: int,
            cap: int = DEFAULT_COMBINATION_CAP) -> CxlsResult:
    """Cumulative X-link-set weight; higher predicts a better-performing CA."""
    check_impact(x)
    cs = validate_channels(cs)
    lcm = build_link_channel_map(g, ca, cs)
    return cxls_from_map(g, lcm, x, cap)


def cxls_from_map(g: WmnGraph, lcm: LinkChannelMap, x: int,
                  cap: int = DEFAULT_COMBINATION_CAP) -> CxlsResult:
    sxls = enumerate_xls(g, x)
    memo: dict[tuple, XlsWeight] = {}
    per_set = {}
    total = Fraction(0)
    for xls in sxls:
        # identical channel-set sequences recur often on regular topologies
        key = tuple(tuple(sorted(lcm[l])) for l in xls.links)
        w = memo.get(key)
        if w is None:
            w = memo[key] = _weight_of_sets(key, cap)
        per_set[xls] = w
        total += w.value
    result = CxlsResult(total, per_set, x, lcm.dead_links,
                        sampled=any(w.sampled for w in per_set.values()))
    if not sxls:
        msg = f"graph has no simple path of {x} links; CXLS_wt is 0 and comparisons are meaningless"
        log.warning(msg)
        result.warnings.append(msg)
    return result


def channel_link_counts(lcm: LinkChannelMap, cs: Iterable[int]) -> dict[int, Fraction]:
    counts = {c: Fraction(0) for c in cs}
    for link in lcm.links:
        common = lcm[link]
        for c in common:
            if c in counts:
                counts[c] += Fraction(1, len(common))
    return counts


def cdal_cost(g: WmnGraph, lcm: LinkChannelMap, cs: Iterable[int]) -> float:
    """Population std-dev of fractional per-channel link counts; lower is fairer."""
    cs = tuple(cs)
    if not cs:
        raise ValidationError("channel set must be non-empty")
    counts = list(channel_link_counts(lcm, cs).values())
    mean = sum(counts, Fraction(0)) / len(counts)
    var = sum(((c - mean) ** 2 for c in counts), Fraction(0)) / len(counts)
    return math.sqrt(var)
