"""Baseline channel-assignment generators: random, greedy and exhaustive.

Exhaustive search walks node ids in order and tries channel subsets in
lexicographic order, so the first optimum it meets is the
lexicographically smallest one. Branch-and-bound pruning keeps that
property: a subtree is cut only when nothing in it can strictly beat the
incumbent.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .conflict import CONVENTIONAL, check_impact, check_mode, conflict_pairs, hop_distances, links_conflict
from .estimators import _weight_of_sets, enumerate_xls, DEFAULT_COMBINATION_CAP
from .model import ChannelAssignment, LimitExceeded, Link, ValidationError, WmnGraph, validate_channels

KINDS = ("random", "greedy", "exhaustive")
OBJECTIVES = ("min-tid", "max-cxls")
DEFAULT_SEARCH_CAP = 2**20


@dataclass(frozen=True)
class CaGenSpec:
    kind: str = "random"
    seed: int = 0
    radios_per_node: int | None = None
    objective: str = "min-tid"
    impact: int = 2
    mode: str = CONVENTIONAL
    cap: int = DEFAULT_SEARCH_CAP

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown CA kind {self.kind!r}; expected one of {KINDS}")
        if self.objective not in OBJECTIVES:
            raise ValidationError(f"unknown objective {self.objective!r}; expected one of {OBJECTIVES}")
        if self.radios_per_node is not None and self.radios_per_node < 1:
            raise ValidationError("radios_per_node must be >= 1")
        if self.cap < 1:
            raise ValidationError("cap must be positive")
        check_impact(self.impact)
        check_mode(self.mode)


def channels_per_node(g: WmnGraph, cs: Sequence[int], spec: CaGenSpec) -> list[int]:
    """How many distinct channels each node receives."""
    if spec.radios_per_node is not None and spec.radios_per_node > len(cs):
        raise ValidationError(
            f"{spec.radios_per_node} channels requested per node but only {len(cs)} available")
    out = []
    for r in g.radios:
        k = r if spec.radios_per_node is None else min(r, spec.radios_per_node)
        out.append(min(k, len(cs)))
    return out


def search_space_size(g: WmnGraph, cs: Sequence[int], spec: CaGenSpec) -> int:
    return math.prod(math.comb(len(cs), k) for k in channels_per_node(g, cs, spec))


def generate_random_ca(g: WmnGraph, cs: Iterable[int], spec: CaGenSpec) -> ChannelAssignment:
    cs = sorted(validate_channels(cs))
    rng = random.Random(spec.seed)
    per_node = [rng.sample(cs, k) for k in channels_per_node(g, cs, spec)]
    return ChannelAssignment.from_lists(per_node)


class _Incremental:
    """Conflict and dead-link bookkeeping as nodes receive channels one at a time.

    A link is settled once both endpoints are assigned; a link pair (or an
    X-link-set) is settled once all its links are. Work for each is charged
    to the step that settles it.
    """

    def __init__(self, g: WmnGraph, order: Sequence[int], x: int, mode: str,
                 with_xls: bool = False):
        self.g = g
        self.x = x
        self.mode = mode
        pos = {v: t for t, v in enumerate(order)}
        self.links_at: list[list[Link]] = [[] for _ in order]
        for a, b in g.links:
            self.links_at[max(pos[a], pos[b])].append((a, b))
        self.pairs_at: list[list[tuple[Link, Link, float]]] = [[] for _ in order]
        for a, b, d in conflict_pairs(g, x, hop_distances(g)):
            t = max(pos[a[0]], pos[a[1]], pos[b[0]], pos[b[1]])
            self.pairs_at[t].append((a, b, d))
        self.xls_at: list[list[tuple[Link, ...]]] = [[] for _ in order]
        self.xls_left = [0] * (len(order) + 1)
        if with_xls:
            for xls in enumerate_xls(g, x):
                self.xls_at[max(pos[v] for v in xls.nodes)].append(xls.links)
            for t in range(len(order) - 1, -1, -1):
                self.xls_left[t] = self.xls_left[t + 1] + len(self.xls_at[t])
        self.sets: list[frozenset[int] | None] = [None] * g.n
        self.comch: dict[Link, frozenset[int]] = {}
        self._memo: dict[tuple, Fraction] = {}
        self.star_floor = [0] * g.n
        self.star = [0] * g.n
        self.deficit = 0
        self._star_log: list[list[int]] = [[] for _ in order]

    def set_star_floors(self, ks: Sequence[int], n_channels: int) -> None:
        """Lower-bound the conflicts among links meeting at each node.

        Only applies where every incident link is guaranteed a common channel
        (k_u + k_v > |CS|): d such links drawing from the node's k channels
        cannot do better than an even split.
        """
        for v in self.g.nodes:
            nbs = self.g.adjacency(v)
            if not nbs or any(ks[u] + ks[v] <= n_channels for u in nbs):
                continue
            d, k = len(nbs), ks[v]
            if self.mode == CONVENTIONAL:
                q, r = divmod(d, k)
                floor = r * math.comb(q + 1, 2) + (k - r) * math.comb(q, 2)
            else:
                floor = math.comb(d, 2)
            self.star_floor[v] = floor
        self.deficit = sum(self.star_floor)

    def place(self, t: int, v: int, chans: frozenset[int]) -> tuple[int, int]:
        """Assign ``chans`` to ``v`` at step ``t``; returns (new conflicts, new dead links)."""
        self.sets[v] = chans
        dead = 0
        for a, b in self.links_at[t]:
            common = self.sets[a] & self.sets[b]
            self.comch[(a, b)] = common
            if not common:
                dead += 1
        conflicts = 0
        comch = self.comch
        log = self._star_log[t]
        for a, b, d in self.pairs_at[t]:
            if links_conflict(a, b, comch[a], comch[b], d, self.x, self.mode):
                conflicts += 1
                if d == 0:
                    hub = a[0] if a[0] in b else a[1]
                    self.star[hub] += 1
                    if self.star[hub] <= self.star_floor[hub]:
                        self.deficit -= 1
                    log.append(hub)
        return conflicts, dead

    def xls_weight_at(self, t: int) -> Fraction:
        total = Fraction(0)
        for links in self.xls_at[t]:
            key = tuple(tuple(sorted(self.comch[l])) for l in links)
            w = self._memo.get(key)
            if w is None:
                w = self._memo[key] = _weight_of_sets(key, DEFAULT_COMBINATION_CAP).value
            total += w
        return total

    def unplace(self, t: int, v: int) -> None:
        self.sets[v] = None
        for link in self.links_at[t]:
            del self.comch[link]
        log = self._star_log[t]
        for hub in log:
            if self.star[hub] <= self.star_floor[hub]:
                self.deficit += 1
            self.star[hub] -= 1
        log.clear()


def _bfs_order(g: WmnGraph, root: int) -> list[int]:
    order, seen = [], set()
    for start in [root] + list(g.nodes):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for nb in sorted(g.adjacency(v)):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return order


def generate_greedy_ca(g: WmnGraph, cs: Iterable[int], spec: CaGenSpec) -> ChannelAssignment:
    """Breadth-first pass giving each node the subset that adds the fewest conflicts.

    The BFS starts at node ``seed mod n``. Ties on conflicts go to fewer dead
    links, then to fewer channels shared over the new links (less room for
    later conflicts), then to the lexicographically smallest channel subset.
    """
    cs = sorted(validate_channels(cs))
    if g.n == 0:
        return ChannelAssignment(())
    ks = channels_per_node(g, cs, spec)
    order = _bfs_order(g, spec.seed % g.n)
    inc = _Incremental(g, order, spec.impact, spec.mode)
    for t, v in enumerate(order):
        best = None
        for cand in itertools.combinations(cs, ks[v]):
            conflicts, dead = inc.place(t, v, frozenset(cand))
            shared = sum(len(inc.comch[l]) for l in inc.links_at[t])
            inc.unplace(t, v)
            key = (conflicts, dead, shared)
            if best is None or key < best[0]:
                best = (key, cand)
        inc.place(t, v, frozenset(best[1]))
    return ChannelAssignment(tuple(inc.sets))


@dataclass(frozen=True)
class SearchResult:
    ca: ChannelAssignment
    objective: str
    value: Fraction | int
    dead_links: int
    visited: int


def generate_exhaustive_ca(g: WmnGraph, cs: Iterable[int], spec: CaGenSpec) -> SearchResult:
    """Exact optimum over all per-node channel subsets of size min(R_i, |CS|).

    Ranking: objective first (min TID or max CXLS_wt), then fewer dead links,
    then lexicographic CA order.
    """
    cs = sorted(validate_channels(cs))
    size = search_space_size(g, cs, spec)
    if size > spec.cap:
        raise LimitExceeded(
            f"exhaustive search space has {size} candidate CAs, above the cap of {spec.cap}")
    ks = channels_per_node(g, cs, spec)
    maximize = spec.objective == "max-cxls"
    order = list(g.nodes)
    inc = _Incremental(g, order, spec.impact, spec.mode, with_xls=maximize)
    if not maximize:
        inc.set_star_floors(ks, len(cs))
    candidates = [[frozenset(c) for c in itertools.combinations(cs, k)] for k in ks]
    if candidates and all(k == ks[0] for k in ks):
        # channel relabelling maps any k-subset onto the first one and leaves
        # both objectives unchanged, so the lex-first optimum starts there
        candidates[0] = candidates[0][:1]

    best: list = [None]  # (primary, dead, sets)
    visited = 0
    x = spec.impact

    def dfs(t: int, primary, dead: int):
        nonlocal visited
        if t == g.n:
            visited += 1
            best[0] = (primary, dead, tuple(inc.sets))
            return
        v = order[t]
        for chans in candidates[v]:
            conflicts, new_dead = inc.place(t, v, chans)
            if maximize:
                p = primary - inc.xls_weight_at(t)
                bound = p - x * inc.xls_left[t + 1]
            else:
                p = primary + conflicts
                bound = p + inc.deficit
            d = dead + new_dead
            if best[0] is None or (bound, d) < best[0][:2]:
                dfs(t + 1, p, d)
            inc.unplace(t, v)

    dfs(0, Fraction(0) if maximize else 0, 0)
    primary, dead, sets = best[0]
    value = -primary if maximize else primary
    return SearchResult(ChannelAssignment(sets), spec.objective, value, dead, visited)


def generate_ca(g: WmnGraph, cs: Iterable[int], spec: CaGenSpec) -> ChannelAssignment:
    if spec.kind == "random":
        return generate_random_ca(g, cs, spec)
    if spec.kind == "greedy":
        return generate_greedy_ca(g, cs, spec)
    return generate_exhaustive_ca(g, cs, spec).ca
