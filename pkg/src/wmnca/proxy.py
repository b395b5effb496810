"""Slot-based conflict scheduler used as a stand-in for packet-level simulation.

Each slot, links with queued packets are activated greedily (longest queue
first) as long as they do not conflict with an already active link and the
endpoints still have a free radio. An active link forwards one packet one
hop. The figures it produces are proxies for throughput, packet loss and
delay; they are not calibrated against any real MAC/PHY.
"""

from __future__ import annotations

import json
import random
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx

from .conflict import CONVENTIONAL, build_conflict_graph, check_impact
from .model import (ChannelAssignment, Link, ParseError, ValidationError, WmnGraph,
                    build_link_channel_map, make_link)

DEFAULT_TTL = 64
SCENARIOS = (5, 8, 10, 12)


@dataclass(frozen=True)
class FlowSpec:
    route: tuple[int, ...]
    demand: int = 1

    def __post_init__(self):
        if len(self.route) < 2:
            raise ValidationError("a flow route needs at least two nodes")
        if len(set(self.route)) != len(self.route):
            raise ValidationError(f"flow route {self.route} revisits a node")
        if self.demand < 0:
            raise ValidationError("flow demand must be non-negative")

    @property
    def source(self) -> int:
        return self.route[0]

    @property
    def destination(self) -> int:
        return self.route[-1]

    @property
    def links(self) -> tuple[Link, ...]:
        return tuple(make_link(a, b) for a, b in zip(self.route, self.route[1:]))


@dataclass
class ProxyResult:
    throughput_proxy: float
    plr_proxy: float
    delay_proxy: float
    injected: int
    delivered: int
    lost: int
    queued: int
    slots: int
    stalled_flows: list[int] = field(default_factory=list)
    activations: list[list[Link]] | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("activations")
        return d


def validate_flows(g: WmnGraph, flows: Iterable[FlowSpec]) -> list[FlowSpec]:
    flows = list(flows)
    for k, f in enumerate(flows):
        for v in f.route:
            g.node_id(v)
        for a, b in zip(f.route, f.route[1:]):
            if make_link(a, b) not in g.edges:
                raise ValidationError(
                    f"flow {k}: {g.names[a]}-{g.names[b]} is not a topology edge")
    return flows


def run_proxy(g: WmnGraph, ca: ChannelAssignment, flows: Sequence[FlowSpec], x: int,
              slots: int, seed: int = 0, mode: str = CONVENTIONAL,
              ttl: int | None = DEFAULT_TTL, record: bool = False) -> ProxyResult:
    """Run one episode; deterministic for a given seed.

    A flow's demand is injected evenly over the episode, packet k at slot
    ``k * slots // demand``. Flows crossing a dead link are stalled and
    their packets count as lost on injection. With ``ttl`` set, packets
    older than ``ttl`` slots are dropped as lost.
    """
    check_impact(x)
    if slots < 1:
        raise ValidationError("slots must be >= 1")
    if ttl is not None and ttl < 1:
        raise ValidationError("ttl must be >= 1")
    flows = validate_flows(g, flows)
    lcm = build_link_channel_map(g, ca)
    cg = build_conflict_graph(g, lcm, x, mode)
    neighbours = cg.neighbours
    link_index = {l: i for i, l in enumerate(g.links)}
    n_links = len(g.links)
    rng = random.Random(seed)

    stalled = [k for k, f in enumerate(flows) if any(not lcm[l] for l in f.links)]
    stalled_set = set(stalled)
    arrivals: dict[int, list[int]] = {}
    for k, f in enumerate(flows):
        for p in range(f.demand):
            arrivals.setdefault(p * slots // f.demand, []).append(k)

    # packet = [flow, hop, injected_at]
    queues: dict[Link, deque] = {l: deque() for l in g.links}
    injected = delivered = lost = 0
    delay_total = 0
    activations: list[list[Link]] | None = [] if record else None

    for slot in range(slots):
        for k in arrivals.get(slot, ()):
            injected += 1
            if k in stalled_set:
                lost += 1
            else:
                queues[flows[k].links[0]].append([k, 0, slot])

        if ttl is not None:
            for q in queues.values():
                if q and any(slot - p[2] >= ttl for p in q):
                    keep = [p for p in q if slot - p[2] < ttl]
                    lost += len(q) - len(keep)
                    q.clear()
                    q.extend(keep)

        offset = rng.randrange(n_links) if n_links else 0
        pending = sorted((l for l, q in queues.items() if q),
                         key=lambda l: (-len(queues[l]), (link_index[l] - offset) % n_links))
        active: list[Link] = []
        blocked: set[Link] = set()
        busy = [0] * g.n
        for l in pending:
            a, b = l
            if l in blocked or busy[a] >= g.radios[a] or busy[b] >= g.radios[b]:
                continue
            active.append(l)
            blocked |= neighbours[l]
            busy[a] += 1
            busy[b] += 1
        if activations is not None:
            activations.append(active)

        moved = []
        for l in active:
            pkt = queues[l].popleft()
            pkt[1] += 1
            route_links = flows[pkt[0]].links
            if pkt[1] == len(route_links):
                delivered += 1
                delay_total += slot + 1 - pkt[2]
            else:
                moved.append(pkt)
        for pkt in moved:
            queues[flows[pkt[0]].links[pkt[1]]].append(pkt)

    queued = sum(len(q) for q in queues.values())
    return ProxyResult(
        throughput_proxy=delivered / slots,
        plr_proxy=lost / injected if injected else 0.0,
        delay_proxy=delay_total / delivered if delivered else 0.0,
        injected=injected, delivered=delivered, lost=lost, queued=queued,
        slots=slots, stalled_flows=stalled, activations=activations)


def mean_results(results: Sequence[ProxyResult]) -> dict[str, float]:
    n = len(results)
    return {
        "throughput": sum(r.throughput_proxy for r in results) / n,
        "plr": sum(r.plr_proxy for r in results) / n,
        "md": sum(r.delay_proxy for r in results) / n,
    }


# ------------------------------------------------------------------ flows

def shortest_route(g: WmnGraph, src: int, dst: int) -> tuple[int, ...]:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.nodes)
    nxg.add_edges_from(g.links)
    try:
        return tuple(nx.shortest_path(nxg, src, dst))
    except nx.NetworkXNoPath:
        raise ValidationError(f"no route from {g.names[src]} to {g.names[dst]}") from None


def _staircase(rows: int, cols: int, start: tuple[int, int], end: tuple[int, int]) -> tuple[int, ...]:
    (r, c), (r1, c1) = start, end
    dr = 1 if r1 > r else -1
    dc = 1 if c1 > c else -1
    route = [r * cols + c]
    while (r, c) != (r1, c1):
        if c != c1 and (r == r1 or len(route) % 2 == 1):
            c += dc
        else:
            r += dr
        route.append(r * cols + c)
    return tuple(route)


def scenario_flows(g: WmnGraph, scenario: int, demand: int) -> list[FlowSpec]:
    """Grid flow mixes of concurrent row, column and corner-to-corner flows.

    Row flows run along a whole row, column flows down a whole column, and the
    two corner flows cross the grid on staircase shortest paths. The mixes:

    ====  ================  ===============  ============
    size  rows              columns          corner flows
    ====  ================  ===============  ============
    5     first/mid/last    none             2
    8     first/mid/last    first/mid/last   2
    10    all               first/mid/last   2
    12    all               all              2
    ====  ================  ===============  ============

    On a 5x5 grid the row/column flows are 4 hops and the corner flows 8.
    """
    if g.grid is None:
        raise ValidationError("scenario presets need a grid topology")
    if scenario not in SCENARIOS:
        raise ValidationError(f"unknown scenario {scenario}; expected one of {SCENARIOS}")
    rows, cols = g.grid
    if rows < 2 or cols < 2:
        raise ValidationError("scenario presets need at least a 2x2 grid")
    some_rows = sorted({0, rows // 2, rows - 1})
    some_cols = sorted({0, cols // 2, cols - 1})
    row_sel, col_sel = {5: (some_rows, []), 8: (some_rows, some_cols),
                        10: (range(rows), some_cols), 12: (range(rows), range(cols))}[scenario]
    routes = [tuple(r * cols + c for c in range(cols)) for r in row_sel]
    routes += [tuple(r * cols + c for r in range(rows)) for c in col_sel]
    routes.append(_staircase(rows, cols, (0, 0), (rows - 1, cols - 1)))
    routes.append(_staircase(rows, cols, (0, cols - 1), (rows - 1, 0)))
    return [FlowSpec(r, demand) for r in routes]


def load_flows(document: str | Path | Mapping, g: WmnGraph) -> list[FlowSpec]:
    """Parse a flows document.

    ``{"flows": [{"route": [..], "demand": 10},
                 {"source": "a", "destination": "b", "route": "auto-shortest"}]}``
    """
    if isinstance(document, Path):
        document = document.read_text()
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"flows line {exc.lineno} column {exc.colno}") from None
    raw = document.get("flows") if isinstance(document, Mapping) else None
    if not isinstance(raw, list):
        raise ParseError("expected a list", "flows.flows")
    flows = []
    for k, item in enumerate(raw):
        ctx = f"flows.flows[{k}]"
        if not isinstance(item, Mapping):
            raise ParseError("expected an object", ctx)
        demand = item.get("demand", 1)
        if isinstance(demand, bool) or not isinstance(demand, int):
            raise ParseError(f"demand must be an integer, got {demand!r}", ctx)
        route: Any = item.get("route", "auto-shortest")
        if route == "auto-shortest":
            if "source" not in item or "destination" not in item:
                raise ParseError("auto-shortest needs source and destination", ctx)
            nodes = shortest_route(g, g.node_id(item["source"]), g.node_id(item["destination"]))
        elif isinstance(route, list):
            nodes = tuple(g.node_id(v) for v in route)
        else:
            raise ParseError(f"route must be a node list or 'auto-shortest', got {route!r}", ctx)
        flows.append(FlowSpec(nodes, demand))
    return validate_flows(g, flows)


def dump_flows(flows: Sequence[FlowSpec], g: WmnGraph) -> dict:
    return {"flows": [{"route": [g.names[v] for v in f.route], "demand": f.demand}
                      for f in flows]}
