"""Network, channel-assignment and link/common-channel data model.

Node ids are dense integers ``0..n-1``. Human-readable names from input
documents are kept on the graph so output can be written back with the
same names.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

Link = tuple[int, int]


class ValidationError(ValueError):
    """An input violates a model invariant."""


class ParseError(ValueError):
    """An input document is malformed."""

    def __init__(self, message: str, context: str = ""):
        self.context = context
        super().__init__(f"{context}: {message}" if context else message)


class LimitExceeded(RuntimeError):
    """A configured search or enumeration cap was exceeded."""


def make_link(a: int, b: int) -> Link:
    if a == b:
        raise ValidationError(f"self-loop link ({a}, {a})")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class WmnGraph:
    """Undirected mesh topology with a radio count per node."""

    n: int
    edges: frozenset[Link]
    radios: tuple[int, ...]
    names: tuple[str, ...] = ()
    grid: tuple[int, int] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("node count must be non-negative")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(self.n)))
        if len(self.names) != self.n:
            raise ValidationError("names length does not match node count")
        if len(set(self.names)) != self.n:
            raise ValidationError("node names must be unique")
        if len(self.radios) != self.n:
            raise ValidationError(
                f"radios has {len(self.radios)} entries for {self.n} nodes")
        for i, r in enumerate(self.radios):
            if int(r) != r or r < 1:
                raise ValidationError(f"node {self.names[i]!r}: radio count must be >= 1")
        for a, b in self.edges:
            if a == b:
                raise ValidationError(f"self-loop edge at node {a}")
            if a > b:
                raise ValidationError(f"edge ({a}, {b}) is not canonical (i < j)")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValidationError(f"edge ({a}, {b}) references a node outside 0..{self.n - 1}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], radios: int | Iterable[int] = 1,
                   names: Iterable[str] = (), grid: tuple[int, int] | None = None) -> WmnGraph:
        canon = set()
        for a, b in edges:
            canon.add(make_link(int(a), int(b)))
        if isinstance(radios, int):
            radios = (radios,) * n
        return cls(n, frozenset(canon), tuple(radios), tuple(names), grid)

    @classmethod
    def grid_graph(cls, rows: int, cols: int, radios: int | Iterable[int] = 1) -> WmnGraph:
        """4-neighbour lattice; node ``r*cols + c`` sits at row r, column c."""
        if rows < 1 or cols < 1:
            raise ValidationError("grid dimensions must be positive")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return cls.from_edges(rows * cols, edges, radios, grid=(rows, cols))

    @property
    def nodes(self) -> range:
        return range(self.n)

    @cached_property
    def links(self) -> tuple[Link, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def _adj(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return tuple(frozenset(s) for s in adj)

    def adjacency(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.n:
            raise ValidationError(f"unknown node id {i}")
        return self._adj[i]

    def node_id(self, ref: int | str) -> int:
        """Resolve a node name (or integer id) to its dense id."""
        if isinstance(ref, str):
            try:
                return self._name_index[ref]
            except KeyError:
                raise ValidationError(f"unknown node {ref!r}") from None
        if isinstance(ref, bool) or not isinstance(ref, int):
            raise ValidationError(f"node reference must be a name or integer, got {ref!r}")
        if not 0 <= ref < self.n:
            raise ValidationError(f"unknown node id {ref}")
        return ref

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def link_name(self, link: Link) -> str:
        return f"{self.names[link[0]]}-{self.names[link[1]]}"


def validate_channels(channels: Iterable[int]) -> tuple[int, ...]:
    chans = tuple(channels)
    if not chans:
        raise ValidationError("channel set must be non-empty")
    for c in chans:
        if isinstance(c, bool) or not isinstance(c, int) or c < 1:
            raise ValidationError(f"channel ids must be positive integers, got {c!r}")
    if len(set(chans)) != len(chans):
        raise ValidationError("channel ids must be unique")
    return chans


@dataclass(frozen=True)
class ChannelAssignment:
    """Channels allocated to each node's radios.

    ``link_channels`` optionally pins a link to a subset of the channels its
    endpoints share. This models radio-level pairing, e.g. a node with radios
    on channels 1 and 2 that talks to one neighbour only on channel 1.
    """

    per_node: tuple[frozenset[int], ...]
    link_channels: Mapping[Link, frozenset[int]] = field(default_factory=dict)

    @classmethod
    def from_lists(cls, per_node: Iterable[Iterable[int]],
                   link_channels: Mapping[Link, Iterable[int]] | None = None) -> ChannelAssignment:
        pins = {make_link(*k): frozenset(v) for k, v in (link_channels or {}).items()}
        return cls(tuple(frozenset(s) for s in per_node), pins)

    def validate(self, g: WmnGraph, channels: Iterable[int]) -> None:
        cs = set(channels)
        if len(self.per_node) != g.n:
            raise ValidationError(
                f"assignment covers {len(self.per_node)} nodes, graph has {g.n}")
        for i, chans in enumerate(self.per_node):
            name = g.names[i]
            if not chans:
                raise ValidationError(f"node {name!r}: no channel allocated")
            if not chans <= cs:
                raise ValidationError(
                    f"node {name!r}: channels {sorted(chans - cs)} not in channel set")
            if len(chans) > g.radios[i]:
                raise ValidationError(
                    f"node {name!r}: {len(chans)} channels exceed {g.radios[i]} radios")
        for link, chans in self.link_channels.items():
            if link not in g.edges:
                raise ValidationError(f"pinned link {link} is not a topology edge")
            a, b = link
            if not chans <= (self.per_node[a] & self.per_node[b]):
                raise ValidationError(
                    f"pinned link {g.link_name(link)}: channels {sorted(chans)} "
                    f"not shared by both endpoints")

    def canonical_key(self) -> tuple:
        return tuple(tuple(sorted(s)) for s in self.per_node)


@dataclass(frozen=True)
class LinkChannelMap:
    """Every topology link with its common-channel set (ComCh)."""

    entries: Mapping[Link, frozenset[int]]

    def __getitem__(self, link: Link) -> frozenset[int]:
        return self.entries[link]

    def __contains__(self, link) -> bool:
        return link in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def links(self) -> tuple[Link, ...]:
        return tuple(sorted(self.entries))

    @cached_property
    def dead_links(self) -> tuple[Link, ...]:
        """Links whose endpoints share no channel."""
        return tuple(l for l in self.links if not self.entries[l])


def build_link_channel_map(g: WmnGraph, ca: ChannelAssignment,
                           channels: Iterable[int] | None = None) -> LinkChannelMap:
    if channels is not None:
        ca.validate(g, channels)
    elif len(ca.per_node) != g.n:
        raise ValidationError(f"assignment covers {len(ca.per_node)} nodes, graph has {g.n}")
    entries = {}
    for a, b in g.links:
        common = ca.per_node[a] & ca.per_node[b]
        pinned = ca.link_channels.get((a, b))
        if pinned is not None:
            common = common & pinned
        entries[(a, b)] = frozenset(common)
    return LinkChannelMap(entries)


# ---------------------------------------------------------------- documents

def _as_mapping(document: str | bytes | Path | Mapping, what: str) -> Mapping:
    if isinstance(document, Mapping):
        return document
    if isinstance(document, Path):
        document = document.read_text()
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{what} line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", what)
    return data


def _int_field(value: Any, ctx: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected integer, got {value!r}", ctx)
    return value


def load_network(document: str | bytes | Path | Mapping) -> tuple[WmnGraph, tuple[int, ...]]:
    """Parse a network document into a validated graph and channel set."""
    data = _as_mapping(document, "network")
    if "channels" not in data:
        raise ParseError("missing field", "network.channels")
    if not isinstance(data["channels"], list):
        raise ParseError("expected list of integers", "network.channels")
    channels = validate_channels(
        _int_field(c, f"network.channels[{k}]") for k, c in enumerate(data["channels"]))

    radios_raw = data.get("radios", 1)

    if "grid" in data:
        grid = data["grid"]
        if not (isinstance(grid, list) and len(grid) == 2):
            raise ParseError("expected [rows, cols]", "network.grid")
        rows, cols = (_int_field(v, "network.grid") for v in grid)
        radios = _radios(radios_raw, rows * cols)
        return WmnGraph.grid_graph(rows, cols, radios), channels

    if "nodes" not in data:
        raise ParseError("missing field (or give 'grid')", "network.nodes")
    nodes = data["nodes"]
    if isinstance(nodes, list):
        names = []
        for k, name in enumerate(nodes):
            if not isinstance(name, str):
                raise ParseError(f"expected string name, got {name!r}", f"network.nodes[{k}]")
            names.append(name)
        n = len(names)
    else:
        n = _int_field(nodes, "network.nodes")
        if n < 1:
            raise ValidationError("network must have at least one node")
        names = [str(i) for i in range(n)]
    if len(set(names)) != len(names):
        raise ValidationError("node names must be unique")
    index = {name: i for i, name in enumerate(names)}

    edges = []
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("expected list of pairs", "network.edges")
    seen = set()
    for k, pair in enumerate(raw_edges):
        ctx = f"network.edges[{k}]"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"expected 2-element array, got {pair!r}", ctx)
        ends = []
        for ref in pair:
            if isinstance(ref, str):
                if ref not in index:
                    raise ValidationError(f"{ctx}: unknown node {ref!r}")
                ends.append(index[ref])
            else:
                v = _int_field(ref, ctx)
                if not 0 <= v < n:
                    raise ValidationError(f"{ctx}: node id {v} outside 0..{n - 1}")
                ends.append(v)
        if ends[0] == ends[1]:
            raise ValidationError(f"{ctx}: self-loop at node {names[ends[0]]!r}")
        link = make_link(*ends)
        if link in seen:
            raise ValidationError(f"{ctx}: duplicate edge {pair!r}")
        seen.add(link)
        edges.append(link)

    return WmnGraph.from_edges(n, edges, _radios(radios_raw, n), names), channels


def _radios(raw: Any, n: int) -> tuple[int, ...]:
    if isinstance(raw, list):
        if len(raw) != n:
            raise ValidationError(f"radios has {len(raw)} entries for {n} nodes")
        out = tuple(_int_field(r, f"network.radios[{k}]") for k, r in enumerate(raw))
    else:
        out = (_int_field(raw, "network.radios"),) * n
    if any(r < 1 for r in out):
        raise ValidationError("radio counts must be >= 1")
    return out


def dump_network(g: WmnGraph, channels: Iterable[int]) -> dict:
    radios: Any = list(g.radios)
    if radios and all(r == radios[0] for r in radios):
        radios = radios[0]
    if g.grid is not None:
        return {"grid": list(g.grid), "radios": radios, "channels": list(channels)}
    plain = all(name == str(i) for i, name in enumerate(g.names))
    return {
        "nodes": g.n if plain else list(g.names),
        "edges": [[a, b] if plain else [g.names[a], g.names[b]] for a, b in g.links],
        "radios": radios,
        "channels": list(channels),
    }


def load_assignment(document: str | bytes | Path | Mapping, g: WmnGraph,
                    channels: Iterable[int] | None = None) -> ChannelAssignment:
    """Parse a CA document against ``g``; validates when channels are given."""
    data = _as_mapping(document, "assignment")
    raw = data.get("assignment")
    if not isinstance(raw, dict):
        raise ParseError("expected object mapping node -> channel list", "assignment.assignment")
    per_node: list[frozenset[int] | None] = [None] * g.n
    for ref, chans in raw.items():
        ctx = f"assignment.assignment[{ref!r}]"
        i = g.node_id(ref)
        if not isinstance(chans, list):
            raise ParseError("expected list of channel ids", ctx)
        per_node[i] = frozenset(_int_field(c, ctx) for c in chans)
    missing = [g.names[i] for i, s in enumerate(per_node) if s is None]
    if missing:
        raise ValidationError(f"assignment missing nodes: {missing}")

    pins = {}
    for k, item in enumerate(data.get("links", [])):
        ctx = f"assignment.links[{k}]"
        if not (isinstance(item, list) and len(item) == 3 and isinstance(item[2], list)):
            raise ParseError("expected [node, node, [channels]]", ctx)
        link = make_link(g.node_id(item[0]), g.node_id(item[1]))
        pins[link] = frozenset(_int_field(c, ctx) for c in item[2])

    ca = ChannelAssignment(tuple(per_node), pins)  # type: ignore[arg-type]
    if channels is not None:
        ca.validate(g, channels)
    return ca


def dump_assignment(ca: ChannelAssignment, g: WmnGraph) -> dict:
    doc: dict[str, Any] = {
        "assignment": {g.names[i]: sorted(s) for i, s in enumerate(ca.per_node)}}
    if ca.link_channels:
        doc["links"] = [[g.names[a], g.names[b], sorted(ca.link_channels[(a, b)])]
                        for a, b in sorted(ca.link_channels)]
    return doc
