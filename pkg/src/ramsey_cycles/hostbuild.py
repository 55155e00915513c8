"""Host graph (a gadget copy on every hyperedge) and the auxiliary graph built from a colouring."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ColoringError, GadgetError, NoAuxEdgesError
from .gadgets import Gadget, GadgetCycle, find_gadget_cycle
from .graphcore import EdgeColoring, Graph, Hypergraph, norm_edge
from .seeds import rng_for

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HostGraph:
    graph: Graph
    hypergraph: Hypergraph
    gadget: Gadget
    placements: tuple[tuple[int, ...], ...]  # hid -> host vertex of each gadget vertex

    @property
    def edge_owner(self) -> dict[tuple[int, int], int]:
        own = self.__dict__.get("_owner")
        if own is None:
            own = {}
            gedges = list(self.gadget.graph.edges())
            for hid, pl in enumerate(self.placements):
                for a, b in gedges:
                    own.setdefault(norm_edge(pl[a], pl[b]), hid)
            self.__dict__["_owner"] = own
        return own

    def copy_edges(self, hid: int) -> list[tuple[int, int]]:
        pl = self.placements[hid]
        return [norm_edge(pl[a], pl[b]) for a, b in self.gadget.graph.edges()]

    def to_json(self) -> dict:
        return {"hypergraph": self.hypergraph.to_json(), "gadget": self.gadget.name,
                "gadget_mode": self.gadget.mode,
                "gadget_edges": [list(e) for e in self.gadget.graph.edges()],
                "gadget_vertices": self.gadget.s,
                "placements": [list(p) for p in self.placements]}

    @classmethod
    def from_json(cls, data: dict) -> "HostGraph":
        h = Hypergraph.from_json(data["hypergraph"])
        gg = Graph.from_edges(data["gadget_vertices"], data["gadget_edges"])
        gadget = Gadget(gg, data["gadget_mode"], data["gadget"])
        return assemble_host(h, gadget, [tuple(p) for p in data["placements"]])


def assemble_host(h: Hypergraph, gadget: Gadget, placements) -> HostGraph:
    edges = []
    gedges = list(gadget.graph.edges())
    for hid, pl in enumerate(placements):
        if sorted(pl) != list(h.edges[hid]):
            raise GadgetError("placement is not a bijection onto its hyperedge", hid=hid)
        edges.extend((pl[a], pl[b]) for a, b in gedges)
    return HostGraph(Graph.from_edges(h.vertex_count, edges), h, gadget, tuple(placements))


def build_host(h: Hypergraph, gadget: Gadget, seed: int) -> HostGraph:
    if gadget.s != h.uniformity:
        raise GadgetError("gadget size differs from hypergraph uniformity",
                          gadget_vertices=gadget.s, uniformity=h.uniformity)
    rng = rng_for(seed, "placement")
    m, s = h.num_edges, h.uniformity
    perms = np.argsort(rng.random((m, s)), axis=1) if m else np.zeros((0, s), dtype=int)
    placements = [tuple(int(e[j]) for j in perms[i]) for i, e in enumerate(h.edges)]
    return assemble_host(h, gadget, placements)


def lift_lengths(mode: str, L: int) -> tuple[int, int]:
    """Edge counts of the (short, long) arcs between the anchor pair."""
    if mode == "even_induced":
        return (2, 4)
    if mode == "odd_induced":
        return (2, 3)
    return ((L - 1) // 2, (L + 1) // 2)


@dataclass(frozen=True)
class AuxEdge:
    hid: int
    u: int
    v: int
    color: int
    cycle: tuple[int, ...]        # host vertices of the gadget cycle
    short_path: tuple[int, ...]   # u .. v
    long_path: tuple[int, ...]    # u .. v

    def path_from(self, start: int, long: bool) -> tuple[int, ...]:
        p = self.long_path if long else self.short_path
        return p if p[0] == start else tuple(reversed(p))

    def to_json(self) -> dict:
        return {"hid": self.hid, "u": self.u, "v": self.v, "color": self.color,
                "cycle": list(self.cycle), "short_path": list(self.short_path),
                "long_path": list(self.long_path)}

    @classmethod
    def from_json(cls, d: dict) -> "AuxEdge":
        return cls(d["hid"], d["u"], d["v"], d["color"], tuple(d["cycle"]),
                   tuple(d["short_path"]), tuple(d["long_path"]))


@dataclass
class AuxGraph:
    vertex_count: int
    mode: str
    L: int
    records: dict[tuple[int, int], AuxEdge]
    failures: list[int] = field(default_factory=list)   # hids whose finder returned nothing
    dropped: list[int] = field(default_factory=list)    # hids whose cycle length differs from L

    @property
    def graph(self) -> Graph:
        g = self.__dict__.get("_graph")
        if g is None:
            g = Graph.from_edges(self.vertex_count, self.records.keys())
            self.__dict__["_graph"] = g
        return g

    @property
    def by_hid(self) -> dict[int, AuxEdge]:
        d = self.__dict__.get("_by_hid")
        if d is None:
            d = {r.hid: r for r in self.records.values()}
            self.__dict__["_by_hid"] = d
        return d

    def record(self, u: int, v: int) -> AuxEdge:
        return self.records[norm_edge(u, v)]

    def h(self, u: int, v: int) -> int:
        return self.records[norm_edge(u, v)].hid

    @property
    def lift_lengths(self) -> tuple[int, int]:
        return lift_lengths(self.mode, self.L)

    def to_json(self) -> dict:
        return {"vertex_count": self.vertex_count, "mode": self.mode, "L": self.L,
                "edges": [r.to_json() for _, r in sorted(self.records.items())],
                "failures": self.failures, "dropped": self.dropped}

    @classmethod
    def from_json(cls, d: dict) -> "AuxGraph":
        recs = {}
        for item in d["edges"]:
            r = AuxEdge.from_json(item)
            recs[norm_edge(r.u, r.v)] = r
        return cls(d["vertex_count"], d["mode"], d["L"], recs, d.get("failures", []),
                   d.get("dropped", []))


def _lift_record(hid: int, pl, gc: GadgetCycle) -> AuxEdge:
    cyc = tuple(pl[x] for x in gc.vertices)
    sp = tuple(pl[x] for x in gc.short_path)
    lp = tuple(pl[x] for x in gc.long_path)
    return AuxEdge(hid, sp[0], sp[-1], gc.color, cyc, sp, lp)


def build_auxiliary(host: HostGraph, coloring: EdgeColoring, mode: str | None = None) -> AuxGraph:
    mode = mode or host.gadget.mode
    if mode != host.gadget.mode:
        raise GadgetError("mode differs from the gadget's mode", mode=mode,
                          gadget_mode=host.gadget.mode)
    coloring.check_covers(host.graph)
    gadget = host.gadget
    gedges = list(gadget.graph.edges())
    found: list[tuple[int, GadgetCycle]] = []
    failures = []
    for hid, pl in enumerate(host.placements):
        local = {e: coloring[(pl[e[0]], pl[e[1]])] for e in gedges}
        gc = find_gadget_cycle(gadget, EdgeColoring(coloring.k, local))
        if gc is None:
            failures.append(hid)
        else:
            found.append((hid, gc))
    if failures:
        log.info("%d gadget copies yielded no monochromatic cycle", len(failures))
    if mode == "non_induced":
        freq = Counter(gc.length for _, gc in found)
        L = min(freq, key=lambda x: (-freq[x], x)) if freq else 3
    else:
        L = 6 if mode == "even_induced" else 5
    records = {}
    dropped = []
    for hid, gc in found:
        if gc.length != L:
            dropped.append(hid)
            continue
        r = _lift_record(hid, host.placements[hid], gc)
        records[norm_edge(r.u, r.v)] = r
    if not records:
        raise NoAuxEdgesError("no gadget copy produced an auxiliary edge",
                              failures=len(failures), copies=len(host.placements))
    return AuxGraph(host.graph.vertex_count, mode, L, records, failures, dropped)


def densest_color_subgraph(aux: AuxGraph) -> tuple[int, Graph]:
    if not aux.records:
        raise NoAuxEdgesError("auxiliary graph has no edges")
    cnt = Counter(r.color for r in aux.records.values())
    color = min(cnt, key=lambda c: (-cnt[c], c))
    edges = [e for e, r in aux.records.items() if r.color == color]
    return color, Graph.from_edges(aux.vertex_count, edges)


# --------------------------------------------------------------------------
# colourers

COLORERS = ("uniform-random", "proper-greedy-avoid", "bipartition-stripe", "from-file")


def color_uniform_random(graph: Graph, k: int, seed: int) -> EdgeColoring:
    edges = list(graph.edges())
    rng = rng_for(seed, "colorer", "uniform-random")
    cols = rng.integers(1, k + 1, size=len(edges))
    return EdgeColoring(k, {e: int(c) for e, c in zip(edges, cols)})


def color_bipartition_stripe(graph: Graph, k: int, seed: int) -> EdgeColoring:
    """Each vertex gets a random class in [0, k); an edge takes colour (class sum mod k) + 1."""
    rng = rng_for(seed, "colorer", "bipartition-stripe")
    cls = rng.integers(0, k, size=graph.vertex_count)
    return EdgeColoring(k, {(u, v): int((cls[u] + cls[v]) % k) + 1 for u, v in graph.edges()})


def color_greedy_avoid(graph: Graph, k: int, seed: int, host: HostGraph | None = None
                       ) -> EdgeColoring:
    """Greedy near-proper colouring: each edge takes the colour with fewest monochromatic
    triangles and fewest same-coloured incident edges at that moment.

    Edges are processed copy by copy when the host is known, in random order inside a copy.
    """
    rng = rng_for(seed, "colorer", "proper-greedy-avoid")
    if host is not None:
        groups = [host.copy_edges(hid) for hid in range(len(host.placements))]
    else:
        groups = [list(graph.edges())]
    colors: dict[tuple[int, int], int] = {}
    cdeg = [dict() for _ in range(graph.vertex_count)]  # vertex -> colour -> set of neighbours
    for group in groups:
        order = rng.permutation(len(group))
        for i in order:
            u, v = group[int(i)]
            best = None
            for c in range(1, k + 1):
                nu = cdeg[u].get(c, set())
                nv = cdeg[v].get(c, set())
                cost = 10 * len(nu & nv) + len(nu) + len(nv)
                if best is None or cost < best[0]:
                    best = (cost, c)
            c = best[1]
            colors[(u, v)] = c
            cdeg[u].setdefault(c, set()).add(v)
            cdeg[v].setdefault(c, set()).add(u)
    return EdgeColoring(k, colors)


def color_from_file(graph: Graph, path: str) -> EdgeColoring:
    import json
    with open(path) as fh:
        col = EdgeColoring.from_json(json.load(fh))
    col.check_covers(graph)
    return col


def make_coloring(descriptor: str, graph: Graph, k: int, seed: int,
                  host: HostGraph | None = None) -> EdgeColoring:
    kind, _, arg = descriptor.partition(":")
    if kind == "from-file":
        if not arg:
            raise ColoringError("from-file needs a path: from-file:<path>")
        return color_from_file(graph, arg)
    if k == 1:
        return EdgeColoring.uniform(graph)
    if kind == "uniform-random":
        return color_uniform_random(graph, k, seed)
    if kind == "bipartition-stripe":
        return color_bipartition_stripe(graph, k, seed)
    if kind == "proper-greedy-avoid":
        return color_greedy_avoid(graph, k, seed, host)
    raise ColoringError("unknown colorer", descriptor=descriptor, known=list(COLORERS))

