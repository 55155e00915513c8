"""Shared builders and brute-force oracles for the test suite."""

import itertools

import networkx as nx

from ramsey_cycles.gadgets import Gadget
from ramsey_cycles.graphcore import EdgeColoring, Graph, Hypergraph, norm_edge
from ramsey_cycles.hostbuild import AuxEdge, AuxGraph

# one line per acceptance criterion, printed in the pytest terminal summary
ACCEPTANCE_LINES: list[str] = []


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_linear(rng, N, s, m):
    """Greedy random linear hypergraph: reject any s-set sharing a pair with a kept one."""
    pairs = set()
    out = []
    for _ in range(20 * m):
        e = tuple(sorted(rng.sample(range(N), s)))
        ps = set(itertools.combinations(e, 2))
        if ps & pairs:
            continue
        pairs |= ps
        out.append(e)
        if len(out) == m:
            break
    return Hypergraph.from_edges(N, s, out)


def aux_from_pairs(h: Hypergraph, pairs: dict, color: int = 1, mode: str = "non_induced",
                   L: int = 3) -> AuxGraph:
    """Auxiliary graph with one edge per given hyperedge; arcs are placeholders."""
    recs = {}
    for hid, (u, v) in pairs.items():
        assert u in h.edge_sets[hid] and v in h.edge_sets[hid]
        recs[norm_edge(u, v)] = AuxEdge(hid, u, v, color, (u, v), (u, v), (u, v))
    return AuxGraph(h.vertex_count, mode, L, recs)


def random_aux(h: Hypergraph, rng) -> AuxGraph:
    return aux_from_pairs(h, {hid: tuple(rng.sample(e, 2)) for hid, e in enumerate(h.edges)})


def brute_good_path(h: Hypergraph, aux: AuxGraph, p) -> bool:
    """Good path straight from the definition, using only set operations on hyperedges."""
    hs = [aux.h(p[i], p[i + 1]) for i in range(len(p) - 1)]
    sets = [h.edge_sets[x] for x in hs]
    for i, j in itertools.combinations(range(len(hs)), 2):
        inter = sets[i] & sets[j]
        if j == i + 1:
            if inter != {p[i + 1]}:
                return False
        elif inter:
            return False
    union = set().union(*sets) if sets else set()
    hits = {}
    for x in union:
        for f in h.incidence[x]:
            hits[f] = hits.get(f, 0) + 1
    return all(c < 2 for f, c in hits.items() if f not in hs)


def root_paths(root, parent):
    """Every path through the root of a parent-pointer tree, as vertex lists."""
    def up(x):
        out = [x]
        while out[-1] != root:
            out.append(parent[out[-1]])
        return out

    def branch(x):
        return up(x)[-2] if x != root else None

    verts = [root] + sorted(parent)
    for a, b in itertools.combinations(verts, 2):
        if a == root or b == root or branch(a) != branch(b):
            yield up(a) + up(b)[::-1][1:]


def brute_good_tree(h, aux, root, parent) -> bool:
    return all(brute_good_path(h, aux, p) for p in root_paths(root, parent))


def loose_cycle_instance(mode: str, ell: int, L: int, anchor_gap: int):
    """ell copies of a C_L gadget arranged in a loose cycle; consecutive copies share one anchor.

    Returns (hypergraph, host graph, aux graph, aux cycle, arc lengths).  Copy i is the cycle
    a_i, x.., a_{i+1}, y.. with a_i and a_{i+1} at distance ``anchor_gap`` along it.
    """
    anchors = list(range(ell))
    nxt = ell
    edges = []
    recs = {}
    for i in range(ell):
        a, b = anchors[i], anchors[(i + 1) % ell]
        inner1 = list(range(nxt, nxt + anchor_gap - 1))
        nxt += anchor_gap - 1
        inner2 = list(range(nxt, nxt + L - anchor_gap - 1))
        nxt += L - anchor_gap - 1
        short = (a, *inner1, b)
        long = (a, *inner2[::-1], b)
        cyc = short + tuple(inner2)
        for j in range(L):
            edges.append((cyc[j], cyc[(j + 1) % L]))
        if anchor_gap > L - anchor_gap:
            short, long = long, short
        recs[norm_edge(a, b)] = AuxEdge(i, a, b, 1, cyc, short, long)
    g = Graph.from_edges(nxt, edges)
    aux = AuxGraph(nxt, mode, L, recs)
    cycles = sorted(recs.values(), key=lambda r: r.hid)
    h = Hypergraph.from_edges(nxt, L, [tuple(sorted(r.cycle)) for r in cycles])
    return h, g, aux, anchors, (len(recs[norm_edge(0, 1)].short_path) - 1,
                             len(recs[norm_edge(0, 1)].long_path) - 1)


def ig_edges(h, W):
    W = sorted(W)
    return [(a, b, next(iter(h.edge_sets[a] & h.edge_sets[b])))
            for a, b in itertools.combinations(W, 2) if h.edge_sets[a] & h.edge_sets[b]]


def has_sunflower_cycle(edges):
    by = {}
    for a, b, x in edges:
        by.setdefault(x, nx.Graph()).add_edge(a, b)
    return any(not nx.is_forest(G) for G in by.values())


def brute_sunflower_free_max(h, W):
    edges = ig_edges(h, W)
    if len(edges) > 12:
        # each label class is a clique; the largest forest inside it has c - 1 edges
        by = {}
        for a, b, x in edges:
            by.setdefault(x, nx.Graph()).add_edge(a, b)
        return sum(G.number_of_nodes() - nx.number_connected_components(G) for G in by.values())
    for r in range(len(edges), -1, -1):
        for sub in itertools.combinations(edges, r):
            if not has_sunflower_cycle(sub):
                return r
    return 0


def brute_p4_violated(h, limit):
    for r in range(1, limit + 1):
        for W in itertools.combinations(range(h.num_edges), r):
            if 3 * brute_sunflower_free_max(h, W) > 4 * r:
                return True
    return False


def brute_p5_violated(h, limit):
    for r in range(1, limit + 1):
        for A in itertools.combinations(range(h.vertex_count), r):
            As = set(A)
            if sum(1 for e in h.edges if len(As & set(e)) >= 2) > 2 * r:
                return True
    return False


def wagner() -> Gadget:
    edges = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    return Gadget(Graph.from_edges(8, edges), "odd_induced", "wagner")


def color_class(g: Graph, col: EdgeColoring, c: int) -> nx.Graph:
    G = nx.Graph()
    G.add_edges_from(e for e in g.edges() if col[e] == c)
    return G


def has_cycle_of_length(G: nx.Graph, L: int) -> bool:
    return any(len(c) == L for c in nx.simple_cycles(G, length_bound=L))


def random_graph(rng, n, p):
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2)
                                if rng.random() < p])


def powerset_min_ratio(g, V):
    """Smallest |N(U) \\ U| / |U| over nonempty U of at most half the vertices."""
    best = None
    Vs = set(V)
    for r in range(1, len(V) // 2 + 1):
        for U in itertools.combinations(V, r):
            Us = set(U)
            nb = {w for x in U for w in g.adjacency[x] if w in Vs and w not in Us}
            ratio = len(nb) / r
            if best is None or ratio < best:
                best = ratio
    return best
