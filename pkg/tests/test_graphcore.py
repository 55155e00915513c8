import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramsey_cycles.errors import (InvalidGraphError, NonLinearHypergraphError, NotACycleError,
                                  NotAPathError)
from ramsey_cycles.graphcore import (EdgeColoring, Graph, Hypergraph, LabeledGraph, berge_girth,
                                     build_intersection_graph, check_cycle, check_path, find_chord,
                                     find_sunflower_cycle, graph_girth, is_induced_cycle,
                                     nonlinear_pair)


def random_graph(rng, n, p):
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2)
                                if rng.random() < p])


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges())
    return G


def test_graph_basics_and_json_roundtrip():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4), (1, 0)])
    assert g.num_edges == 4
    assert g.has_edge(1, 0) and not g.has_edge(0, 3)
    assert g.non_isolated() == [0, 1, 2, 3, 4]
    assert Graph.from_json(g.to_json()) == g
    sub = g.induced([0, 1, 3])
    assert sub.vertex_count == 5 and list(sub.edges()) == [(0, 1)]
    assert "0 -- 1" in g.to_dot(highlight=[0, 1, 2])


def test_graph_rejects_loops():
    with pytest.raises(InvalidGraphError):
        Graph.from_edges(3, [(1, 1)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 12), st.floats(0.1, 0.6))
def test_graph_girth_matches_networkx(seed, n, p):
    g = random_graph(random.Random(seed), n, p)
    G = to_nx(g)
    basis = nx.minimum_cycle_basis(G)
    want = min((len(c) for c in basis), default=None)
    assert graph_girth(g, n) == want


def brute_berge_girth(h, cap):
    """Shortest Berge cycle by enumerating hyperedge sequences and vertex choices."""
    m = h.num_edges
    for t in range(2, cap + 1):
        for seq in itertools.permutations(range(m), t):
            if seq[0] != min(seq):
                continue
            choices = [h.edge_sets[seq[i]] & h.edge_sets[seq[(i + 1) % t]] for i in range(t)]
            for pick in itertools.product(*[sorted(c) for c in choices]):
                if len(set(pick)) == t:
                    return t
    return None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_berge_girth_matches_brute_force(seed):
    rng = random.Random(seed)
    N = rng.randint(5, 9)
    s = rng.randint(2, 3)
    m = rng.randint(1, 6)
    edges = {tuple(sorted(rng.sample(range(N), s))) for _ in range(m)}
    h = Hypergraph.from_edges(N, s, edges)
    assert berge_girth(h, 5) == brute_berge_girth(h, 5)


def test_hypergraph_validation():
    with pytest.raises(InvalidGraphError):
        Hypergraph(4, 2, ((0, 1), (0, 1)))
    with pytest.raises(InvalidGraphError):
        Hypergraph(4, 2, ((1, 0),))
    with pytest.raises(InvalidGraphError):
        Hypergraph(4, 3, ((0, 1, 5),))
    h = Hypergraph.from_edges(6, 3, [(0, 1, 2), (2, 3, 4)])
    assert Hypergraph.from_json(h.to_json()) == h
    assert h.degree(2) == 2 and h.max_degree() == 2


def test_intersection_graph_labels_and_nonlinear():
    h = Hypergraph.from_edges(7, 3, [(0, 1, 2), (2, 3, 4), (4, 5, 0), (6, 5, 3)])
    ig = build_intersection_graph(h)
    assert ig.label(0, 1) == 2 and ig.label(1, 0) == 2
    assert ig.label(0, 3) is None
    for a, b, x in ig.labeled_edges():
        assert h.edge_sets[a] & h.edge_sets[b] == {x}
    bad = Hypergraph.from_edges(5, 3, [(0, 1, 2), (0, 1, 3)])
    assert nonlinear_pair(bad) == (0, 1, (0, 1))
    with pytest.raises(NonLinearHypergraphError):
        build_intersection_graph(bad)


def brute_sunflower(edges):
    by = {}
    for a, b, x in edges:
        by.setdefault(x, nx.MultiGraph()).add_edge(a, b)
    for x, G in by.items():
        if G.number_of_edges() > G.number_of_nodes() - nx.number_connected_components(G):
            return True
    return False


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 2)),
                max_size=12))
def test_sunflower_cycle_matches_forest_rank(raw):
    edges = []
    seen = set()
    for a, b, x in raw:
        if a != b and (min(a, b), max(a, b)) not in seen:
            seen.add((min(a, b), max(a, b)))
            edges.append((a, b, x))
    got = find_sunflower_cycle(edges)
    assert (got is not None) == brute_sunflower(edges)
    if got is not None:
        x, path = got
        lab = {frozenset((a, b)): y for a, b, y in edges}
        closing = path + [path[0]]
        assert all(lab[frozenset(p)] == x for p in zip(closing, closing[1:]))
    F = LabeledGraph()
    for a, b, x in edges:
        F.add_edge(a, b, x)
    assert F.sunflower_closed == (got is not None)


def test_path_and_cycle_checks_and_chords():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    check_path(g, [0, 1, 2])
    with pytest.raises(NotAPathError):
        check_path(g, [0, 2])
    with pytest.raises(NotACycleError):
        check_cycle(g, [0, 1, 2])
    assert find_chord(g, [0, 1, 2, 3, 4, 5]) == (0, 3)
    assert is_induced_cycle(g, [0, 1, 2, 3])


def test_edge_coloring_cover_and_json():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    col = EdgeColoring(2, {(0, 1): 1, (1, 2): 2})
    col.check_covers(g)
    assert col[(1, 0)] == 1
    assert EdgeColoring.from_json(col.to_json()).colors == col.colors
    assert set(EdgeColoring.uniform(g).colors.values()) == {1}
