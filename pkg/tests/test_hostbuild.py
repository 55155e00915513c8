import json
import random
from collections import Counter

import pytest

from _util import random_linear
from ramsey_cycles.errors import ColoringError, GadgetError, NoAuxEdgesError
from ramsey_cycles.gadgets import (Gadget, complete_gadget, cycle_gadget, incidence_gadget,
                                   parse_gadget)
from ramsey_cycles.graphcore import EdgeColoring, Graph, norm_edge
from ramsey_cycles.hostbuild import (AuxGraph, HostGraph, assemble_host, build_auxiliary,
                                     build_host, densest_color_subgraph, lift_lengths,
                                     make_coloring)


def host_for(gadget, N=60, m=25, seed=0):
    h = random_linear(random.Random(seed), N, gadget.s, m)
    return build_host(h, gadget, seed)


def test_host_places_one_copy_per_hyperedge():
    gad = parse_gadget("trianglefree:petersen")
    host = host_for(gad, N=80, m=12)
    h = host.hypergraph
    assert host.graph.num_edges == h.num_edges * gad.graph.num_edges  # linear: copies are disjoint
    for hid, pl in enumerate(host.placements):
        assert sorted(pl) == list(h.edges[hid])
        for a, b in gad.graph.edges():
            assert host.graph.has_edge(pl[a], pl[b])
            assert host.edge_owner[norm_edge(pl[a], pl[b])] == hid
    again = HostGraph.from_json(json.loads(json.dumps(host.to_json())))
    assert again.graph == host.graph and again.placements == host.placements
    assert build_host(h, gad, 0).placements == host.placements
    assert build_host(h, gad, 1).placements != host.placements
    with pytest.raises(GadgetError):
        build_host(h, complete_gadget(1), 0)
    with pytest.raises(GadgetError):
        assemble_host(h, gad, [tuple(range(10))] * h.num_edges)


@pytest.mark.parametrize("gadget,k", [(complete_gadget(2), 2), (incidence_gadget(2), 2),
                                      (parse_gadget("trianglefree:petersen"), 1),
                                      (cycle_gadget(5), 1)])
def test_auxiliary_records_are_lifted_gadget_cycles(gadget, k):
    host = host_for(gadget, N=120, m=20, seed=3)
    col = make_coloring("uniform-random", host.graph, k, 5, host)
    aux = build_auxiliary(host, col)
    assert aux.L == {"even_induced": 6, "odd_induced": 5}.get(gadget.mode, aux.L)
    a, b = lift_lengths(aux.mode, aux.L)
    assert a + b == aux.L
    for (u, v), r in aux.records.items():
        assert (u, v) == norm_edge(r.u, r.v)
        hedge = host.hypergraph.edge_sets[r.hid]
        assert set(r.cycle) <= hedge and len(r.cycle) == aux.L == len(set(r.cycle))
        for i in range(aux.L):
            e = (r.cycle[i], r.cycle[(i + 1) % aux.L])
            assert host.graph.has_edge(*e) and col[e] == r.color
        assert len(r.short_path) - 1 == a and len(r.long_path) - 1 == b
        assert {r.short_path[0], r.short_path[-1]} == {r.u, r.v}
        assert set(r.short_path) | set(r.long_path) == set(r.cycle)
        assert r.path_from(r.v, True)[0] == r.v
    assert len(aux.records) + len(aux.failures) + len(aux.dropped) == host.hypergraph.num_edges
    again = AuxGraph.from_json(json.loads(json.dumps(aux.to_json())))
    assert again.records == aux.records
    color, gred = densest_color_subgraph(aux)
    cnt = Counter(r.color for r in aux.records.values())
    assert cnt[color] == max(cnt.values()) == gred.num_edges


def test_non_induced_length_is_most_common():
    host = host_for(complete_gadget(2), N=150, m=40, seed=9)
    col = make_coloring("uniform-random", host.graph, 2, 1, host)
    aux = build_auxiliary(host, col)
    assert aux.mode == "non_induced" and aux.L % 2 == 1
    assert lift_lengths("non_induced", aux.L) == ((aux.L - 1) // 2, (aux.L + 1) // 2)
    with pytest.raises(GadgetError):
        build_auxiliary(host, col, "even_induced")


def test_no_aux_edges_is_an_error():
    # a 4-cycle gadget in non-induced mode never holds an odd cycle
    gad = Gadget(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), "non_induced", "C4")
    host = host_for(gad, N=40, m=5)
    with pytest.raises(NoAuxEdgesError):
        build_auxiliary(host, EdgeColoring.uniform(host.graph))


def test_colorers(tmp_path):
    host = host_for(complete_gadget(2), N=100, m=20, seed=4)
    g = host.graph
    for desc in ("uniform-random", "bipartition-stripe", "proper-greedy-avoid"):
        col = make_coloring(desc, g, 3, 7, host)
        col.check_covers(g)
        assert set(col.colors.values()) <= {1, 2, 3}
        assert make_coloring(desc, g, 3, 7, host).colors == col.colors
    assert set(make_coloring("uniform-random", g, 1, 0).colors.values()) == {1}
    stripe = make_coloring("bipartition-stripe", g, 2, 3)
    # the stripe colour is a function of vertex classes, so every triangle has an even number of 2s
    for hid in range(len(host.placements)):
        pl = host.placements[hid]
        tri = [norm_edge(pl[0], pl[1]), norm_edge(pl[1], pl[2]), norm_edge(pl[0], pl[2])]
        assert sum(1 for e in tri if stripe[e] == 2) % 2 == 0
    greedy = make_coloring("proper-greedy-avoid", g, 3, 0, host)
    rand = make_coloring("uniform-random", g, 3, 0, host)
    assert max_mono_degree(g, greedy) <= max_mono_degree(g, rand)
    path = tmp_path / "col.json"
    path.write_text(json.dumps(rand.to_json()))
    assert make_coloring(f"from-file:{path}", g, 3, 0).colors == rand.colors
    with pytest.raises(ColoringError):
        make_coloring("from-file", g, 3, 0)
    with pytest.raises(ColoringError):
        make_coloring("sideways", g, 3, 0)


def max_mono_degree(g, col):
    deg = Counter()
    for u, v in g.edges():
        deg[(u, col[(u, v)])] += 1
        deg[(v, col[(u, v)])] += 1
    return max(deg.values())


def test_lift_lengths_per_mode():
    assert lift_lengths("even_induced", 6) == (2, 4)
    assert lift_lengths("odd_induced", 5) == (2, 3)
    assert lift_lengths("non_induced", 7) == (3, 4)
    assert lift_lengths("non_induced", 3) == (1, 2)
