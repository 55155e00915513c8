import itertools
import random

import numpy as np
import pytest

from _util import aux_from_pairs, brute_good_path, brute_good_tree, random_aux, random_linear
from ramsey_cycles.errors import NotAPathError, NotATreeError, PreconditionError
from ramsey_cycles.goodness import (RootedTree, is_good_cycle, is_good_path, is_good_tree,
                                    path_hids, path_violation, ruin_witness, ruin_witness_detail)
from ramsey_cycles.graphcore import Hypergraph, build_intersection_graph
from ramsey_cycles.hypergen import cleanup, draw_edges


def random_walk_path(rng, adj, length):
    p = [rng.choice([v for v in range(len(adj)) if adj[v]])]
    while len(p) - 1 < length:
        opts = [w for w in adj[p[-1]] if w not in p]
        if not opts:
            break
        p.append(rng.choice(opts))
    return p


def random_tree(rng, adj, root, size):
    parent = {}
    seen = {root}
    frontier = [root]
    while frontier and len(seen) < size:
        x = frontier.pop(rng.randrange(len(frontier)))
        for w in adj[x]:
            if w not in seen and len(seen) < size and rng.random() < 0.7:
                seen.add(w)
                parent[w] = x
                frontier.append(w)
    return parent


def girth_instance(seed, N=60, m=150, g=4):
    rng = np.random.default_rng(seed)
    final, _ = cleanup(N, draw_edges(N, 3, m, rng), g, 10 ** 9)
    return Hypergraph.from_edges(N, 3, [tuple(int(x) for x in r) for r in final])


def test_good_path_matches_definition():
    rng = random.Random(1)
    outcomes = set()
    for _ in range(80):
        h = random_linear(rng, rng.randint(15, 30), 3, rng.randint(10, 30))
        aux = random_aux(h, rng)
        ig = build_intersection_graph(h)
        adj = aux.graph.adjacency
        for _ in range(10):
            p = random_walk_path(rng, adj, rng.randint(1, 6))
            if len(p) < 2:
                continue
            want = brute_good_path(h, aux, p)
            cert = is_good_path(aux, ig, p)
            assert cert.good == want
            outcomes.add(want)
            if not want:
                assert cert.witness["type"] in ("overlap", "outside")
    assert outcomes == {True, False}


def test_good_tree_matches_definition():
    rng = random.Random(2)
    outcomes = set()
    for _ in range(120):
        h = random_linear(rng, rng.randint(20, 40), 3, rng.randint(15, 40))
        aux = random_aux(h, rng)
        ig = build_intersection_graph(h)
        adj = aux.graph.adjacency
        root = rng.choice(aux.graph.non_isolated())
        parent = random_tree(rng, adj, root, rng.randint(2, 9))
        if not parent:
            continue
        want = brute_good_tree(h, aux, root, parent)
        assert is_good_tree(aux, ig, root, parent).good == want
        outcomes.add(want)
    assert outcomes == {True, False}


def test_rooted_tree_queries_and_errors():
    t = RootedTree(0, {1: 0, 2: 1, 3: 0, 4: 3})
    assert t.root_path(2) == [0, 1, 2]
    assert t.is_anc(1, 2) and not t.is_anc(2, 1)
    assert t.comparable(1, 2) and t.comparable(2, 4) and t.leaves() == [2, 4]
    assert not RootedTree(0, {1: 0, 2: 1, 3: 1}).comparable(2, 3)
    with pytest.raises(NotATreeError):
        RootedTree(0, {1: 2, 2: 1})


def test_ruin_witness_follows_the_observation():
    rng = random.Random(3)
    seen_bad = 0
    seen_good = 0
    for seed in range(40):
        h = girth_instance(seed)
        if h.num_edges < 10:
            continue
        aux = random_aux(h, rng)
        ig = build_intersection_graph(h)
        adj = aux.graph.adjacency
        for _ in range(30):
            p = random_walk_path(rng, adj, rng.randint(2, 7))
            if len(p) < 3 or not brute_good_path(h, aux, p):
                continue
            opts = [u for u in adj[p[-1]] if u not in p]
            if not opts:
                continue
            u = rng.choice(opts)
            r = ruin_witness_detail(aux, ig, p, u)
            if brute_good_path(h, aux, p + [u]):
                assert r is None
                seen_good += 1
                continue
            seen_bad += 1
            assert r is not None
            f, i = r
            hs = path_hids(aux, p)
            hnew = aux.h(p[-1], u)
            assert f not in hs and f != hnew
            assert ig.label(f, hnew) is not None and ig.label(f, hs[i]) is not None
            assert i <= len(hs) - 3  # at distance at least two from the extended end
            assert ruin_witness(aux, ig, p, u) == f
    assert seen_bad > 10 and seen_good > 10


def test_ruin_witness_hand_built():
    # path 0-1-2-3 on hyperedges 0, 1, 2; new edge 3-4 on hyperedge 3; hyperedge 4 meets
    # hyperedge 0 at 5 and hyperedge 3 at 8, away from the path vertices
    h = Hypergraph.from_edges(10, 3, [(0, 1, 5), (1, 2, 6), (2, 3, 7), (3, 4, 8), (5, 8, 9)])
    aux = aux_from_pairs(h, {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 4)})
    ig = build_intersection_graph(h)
    assert is_good_path(aux, ig, [0, 1, 2, 3]).good
    assert not is_good_path(aux, ig, [0, 1, 2, 3, 4]).good
    assert ruin_witness_detail(aux, ig, [0, 1, 2, 3], 4) == (4, 0)
    assert ruin_witness(aux, ig, [1, 2, 3], 4) is None
    with pytest.raises(PreconditionError):
        ruin_witness(aux, ig, [0, 1, 2, 3], 2)
    with pytest.raises(PreconditionError):
        ruin_witness(aux, ig, [0, 1, 2], 4)


def brute_good_cycle(h, aux, q, cover):
    L = len(q)
    pos = {v: i for i, v in enumerate(q)}
    covered = set()
    for m in cover:
        if not brute_good_path(h, aux, m):
            return False
        idx = set()
        for a, b in zip(m, m[1:]):
            i, j = pos[a], pos[b]
            idx.add(i if (i + 1) % L == j else j)
        covered |= {frozenset(pr) for pr in itertools.combinations(sorted(idx), 2)}
    return all(frozenset(pr) in covered for pr in itertools.combinations(range(L), 2))


def loose_cycle_with_noise(rng, M, noise):
    """Hyperedges {i, i+1, M+i} around a cycle of length M plus random linear noise edges."""
    edges = [(i, (i + 1) % M, M + i) for i in range(M)]
    pairs = {frozenset(p) for e in edges for p in itertools.combinations(e, 2)}
    for _ in range(noise):
        e = rng.sample(range(2 * M), 3)
        ps = {frozenset(p) for p in itertools.combinations(e, 2)}
        if not ps & pairs:
            pairs |= ps
            edges.append(tuple(e))
    h = Hypergraph.from_edges(2 * M, 3, [tuple(sorted(e)) for e in edges])
    hid = {frozenset(e): i for i, e in enumerate(h.edges)}
    chosen = {}
    for e in edges:
        pair = (e[0], e[1])
        chosen[hid[frozenset(e)]] = pair
    return h, aux_from_pairs(h, chosen)


def test_good_cycle_matches_definition():
    rng = random.Random(4)
    outcomes = set()
    for _ in range(300):
        M = rng.randint(4, 9)
        h, aux = loose_cycle_with_noise(rng, M, rng.choice([0, 0, 1, 2]))
        ig = build_intersection_graph(h)
        q = list(range(M))
        s = rng.randrange(M)
        q = q[s:] + q[:s]
        if rng.random() < 0.5:
            q = q[::-1]
        L = len(q)
        # candidate members: the cycle minus two or three consecutive edges, in every rotation
        cands = [(q[s:] + q[:s])[:-1] for s in range(L)] + [(q[s:] + q[:s])[:-2] for s in range(L)]
        cover = rng.sample(cands, rng.randint(1, 2 * L))
        want = brute_good_cycle(h, aux, q, cover)
        cert = is_good_cycle(aux, ig, q, cover)
        assert cert.good == want
        outcomes.add(want)
    assert outcomes == {True, False}


def test_cycle_cover_must_be_subpaths():
    h = Hypergraph.from_edges(12, 3, [(0, 1, 6), (1, 2, 7), (2, 3, 8), (3, 0, 9)])
    aux = aux_from_pairs(h, {0: (0, 1), 1: (1, 2), 2: (2, 3), 3: (3, 0)})
    ig = build_intersection_graph(h)
    with pytest.raises(NotAPathError):
        is_good_cycle(aux, ig, [0, 1, 2, 3], [[0, 2]])
    with pytest.raises(NotAPathError):
        path_violation(aux, ig, [0, 1, 0])
    cert = is_good_cycle(aux, ig, [0, 1, 2, 3], [[0, 1, 2], [2, 3, 0]])
    assert not cert.good and cert.witness["type"] == "uncovered_pair"
