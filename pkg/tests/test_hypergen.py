import math
import random

import numpy as np
import pytest

from _util import (brute_p4_violated, brute_p5_violated, brute_sunflower_free_max,
                   has_sunflower_cycle, ig_edges, random_linear)
from ramsey_cycles.errors import ParameterError, RetriesExhaustedError
from ramsey_cycles.graphcore import Hypergraph, berge_girth
from ramsey_cycles.hypergen import (VERIFIED_EXACT, VIOLATED, HostParams, cleanup, draw_edges,
                                    find_berge_cycle, sample_host_hypergraph,
                                    sample_until_verified, sunflower_free_max_edges,
                                    sunflower_free_witness, verify_p1, verify_p2, verify_p3,
                                    verify_p4, verify_p5)

FANO = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]







def test_sunflower_free_max_matches_brute_force():
    rng = random.Random(5)
    h = Hypergraph.from_edges(7, 3, FANO)
    assert sunflower_free_max_edges(h, range(7)) == 14
    for _ in range(60):
        h = random_linear(rng, rng.randint(6, 10), 3, rng.randint(2, 6))
        W = rng.sample(range(h.num_edges), rng.randint(1, h.num_edges))
        assert sunflower_free_max_edges(h, W) == brute_sunflower_free_max(h, W)
        wit = sunflower_free_witness(h, W)
        assert len(wit) == sunflower_free_max_edges(h, W) and not has_sunflower_cycle(wit)
        assert set(ig_edges(h, W)) >= {(min(a, b), max(a, b), x) for a, b, x in wit}


def test_p4_p5_match_brute_force_on_small_linear_hypergraphs():
    rng = random.Random(2024)
    seen = {"p4": set(), "p5": set()}
    instances = [Hypergraph.from_edges(7, 3, FANO)]
    while len(instances) < 200:
        instances.append(random_linear(rng, rng.randint(7, 12), 3, rng.randint(3, 8)))
    for h in instances:
        N = h.vertex_count
        alpha = rng.choice([0.5, 0.8, 1.0])
        p = HostParams(N=N, C=1.0, s=3, g=2, alpha=alpha, p4_cap=N, p5_cap=N,
                       p4_budget=10 ** 7, p5_budget=10 ** 7)
        r4 = verify_p4(h, p)
        r5 = verify_p5(h, p)
        lim4 = min(math.ceil(alpha * N) - 1, h.num_edges)
        lim5 = int(alpha * N)
        want4 = brute_p4_violated(h, lim4)
        want5 = brute_p5_violated(h, lim5)
        assert (r4.status == VIOLATED) == want4
        assert r4.status in (VIOLATED, VERIFIED_EXACT)
        assert (r5.status == VIOLATED) == want5
        assert r5.status in (VIOLATED, VERIFIED_EXACT)
        seen["p4"].add(want4)
        seen["p5"].add(want5)
        if want4:
            W = r4.witness["hyperedges"]
            assert len(W) <= lim4 and 3 * sunflower_free_max_edges(h, W) > 4 * len(W)
        if want5:
            A = set(r5.witness["vertices"])
            assert sum(1 for e in h.edges if len(A & set(e)) >= 2) > 2 * len(A)
    assert seen["p4"] == {True, False}
    # small linear instances cannot break P5, so add dense non-linear ones for that check
    for _ in range(150):
        N = rng.randint(5, 10)
        rows = {tuple(sorted(rng.sample(range(N), 3))) for _ in range(rng.randint(3, 22))}
        h = Hypergraph.from_edges(N, 3, rows)
        alpha = rng.choice([0.5, 0.8, 1.0])
        p = HostParams(N=N, C=1.0, s=3, g=2, alpha=alpha, p5_cap=N, p5_budget=10 ** 7)
        r5 = verify_p5(h, p)
        want5 = brute_p5_violated(h, int(alpha * N))
        assert (r5.status == VIOLATED) == want5
        assert r5.status in (VIOLATED, VERIFIED_EXACT)
        seen["p5"].add(want5)
    assert seen["p5"] == {True, False}


def greedy_girth_oracle(N, s, rows, g):
    kept = []
    for e in rows:
        if e in kept:
            continue
        if berge_girth(Hypergraph.from_edges(N, s, kept + [e]), g) is None:
            kept.append(e)
    return kept


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_cleanup_kernel_matches_incremental_oracle(g):
    rng = np.random.default_rng(g)
    for _ in range(8):
        N = int(rng.integers(10, 25))
        raw = draw_edges(N, 3, int(rng.integers(5, 30)), rng)
        final, stats = cleanup(N, raw, g, degree_cap=10 ** 9)
        _, first = np.unique(raw, axis=0, return_index=True)
        rows = [tuple(int(x) for x in raw[i]) for i in sorted(first)]
        want = greedy_girth_oracle(N, 3, rows, g)
        assert [tuple(int(x) for x in r) for r in final] == want
        assert stats["duplicates"] == raw.shape[0] - len(rows)
        assert stats["girth_removed"] == len(rows) - len(want)


def test_cleanup_degree_cap_and_draw():
    rng = np.random.default_rng(0)
    raw = draw_edges(30, 4, 200, rng)
    assert raw.shape == (200, 4) and (np.diff(raw, axis=1) > 0).all()
    final, stats = cleanup(30, raw, 2, degree_cap=3)
    deg = np.bincount(final.ravel(), minlength=30)
    assert deg.max() <= 3
    assert stats["drawn"] == 200
    assert (stats["duplicates"] + stats["girth_removed"] + stats["degree_removed"]
            + final.shape[0]) == 200
    with pytest.raises(ParameterError):
        draw_edges(3, 4, 1, rng)


def test_simple_properties_and_berge_witness():
    h = Hypergraph.from_edges(7, 3, FANO)
    p = HostParams(N=7, C=1.0, s=3, g=3)
    assert verify_p1(h, p).status == VERIFIED_EXACT
    assert verify_p2(h, p).status == VERIFIED_EXACT
    r3 = verify_p3(h, p)
    assert r3.status == VIOLATED and r3.witness["berge_cycle_length"] == 3
    cyc = find_berge_cycle(h, 3)
    vs, es = cyc["vertices"], cyc["edges"]
    assert len(vs) == len(es) == 3 and len(set(vs)) == 3 and len(set(es)) == 3
    for i, e in enumerate(es):
        assert {vs[i - 1], vs[i]} <= h.edge_sets[e] or {vs[i], vs[(i + 1) % 3]} <= h.edge_sets[e]
    assert verify_p1(h, HostParams(N=7, C=3.0, s=3, g=3)).status == VIOLATED
    assert verify_p2(h, HostParams(N=7, C=0.1, s=3, g=3)).status == VIOLATED


def test_sampling_is_deterministic_and_satisfies_cleanup():
    p = HostParams(N=400, C=1.0, s=3, g=4)
    h1, s1 = sample_host_hypergraph(p, 17)
    h2, s2 = sample_host_hypergraph(p, 17)
    h3, _ = sample_host_hypergraph(p, 18)
    assert h1 == h2 and s1 == s2 and h1 != h3
    assert berge_girth(h1, 4) is None and h1.max_degree() <= p.max_degree


def test_sample_until_verified_success_and_failures():
    p = HostParams(N=400, C=0.6, s=3, g=4, alpha=0.02)
    h, rep = sample_until_verified(p, 3, 1)
    assert rep.acceptable()
    h2, rep2 = sample_until_verified(p, 3, 1)
    assert h == h2 and rep.to_json() == rep2.to_json()
    for key in ("P1", "P2", "P3", "P4", "P5"):
        assert key in rep.results
    # girth 8 at C=3 removes far too many edges for P1 to survive
    with pytest.raises(RetriesExhaustedError):
        sample_until_verified(HostParams(N=300, C=3.0, s=3, g=8), 2, 0)
    # fewer distinct 3-sets than the P1 lower bound: rejected without sampling
    with pytest.raises(RetriesExhaustedError):
        sample_until_verified(HostParams(N=5, C=10.0, s=3, g=2), 2, 0)
    with pytest.raises(ParameterError):
        sample_until_verified(p, 0, 0)
