"""Random linear hypergraph sampling, cleanup, and verification of the host properties P1-P5."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Any

import numpy as np

from . import _kernels
from .errors import ParameterError, RetriesExhaustedError
from .graphcore import Hypergraph, berge_girth, build_intersection_graph
from .seeds import derive_seed, rng_for

VERIFIED_EXACT = "verified_exact"
VERIFIED_SAMPLED = "verified_sampled"
VIOLATED = "violated"
SKIPPED = "skipped"


def default_alpha(C: float, s: int) -> float:
    return 1e-6 * C ** -3 * s ** -8


@dataclass
class HostParams:
    N: int
    C: float
    s: int
    g: int
    k: int = 1
    n: int = 0
    mode: str = "non_induced"
    alpha: float | None = None
    p4_cap: int = 8
    p5_cap: int = 3
    p4_budget: int = 200_000
    p5_budget: int = 200_000
    p4_samples: int = 200
    p5_samples: int = 200

    def __post_init__(self) -> None:
        if self.N < 0 or self.C <= 0 or self.s < 2 or self.g < 2:
            raise ParameterError("invalid host parameters", N=self.N, C=self.C, s=self.s, g=self.g)

    @property
    def alpha_value(self) -> float:
        return default_alpha(self.C, self.s) if self.alpha is None else self.alpha

    @property
    def m(self) -> int:
        return math.ceil(self.C * self.N)

    @property
    def max_degree(self) -> float:
        return 8 * self.C * self.s

    def to_json(self) -> dict:
        d = asdict(self)
        d["alpha_effective"] = self.alpha_value
        return d


def asymptotic_g(C: float, s: int) -> int:
    """Girth bound of the asymptotic construction; far beyond desk scale."""
    return int(round((C * s) ** 20))


def asymptotic_N(k: int, C: float, s: int, n: int) -> float:
    """Vertex count of the asymptotic construction, for comparison in reports."""
    return 1e100 * k ** 2 * C ** 6 * s ** 14 * n


@dataclass
class PropertyResult:
    status: str
    witness: Any = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"status": self.status, "witness": self.witness, "details": self.details}


@dataclass
class VerificationReport:
    results: dict[str, PropertyResult] = field(default_factory=dict)
    cleanup: dict = field(default_factory=dict)

    def acceptable(self) -> bool:
        """P1-P3 exact and P4-P5 not violated."""
        for key in ("P1", "P2", "P3"):
            if self.results.get(key, PropertyResult(SKIPPED)).status != VERIFIED_EXACT:
                return False
        return all(self.results.get(key, PropertyResult(SKIPPED)).status != VIOLATED
                   for key in ("P4", "P5"))

    def to_json(self) -> dict:
        return {"properties": {k: v.to_json() for k, v in sorted(self.results.items())},
                "cleanup": self.cleanup}


# --------------------------------------------------------------------------
# sampling

def draw_edges(N: int, s: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m independent uniform s-subsets of [N] as sorted rows."""
    if m == 0:
        return np.zeros((0, s), dtype=np.int64)
    if s > N:
        raise ParameterError("s exceeds N", N=N, s=s)
    out = np.sort(rng.integers(0, N, size=(m, s), dtype=np.int64), axis=1)
    while True:
        bad = np.nonzero((np.diff(out, axis=1) == 0).any(axis=1))[0]
        if bad.size == 0:
            return out
        out[bad] = np.sort(rng.integers(0, N, size=(bad.size, s), dtype=np.int64), axis=1)


def cleanup(N: int, raw: np.ndarray, g: int, degree_cap: float) -> tuple[np.ndarray, dict]:
    """Dedupe, drop edges closing Berge cycles of length <= g, then edges at overfull vertices."""
    m = raw.shape[0]
    if m == 0:
        return raw, {"drawn": 0, "duplicates": 0, "girth_removed": 0, "degree_removed": 0}
    _, first = np.unique(raw, axis=0, return_index=True)
    first.sort()
    dedup = raw[first]
    maxdeg = int(np.bincount(dedup.ravel(), minlength=N).max())
    keep = _kernels.greedy_girth_filter(N, np.ascontiguousarray(dedup), int(g), maxdeg)
    kept = dedup[keep]
    deg = np.bincount(kept.ravel(), minlength=N)
    high = deg > degree_cap
    ok = ~high[kept].any(axis=1)
    final = kept[ok]
    stats = {"drawn": int(m), "duplicates": int(m - dedup.shape[0]),
             "girth_removed": int(dedup.shape[0] - kept.shape[0]),
             "degree_removed": int(kept.shape[0] - final.shape[0])}
    return final, stats


def sample_host_hypergraph(p: HostParams, seed: int) -> tuple[Hypergraph, dict]:
    rng = rng_for(seed, "hypergraph-draw")
    raw = draw_edges(p.N, p.s, p.m, rng)
    final, stats = cleanup(p.N, raw, p.g, p.max_degree)
    h = Hypergraph(p.N, p.s, tuple(tuple(int(x) for x in row) for row in final))
    return h, stats


# --------------------------------------------------------------------------
# verification

def verify_p1(h: Hypergraph, p: HostParams) -> PropertyResult:
    e = h.num_edges
    lo, hi = p.C * p.N / 2, p.C * p.N
    st = VERIFIED_EXACT if lo <= e <= hi else VIOLATED
    return PropertyResult(st, None if st == VERIFIED_EXACT else {"edges": e},
                          {"edges": e, "lower": lo, "upper": hi})


def verify_p2(h: Hypergraph, p: HostParams) -> PropertyResult:
    cap = p.max_degree
    for v, ids in enumerate(h.incidence):
        if len(ids) > cap:
            return PropertyResult(VIOLATED, {"vertex": v, "degree": len(ids)}, {"cap": cap})
    return PropertyResult(VERIFIED_EXACT, None, {"max_degree": h.max_degree(), "cap": cap})


def verify_p3(h: Hypergraph, p: HostParams) -> PropertyResult:
    bg = berge_girth(h, p.g)
    if bg is None:
        return PropertyResult(VERIFIED_EXACT, None, {"g": p.g})
    return PropertyResult(VIOLATED, {"berge_cycle_length": bg, "cycle": find_berge_cycle(h, p.g)},
                          {"g": p.g})


def find_berge_cycle(h: Hypergraph, cap: int) -> dict | None:
    """A shortest Berge cycle of length <= cap as alternating vertex/edge id lists."""
    N = h.vertex_count
    best = None
    for root in range(h.num_edges):
        r = N + root
        parent = {r: -1}
        dist = {r: 0}
        order = [r]
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            if 2 * dist[u] + 1 > 2 * cap:
                break
            nb = h.edges[u - N] if u >= N else [N + e for e in h.incidence[u]]
            for w in nb:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    order.append(w)
                elif parent[u] != w and dist[w] >= dist[u]:
                    L = dist[u] + dist[w] + 1
                    if L <= 2 * cap and (best is None or L < best[0]):
                        pu, pw = [u], [w]
                        while parent[pu[-1]] != -1:
                            pu.append(parent[pu[-1]])
                        while parent[pw[-1]] != -1:
                            pw.append(parent[pw[-1]])
                        sp = set(pu)
                        meet = next(x for x in pw if x in sp)
                        walk = pu[:pu.index(meet) + 1] + pw[:pw.index(meet)][::-1]
                        best = (L, walk)
        if best is not None and best[0] == 4:
            break
    if best is None:
        return None
    walk = best[1]
    return {"vertices": [x for x in walk if x < N], "edges": [x - N for x in walk if x >= N]}


def sunflower_free_max_edges(h: Hypergraph, W) -> int:
    """Largest edge count of a sunflower-cycle-free subgraph of the intersection graph on W.

    Each label class inside W is a clique on c_x hyperedges and may only keep a
    spanning forest, so the optimum is the sum of max(0, c_x - 1).
    """
    cnt = Counter(x for e in W for x in h.edges[e])
    return sum(c - 1 for c in cnt.values() if c > 1)


def sunflower_free_witness(h: Hypergraph, W) -> list[tuple[int, int, int]]:
    """Star per label: a concrete sunflower-cycle-free subgraph attaining the maximum."""
    by_label: dict[int, list[int]] = {}
    for e in sorted(W):
        for x in h.edges[e]:
            by_label.setdefault(x, []).append(e)
    out = []
    for x, es in sorted(by_label.items()):
        for e in es[1:]:
            out.append((es[0], e, x))
    return out


def _connected_subsets(adj, n_vertices: int, cap: int, budget: int, visit):
    """ESU enumeration of connected vertex subsets of size <= cap. Returns (complete, visited)."""
    count = 0

    def extend(sub, ext, v, nbhd):
        nonlocal count
        count += 1
        if count > budget:
            return False
        if visit(sub):
            return None
        if len(sub) == cap:
            return True
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_ext = ext + [u for u in adj[w] if u > v and u not in nbhd]
            r = extend(sub + [w], new_ext, v, nbhd | set(adj[w]))
            if r is not True:
                return r
        return True

    for v in range(n_vertices):
        r = extend([v], [u for u in adj[v] if u > v], v, set(adj[v]) | {v})
        if r is not True:
            return r, count
    return True, count


def _p4_excess(h: Hypergraph, W) -> float:
    return sunflower_free_max_edges(h, W) - 4 * len(W) / 3


def verify_p4(h: Hypergraph, p: HostParams, seed: int = 0, girth_ok: bool | None = None
              ) -> PropertyResult:
    limit = math.ceil(p.alpha_value * p.N) - 1  # largest |W| with |W| < alpha N
    if limit < 1 or h.num_edges == 0:
        return PropertyResult(VERIFIED_EXACT, None, {"size_limit": limit})
    if girth_ok is None:
        girth_ok = berge_girth(h, p.g) is None
    # with girth > g any set of at most g hyperedges spans a Berge forest, so its excess is negative
    proven = min(p.g, limit) if girth_ok else 0
    cap = min(p.p4_cap, limit)
    ig = build_intersection_graph(h)
    adj = [[b for b, _ in ig.adjacency[a]] for a in range(ig.edge_count)]
    found: list = []

    def visit(sub):
        if len(sub) > proven and _p4_excess(h, sub) > 0:
            found.append(sorted(sub))
            return True
        return False

    complete = True
    used = 0
    if cap > proven:
        complete, used = _connected_subsets(adj, ig.edge_count, cap, p.p4_budget, visit)
    if found:
        W = found[0]
        return PropertyResult(VIOLATED, {"hyperedges": W, "edges": sunflower_free_witness(h, W)},
                              {"regime": "exhaustive", "subsets": used})
    exact_upto = max(proven, cap) if complete is True else proven
    details = {"size_limit": limit, "exact_upto": exact_upto, "subsets": used}
    if exact_upto >= limit:
        return PropertyResult(VERIFIED_EXACT, None, details)
    # randomized peeling of BFS balls in the intersection graph
    rng = random.Random(derive_seed(seed, "p4-peel"))
    for _ in range(p.p4_samples):
        W = _bfs_ball(adj, rng.randrange(ig.edge_count), min(limit, 4 * max(cap, 8)), rng)
        W = _peel(h, W)
        if W and len(W) <= limit and _p4_excess(h, W) > 0:
            return PropertyResult(VIOLATED, {"hyperedges": sorted(W),
                                             "edges": sunflower_free_witness(h, W)},
                                  {**details, "regime": "sampled"})
    return PropertyResult(VERIFIED_SAMPLED, None, {**details, "samples": p.p4_samples})


def _bfs_ball(adj, root: int, size: int, rng: random.Random) -> set[int]:
    seen = {root}
    frontier = [root]
    while frontier and len(seen) < size:
        nxt = []
        for u in frontier:
            nb = list(adj[u])
            rng.shuffle(nb)
            for w in nb:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) >= size:
                        return seen
        frontier = nxt
    return seen


def _peel(h: Hypergraph, W: set[int]) -> set[int]:
    """Drop hyperedges with at most one shared vertex; each such removal raises the excess."""
    W = set(W)
    while True:
        cnt = Counter(x for e in W for x in h.edges[e])
        weak = [e for e in W if sum(1 for x in h.edges[e] if cnt[x] > 1) <= 1]
        if not weak:
            return W
        W.difference_update(weak)


def _p5_count(h: Hypergraph, A) -> int:
    hits = Counter(e for x in A for e in h.incidence[x])
    return sum(1 for c in hits.values() if c >= 2)


def verify_p5(h: Hypergraph, p: HostParams, seed: int = 0, linear: bool | None = None
              ) -> PropertyResult:
    limit = math.floor(p.alpha_value * p.N)  # |A| <= alpha N
    if limit < 1 or h.num_edges == 0:
        return PropertyResult(VERIFIED_EXACT, None, {"size_limit": limit})
    if linear is None:
        linear = berge_girth(h, 2) is None
    # in a linear hypergraph each pair of A lies in at most one edge: binom(a,2) <= 2a for a <= 5
    proven = min(5, limit) if linear else 0
    cap = min(p.p5_cap, limit)
    N = h.vertex_count
    two_section = [sorted({y for e in h.incidence[x] for y in h.edges[e] if y != x})
                   for x in range(N)]
    found: list = []

    def visit(sub):
        if len(sub) > proven and _p5_count(h, sub) > 2 * len(sub):
            found.append(sorted(sub))
            return True
        return False

    complete, used = True, 0
    if cap > proven:
        complete, used = _connected_subsets(two_section, N, cap, p.p5_budget, visit)
    if found:
        A = found[0]
        return PropertyResult(VIOLATED, {"vertices": A, "count": _p5_count(h, A)},
                              {"regime": "exhaustive"})
    exact_upto = max(proven, cap) if complete is True else proven
    details = {"size_limit": limit, "exact_upto": exact_upto, "subsets": used}
    if exact_upto >= limit:
        return PropertyResult(VERIFIED_EXACT, None, details)
    rng = random.Random(derive_seed(seed, "p5-grow"))
    target = min(limit, 64)
    for _ in range(p.p5_samples):
        e = rng.randrange(h.num_edges)
        A = set(rng.sample(h.edges[e], 2))
        while len(A) < target:
            cand = Counter()
            for x in A:
                for f in h.incidence[x]:
                    for y in h.edges[f]:
                        if y not in A:
                            cand[y] += 1
            if not cand:
                break
            y = max(cand, key=lambda z: (cand[z], -z))
            A.add(y)
            if _p5_count(h, A) > 2 * len(A):
                return PropertyResult(VIOLATED, {"vertices": sorted(A), "count": _p5_count(h, A)},
                                      {**details, "regime": "sampled"})
    return PropertyResult(VERIFIED_SAMPLED, None, {**details, "samples": p.p5_samples})


def verify_all(h: Hypergraph, p: HostParams, seed: int = 0) -> VerificationReport:
    rep = VerificationReport()
    rep.results["P1"] = verify_p1(h, p)
    rep.results["P2"] = verify_p2(h, p)
    rep.results["P3"] = verify_p3(h, p)
    girth_ok = rep.results["P3"].status == VERIFIED_EXACT
    if not girth_ok:
        rep.results["P4"] = PropertyResult(SKIPPED, None, {"reason": "P3 violated"})
        rep.results["P5"] = PropertyResult(SKIPPED, None, {"reason": "P3 violated"})
        return rep
    rep.results["P4"] = verify_p4(h, p, seed, girth_ok=True)
    rep.results["P5"] = verify_p5(h, p, seed, linear=True)
    return rep


def sample_until_verified(p: HostParams, max_retries: int, seed: int
                          ) -> tuple[Hypergraph, VerificationReport]:
    if max_retries < 1:
        raise ParameterError("max_retries must be >= 1", max_retries=max_retries)
    if p.C * p.N / 2 > math.comb(p.N, p.s):
        # P1 cannot hold: there are fewer distinct s-sets than the lower bound
        raise RetriesExhaustedError("edge count lower bound exceeds the number of s-subsets",
                                    attempts=0, N=p.N, s=p.s, C=p.C)
    last = None
    for attempt in range(max_retries):
        sub = derive_seed(seed, "attempt", attempt)
        h, stats = sample_host_hypergraph(p, sub)
        rep = VerificationReport(cleanup=dict(stats, attempt=attempt))
        rep.results["P1"] = verify_p1(h, p)
        if rep.results["P1"].status == VERIFIED_EXACT:
            rep = verify_all(h, p, sub)
            rep.cleanup = dict(stats, attempt=attempt)
        last = rep
        if rep.acceptable():
            return h, rep
    raise RetriesExhaustedError("no sampled hypergraph passed verification",
                                attempts=max_retries, last_report=last.to_json())
