"""Expander extraction by iterated density peeling, expansion checks, and the min-degree core."""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParameterError, PreconditionError
from .graphcore import Graph
from .hypergen import VERIFIED_EXACT, VERIFIED_SAMPLED, VIOLATED


@dataclass(frozen=True)
class ExpanderParams:
    c1: float
    c2: float
    beta: float
    Delta: float

    def __post_init__(self) -> None:
        if not (self.c1 > self.c2 > 1):
            raise ParameterError("need c1 > c2 > 1", c1=self.c1, c2=self.c2)
        if not 0 < self.beta < 1:
            raise ParameterError("beta must lie in (0, 1)", beta=self.beta)
        if self.Delta <= 0:
            raise ParameterError("Delta must be positive", Delta=self.Delta)

    @property
    def rounds(self) -> int:
        return max(1, math.ceil(math.log2(1 / self.beta)))

    @property
    def delta_step(self) -> float:
        return (self.c1 - self.c2) / (2 * self.rounds)

    @property
    def gamma(self) -> float:
        return self.delta_step / self.Delta

    def d(self, i: int) -> float:
        return self.c1 - i * self.delta_step


@dataclass
class ExtractionResult:
    vertices: list[int]
    density: float
    rounds_used: int
    trace: list[dict] = field(default_factory=list)
    size_ok: bool = True


def _degrees(g: Graph, verts: set[int]) -> dict[int, int]:
    return {v: sum(1 for w in g.adjacency[v] if w in verts) for v in verts}


def _edge_count(g: Graph, verts: set[int]) -> int:
    return sum(1 for v in verts for w in g.adjacency[v] if w in verts) // 2


def peel_below(g: Graph, verts: Iterable[int], thr: float) -> set[int]:
    """Repeatedly delete vertices whose degree inside the current set is below ``thr``."""
    alive = set(verts)
    deg = _degrees(g, alive)
    stack = [v for v, d in deg.items() if d < thr]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] < thr and deg[w] + 1 >= thr:
                    stack.append(w)
    return alive


def min_degree_core(g: Graph, delta: float) -> Graph:
    return g.induced(peel_below(g, range(g.vertex_count), delta))


def _densest_prefix(g: Graph, verts: set[int], lo: float, hi: float
                    ) -> tuple[set[int] | None, float]:
    """Greedy min-degree peeling; best density among remaining sets with lo <= size <= hi."""
    alive = set(verts)
    deg = _degrees(g, alive)
    edges = sum(deg.values()) // 2
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    order = []
    best_size, best_den = None, -1.0
    size = len(alive)
    while size > 0:
        if lo <= size <= hi:
            den = edges / size
            if den > best_den:
                best_den, best_size = den, size
        if size < lo:
            break
        while True:
            d, v = heapq.heappop(heap)
            if v in alive and deg[v] == d:
                break
        alive.discard(v)
        order.append(v)
        edges -= d
        size -= 1
        for w in g.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    if best_size is None:
        return None, -1.0
    removed = set(order[:len(verts) - best_size])
    return set(verts) - removed, best_den


def extract_expander(g: Graph, p: ExpanderParams) -> ExtractionResult:
    """Iterated scheme: peel to density d_i, look for a dense half-size W, recurse into W."""
    base = [v for v in range(g.vertex_count) if g.adjacency[v]]
    n = len(base)
    e = g.num_edges
    if n == 0 or e / n < p.c1:
        raise PreconditionError("graph density below c1", density=(e / n if n else 0.0),
                                c1=p.c1)
    cur = set(base)
    trace = []
    i = 0
    while True:
        di = p.d(i)
        H = peel_below(g, cur, di)
        eh = _edge_count(g, H)
        info = {"round": i, "d_i": di, "input": len(cur), "core": len(H),
                "density": eh / len(H) if H else 0.0}
        if i >= p.rounds:
            info["stop"] = "round limit"
            trace.append(info)
            break
        W, den = _densest_prefix(g, H, p.beta * n, len(H) / 2)
        info["best_w"] = len(W) if W else 0
        info["best_w_density"] = den
        trace.append(info)
        if W is None or den < p.d(i + 1):
            break
        cur = W
        i += 1
    dens = eh / len(H) if H else 0.0
    target = (p.c1 + p.c2) / 2
    if dens < target:
        raise PreconditionError("extracted subgraph below the promised density",
                                density=dens, target=target)
    return ExtractionResult(sorted(H), dens, i, trace, size_ok=len(H) >= p.beta * n)


@dataclass
class ExpansionReport:
    status: str
    gamma: float
    witness: list[int] | None = None
    ratio: float | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"status": self.status, "gamma": self.gamma, "witness": self.witness,
                "ratio": self.ratio, "checked": self.checked}


def verify_expansion(g: Graph, gamma: float, cap: int = 16, vertices: Iterable[int] | None = None,
                     samples: int = 200, seed: int = 0) -> ExpansionReport:
    """Check |N(U)| >= gamma |U| for every U with |U| <= n/2.

    N(U) is the external neighbourhood inside the vertex set under test.
    """
    V = sorted(range(g.vertex_count) if vertices is None else set(vertices))
    n = len(V)
    if n == 0:
        return ExpansionReport(VERIFIED_EXACT, gamma)
    if n <= cap:
        idx = {v: i for i, v in enumerate(V)}
        nb = [0] * n
        for i, v in enumerate(V):
            for w in g.adjacency[v]:
                j = idx.get(w)
                if j is not None:
                    nb[i] |= 1 << j
        size = 1 << n
        nmask = [0] * size
        pop = [0] * size
        worst = None
        for mask in range(1, size):
            low = mask & -mask
            j = low.bit_length() - 1
            rest = mask ^ low
            nmask[mask] = nmask[rest] | nb[j]
            pop[mask] = pop[rest] + 1
            if 2 * pop[mask] > n:
                continue
            bound = bin(nmask[mask] & ~mask).count("1")
            r = bound / pop[mask]
            if worst is None or r < worst[0]:
                worst = (r, mask)
        if worst is None:
            return ExpansionReport(VERIFIED_EXACT, gamma, checked=size - 1)
        r, mask = worst
        if r < gamma:
            return ExpansionReport(VIOLATED, gamma, [V[j] for j in range(n) if mask >> j & 1], r,
                                   size - 1)
        return ExpansionReport(VERIFIED_EXACT, gamma, None, r, size - 1)
    return _sampled_expansion(g, gamma, V, samples, seed)


def _sampled_expansion(g: Graph, gamma: float, V: list[int], samples: int, seed: int
                       ) -> ExpansionReport:
    rng = random.Random(seed)
    Vset = set(V)
    n = len(V)
    half = n // 2
    checked = 0
    worst = None

    def consider(U: set[int], bsize: int):
        nonlocal worst
        r = bsize / len(U)
        if worst is None or r < worst[0]:
            worst = (r, sorted(U))

    # BFS balls grown one vertex at a time with an incrementally maintained boundary
    for _ in range(max(1, samples // 10)):
        root = rng.choice(V)
        U = set()
        boundary: dict[int, int] = {}  # outside vertex -> number of neighbours in U
        queue = [root]
        qi = 0
        seen = {root}
        while qi < len(queue) and len(U) < half:
            x = queue[qi]
            qi += 1
            U.add(x)
            boundary.pop(x, None)
            for w in g.adjacency[x]:
                if w not in Vset:
                    continue
                if w not in U:
                    boundary[w] = boundary.get(w, 0) + 1
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
            checked += 1
            if len(boundary) < gamma * len(U):
                consider(U, len(boundary))
                break
    for _ in range(samples):
        size = rng.randint(1, max(1, half))
        U = set(rng.sample(V, size))
        bd = {w for x in U for w in g.adjacency[x] if w in Vset and w not in U}
        checked += 1
        if len(bd) < gamma * len(U):
            consider(U, len(bd))
            break
    if worst is not None and worst[0] < gamma:
        return ExpansionReport(VIOLATED, gamma, worst[1], worst[0], checked)
    return ExpansionReport(VERIFIED_SAMPLED, gamma, None, None, checked)
