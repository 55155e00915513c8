"""Small gadget graphs and the finders for monochromatic short cycles inside them."""

from __future__ import annotations

import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceededError, GadgetError, ParameterError
from .graphcore import EdgeColoring, Graph, graph_girth

MODES = ("even_induced", "odd_induced", "non_induced")


@dataclass(frozen=True)
class Gadget:
    graph: Graph
    mode: str
    name: str = ""

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise GadgetError("unknown gadget mode", mode=self.mode)

    @property
    def s(self) -> int:
        return self.graph.vertex_count


@dataclass(frozen=True)
class GadgetCycle:
    vertices: tuple[int, ...]
    color: int
    anchor: tuple[int, int]
    short_path: tuple[int, ...]  # anchor[0] .. anchor[1]
    long_path: tuple[int, ...]   # anchor[0] .. anchor[1], the other way round

    @property
    def length(self) -> int:
        return len(self.vertices)


# --------------------------------------------------------------------------
# constructions

def complete_gadget(k: int, max_vertices: int = 257) -> Gadget:
    if k < 1:
        raise ParameterError("k must be >= 1", k=k)
    n = 2 ** k + 1
    if n > max_vertices:
        raise BudgetExceededError("complete gadget too large", k=k, vertices=n,
                                  max_vertices=max_vertices)
    g = Graph.from_edges(n, itertools.combinations(range(n), 2))
    return Gadget(g, "non_induced", f"complete:k={k}")


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            return (p, m) if r == 1 else None
    return None


class GF:
    """Arithmetic in GF(p^m); elements are integers 0..q-1 encoding coefficient vectors base p."""

    def __init__(self, q: int) -> None:
        pm = _prime_power(q)
        if pm is None:
            raise GadgetError("q is not a prime power", q=q)
        self.p, self.m = pm
        self.q = q
        p, m = pm
        if m == 1:
            self.add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
            return
        poly = self._irreducible(p, m)
        digits = [self._digits(a) for a in range(q)]
        self.add = [[self._num([(x + y) % p for x, y in zip(digits[a], digits[b])])
                     for b in range(q)] for a in range(q)]
        self.mul = [[self._num(self._polymulmod(digits[a], digits[b], poly))
                     for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _num(self, d: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(d))

    def _polymulmod(self, a, b, poly):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        # poly is monic of degree m: x^m = -sum(poly[i] x^i)
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(m):
                    prod[d - m + i] = (prod[d - m + i] - c * poly[i]) % p
        return prod[:m]

    @staticmethod
    def _irreducible(p: int, m: int) -> list[int]:
        # smallest monic polynomial of degree m without roots or proper factors
        for coeffs in itertools.product(range(p), repeat=m):
            poly = list(coeffs)
            if poly[0] == 0:
                continue
            if _is_irreducible(poly, p, m):
                return poly
        raise GadgetError("no irreducible polynomial found", p=p, m=m)


def _is_irreducible(low: list[int], p: int, m: int) -> bool:
    full = low + [1]
    for d in range(1, m // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=d):
            div = list(coeffs) + [1]
            if _poly_divides(div, full, p):
                return False
    return True


def _poly_divides(div: list[int], f: list[int], p: int) -> bool:
    r = list(f)
    dd = len(div) - 1
    for d in range(len(r) - 1, dd - 1, -1):
        c = r[d]
        if c:
            for i in range(dd + 1):
                r[d - dd + i] = (r[d - dd + i] - c * div[i]) % p
    return not any(r[:dd])


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    pts = []
    for v in itertools.product(range(q), repeat=3):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def incidence_gadget(q: int, max_vertices: int = 2000) -> Gadget:
    """Point-line incidence graph of the projective plane PG(2, q)."""
    field = GF(q)
    pts = _projective_points(q)
    if 2 * len(pts) > max_vertices:
        raise BudgetExceededError("incidence gadget too large", q=q, vertices=2 * len(pts))
    add, mul = field.add, field.mul
    P = len(pts)
    edges = []
    for i, x in enumerate(pts):
        for j, line in enumerate(pts):
            dot = 0
            for a, b in zip(x, line):
                dot = add[dot][mul[a][b]]
            if dot == 0:
                edges.append((i, P + j))
    return Gadget(Graph.from_edges(2 * P, edges), "even_induced", f"incidence:q={q}")


def _has_triangle(g: Graph) -> bool:
    return any(g.nbr_sets[u] & g.nbr_sets[v] for u, v in g.edges())


def _is_bipartite(g: Graph) -> bool:
    return _odd_cycle_in(g.vertex_count, g.adjacency) is None


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def trianglefree_gadget(spec: str, seed: int = 0, retries: int = 20) -> Gadget:
    """Triangle-free gadget from a descriptor: ``c5``, ``petersen`` or ``random,n=..,p=..``."""
    parts = [x.strip() for x in spec.split(",") if x.strip()]
    kind = parts[0] if parts else ""
    if kind == "c5":
        return Gadget(cycle_graph(5), "odd_induced", "trianglefree:c5")
    if kind == "petersen":
        return Gadget(petersen_graph(), "odd_induced", "trianglefree:petersen")
    if kind != "random":
        raise GadgetError("unknown triangle-free descriptor", spec=spec)
    opts = _kv(parts[1:])
    n = int(opts.get("n", 40))
    p = float(opts.get("p", 0.15))
    min_edges = int(opts.get("m", 1))
    rng = random.Random(seed)
    for _ in range(retries):
        nbrs = [set() for _ in range(n)]
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < p:
                nbrs[u].add(v)
                nbrs[v].add(u)
        # delete one edge from every triangle until none remain
        for u in range(n):
            for v in sorted(nbrs[u]):
                if v > u and v in nbrs[u] and nbrs[u] & nbrs[v]:
                    nbrs[u].discard(v)
                    nbrs[v].discard(u)
        g = Graph.from_edges(n, [(u, v) for u in range(n) for v in nbrs[u] if u < v])
        if not _has_triangle(g) and g.num_edges >= min_edges and not _is_bipartite(g):
            return Gadget(g, "odd_induced", f"trianglefree:{spec}")
    raise GadgetError("random triangle-free generator did not reach the target",
                      spec=spec, retries=retries)


def cycle_gadget(length: int) -> Gadget:
    """A bare cycle used as a tiny gadget: C5 (odd mode) or C6 (even mode)."""
    if length == 5:
        return Gadget(cycle_graph(5), "odd_induced", "cycle:len=5")
    if length == 6:
        return Gadget(cycle_graph(6), "even_induced", "cycle:len=6")
    raise GadgetError("cycle gadgets exist only for lengths 5 and 6", length=length)


def _kv(parts: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in parts:
        if "=" not in item:
            raise GadgetError("bad descriptor option", option=item)
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_gadget(descriptor: str, seed: int = 0) -> Gadget:
    kind, _, rest = descriptor.partition(":")
    try:
        if kind == "complete":
            return complete_gadget(int(_kv(rest.split(","))["k"]))
        if kind == "incidence":
            return incidence_gadget(int(_kv(rest.split(","))["q"]))
        if kind == "trianglefree":
            return trianglefree_gadget(rest, seed=seed)
        if kind == "cycle":
            return cycle_gadget(int(_kv(rest.split(","))["len"]))
    except (KeyError, ValueError) as exc:
        raise GadgetError("malformed gadget descriptor", descriptor=descriptor,
                          reason=str(exc)) from exc
    raise GadgetError("unknown gadget descriptor", descriptor=descriptor)


# --------------------------------------------------------------------------
# finders

def _color_classes(g: Graph, coloring: EdgeColoring) -> dict[int, list[list[int]]]:
    """Per color, an adjacency list over the gadget's vertices."""
    out: dict[int, list[list[int]]] = {}
    for u, v in g.edges():
        c = coloring[(u, v)]
        adj = out.setdefault(c, [[] for _ in range(g.vertex_count)])
        adj[u].append(v)
        adj[v].append(u)
    return out


def _make_cycle(cycle: Sequence[int], color: int, dist: int) -> GadgetCycle:
    """Attach the lexicographically least anchor pair at cycle distance ``dist``."""
    L = len(cycle)
    best = None
    for i in range(L):
        j = (i + dist) % L
        pair = tuple(sorted((cycle[i], cycle[j])))
        if best is None or pair < best[0]:
            best = (pair, i)
    pair, i = best
    a, b = pair
    ia = cycle.index(a)
    fwd = [cycle[(ia + t) % L] for t in range(L + 1)]
    ib = fwd.index(b)
    p1 = tuple(fwd[:ib + 1])
    p2 = tuple(reversed(fwd[ib:]))
    short, long = (p1, p2) if len(p1) <= len(p2) else (p2, p1)
    return GadgetCycle(tuple(cycle), color, (a, b), short, long)


def _odd_cycle_in(n: int, adj: Sequence[Sequence[int]]) -> list[int] | None:
    side = [-1] * n
    parent = [-1] * n
    depth = [0] * n
    for r in range(n):
        if side[r] != -1 or not adj[r]:
            continue
        side[r] = 0
        q = deque([r])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    q.append(w)
                elif side[w] == side[u]:
                    # climb both tree paths to their meeting point
                    a, b = u, w
                    left, right = [a], [b]
                    while depth[a] > depth[b]:
                        a = parent[a]
                        left.append(a)
                    while depth[b] > depth[a]:
                        b = parent[b]
                        right.append(b)
                    while a != b:
                        a, b = parent[a], parent[b]
                        left.append(a)
                        right.append(b)
                    return left + right[-2::-1]
    return None


def find_mono_odd_cycle(g: Gadget, coloring: EdgeColoring) -> GadgetCycle | None:
    if g.mode != "non_induced":
        raise GadgetError("odd-cycle finder needs a non_induced gadget", mode=g.mode)
    for c, adj in sorted(_color_classes(g.graph, coloring).items()):
        cyc = _odd_cycle_in(g.s, adj)
        if cyc is not None:
            return _make_cycle(cyc, c, (len(cyc) - 1) // 2)
    return None


def _classes_by_size(g: Graph, coloring: EdgeColoring):
    classes = _color_classes(g, coloring)
    sizes = {c: sum(len(r) for r in adj) // 2 for c, adj in classes.items()}
    return [(c, classes[c]) for c in sorted(classes, key=lambda c: (-sizes[c], c))]


def find_mono_c6(g: Gadget, coloring: EdgeColoring) -> GadgetCycle | None:
    """Monochromatic 6-cycle; relies on girth >= 6 so a distance-5 detour closes a C6."""
    if g.mode != "even_induced":
        raise GadgetError("C6 finder needs an even_induced gadget", mode=g.mode)
    n = g.s
    for c, adj in _classes_by_size(g.graph, coloring):
        for u in range(n):
            for v in adj[u]:
                if v < u:
                    continue
                # BFS from u avoiding the edge uv
                prev = {u: -1}
                dist = {u: 0}
                q = deque([u])
                while q:
                    x = q.popleft()
                    if dist[x] >= 5:
                        break
                    for y in adj[x]:
                        if (x == u and y == v) or y in dist:
                            continue
                        dist[y] = dist[x] + 1
                        prev[y] = x
                        q.append(y)
                if dist.get(v) == 5:
                    path = [v]
                    while path[-1] != u:
                        path.append(prev[path[-1]])
                    return _make_cycle(path[::-1], c, 2)
    return None


def _exhaustive_c5(n: int, adj: Sequence[Sequence[int]], allowed: set[int] | None = None
                   ) -> list[int] | None:
    """First 5-cycle in canonical order (least vertex first)."""
    ok = (lambda x: True) if allowed is None else (lambda x: x in allowed)
    for a in range(n):
        if not ok(a):
            continue
        for b in adj[a]:
            if b <= a or not ok(b):
                continue
            for c in adj[b]:
                if c <= a or c == b or not ok(c):
                    continue
                for d in adj[c]:
                    if d <= a or d in (b, c) or not ok(d):
                        continue
                    for e in adj[d]:
                        if e <= a or e in (b, c, d) or not ok(e):
                            continue
                        if a in adj[e] and b < e:
                            return [a, b, c, d, e]
    return None


def find_mono_c5(g: Gadget, coloring: EdgeColoring, floor: int = 4) -> GadgetCycle | None:
    """Iterated first/second-neighbourhood procedure, exhaustive search as the fallback."""
    if g.mode != "odd_induced":
        raise GadgetError("C5 finder needs an odd_induced gadget", mode=g.mode)
    G = g.graph
    classes = _color_classes(G, coloring)
    U = set(range(g.s))
    while len(U) >= floor:
        counts = Counter()
        for u in U:
            for w in G.adjacency[u]:
                if w in U and u < w:
                    counts[coloring[(u, w)]] += 1
        if not counts:
            break
        color = min(counts, key=lambda c: (-counts[c], c))
        adj = classes[color]
        thr = counts[color] / len(U)
        alive = set(U)
        deg = {x: sum(1 for w in adj[x] if w in alive) for x in alive}
        stack = [x for x in alive if deg[x] < thr]
        while stack:
            x = stack.pop()
            if x not in alive:
                continue
            alive.discard(x)
            for w in adj[x]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] < thr:
                        stack.append(w)
        if not alive:
            break
        v = min(alive, key=lambda x: (-deg[x], x))
        A = [w for w in adj[v] if w in alive]
        Aset = set(A)
        B = {y for a in A for y in adj[a] if y in alive and y != v}
        found = None
        for x in sorted(B):
            for y in adj[x]:
                if y in B and x < y:
                    found = (x, y)
                    break
            if found:
                break
        if found:
            x, y = found
            xp = min(a for a in adj[x] if a in Aset)
            yp = min(a for a in adj[y] if a in Aset and a != xp)
            return _make_cycle([v, xp, x, y, yp], color, 2)
        U = B
    for c, adj in sorted(classes.items()):
        cyc = _exhaustive_c5(g.s, adj)
        if cyc is not None:
            return _make_cycle(cyc, c, 2)
    return None


def finder_for(g: Gadget):
    return {"non_induced": find_mono_odd_cycle,
            "even_induced": find_mono_c6,
            "odd_induced": find_mono_c5}[g.mode]


def find_gadget_cycle(g: Gadget, coloring: EdgeColoring) -> GadgetCycle | None:
    return finder_for(g)(g, coloring)


def verify_gadget_ramsey(g: Gadget, k: int, budget: int = 1 << 20) -> bool:
    """Exhaustively check that every k-colouring of ``g`` yields a cycle from its finder."""
    edges = list(g.graph.edges())
    total = k ** len(edges)
    if total > budget:
        raise BudgetExceededError("too many colourings to enumerate", colorings=total,
                                  budget=budget)
    finder = finder_for(g)
    for combo in itertools.product(range(1, k + 1), repeat=len(edges)):
        if combo and combo[0] != 1 and k > 1:
            # colour permutations are symmetric; fixing the first edge's colour is enough
            continue
        col = EdgeColoring(k, dict(zip(edges, combo)))
        if finder(g, col) is None:
            return False
    return True


def check_gadget(g: Gadget) -> None:
    """Raise unless the gadget satisfies the structural requirement of its mode."""
    G = g.graph
    if g.mode == "even_induced":
        if not _is_bipartite(G) or (graph_girth(G, 5) is not None):
            raise GadgetError("even gadget must be bipartite with girth >= 6", name=g.name)
    elif g.mode == "odd_induced":
        if _has_triangle(G):
            raise GadgetError("odd gadget must be triangle-free", name=g.name)
    else:
        n = G.vertex_count
        if G.num_edges != n * (n - 1) // 2:
            raise GadgetError("non-induced gadget must be complete", name=g.name)

