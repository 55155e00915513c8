"""Graph and hypergraph primitives plus the structural queries used everywhere else.

Vertices are dense integers. Graph adjacency is kept as sorted tuples
(canonical form) with lazily built neighbour sets for O(1) edge tests.
Hyperedges are sorted tuples; the edge identifier is the position in
``Hypergraph.edges``.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import (
    ColoringError,
    InvalidGraphError,
    NonLinearHypergraphError,
    NotACycleError,
    NotAPathError,
)

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=True)
class Graph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.vertex_count:
            raise InvalidGraphError("adjacency length differs from vertex_count",
                                    vertex_count=self.vertex_count, rows=len(self.adjacency))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a simple graph; repeated edges collapse, self-loops are rejected."""
        nbrs: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if u == v:
                raise InvalidGraphError("self-loop", vertex=u)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidGraphError("edge endpoint out of range", edge=[u, v],
                                        vertex_count=vertex_count)
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(vertex_count, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def empty(cls, vertex_count: int) -> "Graph":
        return cls(vertex_count, tuple(() for _ in range(vertex_count)))

    @cached_property
    def nbr_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> Iterator[Edge]:
        for u, row in enumerate(self.adjacency):
            for v in row:
                if u < v:
                    yield (u, v)

    def non_isolated(self) -> list[int]:
        return [v for v, row in enumerate(self.adjacency) if row]

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced by ``vertices``; identifiers are preserved."""
        keep = set(vertices)
        rows = []
        for v in range(self.vertex_count):
            if v in keep:
                rows.append(tuple(w for w in self.adjacency[v] if w in keep))
            else:
                rows.append(())
        return Graph(self.vertex_count, tuple(rows))

    def to_json(self) -> dict:
        return {"vertex_count": self.vertex_count, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls.from_edges(data["vertex_count"], data["edges"])

    def to_dot(self, highlight: Sequence[int] | None = None, name: str = "G") -> str:
        hl: set[Edge] = set()
        if highlight:
            for i in range(len(highlight)):
                hl.add(norm_edge(highlight[i], highlight[(i + 1) % len(highlight)]))
        lines = [f"graph {name} {{"]
        for u, v in self.edges():
            attr = ' [color=red, penwidth=3]' if (u, v) in hl else ""
            lines.append(f"  {u} -- {v}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=True)
class Hypergraph:
    vertex_count: int
    uniformity: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, ...]] = set()
        for i, e in enumerate(self.edges):
            if len(e) != self.uniformity or len(set(e)) != self.uniformity:
                raise InvalidGraphError("hyperedge does not have exactly s distinct vertices",
                                        edge_id=i, edge=list(e), s=self.uniformity)
            if any(not 0 <= x < self.vertex_count for x in e):
                raise InvalidGraphError("hyperedge vertex out of range", edge_id=i, edge=list(e))
            if list(e) != sorted(e):
                raise InvalidGraphError("hyperedge not sorted", edge_id=i, edge=list(e))
            if e in seen:
                raise InvalidGraphError("duplicate hyperedge", edge_id=i, edge=list(e))
            seen.add(e)

    @classmethod
    def from_edges(cls, vertex_count: int, uniformity: int,
                   edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(vertex_count, uniformity, tuple(tuple(sorted(e)) for e in edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(e) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, e in enumerate(self.edges):
            for x in e:
                inc[x].append(i)
        return tuple(tuple(r) for r in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def max_degree(self) -> int:
        return max((len(r) for r in self.incidence), default=0)

    def to_json(self) -> dict:
        return {"vertex_count": self.vertex_count, "uniformity": self.uniformity,
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Hypergraph":
        return cls.from_edges(data["vertex_count"], data["uniformity"], data["edges"])


@dataclass(frozen=True)
class IntersectionGraph:
    """Intersection graph of a linear hypergraph; each edge labelled by the shared vertex."""

    edge_count: int
    labels: dict[Edge, int]
    adjacency: tuple[tuple[tuple[int, int], ...], ...]  # per hyperedge: (neighbour, label)

    def label(self, a: int, b: int) -> int | None:
        return self.labels.get(norm_edge(a, b))

    def neighbors(self, a: int) -> tuple[tuple[int, int], ...]:
        return self.adjacency[a]

    def labeled_edges(self) -> Iterator[tuple[int, int, int]]:
        for (a, b), x in sorted(self.labels.items()):
            yield (a, b, x)

    @property
    def num_edges(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class EdgeColoring:
    k: int
    colors: dict[Edge, int] = field(repr=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ColoringError("k must be >= 1", k=self.k)
        for e, c in self.colors.items():
            if not 1 <= c <= self.k:
                raise ColoringError("color out of range", edge=list(e), color=c, k=self.k)

    def __getitem__(self, e: Sequence[int]) -> int:
        return self.colors[norm_edge(e[0], e[1])]

    def __len__(self) -> int:
        return len(self.colors)

    @classmethod
    def uniform(cls, graph: Graph, color: int = 1, k: int = 1) -> "EdgeColoring":
        return cls(k, {e: color for e in graph.edges()})

    def check_covers(self, graph: Graph) -> None:
        """Raise unless the coloring is defined on exactly the edge set of ``graph``."""
        missing = [list(e) for e in graph.edges() if e not in self.colors]
        if missing:
            raise ColoringError("coloring misses graph edges", missing=missing[:10],
                                missing_count=len(missing))
        if len(self.colors) != graph.num_edges:
            extra = [list(e) for e in self.colors if not graph.has_edge(*e)]
            raise ColoringError("coloring has edges not in the graph", extra=extra[:10],
                                extra_count=len(extra))

    def classes(self) -> dict[int, list[Edge]]:
        out: dict[int, list[Edge]] = defaultdict(list)
        for e in sorted(self.colors):
            out[self.colors[e]].append(e)
        return dict(out)

    def to_json(self) -> dict:
        return {"k": self.k, "edges": [[u, v, c] for (u, v), c in sorted(self.colors.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "EdgeColoring":
        return cls(data["k"], {norm_edge(u, v): c for u, v, c in data["edges"]})


# --------------------------------------------------------------------------
# paths and cycles

def check_path(g: Graph, path: Sequence[int]) -> None:
    if len(set(path)) != len(path):
        raise NotAPathError("repeated vertex on path", path=list(path))
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise NotAPathError("consecutive path vertices not adjacent", edge=[a, b])


def check_cycle(g: Graph, cycle: Sequence[int]) -> None:
    if len(cycle) < 3:
        raise NotACycleError("a cycle needs at least 3 vertices", cycle=list(cycle))
    if len(set(cycle)) != len(cycle):
        raise NotACycleError("repeated vertex on cycle", cycle=list(cycle))
    for i in range(len(cycle)):
        a, b = cycle[i], cycle[(i + 1) % len(cycle)]
        if not (0 <= a < g.vertex_count and 0 <= b < g.vertex_count) or not g.has_edge(a, b):
            raise NotACycleError("consecutive cycle vertices not adjacent", edge=[a, b])


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    return [norm_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def find_chord(g: Graph, cycle: Sequence[int]) -> Edge | None:
    """First chord (in cycle order) between nonconsecutive cycle vertices, or None."""
    check_cycle(g, cycle)
    pos = {v: i for i, v in enumerate(cycle)}
    L = len(cycle)
    for i, v in enumerate(cycle):
        for w in g.adjacency[v]:
            j = pos.get(w)
            if j is None or j <= i:
                continue
            if j - i != 1 and not (i == 0 and j == L - 1):
                return (v, w)
    return None


def is_induced_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    return find_chord(g, cycle) is None


def graph_girth(g: Graph, cap: int) -> int | None:
    """Length of a shortest cycle if it is at most ``cap``; BFS from every vertex."""
    if cap < 3:
        raise ValueError("cap must be >= 3")
    best = cap + 1
    adj = g.adjacency
    for r in range(g.vertex_count):
        if not adj[r]:
            continue
        dist = {r: 0}
        parent = {r: -1}
        q = deque([r])
        while q:
            u = q.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, du + dist[w] + 1)
    return best if best <= cap else None


def berge_girth(h: Hypergraph, cap: int) -> int | None:
    """Shortest Berge cycle length if at most ``cap``.

    Works on the vertex/hyperedge incidence graph, where a Berge cycle of
    length t is exactly a cycle of length 2t. BFS is rooted at hyperedge
    nodes only, since every such cycle passes through one.
    """
    if cap < 2:
        raise ValueError("cap must be >= 2")
    N = h.vertex_count
    inc = h.incidence
    edges = h.edges
    best = 2 * cap + 1  # incidence-graph length bound

    def nbrs(node: int) -> Sequence[int]:
        if node >= N:
            return edges[node - N]
        return [N + i for i in inc[node]]

    for root in range(N, N + len(edges)):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in nbrs(u):
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, du + dist[w] + 1)
    return best // 2 if best <= 2 * cap else None


def nonlinear_pair(h: Hypergraph) -> tuple[int, int, tuple[int, ...]] | None:
    """First pair of hyperedges sharing at least two vertices, with the shared vertices."""
    shared: dict[Edge, list[int]] = defaultdict(list)
    for x, ids in enumerate(h.incidence):
        for a, b in combinations(ids, 2):
            shared[(a, b)].append(x)
    for (a, b), xs in sorted(shared.items()):
        if len(xs) >= 2:
            return a, b, tuple(xs)
    return None


def build_intersection_graph(h: Hypergraph) -> IntersectionGraph:
    labels: dict[Edge, int] = {}
    adj: list[list[tuple[int, int]]] = [[] for _ in range(h.num_edges)]
    for x, ids in enumerate(h.incidence):
        for a, b in combinations(ids, 2):
            if (a, b) in labels:
                raise NonLinearHypergraphError(
                    "hyperedges share more than one vertex",
                    pair=[a, b], shared=[labels[(a, b)], x])
            labels[(a, b)] = x
            adj[a].append((b, x))
            adj[b].append((a, x))
    return IntersectionGraph(h.num_edges, labels, tuple(tuple(sorted(r)) for r in adj))


class _DSU:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, a: int) -> int:
        p = self.parent.setdefault(a, a)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[a] = p
        return p

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def find_sunflower_cycle(labeled_edges: Iterable[tuple[int, int, int]]
                         ) -> tuple[int, list[int]] | None:
    """Return ``(label, cycle)`` for the first cycle whose edges share one label.

    Edges are grouped by label and each group is fed to its own union-find;
    the closing edge of the first cycle is traced back through the forest.
    """
    dsu: dict[int, _DSU] = defaultdict(_DSU)
    forest: dict[int, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    for a, b, x in labeled_edges:
        if a == b:
            continue
        if dsu[x].union(a, b):
            forest[x][a].append(b)
            forest[x][b].append(a)
            continue
        # a and b already connected inside label class x: recover the tree path
        adj = forest[x]
        prev = {a: a}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                break
            for w in adj[u]:
                if w not in prev:
                    prev[w] = u
                    q.append(w)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return x, path[::-1]
    return None


def has_sunflower_cycle(labeled_edges: Iterable[tuple[int, int, int]]) -> bool:
    return find_sunflower_cycle(labeled_edges) is not None


class LabeledGraph:
    """Mutable labelled subgraph of an intersection graph (the search's auxiliary structure)."""

    def __init__(self) -> None:
        self.vertices: set[int] = set()
        self.edges: dict[Edge, int] = {}
        self._dsu: dict[int, _DSU] = defaultdict(_DSU)
        self.sunflower_closed = False

    def add_vertex(self, a: int) -> bool:
        if a in self.vertices:
            return False
        self.vertices.add(a)
        return True

    def add_edge(self, a: int, b: int, label: int) -> bool:
        key = norm_edge(a, b)
        if key in self.edges:
            return False
        self.vertices.update(key)
        self.edges[key] = label
        if not self._dsu[label].union(a, b):
            self.sunflower_closed = True
        return True

    def labeled_edges(self) -> list[tuple[int, int, int]]:
        return [(a, b, x) for (a, b), x in sorted(self.edges.items())]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
