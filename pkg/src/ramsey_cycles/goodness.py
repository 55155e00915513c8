"""Goodness of auxiliary paths, rooted trees and cycles, with ruin witnesses.

Everything is phrased through the intersection graph: two path hyperedges
overlap iff they are adjacent in it, and an outside hyperedge f meets the
union of the path's hyperedges in ``len({labels of f towards the path})``
vertices, because in a linear hypergraph f meets each hyperedge in at most
the single labelled vertex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvariantViolation, NotAPathError, NotATreeError, PreconditionError
from .graphcore import IntersectionGraph, check_path
from .hostbuild import AuxGraph


@dataclass
class GoodCertificate:
    kind: str
    subject: list[int]
    good: bool
    witness: dict | None = None
    cover: list[list[int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": self.kind, "subject": self.subject, "good": self.good,
                "witness": self.witness, "cover": self.cover}


def path_hids(aux: AuxGraph, p: Sequence[int]) -> list[int]:
    try:
        return [aux.h(p[i], p[i + 1]) for i in range(len(p) - 1)]
    except KeyError as exc:
        raise NotAPathError("path uses a pair that is not an auxiliary edge", path=list(p)) from exc


def path_violation(aux: AuxGraph, ig: IntersectionGraph, p: Sequence[int]) -> dict | None:
    """First violation of the good-path conditions, or None."""
    if len(set(p)) != len(p):
        raise NotAPathError("repeated vertex on path", path=list(p))
    hs = path_hids(aux, p)
    pos = {h: i for i, h in enumerate(hs)}
    # condition 1: path hyperedges overlap only when consecutive, and then only at the path vertex
    for i, h in enumerate(hs):
        for f, x in ig.adjacency[h]:
            j = pos.get(f)
            if j is None or j <= i:
                continue
            if j != i + 1 or x != p[i + 1]:
                return {"type": "overlap", "edges": [[p[i], p[i + 1]], [p[j], p[j + 1]]],
                        "hyperedges": [h, f], "vertex": x}
    # condition 2: outside hyperedges meeting the union in two distinct vertices
    touch: dict[int, dict[int, int]] = {}
    for i, h in enumerate(hs):
        for f, x in ig.adjacency[h]:
            if f in pos:
                continue
            seen = touch.setdefault(f, {})
            seen.setdefault(x, i)
    for f in sorted(touch):
        seen = touch[f]
        if len(seen) >= 2:
            (x, i), (y, j) = sorted(seen.items(), key=lambda t: (t[1], t[0]))[:2]
            return {"type": "outside", "hyperedge": f, "vertices": [x, y],
                    "edges": [[p[i], p[i + 1]], [p[j], p[j + 1]]]}
    return None


def is_good_path(aux: AuxGraph, ig: IntersectionGraph, p: Sequence[int]) -> GoodCertificate:
    check_path(aux.graph, p)
    w = path_violation(aux, ig, p)
    return GoodCertificate("path", list(p), w is None, w)


def extension_ruin(ig: IntersectionGraph, hnew: int, relevant, forbidden: Sequence[int]
                   ) -> tuple[int, int] | None:
    """Find (h, h_e) with h outside ``relevant`` meeting ``hnew`` and the relevant hyperedge h_e
    at two different vertices.

    ``relevant`` holds the hyperedges of every root path through the attachment vertex and
    ``forbidden`` the last two of them along that path. Witnesses whose h_e is not forbidden are
    preferred; one through the last two edges closes a Berge cycle of length at most 4 and is
    only returned when nothing else ruins the extension. Overlap of ``hnew`` with a relevant
    hyperedge other than ``forbidden[0]`` means the structure was not good to begin with.
    """
    parent = forbidden[0] if forbidden else None
    fallback = None
    for f, x in ig.adjacency[hnew]:
        if f in relevant:
            if f != parent:
                raise InvariantViolation("new hyperedge meets a non-adjacent hyperedge of the "
                                         "structure", hyperedge=f, new=hnew)
            continue
        for g2, y in ig.adjacency[f]:
            if y == x or g2 == hnew or g2 not in relevant:
                continue
            if g2 not in forbidden:
                return f, g2
            if fallback is None:
                fallback = (f, g2)
    return fallback


def ruin_witness_detail(aux: AuxGraph, ig: IntersectionGraph, p: Sequence[int], u: int
                        ) -> tuple[int, int] | None:
    """(ruining hyperedge, index of the path edge it meets) for ``p + (p[-1], u)``, or None."""
    v = p[-1]
    if u in p:
        raise PreconditionError("u already on the path", u=u)
    if not aux.graph.has_edge(v, u):
        raise PreconditionError("u is not an auxiliary neighbour of the path end", u=u, v=v)
    hs = path_hids(aux, p)
    pos = {h: i for i, h in enumerate(hs)}
    forbidden = hs[::-1][:2]
    r = extension_ruin(ig, aux.h(v, u), pos, forbidden)
    if r is None:
        return None
    return r[0], pos[r[1]]


def ruin_witness(aux: AuxGraph, ig: IntersectionGraph, p: Sequence[int], u: int) -> int | None:
    """Hyperedge ruining ``p + (p[-1], u)``, or None if the extension stays good.

    ``p`` must be good; the extension is made at its last vertex.
    """
    r = ruin_witness_detail(aux, ig, p, u)
    return None if r is None else r[0]


# --------------------------------------------------------------------------
# rooted trees

class RootedTree:
    """Parent-pointer tree inside the auxiliary graph, with ancestor queries."""

    def __init__(self, root: int, parent: Mapping[int, int]):
        self.root = root
        self.parent = dict(parent)
        self.parent.pop(root, None)
        children: dict[int, list[int]] = {root: []}
        for c, par in self.parent.items():
            children.setdefault(par, []).append(c)
            children.setdefault(c, [])
        self.children = children
        self.tin: dict[int, int] = {}
        self.tout: dict[int, int] = {}
        self.branch: dict[int, int] = {}
        self.depth: dict[int, int] = {root: 0}
        clock = 0
        stack = [(root, 0)]
        while stack:
            x, state = stack.pop()
            if state == 0:
                self.tin[x] = clock
                clock += 1
                stack.append((x, 1))
                for c in sorted(children[x], reverse=True):
                    self.depth[c] = self.depth[x] + 1
                    self.branch[c] = c if x == root else self.branch[x]
                    stack.append((c, 0))
            else:
                self.tout[x] = clock
                clock += 1
        if len(self.tin) != len(children):
            raise NotATreeError("parent map is not a tree rooted at the given root", root=root)

    @property
    def vertices(self) -> list[int]:
        return list(self.children)

    def is_anc(self, a: int, b: int) -> bool:
        """a is an ancestor of b or equal to it."""
        return self.tin[a] <= self.tin[b] and self.tout[b] <= self.tout[a]

    def root_path(self, x: int) -> list[int]:
        out = [x]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def comparable(self, c1: int, c2: int) -> bool:
        """Edges (parent(c1), c1) and (parent(c2), c2) lie on a common root path."""
        return (self.branch[c1] != self.branch[c2] or self.is_anc(c1, c2)
                or self.is_anc(c2, c1))

    def shared_vertex(self, c1: int, c2: int) -> int | None:
        """Common vertex of two edges that are consecutive on a root path."""
        if self.parent[c2] == c1:
            return c1
        if self.parent[c1] == c2:
            return c2
        if self.parent[c1] == self.root and self.parent[c2] == self.root:
            return self.root
        return None

    def leaves(self) -> list[int]:
        return sorted(x for x, ch in self.children.items() if not ch and x != self.root)


def tree_violation(aux: AuxGraph, ig: IntersectionGraph, t: RootedTree) -> dict | None:
    hid_of = {c: aux.h(t.parent[c], c) for c in t.parent}
    owner = {h: c for c, h in hid_of.items()}
    if len(owner) != len(hid_of):
        raise NotATreeError("two tree edges share a hyperedge")
    touch: dict[int, list[tuple[int, int]]] = {}
    for c in sorted(hid_of):
        h = hid_of[c]
        for f, x in ig.adjacency[h]:
            c2 = owner.get(f)
            if c2 is not None and c2 > c and t.comparable(c, c2):
                sv = t.shared_vertex(c, c2)
                if sv is None or sv != x:
                    return {"type": "overlap", "hyperedges": [h, f], "vertex": x,
                            "edges": [[t.parent[c], c], [t.parent[c2], c2]]}
            touch.setdefault(f, []).append((c, x))
    for f in sorted(touch):
        items = touch[f]
        if len(items) < 2:
            continue
        cf = owner.get(f)
        for a in range(len(items)):
            c1, x1 = items[a]
            for b in range(a + 1, len(items)):
                c2, x2 = items[b]
                if x1 == x2 or not t.comparable(c1, c2):
                    continue
                if cf is not None and (t.is_anc(cf, c1) or t.is_anc(cf, c2)):
                    continue  # f lies on every root path through both; handled as an overlap
                return {"type": "outside", "hyperedge": f, "vertices": [x1, x2],
                        "edges": [[t.parent[c1], c1], [t.parent[c2], c2]]}
    return None


def is_good_tree(aux: AuxGraph, ig: IntersectionGraph, root: int,
                 parent: Mapping[int, int]) -> GoodCertificate:
    t = RootedTree(root, parent)
    for c, par in t.parent.items():
        if not aux.graph.has_edge(par, c):
            raise NotATreeError("tree edge is not an auxiliary edge", edge=[par, c])
    w = tree_violation(aux, ig, t)
    return GoodCertificate("tree", sorted(t.vertices), w is None, w)


# --------------------------------------------------------------------------
# cycles

def _cover_interval(q: Sequence[int], member: Sequence[int]) -> list[int]:
    """Indices of cycle edges used by a subpath of q (edge i joins q[i], q[i+1])."""
    L = len(q)
    pos = {v: i for i, v in enumerate(q)}
    if any(v not in pos for v in member):
        raise NotAPathError("cover member leaves the cycle", member=list(member))
    if len(member) < 2:
        return []
    i0, i1 = pos[member[0]], pos[member[1]]
    step = 1 if (i0 + 1) % L == i1 else -1 if (i0 - 1) % L == i1 else 0
    if step == 0:
        raise NotAPathError("cover member is not a subpath of the cycle", member=list(member))
    out = []
    for a, b in zip(member, member[1:]):
        ia, ib = pos[a], pos[b]
        if (ia + step) % L != ib:
            raise NotAPathError("cover member is not a subpath of the cycle", member=list(member))
        out.append(ia if step == 1 else ib)
    if len(set(out)) != len(out) or len(set(member)) != len(member):
        raise NotAPathError("cover member repeats a vertex", member=list(member))
    return out


def is_good_cycle(aux: AuxGraph, ig: IntersectionGraph, q: Sequence[int],
                  cover: Sequence[Sequence[int]]) -> GoodCertificate:
    L = len(q)
    masks = []
    for m in cover:
        idx = _cover_interval(q, m)
        w = path_violation(aux, ig, m)
        if w is not None:
            return GoodCertificate("cycle", list(q), False, {"type": "bad_member",
                                   "member": list(m), "violation": w}, [list(c) for c in cover])
        mask = 0
        for i in idx:
            mask |= 1 << i
        masks.append(mask)
    full = (1 << L) - 1
    for i in range(L):
        reach = 0
        for mask in masks:
            if mask >> i & 1:
                reach |= mask
        if reach != full:
            missing = (full & ~reach).bit_length() - 1
            return GoodCertificate("cycle", list(q), False,
                                   {"type": "uncovered_pair", "edge_indices": [i, missing]},
                                   [list(c) for c in cover])
    return GoodCertificate("cycle", list(q), True, None, [list(c) for c in cover])


def short_paths_are_good_probe(aux: AuxGraph, ig: IntersectionGraph, g: int, trials: int,
                               seed: int) -> dict:
    """Random aux paths with at most g vertices; every one should be good when girth > g."""
    rng = random.Random(seed)
    verts = aux.graph.non_isolated()
    bad = []
    lengths = []
    if not verts:
        return {"trials": 0, "violations": [], "lengths": []}
    adj = aux.graph.adjacency
    for _ in range(trials):
        target = rng.randint(1, max(1, g - 1))
        p = [rng.choice(verts)]
        seen = {p[0]}
        while len(p) - 1 < target:
            opts = [w for w in adj[p[-1]] if w not in seen]
            if not opts:
                break
            w = rng.choice(opts)
            p.append(w)
            seen.add(w)
        lengths.append(len(p) - 1)
        w = path_violation(aux, ig, p)
        if w is not None:
            bad.append({"path": p, "violation": w})
    return {"trials": trials, "violations": bad, "lengths": lengths}
