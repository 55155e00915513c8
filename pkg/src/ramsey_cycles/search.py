"""Staged searches on the expander subgraph: the modified DFS for a long good path and the
alternating growth of two trees hanging off that path's endpoints."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvariantViolation, ParameterError, SearchFailure
from .goodness import extension_ruin, is_good_path, is_good_tree, path_hids, ruin_witness_detail
from .graphcore import Graph, IntersectionGraph, LabeledGraph, find_sunflower_cycle
from .hostbuild import AuxGraph


@dataclass(frozen=True)
class SearchParams:
    """Scaled thresholds of both searches; None caps are unlimited."""
    path_target: int
    p_floor: int
    growth: int = 2
    expansion: int = 10
    tree_target: int = 0
    dfs_s1_cap: int | None = None
    dfs_s2_cap: int | None = None
    tree_s1_cap: int | None = None
    tree_s2_cap: int | None = None
    max_rounds: int = 1_000_000

    def __post_init__(self) -> None:
        if self.path_target < 1:
            raise ParameterError("path target must be at least one vertex",
                                 path_target=self.path_target)
        if self.growth < 2:
            raise ParameterError("growth factor must be at least 2", growth=self.growth)
        if self.expansion <= self.growth:
            raise ParameterError("expansion threshold must exceed the growth factor",
                                 expansion=self.expansion, growth=self.growth)

    @property
    def claim_c_const(self) -> float:
        f = self.growth
        return f * f / (f - 1) + 2

    @property
    def claim_e_const(self) -> float:
        # per step 5: at least b|X2| bad candidates each bring >= 1.5 edges per F-vertex, while
        # the dismantled trees bring at most f/(f-1)|X2| F-vertices with no edges
        f = self.growth
        b = min(f, (self.expansion - f) / 3)
        return 1.5 * b / (b + f / (f - 1))

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _capped(size: int, cap: int | None) -> bool:
    return cap is not None and size >= cap


# --------------------------------------------------------------------------
# modified depth-first search

@dataclass
class DfsState:
    P: list[int]
    S1: set[int]
    S2: set[int]
    U: set[int]
    F: LabeledGraph
    rounds: int = 0
    ruined: int = 0
    series: list[list[int]] = field(default_factory=list)  # round, |P|, |S1|, |S2|, v(F), e(F)

    def stats(self) -> dict:
        return {"rounds": self.rounds, "P": len(self.P), "S1": len(self.S1), "S2": len(self.S2),
                "U": len(self.U), "vF": self.F.num_vertices, "eF": self.F.num_edges,
                "ruined": self.ruined}

    def to_json(self) -> dict:
        return {"path": list(self.P), "stats": self.stats(), "series": self.series}


def _check_dfs(gp: Graph, aux: AuxGraph, ig: IntersectionGraph, st: DfsState) -> None:
    def fail(claim: str, **details):
        raise InvariantViolation(f"search claim {claim} failed", claim=claim,
                                 stats=st.stats(), **details)

    parts = [set(st.P), st.S1, st.S2, st.U]
    if sum(len(x) for x in parts) != len(set().union(*parts)) or len(set(st.P)) != len(st.P):
        fail("partition")
    if len(st.P) >= 2:
        cert = is_good_path(aux, ig, st.P)
        if not cert.good:
            fail("A", witness=cert.witness)
    for h in st.F.vertices:
        r = aux.by_hid.get(h)
        if r is not None and (r.u in st.U or r.v in st.U):
            fail("B", hyperedge=h)
    for x in st.S1:
        if any(w in st.U for w in gp.adjacency[x]):
            fail("C", vertex=x)
    vF, eF = st.F.num_vertices, st.F.num_edges
    if not (len(st.S2) / 3 <= vF <= len(st.P) + len(st.S1) + 2 * len(st.S2)):
        fail("D", vF=vF)
    if eF < 1.5 * (vF - len(st.P) - len(st.S1)):
        fail("E", eF=eF, vF=vF)
    if st.F.sunflower_closed or find_sunflower_cycle(st.F.labeled_edges()) is not None:
        fail("E-sunflower")


def find_good_path(gp: Graph, aux: AuxGraph, ig: IntersectionGraph, params: SearchParams,
                   debug: bool = False) -> DfsState:
    """Run the modified DFS until the stack holds ``params.path_target`` vertices."""
    adj = gp.adjacency
    st = DfsState([], set(), set(), set(gp.non_isolated()), LabeledGraph())
    hs: list[int] = []  # hyperedges of the path edges, kept in step with P
    target = params.path_target
    while True:
        if len(st.P) >= target:
            break
        if not st.U and not st.P:
            raise SearchFailure("unexplored set exhausted before reaching the path target",
                                stage="dfs", **st.stats())
        if _capped(len(st.S1), params.dfs_s1_cap) or _capped(len(st.S2), params.dfs_s2_cap):
            raise SearchFailure("explored set cap reached", stage="dfs", **st.stats())
        if st.rounds >= params.max_rounds:
            raise SearchFailure("round limit reached", stage="dfs", **st.stats())
        st.rounds += 1
        if not st.P:
            v0 = min(st.U)
            st.U.remove(v0)
            st.P.append(v0)
        v = st.P[-1]
        u = next((w for w in adj[v] if w in st.U), None)
        if u is None:
            st.P.pop()
            if hs:
                hs.pop()
            st.S1.add(v)
        else:
            st.U.remove(u)
            r = ruin_witness_detail(aux, ig, st.P, u) if len(st.P) >= 2 else None
            if r is None:
                st.P.append(u)
                hs.append(aux.h(v, u))
                st.F.add_vertex(hs[-1])
            else:
                st.ruined += 1
                h2, i = r
                h1 = aux.h(v, u)
                he = hs[i]
                if st.F.add_vertex(h2):
                    st.F.add_edge(h2, he, ig.label(h2, he))
                st.F.add_vertex(h1)
                st.F.add_edge(h1, h2, ig.label(h1, h2))
                st.F.add_edge(h1, hs[-1], v)
                rec = aux.by_hid.get(h2)
                if rec is not None:
                    for w in (rec.u, rec.v):
                        if w in st.U:
                            st.U.remove(w)
                            st.S2.add(w)
                st.S2.add(u)
        st.series.append([st.rounds, len(st.P), len(st.S1), len(st.S2), st.F.num_vertices,
                          st.F.num_edges])
        if debug:
            _check_dfs(gp, aux, ig, st)
    if debug and hs != path_hids(aux, st.P):
        raise InvariantViolation("path hyperedge cache out of step")
    return st


# --------------------------------------------------------------------------
# alternating tree growth

SIDES = ("A", "B")  # A hangs off P[0], B off P[-1]


@dataclass
class TreeState:
    P: list[int]
    root: int
    parent: dict[int, int]            # every non-root vertex of T -> its parent towards the root
    side: dict[int, str]              # every non-root vertex of T -> "A" or "B"
    nodes: dict[str, set[int]]        # non-spine vertices of each tree
    leaves: dict[str, list[int]]      # X_A, X_B
    layers: dict[str, list[list[int]]]  # growth batches of each current tree, oldest first
    S1: set[int]
    S2: set[int]
    U: set[int]
    F: LabeledGraph
    n_init: int
    S_step1: set[int] = field(default_factory=set)
    rounds: int = 0
    log: list[dict] = field(default_factory=list)
    series: list[list[int]] = field(default_factory=list)  # round, |P|, |T|, |S1|, |S2|, v(F), e(F)

    def end(self, s: str) -> int:
        return self.P[0] if s == "A" else self.P[-1]

    @property
    def size(self) -> int:
        return len(self.P) + len(self.nodes["A"]) + len(self.nodes["B"])

    def tree_parent(self) -> dict[int, int]:
        return dict(self.parent)

    def path_to_root(self, x: int) -> list[int]:
        out = [x]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    def stats(self) -> dict:
        return {"rounds": self.rounds, "P": len(self.P), "T": self.size,
                "TA": len(self.nodes["A"]), "TB": len(self.nodes["B"]),
                "XA": len(self.leaves["A"]), "XB": len(self.leaves["B"]),
                "S1": len(self.S1), "S2": len(self.S2), "U": len(self.U),
                "vF": self.F.num_vertices, "eF": self.F.num_edges}

    def to_json(self) -> dict:
        return {"path": list(self.P), "root": self.root,
                "parent": {str(k): v for k, v in sorted(self.parent.items())},
                "layers": self.layers, "stats": self.stats(), "log": self.log,
                "series": self.series}


def _other(s: str) -> str:
    return "B" if s == "A" else "A"


class _Grower:
    def __init__(self, gp: Graph, aux: AuxGraph, ig: IntersectionGraph, path: list[int],
                 params: SearchParams, debug: bool):
        if len(path) < 3:
            raise SearchFailure("tree growth needs a path with at least three vertices",
                                stage="trees", P=len(path))
        self.gp, self.aux, self.ig, self.params, self.debug = gp, aux, ig, params, debug
        P = list(path)
        ridx = len(P) // 2
        root = P[ridx]
        parent, side = {}, {}
        for i, x in enumerate(P):
            if i < ridx:
                parent[x], side[x] = P[i + 1], "A"
            elif i > ridx:
                parent[x], side[x] = P[i - 1], "B"
        pset = set(P)
        F = LabeledGraph()
        for x in P:
            for w in gp.adjacency[x]:
                if w in pset and x < w:
                    F.add_vertex(aux.h(x, w))
        U = set(gp.non_isolated()) - pset
        self.st = TreeState(P, root, parent, side, {"A": set(), "B": set()},
                            {"A": [P[0]], "B": [P[-1]]}, {"A": [], "B": []},
                            set(), set(), U, F, F.num_vertices)
        self.side_hids = {s: {self.hid(x) for x, t in side.items() if t == s} for s in SIDES}

    def hid(self, x: int) -> int:
        return self.aux.h(x, self.st.parent[x])

    # ---- helpers ---------------------------------------------------------

    def _continuation(self, s: str) -> int | None:
        """Hyperedge of the first spine edge on the far side of the root."""
        st = self.st
        ridx = st.P.index(st.root)
        j = ridx + 1 if s == "A" else ridx - 1
        if 0 <= j < len(st.P):
            return self.aux.h(st.root, st.P[j])
        return None

    def _relevant(self, s: str, vp: int) -> tuple[set[int], list[int]]:
        chain = self.st.path_to_root(vp)
        anc = [self.aux.h(a, b) for a, b in zip(chain, chain[1:])]
        rel = set(anc) | self.side_hids[_other(s)]
        forbidden = anc[:2]
        if len(forbidden) < 2:
            c = self._continuation(s)
            if c is not None:
                forbidden.append(c)
        return rel, forbidden

    def _dismantle(self) -> list[int]:
        st = self.st
        out = []
        for s in SIDES:
            for x in st.nodes[s]:
                self.side_hids[s].discard(self.hid(x))
                del st.parent[x]
                del st.side[x]
                out.append(x)
            st.nodes[s] = set()
            st.leaves[s] = [st.end(s)]
            st.layers[s] = []
        return out

    # ---- the five steps --------------------------------------------------

    def step1(self, s: str, nu: int, X1: list[int]) -> None:
        st = self.st
        v1 = st.end(s)
        if v1 == st.root:
            raise SearchFailure("spine shrank to the root", stage="trees", **st.stats())
        moved = set(self._dismantle())
        st.S_step1.update(X1)
        self.side_hids[s].discard(self.hid(v1))
        del st.parent[v1]
        del st.side[v1]
        if s == "A":
            st.P.pop(0)
        else:
            st.P.pop()
        moved.add(v1)
        st.S1.update(moved)
        st.leaves[s] = [st.end(s)]
        st.log.append({"round": st.rounds, "side": s, "step": "no-expansion", "NU": nu,
                       "X": len(X1), "to_S1": len(moved)})

    def step2to5(self, s: str, cand: list[int], X1set: set[int], x2: int) -> None:
        st, aux, ig, f = self.st, self.aux, self.ig, self.params.growth
        B = cand[: self.params.expansion * x2]
        pos = {v: i for i, v in enumerate(B)}
        attach = {v: next(w for w in self.gp.adjacency[v] if w in X1set) for v in B}
        removed: set[int] = set()
        good, bad = [], []
        relcache: dict[int, tuple[set[int], list[int]]] = {}
        for i, v in enumerate(B):
            if v in removed:
                continue
            vp = attach[v]
            if vp not in relcache:
                relcache[vp] = self._relevant(s, vp)
            rel, forbidden = relcache[vp]
            r = extension_ruin(ig, aux.h(v, vp), rel, forbidden)
            if r is None:
                good.append(v)
                continue
            bad.append((v, vp, r[0], r[1]))
            rec = aux.by_hid.get(r[0])
            if rec is not None:
                for w in (rec.u, rec.v):
                    if pos.get(w, -1) > i:
                        removed.add(w)
        need = f * x2
        entry = {"round": st.rounds, "side": s, "B": len(B), "good": len(good), "bad": len(bad),
                 "removed": len(removed)}
        if len(good) >= need:
            chosen = good[:need]
            for v in chosen:
                st.parent[v] = attach[v]
                st.side[v] = s
                st.nodes[s].add(v)
                self.side_hids[s].add(self.hid(v))
                st.U.remove(v)
            st.leaves[s] = chosen
            st.layers[s].append(chosen)
            entry.update(step="grow", added=len(chosen), X=len(chosen))
            st.log.append(entry)
            return
        # step 5: record the bad candidates and start over from the bare spine
        chosen = bad[:need]
        F = st.F
        for t in SIDES:
            for x in st.nodes[t]:
                st.S2.add(x)
                F.add_vertex(self.hid(x))
        for v, vp, hi, he in chosen:
            st.U.discard(v)
            st.S2.add(v)
            h1 = aux.h(v, vp)
            F.add_vertex(h1)
            new = F.add_vertex(hi)
            rec = aux.by_hid.get(hi)
            if rec is not None:
                for w in (rec.u, rec.v):
                    if w in st.U or w in st.S2:
                        st.U.discard(w)
                        st.S2.add(w)
            F.add_edge(h1, self.hid(vp), vp)
            F.add_edge(h1, hi, ig.label(h1, hi))
            if new:
                F.add_edge(hi, he, ig.label(hi, he))
        self._dismantle()
        entry.update(step="bad", recorded=len(chosen))
        st.log.append(entry)

    def round(self) -> None:
        st = self.st
        st.rounds += 1
        s = "A" if len(st.leaves["A"]) <= len(st.leaves["B"]) else "B"
        X1 = st.leaves[s]
        x2 = len(st.leaves[_other(s)])
        X1set = set(X1)
        cand = sorted({w for x in X1 for w in self.gp.adjacency[x] if w in st.U})
        if len(cand) <= self.params.expansion * x2:
            self.step1(s, len(cand), X1)
        else:
            self.step2to5(s, cand, X1set, x2)
        st.series.append([st.rounds, len(st.P), st.size, len(st.S1), len(st.S2),
                          st.F.num_vertices, st.F.num_edges])
        if self.debug:
            self.check()

    def check(self) -> None:
        st, p = self.st, self.params

        def fail(claim: str, **details):
            raise InvariantViolation(f"tree claim {claim} failed", claim=claim,
                                     stats=st.stats(), **details)

        tv = set(st.P) | st.nodes["A"] | st.nodes["B"]
        parts = [tv, st.S1, st.S2, st.U]
        if sum(len(x) for x in parts) != len(set().union(*parts)):
            fail("partition")
        cert = is_good_tree(self.aux, self.ig, st.root, st.parent)
        if not cert.good:
            fail("A", witness=cert.witness)
        a, b = len(st.leaves["A"]), len(st.leaves["B"])
        if not (a == b or a == p.growth * b or b == p.growth * a):
            fail("leaf-ratio", XA=a, XB=b)
        for h in st.F.vertices:
            r = self.aux.by_hid.get(h)
            if r is not None and (r.u in st.U or r.v in st.U):
                fail("B", hyperedge=h)
        S = st.S_step1
        if S:
            if len(S) < len(st.S1) / p.claim_c_const:
                fail("C-size", S=len(S))
            nu = {w for x in S for w in self.gp.adjacency[x] if w in st.U}
            if len(nu) > p.expansion * p.growth * len(S):
                fail("C-neighbourhood", NU=len(nu), S=len(S))
        vF, eF = st.F.num_vertices, st.F.num_edges
        if not (len(st.S2) / 4 <= vF <= st.n_init + 2 * len(st.S2)):
            fail("D", vF=vF)
        if eF < p.claim_e_const * (vF - st.n_init):
            fail("E", eF=eF, vF=vF)
        if st.F.sunflower_closed or find_sunflower_cycle(st.F.labeled_edges()) is not None:
            fail("E-sunflower")
        # the spine floor is enforced by grow_trees as a reported failure, not an assertion


def grow_trees(gp: Graph, aux: AuxGraph, ig: IntersectionGraph, path: list[int],
               params: SearchParams, debug: bool = False) -> TreeState:
    """Grow trees off both ends of a good path until |T| reaches ``params.tree_target``."""
    if len(path) < params.p_floor:
        raise SearchFailure("path shorter than the spine floor", stage="trees", P=len(path),
                            floor=params.p_floor)
    g = _Grower(gp, aux, ig, path, params, debug)
    st = g.st
    if debug:
        g.check()
    while st.size < params.tree_target:
        if _capped(len(st.S1), params.tree_s1_cap) or _capped(len(st.S2), params.tree_s2_cap):
            raise SearchFailure("explored set cap reached", stage="trees", **st.stats())
        if len(st.P) < params.p_floor:
            raise SearchFailure("spine fell below its floor", stage="trees", **st.stats())
        if st.rounds >= params.max_rounds:
            raise SearchFailure("round limit reached", stage="trees", **st.stats())
        g.round()
    if len(st.P) < params.p_floor:
        raise SearchFailure("spine fell below its floor", stage="trees", **st.stats())
    return st


def compute_r_sets(ts: TreeState, rounds_back: int, budget: float | None = None
                   ) -> tuple[set[int], set[int], dict]:
    """Vertices of each tree added in its last ``rounds_back`` growth batches.

    If ``budget`` is given and a tree keeps more than ``budget`` vertices outside its R set,
    that side's window is widened batch by batch; the realised windows are returned.
    """
    out, used = [], {}
    for s in SIDES:
        layers = ts.layers[s]
        k = max(0, min(rounds_back, len(layers)))
        while budget is not None and k < len(layers):
            outside = 1 + sum(len(b) for b in layers[: len(layers) - k])
            if outside <= budget:
                break
            k += 1
        used[s] = k
        out.append({x for b in layers[len(layers) - k:] for x in b} if k else set())
    return out[0], out[1], {"requested": rounds_back, "used": used,
                            "widened": any(used[s] > min(rounds_back, len(ts.layers[s]))
                                           for s in SIDES)}


def default_search_params(n: int, L: int, **over) -> SearchParams:
    """Thresholds keeping the asymptotic ratios where they make sense at desk scale."""
    f = over.pop("growth", 2)
    base = dict(path_target=math.ceil(2 * n / L), p_floor=math.ceil(2 * n / (L + 1)),
                growth=f, expansion=5 * f, tree_target=0,
                tree_s1_cap=n,
                tree_s2_cap=100 * n)
    base.update(over)
    if not base["tree_target"]:
        base["tree_target"] = base["path_target"] + 2 * (f + f ** 2 + f ** 3)
    return SearchParams(**base)
