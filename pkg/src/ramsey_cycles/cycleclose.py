"""Close the good tree into a good auxiliary cycle by growing two balls, then lift that cycle
to an exact-length monochromatic cycle of the host graph and re-verify it from scratch."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CycleCloseError, LiftError, NotACycleError
from .graphcore import EdgeColoring, Graph, Hypergraph, IntersectionGraph, check_cycle, norm_edge
from .hostbuild import AuxGraph, HostGraph, lift_lengths
from .search import TreeState


def n_i_of_s(ig: IntersectionGraph, h: Hypergraph, S: Iterable[int], radius: int = 2) -> set[int]:
    """Vertices of every hyperedge within intersection-graph distance ``radius`` of S."""
    dist = {x: 0 for x in S}
    queue = deque(dist)
    while queue:
        a = queue.popleft()
        if dist[a] == radius:
            continue
        for b, _ in ig.adjacency[a]:
            if b not in dist:
                dist[b] = dist[a] + 1
                queue.append(b)
    return {v for a in dist for v in h.edges[a]}


def spine_hyperedges(aux: AuxGraph, ts: TreeState, R1: set[int], R2: set[int]) -> set[int]:
    """Hyperedges of tree edges whose lower endpoint lies outside R1 and R2."""
    R = R1 | R2
    return {aux.h(x, p) for x, p in ts.parent.items() if x not in R}


@dataclass
class CloseState:
    R1: set[int]
    R2: set[int]
    parent1: dict[int, int | None]
    parent2: dict[int, int | None]
    layers1: list[int]
    layers2: list[int]
    S: set[int] = field(default_factory=set)
    NIS: set[int] = field(default_factory=set)
    x: int | None = None
    steps: int = 0

    def arm(self, t: int) -> list[int]:
        """Ball path from the meeting vertex back to its R set."""
        par = self.parent1 if t == 1 else self.parent2
        out = [self.x]
        while par[out[-1]] is not None:
            out.append(par[out[-1]])
        return out

    def to_json(self) -> dict:
        return {"x": self.x, "steps": self.steps, "layers1": self.layers1,
                "layers2": self.layers2, "S": len(self.S), "NIS": len(self.NIS),
                "arm1": self.arm(1) if self.x is not None else None,
                "arm2": self.arm(2) if self.x is not None else None}


def expand_balls(gred: Graph, R1: set[int], R2: set[int], NIS: set[int], max_steps: int,
                 exclude: Iterable[int] = ()) -> CloseState:
    """Alternately add whole BFS layers (outside NIS) to the balls around R1 and R2 until they meet.

    ``exclude`` lists meeting vertices already tried; they are skipped in the tie-break.
    """
    if not R1 or not R2:
        raise CycleCloseError("both R sets must be nonempty", R1=len(R1), R2=len(R2))
    skip = set(exclude)
    p1: dict[int, int | None] = {v: None for v in sorted(R1)}
    p2: dict[int, int | None] = {v: None for v in sorted(R2)}
    cs = CloseState(set(R1), set(R2), p1, p2, [len(p1)], [len(p2)])
    half = len(gred.non_isolated()) / 2
    frontier = {1: sorted(p1), 2: sorted(p2)}

    def meet() -> int | None:
        common = sorted(v for v in (p1.keys() & p2.keys()) if v not in skip)
        return common[0] if common else None

    x = meet()
    t = 1
    stuck = {1: False, 2: False}
    while x is None:
        if cs.steps >= max_steps:
            raise CycleCloseError("balls did not meet within the step bound", steps=cs.steps,
                                  layers1=cs.layers1, layers2=cs.layers2)
        par = p1 if t == 1 else p2
        if len(par) > half or not frontier[t]:
            stuck[t] = True
        if stuck[1] and stuck[2]:
            raise CycleCloseError("both balls stopped growing without meeting",
                                  layers1=cs.layers1, layers2=cs.layers2)
        if not stuck[t]:
            new = []
            for v in frontier[t]:
                for w in gred.adjacency[v]:
                    if w not in par and w not in NIS:
                        par[w] = v
                        new.append(w)
            frontier[t] = sorted(new)
            (cs.layers1 if t == 1 else cs.layers2).append(len(new))
            cs.steps += 1
            x = meet()
        t = 3 - t
    cs.x = x
    cs.NIS = set(NIS)
    return cs


@dataclass
class AssembledCycle:
    Q: list[int]
    cover: list[list[int]]
    marks: tuple[int, int]      # Q indices bounding the middle (spine) window
    window: tuple[float, float]

    def to_json(self) -> dict:
        return {"Q": self.Q, "cover": self.cover, "marks": list(self.marks),
                "window": list(self.window)}


def lift_window(mode: str, L: int, n: int) -> tuple[float, float]:
    """Range of auxiliary cycle lengths that lift to exactly n edges."""
    a, b = lift_lengths(mode, L)
    return n / b, n / a


def assemble_cycle(ts: TreeState, cs: CloseState, mode: str, L: int, n: int) -> AssembledCycle:
    if cs.x is None:
        raise CycleCloseError("no meeting vertex")
    arm1, arm2 = cs.arm(1), cs.arm(2)
    r1, r2 = arm1[-1], arm2[-1]
    up1 = ts.path_to_root(r1)
    up2 = ts.path_to_root(r2)
    # x, arm1 .. r1, tree path r1 .. root .. r2, arm2 back towards x
    Q = arm1 + up1[1:] + up2[::-1][1:] + arm2[::-1][1:-1]
    if len(set(Q)) != len(Q):
        raise CycleCloseError("closing walk repeats a vertex", x=cs.x, r1=r1, r2=r2)
    if len(Q) < 3:
        raise CycleCloseError("closing walk too short", length=len(Q))
    j1 = len(arm1) - 1
    while j1 + 1 < len(Q) and Q[j1 + 1] in cs.R1:
        j1 += 1
    j2 = len(arm1) + len(up1) + len(up2) - 3
    while j2 - 1 > j1 and Q[j2 - 1] in cs.R2:
        j2 -= 1
    ell = len(Q)
    cover = [Q[: j2 + 1], Q[j1:] + [Q[0]], Q[j2:] + Q[: j1 + 1]]
    cover = [c for c in cover if len(c) >= 2]
    lo, hi = lift_window(mode, L, n)
    if not lo <= ell <= hi:
        raise CycleCloseError("auxiliary cycle length outside the lift window", length=ell,
                              window=[lo, hi])
    return AssembledCycle(Q, cover, (j1, j2), (lo, hi))


# --------------------------------------------------------------------------
# lifting to the host graph

def solve_lift(mode: str, L: int, ell: int, n: int) -> int:
    """Number x of long arcs with x * long + (ell - x) * short = n."""
    a, b = lift_lengths(mode, L)
    rem = n - ell * a
    if ell < 1 or rem < 0 or rem % (b - a) or rem // (b - a) > ell:
        raise LiftError("target length not reachable from this auxiliary cycle", mode=mode,
                        ell=ell, n=n, short=a, long=b)
    return rem // (b - a)


@dataclass
class LiftResult:
    Qprime: list[int]
    choices: list[str]
    color: int
    length: int
    Q: list[int]

    def to_json(self) -> dict:
        return {"cycle": self.Qprime, "choices": self.choices, "color": self.color,
                "length": self.length, "aux_cycle": self.Q}

    @classmethod
    def from_json(cls, d: dict) -> "LiftResult":
        return cls(list(d["cycle"]), list(d["choices"]), d["color"], d["length"],
                   list(d["aux_cycle"]))


def lift_cycle(aux: AuxGraph, host: HostGraph, Q: Sequence[int], n: int) -> LiftResult:
    ell = len(Q)
    # the arithmetic is cheap, so unreachable targets are rejected first
    x = solve_lift(aux.mode, aux.L, ell, n)
    check_cycle(aux.graph, Q)
    recs = [aux.record(Q[i], Q[(i + 1) % ell]) for i in range(ell)]
    colors = {r.color for r in recs}
    if len(colors) != 1:
        raise LiftError("auxiliary cycle is not monochromatic", colors=sorted(colors))
    longs = set(sorted(range(ell), key=lambda i: recs[i].hid)[:x])
    choices = ["long" if i in longs else "short" for i in range(ell)]
    out: list[int] = []
    for i, r in enumerate(recs):
        out.extend(r.path_from(Q[i], i in longs)[:-1])
    if len(set(out)) != len(out):
        owner: dict[int, int] = {}
        for i, r in enumerate(recs):
            for v in r.path_from(Q[i], i in longs)[:-1]:
                if v in owner:
                    raise LiftError("lifted walk repeats a vertex", vertex=v,
                                    aux_edges=[recs[owner[v]].hid, r.hid])
                owner[v] = i
    if len(out) != n:
        raise LiftError("lifted cycle has the wrong length", length=len(out), n=n)
    return LiftResult(out, choices, colors.pop(), len(out), list(Q))


def verify_final(host: HostGraph | Graph, coloring: EdgeColoring, lr: LiftResult, mode: str,
                 n: int | None = None) -> dict:
    """Recheck the lifted cycle against the host graph alone."""
    g = host.graph if isinstance(host, HostGraph) else host
    c = lr.Qprime
    rep: dict = {"length": len(c), "target": n if n is not None else lr.length}
    try:
        check_cycle(g, c)
        rep["valid_cycle"] = True
    except NotACycleError as exc:
        rep["valid_cycle"] = False
        rep["cycle_error"] = exc.to_dict()
    rep["length_ok"] = len(c) == rep["target"]
    cols = set()
    if rep["valid_cycle"]:
        for i in range(len(c)):
            cols.add(coloring[(c[i], c[(i + 1) % len(c)])])
    rep["colors"] = sorted(cols)
    rep["monochromatic"] = rep["valid_cycle"] and len(cols) == 1
    if mode == "non_induced":
        rep["induced"] = None
    else:
        m = len(c)
        chord = None
        for i in range(m):
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue
                if g.has_edge(c[i], c[j]):
                    chord = [c[i], c[j]]
                    break
            if chord:
                break
        rep["induced"] = chord is None
        rep["chord"] = chord
    rep["ok"] = bool(rep["valid_cycle"] and rep["length_ok"] and rep["monochromatic"]
                     and rep["induced"] is not False)
    return rep


def cycle_edges_of(c: Sequence[int]) -> list[tuple[int, int]]:
    return [norm_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]
