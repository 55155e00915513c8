"""Run profile and the staged pipeline from hypergraph sampling to the verified host cycle."""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any

from .cycleclose import (assemble_cycle, expand_balls, lift_cycle, lift_window, n_i_of_s,
                         spine_hyperedges, verify_final)
from .errors import CycleCloseError, ParameterError, RamseyCyclesError
from .expander import ExpanderParams, extract_expander, min_degree_core
from .gadgets import MODES, parse_gadget
from .goodness import is_good_cycle, is_good_path
from .graphcore import EdgeColoring, Graph, build_intersection_graph, dumps
from .hostbuild import (AuxGraph, HostGraph, build_auxiliary, build_host, densest_color_subgraph,
                        make_coloring)
from .hypergen import HostParams, sample_until_verified
from .search import SearchParams, compute_r_sets, default_search_params, find_good_path, grow_trees
from .seeds import derive_seed

log = logging.getLogger(__name__)

MODE_ALIASES = {"even": "even_induced", "odd": "odd_induced", "non-induced": "non_induced",
                "even_induced": "even_induced", "odd_induced": "odd_induced",
                "non_induced": "non_induced"}

EXIT_OK, EXIT_PARAM, EXIT_STAGE, EXIT_VERIFY = 0, 2, 3, 4


@dataclass
class RunProfile:
    mode: str = "even_induced"
    k: int = 2
    n: int = 40
    gadget: str = "incidence:q=2"
    colorer: str = "uniform-random"
    seed: int = 0
    host: dict = field(default_factory=lambda: {"N": 5000, "C": 3.0, "g": 8})
    max_retries: int = 3
    expander: dict = field(default_factory=lambda: {"c1": "auto", "c2": "auto", "beta": 0.1,
                                                    "Delta": "auto"})
    core_fraction: float = 0.5
    search: dict = field(default_factory=dict)
    rounds_back: int = 3
    r_budget: float | None = None
    nis_radius: int = 2
    max_steps: int = 50
    step_increment: int = 10
    meet_retries: int = 3
    debug_invariants: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODE_ALIASES:
            raise ParameterError("unknown mode", mode=self.mode, known=sorted(MODE_ALIASES))
        self.mode = MODE_ALIASES[self.mode]
        if self.k < 1:
            raise ParameterError("k must be at least 1", k=self.k)
        if self.n < 3:
            raise ParameterError("target length must be at least 3", n=self.n)
        if self.mode == "even_induced" and self.n % 2:
            raise ParameterError("even mode needs an even target length", n=self.n)
        if self.nis_radius < 0 or self.rounds_back < 0 or self.max_steps < 0:
            raise ParameterError("radius, rounds_back and max_steps must be non-negative")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunProfile":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ParameterError("unknown profile fields", fields=sorted(extra))
        return cls(**d)


def host_params(p: RunProfile, s: int) -> HostParams:
    over = dict(p.host)
    try:
        return HostParams(N=int(over.pop("N")), C=float(over.pop("C")), s=s, g=int(over.pop("g")),
                          k=p.k, n=p.n, mode=p.mode, **over)
    except (KeyError, TypeError) as exc:
        raise ParameterError("incomplete host parameters", reason=str(exc)) from exc


def expander_params(p: RunProfile, g: Graph) -> ExpanderParams:
    e = dict(p.expander)
    verts = g.non_isolated()
    dens = g.num_edges / len(verts) if verts else 0.0
    c1 = dens if e.get("c1", "auto") == "auto" else float(e["c1"])
    c2 = (1 + c1) / 2 if e.get("c2", "auto") == "auto" else float(e["c2"])
    Delta = (max((g.degree(v) for v in verts), default=1) if e.get("Delta", "auto") == "auto"
             else float(e["Delta"]))
    return ExpanderParams(c1, c2, float(e.get("beta", 0.1)), Delta)


def search_params(p: RunProfile, L: int) -> SearchParams:
    return default_search_params(p.n, L, **p.search)


@dataclass
class RunResult:
    status: int
    record: dict
    host: HostGraph | None = None
    coloring: EdgeColoring | None = None
    aux: AuxGraph | None = None
    certificate: dict | None = None


def _stage(record: dict, name: str, meta: Any) -> None:
    record["stages"].append({"stage": name, **(meta or {})})


def run_pipeline(p: RunProfile) -> RunResult:
    """Run every stage; never raises for stage failures, the status says what happened."""
    record: dict = {"profile": p.to_json(), "stages": [], "status": None}
    out = RunResult(EXIT_STAGE, record)
    stage = "setup"
    try:
        stage = "gadget"
        gadget = parse_gadget(p.gadget, seed=derive_seed(p.seed, "gadget"))
        if gadget.mode != p.mode:
            raise ParameterError("gadget mode differs from the run mode", gadget=gadget.name,
                                 gadget_mode=gadget.mode, mode=p.mode)
        _stage(record, stage, {"name": gadget.name, "s": gadget.s,
                               "edges": gadget.graph.num_edges})

        stage = "sample_until_verified"
        hp = host_params(p, gadget.s)
        h, rep = sample_until_verified(hp, p.max_retries, derive_seed(p.seed, "hypergraph"))
        _stage(record, stage, {"params": hp.to_json(), "edges": h.num_edges,
                               "report": rep.to_json()})

        stage = "build_host"
        host = build_host(h, gadget, derive_seed(p.seed, "host"))
        out.host = host
        _stage(record, stage, {"vertices": host.graph.vertex_count,
                               "edges": host.graph.num_edges})

        stage = "colorer"
        coloring = make_coloring(p.colorer, host.graph, p.k, derive_seed(p.seed, "colorer"), host)
        out.coloring = coloring
        _stage(record, stage, {"descriptor": p.colorer, "k": p.k})

        stage = "build_auxiliary"
        aux = build_auxiliary(host, coloring, p.mode)
        out.aux = aux
        _stage(record, stage, {"L": aux.L, "aux_edges": len(aux.records),
                               "failures": len(aux.failures), "dropped": len(aux.dropped)})

        stage = "densest_color_subgraph"
        color, gred = densest_color_subgraph(aux)
        _stage(record, stage, {"color": color, "edges": gred.num_edges,
                               "vertices": len(gred.non_isolated())})

        stage = "extract_expander"
        ep = expander_params(p, gred)
        ex = extract_expander(gred, ep)
        gred_x = gred.induced(ex.vertices)
        _stage(record, stage, {"params": asdict(ep), "vertices": len(ex.vertices),
                               "density": ex.density, "rounds": ex.rounds_used,
                               "size_ok": ex.size_ok, "trace": ex.trace})

        stage = "min_degree_core"
        nv = len(gred_x.non_isolated())
        d = 2 * gred_x.num_edges / nv if nv else 0.0
        gp = min_degree_core(gred_x, p.core_fraction * d)
        _stage(record, stage, {"average_degree": d, "min_degree": p.core_fraction * d,
                               "vertices": len(gp.non_isolated()), "edges": gp.num_edges})

        ig = build_intersection_graph(h)
        sp = search_params(p, aux.L)

        stage = "find_good_path"
        ds = find_good_path(gp, aux, ig, sp, p.debug_invariants)
        _stage(record, stage, {"params": sp.to_json(), **ds.to_json()})

        stage = "grow_trees"
        ts = grow_trees(gp, aux, ig, ds.P, sp, p.debug_invariants)
        tree_json = ts.to_json()
        tree_json.pop("parent")
        _stage(record, stage, tree_json)

        stage = "compute_r_sets"
        budget = p.r_budget if p.r_budget is not None else p.n / 2
        R1, R2, rinfo = compute_r_sets(ts, p.rounds_back, budget)
        _stage(record, stage, {"R1": len(R1), "R2": len(R2), **rinfo})

        stage = "n_i_of_s"
        S = spine_hyperedges(aux, ts, R1, R2)
        NIS = n_i_of_s(ig, h, S, p.nis_radius)
        _stage(record, stage, {"S": len(S), "NIS": len(NIS), "radius": p.nis_radius})

        stage = "expand_balls"
        tried: list[int] = []
        attempts = []
        asm = cert = None
        steps = p.max_steps
        for attempt in range(p.meet_retries + 1):
            try:
                cs = expand_balls(gred_x, R1, R2, NIS, steps, exclude=tried)
            except CycleCloseError as exc:
                attempts.append({"attempt": attempt, "max_steps": steps, "error": exc.to_dict()})
                steps += p.step_increment
                continue
            entry = {"attempt": attempt, "max_steps": steps, **cs.to_json()}
            try:
                asm = assemble_cycle(ts, cs, p.mode, aux.L, p.n)
                cert = is_good_cycle(aux, ig, asm.Q, asm.cover)
                entry["good"] = cert.good
                if not cert.good:
                    entry["witness"] = cert.witness
            except CycleCloseError as exc:
                entry["error"] = exc.to_dict()
                asm = cert = None
            attempts.append(entry)
            if cert is not None and cert.good:
                break
            tried.append(cs.x)
            steps += p.step_increment
            asm = cert = None
        _stage(record, stage, {"attempts": attempts})
        stage = "assemble_cycle"
        if asm is None:
            raise CycleCloseError("no good closing cycle after retries", attempts=len(attempts))
        lo, hi = lift_window(p.mode, aux.L, p.n)
        p3 = asm.cover[-1] if asm.cover else []
        _stage(record, stage, {**asm.to_json(), "length": len(asm.Q),
                               "slack": [len(asm.Q) - lo, hi - len(asm.Q)],
                               "p3_good": is_good_path(aux, ig, p3).good if len(p3) >= 2 else None})

        stage = "lift_cycle"
        lr = lift_cycle(aux, host, asm.Q, p.n)
        _stage(record, stage, {"length": lr.length, "color": lr.color,
                               "long": lr.choices.count("long")})

        stage = "verify_final"
        vrep = verify_final(host, coloring, lr, p.mode, p.n)
        _stage(record, stage, vrep)
        out.certificate = {"mode": p.mode, "n": p.n, "lift": lr.to_json(),
                           "aux_cycle_cover": asm.cover, "verification": vrep}
        record["certificate"] = out.certificate
        out.status = EXIT_OK if vrep["ok"] else EXIT_VERIFY
    except ParameterError as exc:
        out.status = EXIT_PARAM
        record["failed_stage"] = stage
        record["error"] = exc.to_dict()
    except RamseyCyclesError as exc:
        out.status = EXIT_STAGE
        record["failed_stage"] = stage
        record["error"] = exc.to_dict()
    record["status"] = out.status
    return out


def record_document(record: dict) -> dict:
    """Run record with the wall-clock stamp kept apart from the deterministic part."""
    return {"run": record, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")}


def record_bytes(record: dict) -> bytes:
    return dumps(record).encode()


__all__ = ["RunProfile", "RunResult", "run_pipeline", "record_document", "record_bytes",
           "MODE_ALIASES", "MODES", "EXIT_OK", "EXIT_PARAM", "EXIT_STAGE", "EXIT_VERIFY"]
