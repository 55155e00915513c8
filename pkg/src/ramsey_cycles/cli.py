"""Command line driver: gen-host, color, run, verify, stats."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .cycleclose import LiftResult, verify_final
from .errors import ParameterError, RamseyCyclesError
from .gadgets import parse_gadget
from .graphcore import EdgeColoring, dumps
from .hostbuild import COLORERS, HostGraph, build_host, make_coloring
from .hypergen import sample_until_verified
from .pipeline import (EXIT_OK, EXIT_PARAM, EXIT_STAGE, EXIT_VERIFY, RunProfile, host_params,
                       record_document, run_pipeline)
from .seeds import derive_seed

log = logging.getLogger("ramsey_cycles")


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def load_profile(args: argparse.Namespace) -> RunProfile:
    data = _read_json(args.profile) if getattr(args, "profile", None) else {}
    for key in ("mode", "k", "n", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if getattr(args, "debug_invariants", False):
        data["debug_invariants"] = True
    return RunProfile.from_json(data)


def _seed_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        a, _, b = part.partition("-")
        out.extend(range(int(a), int(b) + 1) if b else [int(a)])
    return out


# --------------------------------------------------------------------------
# subcommands

def cmd_gen_host(args) -> int:
    p = load_profile(args)
    gadget = parse_gadget(p.gadget, seed=derive_seed(p.seed, "gadget"))
    h, rep = sample_until_verified(host_params(p, gadget.s), p.max_retries,
                                   derive_seed(p.seed, "hypergraph"))
    host = build_host(h, gadget, derive_seed(p.seed, "host"))
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "host.json"), host.to_json())
    _write_json(os.path.join(args.out, "hypergraph_report.json"), rep.to_json())
    print(f"host: {host.graph.vertex_count} vertices, {host.graph.num_edges} edges, "
          f"{h.num_edges} gadget copies")
    return EXIT_OK


def cmd_color(args) -> int:
    host = HostGraph.from_json(_read_json(args.host))
    k = args.k if args.k is not None else 2
    seed = args.seed if args.seed is not None else 0
    col = make_coloring(args.colorer, host.graph, k, derive_seed(seed, "colorer"), host)
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "coloring.json"), col.to_json())
    print(f"coloring: {len(col.colors)} edges, k={k}")
    return EXIT_OK


def _run_one(profile_json: dict, out: str | None, dot: bool) -> tuple[int, int, str | None]:
    p = RunProfile.from_json(profile_json)
    res = run_pipeline(p)
    if out:
        d = os.path.join(out, f"seed-{p.seed}")
        os.makedirs(d, exist_ok=True)
        _write_json(os.path.join(d, "record.json"), record_document(res.record))
        if res.host is not None:
            _write_json(os.path.join(d, "host.json"), res.host.to_json())
        if res.coloring is not None:
            _write_json(os.path.join(d, "coloring.json"), res.coloring.to_json())
        if res.certificate is not None:
            _write_json(os.path.join(d, "certificate.json"), res.certificate)
            if dot and res.host is not None:
                with open(os.path.join(d, "cycle.dot"), "w") as fh:
                    fh.write(res.host.graph.to_dot(highlight=res.certificate["lift"]["cycle"]))
    return p.seed, res.status, res.record.get("failed_stage")


def cmd_run(args) -> int:
    p = load_profile(args)
    seeds = _seed_list(args.seeds) if args.seeds else [p.seed]
    jobs = max(1, args.jobs or 1)
    base = p.to_json()
    todo = [dict(base, seed=s) for s in seeds]
    if jobs == 1 or len(todo) == 1:
        results = [_run_one(t, args.out, args.dot) for t in todo]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, todo, [args.out] * len(todo),
                                    [args.dot] * len(todo)))
    for seed, status, stage in results:
        print(f"seed {seed}: status {status}" + (f" (failed at {stage})" if stage else ""))
    ok = sum(1 for _, s, _ in results if s == EXIT_OK)
    if len(results) > 1:
        print(f"{ok}/{len(results)} runs verified")
    statuses = [s for _, s, _ in results]
    if all(s == EXIT_OK for s in statuses):
        return EXIT_OK
    return max(statuses)


def cmd_verify(args) -> int:
    cert = _read_json(args.certificate)
    host = HostGraph.from_json(_read_json(args.host))
    col = EdgeColoring.from_json(_read_json(args.coloring))
    lr = LiftResult.from_json(cert["lift"])
    rep = verify_final(host, col, lr, cert["mode"], cert["n"])
    print(json.dumps(rep, sort_keys=True))
    return EXIT_OK if rep["ok"] else EXIT_VERIFY


def cmd_stats(args) -> int:
    doc = _read_json(args.record)
    run = doc.get("run", doc)
    print(f"status {run.get('status')}" + (f", failed at {run['failed_stage']}"
                                         if run.get("failed_stage") else ""))
    for st in run.get("stages", []):
        scalars = {k: v for k, v in st.items() if k != "stage" and isinstance(v, (int, float, str))}
        print(f"  {st['stage']}: " + ", ".join(f"{k}={v}" for k, v in sorted(scalars.items())))
    if args.series:
        series = {st["stage"]: st["series"] for st in run.get("stages", []) if "series" in st}
        print(json.dumps(series))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", help="run profile JSON")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--mode", choices=["even", "odd", "non-induced"])
    common.add_argument("--k", type=int, help="number of colours")
    common.add_argument("--n", type=int, help="target cycle length")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--debug-invariants", action="store_true",
                        help="recheck every search claim after each round")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="ramsey-cycles",
                                 description="Build hosts and search for monochromatic cycles")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("gen-host", parents=[common], help="sample a verified hypergraph and host")
    c = sub.add_parser("color", parents=[common], help="colour a host graph")
    c.add_argument("--host", required=True)
    c.add_argument("--colorer", default="uniform-random",
                   help="one of " + ", ".join(COLORERS) + " (from-file:<path>)")
    r = sub.add_parser("run", parents=[common], help="run the whole pipeline")
    r.add_argument("--seeds", help="seed list such as 0-19 or 1,4,7")
    r.add_argument("--dot", action="store_true", help="also write the host with the cycle as DOT")
    v = sub.add_parser("verify", parents=[common], help="recheck a certificate against its host")
    v.add_argument("--certificate", required=True)
    v.add_argument("--host", required=True)
    v.add_argument("--coloring", required=True)
    s = sub.add_parser("stats", parents=[common], help="summarise a run record")
    s.add_argument("--record", required=True)
    s.add_argument("--series", action="store_true", help="print the search time series")
    return ap


COMMANDS = {"gen-host": cmd_gen_host, "color": cmd_color, "run": cmd_run, "verify": cmd_verify,
            "stats": cmd_stats}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except RamseyCyclesError as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except (OSError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
