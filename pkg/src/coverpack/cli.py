"""Command-line interface.

Machine-readable JSON on stdout (``--pretty`` adds human tables on
stderr); exit codes: 0 the queried property holds / the run is green,
1 it fails / a bound was not settled, 2 usage or input error.
Certificates are persisted next to verdicts so reproduction runs can be
re-verified without re-solving.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import covers as cv
from . import fractional as fr
from . import packing as pk
from . import repro
from . import witnesses as wt
from .errors import PreconditionError, ResourceCapError
from .graphs import build_standard, graph_from_json, graph_to_json

MANIFEST_SCHEMA = "coverpack.manifest/1"


def _default_jobs() -> int:
    env = os.environ.get("COVERPACK_JOBS")
    if env:
        return max(1, int(env))
    return 1


def _emit(payload: dict, pretty: bool) -> None:
    print(json.dumps(payload, indent=2 if pretty else None, default=str))


def _load_input(path: str):
    """A cover file, or a {graph, lists} file; returns (cover, assignment)."""
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") == cv.COVER_SCHEMA:
        return cv.cover_from_json(data), None
    if "graph" in data and "lists" in data:
        g = graph_from_json(data["graph"])
        assignment = cv.ListAssignment.of(data["lists"])
        return cv.cover_from_lists(g, assignment), assignment
    raise ValueError("input must be a cover file or contain 'graph' and 'lists'")


def _write_certificate(path: str | None, payload) -> str | None:
    if path is None or payload is None:
        return None
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
    return path


def cmd_check(args) -> int:
    cover, assignment = _load_input(args.input)
    if args.mode == "packing":
        res = pk.find_packing(cover)
        holds = res is not None
        cert = res.to_json() if holds else {"verdict": "no-packing-exhausted"}
        verdict = "packing-found" if holds else "no-packing"
    elif args.mode == "fractional":
        if assignment is not None and not assignment.uniform():
            res = fr.general_fractional_packing(cover.base, assignment)
            holds = isinstance(res, fr.DemandDistribution)
        else:
            res = fr.fractional_packing(cover)
            holds = isinstance(res, fr.FractionalPacking)
        cert = res.to_json()
        verdict = "feasible" if holds else "infeasible"
    elif args.mode == "flexibility":
        table = fr.check_flexibility(cover)
        holds = all(table.values())
        cert = {"inflexible": sorted(f"{v}:{s}" for (v, s), ok in table.items() if not ok)}
        verdict = "all-flexible" if holds else "inflexible-slots"
    else:
        raise ValueError(f"unknown mode {args.mode}")
    cert_path = _write_certificate(args.cert, cert)
    _emit({"mode": args.mode, "verdict": verdict, "holds": holds,
           "certificate": cert_path}, args.pretty)
    return 0 if holds else 1


def cmd_number(args) -> int:
    if args.graph:
        g = build_standard(args.graph)
    else:
        with open(args.input) as fh:
            g = graph_from_json(json.load(fh))
    if args.variant == "integral":
        res = pk.packing_number(g, args.mode, args.k_max, jobs=args.jobs)
    else:
        res = fr.fractional_packing_number(g, args.mode, args.k_max, jobs=args.jobs)
    witness_payload = None
    if res.witness_cover is not None:
        witness_payload = cv.cover_to_json(res.witness_cover)
    cert_path = _write_certificate(args.cert, witness_payload)
    _emit({"graph": args.graph or args.input, "variant": args.variant,
           "mode": args.mode, "value": res.value, "lower_bound": res.lower_bound,
           "witness": cert_path,
           "sweeps": [{"k": s.k, "total": s.total,
                       "all_ok": getattr(s, "all_pack", getattr(s, "all_feasible", None))}
                      for s in res.sweeps]}, args.pretty)
    return 0 if res.value is not None else 1


def cmd_reproduce(args) -> int:
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    results = []
    t0 = time.time()
    registry = dict(repro.CHECKS)
    if args.include_slow:
        registry.update(repro.SLOW_CHECKS)
    for name, fn in registry.items():
        if args.only and args.only not in name:
            continue
        res = fn(jobs=args.jobs)
        cert_path = None
        if res.certificate is not None:
            cert_path = os.path.join(outdir, f"{res.name}.certificate.json")
            _write_certificate(cert_path, res.certificate)
        results.append({"name": res.name, "ok": res.ok, "expected": res.expected,
                        "observed": res.observed, "seconds": res.seconds,
                        "certificate": cert_path})
        if args.pretty:
            mark = "ok " if res.ok else "FAIL"
            print(f"[{mark}] {res.name:24s} {res.seconds:>8.2f}s  {res.observed}",
                  file=sys.stderr)
    green = all(r["ok"] for r in results) and bool(results)
    manifest = {"schema": MANIFEST_SCHEMA, "green": green,
                "seconds": round(time.time() - t0, 3), "checks": results}
    path = os.path.join(outdir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    _emit(manifest, args.pretty)
    return 0 if green else 1


def cmd_search_f7(args) -> int:
    from .f7search import search_f7_witness
    res = search_f7_witness(palette_max=args.palette_max, budget=args.budget)
    payload = {"found": res.found is not None, "checked": res.checked,
               "exhausted": res.exhausted}
    if res.found is not None:
        payload["lists"] = [list(L) for L in res.found.lists]
        _write_certificate(args.out, {"graph": graph_to_json(res.graph),
                                      "lists": payload["lists"]})
        payload["witness_file"] = args.out
    _emit(payload, args.pretty)
    return 0 if res.found is not None else 1


def cmd_export_dimacs(args) -> int:
    cover, _ = _load_input(args.input)
    text = cv.to_dimacs(cover)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_list_witnesses(args) -> int:
    rows = []
    for w in wt.all_witnesses():
        rows.append({"name": w.name, "expected": w.expected, "check": w.check,
                     "vertices": w.graph.n, "note": w.note})
    _emit({"witnesses": rows}, args.pretty)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coverpack",
                                description="exact list/correspondence packing solvers")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide packing/fractional/flexibility for one input")
    c.add_argument("--input", required=True)
    c.add_argument("--mode", choices=["packing", "fractional", "flexibility"],
                   required=True)
    c.add_argument("--cert", help="write the certificate to this path")
    c.add_argument("--pretty", action="store_true")
    c.set_defaults(fn=cmd_check)

    n = sub.add_parser("number", help="compute a packing number by exhaustive sweep")
    n.add_argument("--graph", help="named graph, e.g. 'cycle(5)'")
    n.add_argument("--input", help="graph JSON file (alternative to --graph)")
    n.add_argument("--variant", choices=["integral", "fractional"], default="integral")
    n.add_argument("--mode", choices=["correspondence", "list"], default="correspondence")
    n.add_argument("--k-max", type=int, required=True)
    n.add_argument("--jobs", type=int, default=_default_jobs())
    n.add_argument("--cert", help="write the k-1 witness cover here")
    n.add_argument("--pretty", action="store_true")
    n.set_defaults(fn=cmd_number)

    r = sub.add_parser("reproduce", help="run the pinned reproduction suite")
    r.add_argument("--only", help="substring filter on check names")
    r.add_argument("--jobs", type=int, default=_default_jobs())
    r.add_argument("--out", default="repro-out")
    r.add_argument("--include-slow", action="store_true")
    r.add_argument("--pretty", action="store_true")
    r.set_defaults(fn=cmd_reproduce)

    f = sub.add_parser("search-f7", help="search 3-lists of the 7-vertex fan with no packing")
    f.add_argument("--palette-max", type=int, default=6)
    f.add_argument("--budget", type=int, default=200_000)
    f.add_argument("--out", default="f7-witness.json")
    f.add_argument("--pretty", action="store_true")
    f.set_defaults(fn=cmd_search_f7)

    d = sub.add_parser("export-dimacs", help="export a cover graph in DIMACS format")
    d.add_argument("--input", required=True)
    d.add_argument("--out")
    d.set_defaults(fn=cmd_export_dimacs)

    lw = sub.add_parser("list-witnesses", help="inventory of the pinned witnesses")
    lw.add_argument("--pretty", action="store_true")
    lw.set_defaults(fn=cmd_list_witnesses)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PreconditionError, ResourceCapError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
