"""Command-line front end: ``rhlmp construct | analyze | remainder | verify-paper | export``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .constructors import BijectionError, build_rhl, hypercube, recursive_circulant_g84
from .formats import (GraphFile, format_dot, format_edgelist, graph_file, parse_phi,
                      read_graph)
from .graph import GraphError, min_degree
from .preclusion import PreclusionKind, preclusion_number

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _color(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _status(s: str) -> str:
    return _color(s, {"PASS": "32", "FAIL": "31"}.get(s, "33"))


def _emit(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from None


def _load(path: str) -> GraphFile:
    try:
        return read_graph(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None
    except (GraphError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid graph file {path}: {exc}", EXIT_IO) from None


def _rhl_phis(text: Optional[str], m: int):
    if text is None or text == "identity":
        return {"phis": "identity"}
    if text.startswith("seed:"):
        try:
            return {"seed": int(text[5:])}
        except ValueError:
            raise CliError(f"bad seed in --phi {text!r}", EXIT_USAGE) from None
    if text.startswith("file:"):
        try:
            data = json.loads(Path(text[5:]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read bijections from {text[5:]}: {exc}", EXIT_IO) from None
        if data and not isinstance(data[0], list):
            data = [data]
        return {"phis": data}
    raise CliError(f"unknown --phi {text!r} (identity, seed:N or file:PATH)", EXIT_USAGE)


# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    try:
        if args.family == "g84":
            if args.m not in (None, 3):
                raise CliError("g84 has dimension 3", EXIT_USAGE)
            gf = graph_file(recursive_circulant_g84(), "g84")
        elif args.family == "hypercube":
            if args.m is None or args.m < 0:
                raise CliError("hypercube needs --m >= 0", EXIT_USAGE)
            gf = graph_file(hypercube(args.m), "hypercube")
        else:
            if args.m is None:
                raise CliError("rhl needs --m", EXIT_USAGE)
            obj = build_rhl(args.m, **_rhl_phis(args.phi, args.m))
            gf = graph_file(obj, "rhl" if args.m > 3 else "g84")
    except (BijectionError, GraphError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    _emit(json.dumps(gf.to_json(), indent=1) + "\n", args.out)
    print(f"{gf.metadata.get('family')}: {gf.n} vertices, {len(gf.edges)} edges", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    gf = _load(args.graph)
    g = gf.graph()
    kind = PreclusionKind.parse(args.kind)
    budget = args.budget if args.budget is not None else min_degree(g) + 1
    if budget < 1 or args.workers < 1:
        raise CliError("--budget and --workers must be positive", EXIT_USAGE)
    res = preclusion_number(g, kind, budget, all_witnesses=args.all_witnesses,
                            workers=args.workers)
    if res.number is None:
        print(f"{kind.value} > {budget} (nothing of size <= {budget} precludes)")
    else:
        print(f"{kind.value} = {res.number}")
        if res.optimal_sets:
            f = res.optimal_sets[0]
            print(f"witness: vertices {f.sorted_vertices()} edges "
                  f"{[list(e) for e in f.sorted_edges()]}")
            print(f"certificate: {json.dumps(res.certificates[0].to_json())}")
        if args.all_witnesses:
            print(f"optimal sets: {len(res.optimal_sets)}")
    for s in res.swept_sizes:
        print(f"  size {s.size}: {s.count} checked, {s.survivors} survive"
              + ("" if s.complete else " (stopped early)"))
    if args.report:
        _emit(json.dumps(res.to_json(), indent=1) + "\n", args.report)
    return EXIT_OK


def cmd_remainder(args) -> int:
    from .constructors import compose
    from .remainder import _g84_remainders, g4_condition, predict_fsmp_g4

    try:
        phi = parse_phi(args.phi)
    except OSError as exc:
        raise CliError(f"cannot read phi: {exc}", EXIT_IO) from None
    except (GraphError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"invalid phi: {exc}", EXIT_USAGE) from None
    g84 = recursive_circulant_g84()
    rems = _g84_remainders()
    holds, _ = g4_condition(g84, phi, rems)
    pred = predict_fsmp_g4(g84, g84, phi)
    out = {"phi": phi.to_list(),
           "remainder_sets": [r.to_json() for r in rems],
           "condition_g1": holds,
           **pred.to_json()}
    code = EXIT_OK
    if args.validate:
        brute = preclusion_number(compose(g84, g84, phi).graph, PreclusionKind.FSMP, 4,
                                  workers=args.workers)
        out["brute_force_fsmp"] = brute.number
        out["agree"] = brute.number == pred.value
        if not out["agree"]:
            code = EXIT_FAIL
    print(json.dumps(out, indent=1))
    return code


def cmd_verify_paper(args) -> int:
    cfg = harness.Config(max_m=args.max_m, phi_samples=args.phi_samples, seed=args.seed,
                         workers=args.workers, g6_samples=args.g6_samples,
                         ham_samples=args.ham_samples, g5_instances=args.g5_instances)
    if args.g3:
        cfg.g3 = _load(args.g3).graph()
    only = None
    if args.only:
        try:
            only = sorted({int(x) for x in args.only.split(",")})
        except ValueError:
            raise CliError("--only takes comma-separated criterion numbers", EXIT_USAGE) from None

    def show(r):
        print(f"[{_status(r.status)}] {r.number:>2}  {r.claim}  ({r.seconds:.2f} s)")
        print(f"        {r.detail}", flush=True)

    results = harness.run_all(cfg, only, progress=show)
    failed = [r.number for r in results if r.status == "FAIL"]
    print(f"{len(results) - len(failed)}/{len(results)} rows passed"
          + (f"; failed: {failed}" if failed else ""))
    if args.report:
        _emit(json.dumps([r.to_json() for r in results], indent=1) + "\n", args.report)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_export(args) -> int:
    gf = _load(args.graph)
    text = format_dot(gf) if args.format == "dot" else format_edgelist(gf.graph())
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhlmp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a graph and write it as JSON")
    c.add_argument("--family", required=True, choices=["g84", "rhl", "hypercube"])
    c.add_argument("--m", type=int)
    c.add_argument("--phi", help="identity, seed:N or file:PATH (rhl only)")
    c.add_argument("--out", help="output path (default stdout)")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="compute a preclusion number")
    a.add_argument("kind", choices=[k.value for k in PreclusionKind])
    a.add_argument("graph")
    a.add_argument("--budget", type=int, help="largest fault-set size to try (default: min degree + 1)")
    a.add_argument("--all-witnesses", action="store_true")
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--report", help="write the full JSON report here")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("remainder", help="remainder sets and the fsmp(G^4) prediction")
    r.add_argument("--phi", required=True, help="identity, seed:N or file:PATH")
    r.add_argument("--validate", action="store_true", help="also compute fsmp(G^4) by brute force")
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=cmd_remainder)

    v = sub.add_parser("verify-paper", help="run the full verification suite")
    v.add_argument("--max-m", type=int, default=5,
                   help="largest dimension swept exhaustively (default 5)")
    v.add_argument("--phi-samples", type=int, default=50)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--g5-instances", type=int, default=3)
    v.add_argument("--g6-samples", type=int, default=100_000)
    v.add_argument("--ham-samples", type=int, default=1000)
    v.add_argument("--g3", help="graph file used in place of the built-in G(8,4)")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.add_argument("--report", help="write the JSON results here")
    v.set_defaults(func=cmd_verify_paper)

    e = sub.add_parser("export", help="convert a graph file to DOT or an edge list")
    e.add_argument("graph")
    e.add_argument("--format", required=True, choices=["dot", "edgelist"])
    e.add_argument("--out", help="output path (default stdout)")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"rhlmp: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
