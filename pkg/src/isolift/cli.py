"""Command line entry point."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exact_lp import INFEASIBLE, feasible, maximize
from .graph import Graph, GraphParseError, parse_graph
from .partition import OrderedPartition
from .polytopes import (
    build_birkhoff,
    build_qpoly,
    build_tinhofer,
    parse_lp_text,
    parse_var_name,
    restrict_to_partition,
    to_lp_text,
)
from .relations import ALGO_KINDS, aut_run, iso_run, joint
from .suites import FAIL, SUITES, SuiteConfig, report_json, run_suite


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--algo", choices=sorted(ALGO_KINDS), default="wl")
    common.add_argument("--graph")
    common.add_argument("--graph2")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-n", type=int, default=6)

    p = argparse.ArgumentParser(prog="isolift", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("refine", parents=[common], help="stable partition of V^k")
    r.add_argument("--partition", help="initial ordered partition (JSON)")
    sub.add_parser("aut", parents=[common], help="automorphism refinement: is the fixed point complete")
    sub.add_parser("iso", parents=[common], help="joint refinement of two graphs")
    for name in ("lp-build", "lp-check"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--flavor", type=str.upper, choices=("B", "T", "Q"), default="T")
        s.add_argument("--restrict", choices=sorted(ALGO_KINDS),
                       help="zero-fix pairs split by the joint fixed point of this relation")
        if name == "lp-build":
            s.add_argument("--meta", action="store_true", help="print metadata JSON instead of LP text")
        else:
            s.add_argument("--lp", help="read the system from an LP text file instead of building it")
            s.add_argument("--max-var", help="maximise this variable, e.g. 'Y_(1,2)'")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--sample", type=int, default=30)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="include wall-clock timings (not reproducible)")
    v.add_argument("--out", help="also write the report to this file")
    return p


def _read_graph(path: str | None, flag: str) -> Graph:
    if not path:
        raise UsageError(f"{flag} is required")
    try:
        return parse_graph(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror}")
    except GraphParseError as exc:
        raise UsageError(f"{flag}: {path}: {exc}")


def _need_k(args, default: int | None = None) -> int:
    k = args.k if args.k is not None else default
    if k is None or k < 1:
        raise UsageError("--k must be a positive integer")
    return k


def _emit(args, obj: dict, text: str) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True) if args.format == "json" else text)


def _cmd_refine(args) -> int:
    g = _read_graph(args.graph, "--graph")
    k = _need_k(args)
    p0 = None
    if args.partition:
        try:
            p0 = OrderedPartition.from_json(g.n, json.loads(Path(args.partition).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"--partition: {exc}")
        if p0.k != k:
            raise UsageError("--partition: arity differs from --k")
    res = aut_run(ALGO_KINDS[args.algo], g, k, p0)
    obj = {"graph": g.digest(), "k": k, "algo": args.algo, "rounds": res.rounds,
           "partition": res.partition.to_json()}
    cells = "\n".join(" ".join(str(tuple(x + 1 for x in u)) for u in c) for c in res.partition.cells)
    _emit(args, obj, f"{len(res.partition)} cells after {res.rounds} rounds\n{cells}")
    return 0


def _cmd_aut(args) -> int:
    g = _read_graph(args.graph, "--graph")
    k = _need_k(args)
    res = aut_run(ALGO_KINDS[args.algo], g, k)
    obj = {"graph": g.digest(), "k": k, "algo": args.algo, "complete": res.complete,
           "cells": len(res.partition), "rounds": res.rounds}
    _emit(args, obj, f"complete={str(res.complete).lower()} cells={len(res.partition)} rounds={res.rounds}")
    return 0


def _cmd_iso(args) -> int:
    g = _read_graph(args.graph, "--graph")
    h = _read_graph(args.graph2, "--graph2")
    k = _need_k(args)
    res = iso_run(ALGO_KINDS[args.algo], g, h, k)
    obj = {"graphs": [g.digest(), h.digest()], "k": k, "algo": args.algo, "verdict": res.verdict,
           "cells": [len(res.left) if res.left else None, len(res.right) if res.right else None]}
    _emit(args, obj, res.verdict)
    return 0


def _system(args):
    if getattr(args, "lp", None):
        try:
            return parse_lp_text(Path(args.lp).read_text())
        except OSError as exc:
            raise UsageError(f"--lp: cannot read {args.lp}: {exc.strerror}")
        except (ValueError, KeyError) as exc:
            raise UsageError(f"--lp: {exc}")
    g = _read_graph(args.graph, "--graph")
    k = _need_k(args)
    if args.flavor == "B":
        ls = build_birkhoff(g.n, k)
        h = g
    else:
        h = _read_graph(args.graph2, "--graph2") if args.graph2 else g
        if h.n != g.n:
            raise UsageError("--graph2: vertex count differs from --graph")
        ls = (build_tinhofer if args.flavor == "T" else build_qpoly)(g, h, k)
    if args.restrict:
        jr = joint(ALGO_KINDS[args.restrict], g, h, k)
        ls = restrict_to_partition(ls, jr.left, jr.right)
    return ls


def _cmd_lp_build(args) -> int:
    ls = _system(args)
    if args.meta:
        print(json.dumps(ls.metadata(), sort_keys=True))
    else:
        sys.stdout.write(to_lp_text(ls))
    return 0


def _cmd_lp_check(args) -> int:
    ls = _system(args)
    if args.max_var:
        try:
            j = ls.column(parse_var_name(args.max_var))
        except ValueError as exc:
            raise UsageError(f"--max-var: {exc}")
        if j is None:
            obj = {"status": "FEASIBLE" if feasible(ls).status != INFEASIBLE else INFEASIBLE,
                   "objective": "0", "pre_zeroed": True}
            _emit(args, obj, f"{obj['status']} max=0 (pre-zeroed)")
            return 0
        opt = maximize(ls, {j: 1})
        obj = opt.to_json()
        _emit(args, obj, f"{obj['status']} max={obj.get('objective', '-')}")
        return 0
    v = feasible(ls)
    _emit(args, v.to_json(), v.status)
    return 0


def _cmd_verify(args) -> int:
    ks = (args.k,) if args.k is not None else (1, 2)
    if any(k < 1 for k in ks):
        raise UsageError("--k must be a positive integer")
    cfg = SuiteConfig(seed=args.seed, max_n=args.max_n, sample=args.sample, k_values=ks,
                      workers=max(1, args.workers), timing=args.timing)
    report = run_suite(args.suite, cfg)
    text = report_json(report)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.format == "json":
        print(text)
    else:
        s = report["summary"]
        lines = [f"{args.suite}: pass={s['pass']} fail={s['fail']} skipped={s['skipped']}"]
        for inst in report["instances"]:
            for c in inst["checks"]:
                if c["outcome"] == FAIL:
                    lines.append(f"  FAIL {inst['label']} k={inst['k']} {c['name']}")
        print("\n".join(lines))
    return 1 if report["summary"]["fail"] else 0


COMMANDS = {"refine": _cmd_refine, "aut": _cmd_aut, "iso": _cmd_iso, "lp-build": _cmd_lp_build,
            "lp-check": _cmd_lp_check, "verify": _cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
