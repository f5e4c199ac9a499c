"""Command-line front end.

Exit codes: 0 positive answer, 1 negative answer (certificate written where
there is one), 2 usage / parse / parameter error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import construct as cons
from .assignments import (AssignmentError, BudgetExceeded, ListAssignment, assignment_violation,
                          check_certificate, is_lambda_choosable, l_colour)
from .gadgets import UnsupportedPart, gadget_text, load_gadget, make_gadget, verify_gadget
from .graph import GraphFormatError, parse_graph
from .partitions import Partition, le

DEFAULT_SEED = 1
EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("lamchoose")


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_graph(path: str):
    try:
        return parse_graph(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# -- subcommands -----------------------------------------------------------------

def cmd_order(args) -> int:
    lam, lam_p = _partition(args.lam), _partition(args.lam_p)
    ok, w = le(lam, lam_p)
    payload = {"le": ok, "lambda": lam.to_text(), "lambda_p": lam_p.to_text()}
    text = "true" if ok else "false"
    if ok:
        payload["lambda_pp"] = w.lambda_pp.to_text()
        payload["refinement_map"] = [[a, list(b)] for a, b in w.refinement_map]
        text += f"\nwitness {w.lambda_pp.to_text()}\n" + "".join(
            f"{a} <- {','.join(map(str, b))}\n" for a, b in w.refinement_map)
    _emit(args, payload, text)
    return EXIT_YES if ok else EXIT_NO


def cmd_check(args) -> int:
    G = _read_graph(args.graph)
    try:
        L = ListAssignment.parse(Path(args.assignment).read_text())
    except (OSError, AssignmentError) as exc:
        raise UsageError(str(exc)) from None
    bad = assignment_violation(G, L)
    if bad:
        raise UsageError(f"not a {L.lam}-assignment: {bad}")
    try:
        phi = l_colour(G, L, max_nodes=args.max_nodes)
    except BudgetExceeded as exc:
        _emit(args, {"budget_exceeded": str(exc)}, f"budget exceeded: {exc}")
        return EXIT_BUDGET
    if phi is None:
        _emit(args, {"colourable": False}, "not colourable")
        return EXIT_NO
    _emit(args, {"colourable": True, "colouring": {str(v): c for v, c in phi.items()}},
          "colourable\n" + "".join(f"{v} {c}\n" for v, c in phi.items()))
    return EXIT_YES


def cmd_choosable(args) -> int:
    G = _read_graph(args.graph)
    lam = _partition(args.lam)
    try:
        cert = is_lambda_choosable(G, lam, max_assignments=args.max_assignments,
                                   max_nodes=args.max_nodes, shards=args.shards)
    except BudgetExceeded as exc:
        _emit(args, {"budget_exceeded": str(exc)}, f"budget exceeded: {exc}")
        return EXIT_BUDGET
    if cert.choosable:
        _emit(args, {"choosable": True, "lambda": lam.to_text()}, f"{lam}-choosable")
        return EXIT_YES
    body = cert.assignment.to_text()
    if args.certificate:
        Path(args.certificate).write_text(body)
    _emit(args, {"choosable": False, "lambda": lam.to_text(), "certificate": body},
          f"not {lam}-choosable\n" + ("" if args.certificate else body))
    return EXIT_NO


def cmd_gadget(args) -> int:
    if args.verify:
        J = _read_graph(args.verify)
        ok, bad = verify_gadget(J, args.part, args.g)
        _emit(args, {"valid": ok, "violations": bad}, "valid" if ok else "invalid: " + "; ".join(bad))
        return EXIT_YES if ok else EXIT_NO
    try:
        J = make_gadget(args.part, args.g)
    except UnsupportedPart as exc:
        raise UsageError(str(exc)) from None
    text = gadget_text(J)
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"part": J.part, "g": J.target_girth, "order": J.order, "graph": text}, text)
    return EXIT_YES


def _supplied_gadgets(specs, g):
    out = {}
    for spec in specs or ():
        part, _, path = spec.partition("=")
        try:
            out[int(part)] = load_gadget(Path(path).read_text(), int(part), g)
        except (ValueError, OSError) as exc:
            raise UsageError(f"gadget {spec}: {exc}") from None
    return out


def cmd_construct(args) -> int:
    lam = _partition(args.lam)
    targets = tuple(_partition(t) for t in args.target)
    supplied = _supplied_gadgets(args.gadget, args.g)
    r = 0
    if supplied:
        from .gadgets import gadgets_for
        r = gadgets_for(lam.parts, args.g, supplied)[0].order
    params = cons.ConstructionParams(lam, targets, args.g, args.eps, args.n, args.seed, r)
    bad = params.violations()
    if bad:
        raise UsageError("invalid parameters: " + "; ".join(bad))
    try:
        c = cons.construct(params, supplied)
    except (cons.ParamError, UnsupportedPart) as exc:
        raise UsageError(str(exc)) from None
    res = cons.write_bundle(c, args.out, decide_cap=args.decide_cap)
    ok = all(rep.structural_ok for rep in res["reports"])
    _emit(args, {"bundle": str(args.out), "structural_ok": ok},
          f"bundle written to {args.out}; structural checks {'pass' if ok else 'FAIL'}")
    return EXIT_YES if ok else EXIT_NO


def _columns(rows, header) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_mc(args) -> int:
    if args.k < 2 or args.n < 1 or args.trials < 1:
        raise UsageError("need k >= 2, n >= 1, trials >= 1")
    if args.kind == "cycles":
        res = cons.montecarlo_short_cycles(args.k, args.n, args.g, args.eps, args.trials, args.seed)
        table = _columns(enumerate(res["counts"]), ["trial", "short_cycles"])
        summary = {k: v for k, v in res.items() if k != "counts"}
    elif args.kind == "expansion":
        if args.n // args.t < 1:
            raise UsageError(f"floor(n/t) = 0 for n={args.n}, t={args.t}")
        res = cons.montecarlo_expansion(args.k, args.n, args.g, args.eps, args.t, args.trials,
                                        args.samples, args.seed, surgery=args.surgery)
        table = _columns(enumerate(res["trial_means"]), ["trial", "mean_edges"])
        summary = {k: v for k, v in res.items() if k != "trial_means"}
    else:
        if args.n // args.t < 1:
            raise UsageError(f"floor(n/t) = 0 for n={args.n}, t={args.t}")
        rows = []
        edgeless_total = 0
        bad_total = 0
        m = cons.edge_budget(args.k, args.n, args.eps)
        for trial in range(args.trials):
            G0 = cons.sample_uniform_graph(args.k, args.n, m, cons.stage_rng(args.seed, "badpairs", trial))
            G0, _ = cons.cut_short_cycles(G0, args.g)
            label = cons.sample_split_labelling(G0, args.r, cons.stage_rng(args.seed, "badpairs-label", trial))
            rep = cons.check_no_bad_pair(G0, label, args.t, args.r, args.probes,
                                         cons.stage_rng(args.seed, "badpairs-probe", trial))
            # same probes with r = 1: a triple is then bad iff A-B is edgeless
            flat = cons.check_no_bad_pair(G0, {e: (1, 1) for e in label}, args.t, 1, args.probes,
                                          cons.stage_rng(args.seed, "badpairs-probe", trial))
            rows.append((trial, rep["probed"], rep["bad"], rep["fraction"], flat["bad"]))
            bad_total += rep["bad"]
            edgeless_total += flat["bad"]
        probed = args.trials * args.probes
        table = _columns(rows, ["trial", "probed", "bad", "bad_fraction", "edgeless"])
        summary = {"k": args.k, "n": args.n, "r": args.r, "t": args.t, "trials": args.trials,
                   "bad_fraction": bad_total / probed, "edgeless_fraction": edgeless_total / probed}
    if args.out:
        Path(args.out).write_text(table + "".join(f"# {k}={summary[k]}\n" for k in sorted(summary)))
    _emit(args, summary, "".join(f"{k}={summary[k]}\n" for k in sorted(summary)))
    return EXIT_YES


def cmd_verify(args) -> int:
    d = Path(args.bundle)
    try:
        params = cons.ConstructionParams.from_text((d / "params.txt").read_text())
        base = parse_graph((d / "base.graph").read_text())
        label = cons.parse_labelling((d / "labelling.txt").read_text())
        flat = parse_graph((d / "G.graph").read_text())
        files = sorted(d.glob("assignment*.txt"))
        Ls = [ListAssignment.parse(f.read_text()) for f in files]
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"unreadable bundle {d}: {exc}") from None
    G = cons.ConstructedGraph(base, label, (), params.r, flat, params)
    reps = [cons.verify_construction(G, L, params.g, params.lam, decide_cap=args.decide_cap)
            for L in Ls] or [cons.verify_construction(G, None, params.g, params.lam)]
    ok = all(r.structural_ok for r in reps)
    text = "".join(r.to_text() for r in reps)
    _emit(args, {"structural_ok": ok, "reports": [r.to_text() for r in reps]}, text)
    return EXIT_YES if ok else EXIT_NO


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lamchoose", description="lambda-choosability toolkit")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("order", help="decide lambda <= lambda'")
    s.add_argument("lam")
    s.add_argument("lam_p")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("check", help="L-colour a graph for a given assignment")
    s.add_argument("graph")
    s.add_argument("assignment")
    s.add_argument("--max-nodes", type=int)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("choosable", help="decide lambda-choosability exactly")
    s.add_argument("graph")
    s.add_argument("lam")
    s.add_argument("--max-assignments", type=int)
    s.add_argument("--max-nodes", type=int)
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--certificate", help="write the failing assignment here")
    s.set_defaults(func=cmd_choosable)

    s = sub.add_parser("gadget", help="emit or verify a gadget graph")
    s.add_argument("--part", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--verify", metavar="GRAPH")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("construct", help="build a separating graph bundle")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--target", action="append", required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--out", required=True)
    s.add_argument("--gadget", action="append", metavar="PART=FILE")
    s.add_argument("--decide-cap", type=int, default=0,
                   help="decide L-colourability when G has at most this many vertices")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("mc", help="Monte Carlo diagnostics")
    s.add_argument("kind", choices=["cycles", "expansion", "badpairs"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--t", type=int, default=4)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--surgery", action="store_true", help="cut short cycles before measuring")
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--probes", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("verify", help="re-check a construction bundle")
    s.add_argument("bundle")
    s.add_argument("--decide-cap", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
