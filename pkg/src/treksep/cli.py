"""Command-line surface.

Exit codes: 0 success / affirmative verdict, 1 negative verdict or suite
failures, 2 usage or input error, 3 internal cross-check disagreement,
4 enumeration resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra, separation, treks, verify
from .graph import (DAG, GraphError, MixedGraph, graph_class, parse_graph,
                    validate)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_DISAGREE = 3
EXIT_CAP = 4


class UsageError(Exception):
    pass


def _load_graph(path: str) -> MixedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_graph(text)
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parse_ids(raw: str, g: MixedGraph, flag: str) -> frozenset:
    if not raw:
        return frozenset()
    out = set()
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            v = int(tok)
        except ValueError:
            raise UsageError(f"{flag}: {tok!r} is not a vertex id") from None
        if not 1 <= v <= g.m:
            raise UsageError(f"{flag}: vertex {v} out of range [1,{g.m}]")
        out.add(v)
    return frozenset(out)


def _emit(args, payload: dict, text_lines):
    if args.output == "json":
        print(json.dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


def cmd_validate(args) -> int:
    try:
        with open(args.graph, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.graph}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    from .graph import InvalidGraphError, ParseError
    try:
        parse_graph(text)
    except ParseError as exc:
        print(f"error: {args.graph}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidGraphError as exc:
        for violation in exc.violations:
            print(violation)
        return EXIT_FALSE
    return EXIT_OK


def cmd_rank(args) -> int:
    g = _load_graph(args.graph)
    A = _parse_ids(args.A, g, "--A")
    B = _parse_ids(args.B, g, "--B")
    if not A or not B:
        raise UsageError("--A and --B must be nonempty")
    res = separation.min_t_separator(g, A, B)
    cert = res.certificate
    payload = {"rank": res.rank,
               "certificate": {"cl": sorted(cert.c_left),
                               "cm": sorted(cert.c_mid),
                               "cr": sorted(cert.c_right)}}
    lines = [f"rank {res.rank}; C_L={_fmt_set(cert.c_left)} "
             f"C_M={_fmt_set(cert.c_mid)} C_R={_fmt_set(cert.c_right)}"]
    if graph_class(g) == DAG:
        c_a, c_b = cert.dag_pair_view()
        lines.append(f"pair view: C_A={_fmt_set(c_a)} C_B={_fmt_set(c_b)}")
    code = EXIT_OK
    if args.oracle:
        oracle = algebra.generic_rank_oracle(g, A, B, args.seed, args.trials)
        agrees = oracle == res.rank
        payload["oracle_rank"] = oracle
        payload["agrees"] = agrees
        lines.append(f"oracle rank {oracle} (seed {args.seed}, "
                     f"trials {args.trials}): "
                     + ("agrees" if agrees else "DISAGREES"))
        if not agrees:
            code = EXIT_DISAGREE
    _emit(args, payload, lines)
    return code


def cmd_tsep(args) -> int:
    g = _load_graph(args.graph)
    A = _parse_ids(args.A, g, "--A")
    B = _parse_ids(args.B, g, "--B")
    if not A or not B:
        raise UsageError("--A and --B must be nonempty")
    triple = separation.SeparationTriple.of(
        cl=_parse_ids(args.CL, g, "--CL"),
        cm=_parse_ids(args.CM, g, "--CM"),
        cr=_parse_ids(args.CR, g, "--CR"))
    verdict = separation.is_t_separating(g, A, B, triple)
    _emit(args, {"separates": verdict}, ["yes" if verdict else "no"])
    return EXIT_OK if verdict else EXIT_FALSE


def _disjoint_abc(args, g):
    A = _parse_ids(args.A, g, "--A")
    B = _parse_ids(args.B, g, "--B")
    C = _parse_ids(args.C, g, "--C")
    if not A or not B:
        raise UsageError("--A and --B must be nonempty")
    if A & B or A & C or B & C:
        raise UsageError("--A, --B and --C must be pairwise disjoint")
    return A, B, C


def cmd_dsep(args) -> int:
    g = _load_graph(args.graph)
    if graph_class(g) != DAG:
        raise UsageError("d-separation queries require a purely directed graph")
    A, B, C = _disjoint_abc(args, g)
    classic = separation.d_separates(g, A, B, C)
    via_tsep = separation.d_sep_via_t_sep(g, A, B, C)
    payload = {"d_separates": classic, "via_t_separation": via_tsep}
    lines = [f"{'yes' if classic else 'no'}/{'yes' if via_tsep else 'no'}"]
    _emit(args, payload, lines)
    if classic != via_tsep:
        print("error: the two d-separation algorithms disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK if classic else EXIT_FALSE


def cmd_ci(args) -> int:
    g = _load_graph(args.graph)
    A, B, C = _disjoint_abc(args, g)
    verdict = separation.ci_implied(g, A, B, C)
    _emit(args, {"ci_implied": verdict}, ["yes" if verdict else "no"])
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_treks(args) -> int:
    g = _load_graph(args.graph)
    for flag, v in (("--i", args.i), ("--j", args.j)):
        if not 1 <= v <= g.m:
            raise UsageError(f"{flag}: vertex {v} out of range [1,{g.m}]")
    try:
        found = treks.enumerate_simple_treks(g, args.i, args.j, args.cap)
    except treks.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    payload = {"count": len(found), "treks": []}
    lines = []
    for t in found:
        mono = treks.trek_monomial(g, t)
        payload["treks"].append({
            "left": list(t.left),
            "middle_kind": t.middle_kind,
            "middle": list(t.middle),
            "right": list(t.right),
            "monomial": str(mono),
        })
        mid = "" if t.middle_kind is None else f" [{t.middle_kind}: " \
            + "-".join(str(v) for v in t.middle) + "]"
        lines.append(
            "left " + "->".join(str(v) for v in t.left) + mid
            + " right " + "->".join(str(v) for v in t.right)
            + f"  {mono}")
    lines.append(f"{len(found)} simple trek(s)")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = verify.SuiteConfig(seed=args.seed, max_vertices=args.max_vertices,
                             graph_count=args.graphs,
                             trials_per_instance=args.trials)
    report = verify.run_suite(cfg)
    if args.output == "json":
        print(json.dumps({"seed": args.seed, **report.to_dict()}))
    else:
        print(f"seed {args.seed}")
        for name, counts in report.checks.items():
            print(f"{name}: {counts['passes']} passed, "
                  f"{counts['failures']} failed")
        for failure in report.failures:
            print(f"FAIL {json.dumps(failure)}")
    return EXIT_OK if report.total_failures == 0 else EXIT_FALSE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treksep",
        description="Generic ranks of covariance submatrices of Gaussian "
                    "graphical models on mixed graphs, via minimum "
                    "trek-separating sets, with an exact algebraic oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("graph", help="graph file")
        p.add_argument("--output", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check a graph file")
    p.add_argument("graph")

    p = sub.add_parser("rank", help="generic rank of Sigma_{A,B}")
    common(p)
    p.add_argument("--A", required=True, help="comma-separated vertex ids")
    p.add_argument("--B", required=True, help="comma-separated vertex ids")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the exact algebraic oracle")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("tsep", help="does (C_L,C_M,C_R) t-separate A from B?")
    common(p)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--CL", default="")
    p.add_argument("--CM", default="")
    p.add_argument("--CR", default="")
    p.set_defaults(func=cmd_tsep)

    p = sub.add_parser("dsep", help="d-separation, two independent algorithms")
    common(p)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C", default="")
    p.set_defaults(func=cmd_dsep)

    p = sub.add_parser("ci", help="is X_A independent of X_B given X_C, generically?")
    common(p)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C", default="")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("treks", help="list simple treks between two vertices")
    common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--cap", type=int, default=treks.DEFAULT_CAP)
    p.set_defaults(func=cmd_treks)

    p = sub.add_parser("verify", help="run the randomized cross-check suite")
    common(p, graph=False)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--graphs", type=int, default=200)
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.command == "validate":
        return cmd_validate(args)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except treks.CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


def entry() -> None:
    sys.exit(main())
