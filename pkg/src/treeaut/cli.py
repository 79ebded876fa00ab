"""Command-line front end.

    treeaut apply t 110 --automaton odometer
    treeaut verify d-topology --p 2 --d 2
    treeaut verify axioms --report out/

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import verify as V
from .automorphism import compose, phi, phi_n, portrait
from .io import FIXTURES, fixture_text, load_automaton, parse_element
from .report import write_report
from .topology import EQUAL, agreement_level, congruence_distance, in_rist, in_stab
from .tree import format_vertex, level_vertices, vertex


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--automaton", "-a", help="fixture name or automaton file")
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="treeaut", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", parents=[common], help="image of a vertex")
    p.add_argument("element")
    p.add_argument("vertex")

    p = sub.add_parser("compose", parents=[common], help="portrait of a product")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--depth", type=int, default=3)

    p = sub.add_parser("portrait", parents=[common])
    p.add_argument("element")
    p.add_argument("--depth", type=int, default=3)

    p = sub.add_parser("dist", parents=[common], help="congruence distance")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--cap", type=int, default=16)

    p = sub.add_parser("stab", parents=[common], help="level stabilizer membership")
    p.add_argument("element")
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("rist", parents=[common], help="rigid stabilizer membership")
    p.add_argument("element")
    p.add_argument("--vertex", required=True)
    p.add_argument("--depth", type=int, default=6)

    p = sub.add_parser("phi", parents=[common], help="wreath recursion / level sections")
    p.add_argument("element")
    p.add_argument("--level", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=("axioms", "smooth-curves", "d-topology", "discreteness"))
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--len", type=int, dest="length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", metavar="DIR", help="write report.tsv and figures to DIR")

    p = sub.add_parser("fixtures", parents=[common], help="shipped automata")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    return parser


def _automaton(args):
    if not args.automaton:
        raise UsageError("this command needs --automaton (a fixture name or a file)")
    return load_automaton(args.automaton)


def _emit(args, rows: Sequence[Sequence[str]], text: Sequence[str]):
    if args.format == "tsv":
        for row in rows:
            print("\t".join(row))
    else:
        for line in text:
            print(line)


def _vertex_out(args, v) -> str:
    return format_vertex(v, machine=args.format == "tsv")


def _run_verify(args) -> int:
    profiles = []
    if args.suite == "axioms":
        automata = V.fixture_automata()
        if args.automaton:
            name = args.automaton if args.automaton in FIXTURES else "custom"
            automata = {name: load_automaton(args.automaton)}
        results, profiles = V.axioms_suite(automata, seed=args.seed)
    elif args.suite == "smooth-curves":
        results, profiles = V.smooth_curves_suite(args.p or 2, args.d or 2, args.length or 3)
    elif args.suite == "d-topology":
        instances = V.D_TOPOLOGY_DEFAULT
        if args.p or args.d:
            instances = ((args.p or 2, args.d or 2),)
        results = V.d_topology_suite(instances)
    else:
        if args.p or args.d or args.length:
            k, p, d = args.length or 3, args.p or 2, args.d or 2
            results = V.discreteness_suite(((k, p, d),), ((k, p, d),))
        else:
            results = V.discreteness_suite()
    if args.format == "tsv":
        print("\t".join(results[0].TSV_FIELDS))
        for r in results:
            print(r.tsv())
    else:
        for r in results:
            print(r.line())
        failed = sum(not r.passed for r in results)
        print(f"{'PASS' if not failed else 'FAIL'}: {len(results) - failed}/{len(results)} checks passed")
    if args.report:
        for path in write_report(results, args.report, profiles):
            print(f"wrote {path}", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _run_verify(args)
    if args.command == "fixtures":
        if args.action == "list":
            _emit(args, [[n] for n in FIXTURES], FIXTURES)
        else:
            if args.name not in FIXTURES:
                raise UsageError(f"unknown fixture {args.name!r}")
            print(fixture_text(args.name), end="")
        return 0

    aut = _automaton(args)
    if args.command == "apply":
        g = parse_element(aut, args.element)
        image = g(vertex(args.vertex, aut.p))
        _emit(args, [[_vertex_out(args, image)]], [_vertex_out(args, image)])
    elif args.command in ("compose", "portrait"):
        if args.command == "compose":
            g = compose(parse_element(aut, args.left), parse_element(aut, args.right))
        else:
            g = parse_element(aut, args.element)
        P = portrait(g, args.depth)
        rows = [[_vertex_out(args, v), str(perm)] for v, perm in P.assignment.items()]
        _emit(args, rows, [f"{a}\t{b}" for a, b in rows])
    elif args.command == "dist":
        g, h = parse_element(aut, args.left), parse_element(aut, args.right)
        level = agreement_level(g, h, args.cap)
        dist = congruence_distance(g, h, args.cap)
        level_text = "EQUAL" if level == EQUAL else str(int(level))
        _emit(args, [[f"{dist:g}", level_text]], [f"distance {dist:g} (agreement level {level_text})"])
    elif args.command == "stab":
        ok = in_stab(parse_element(aut, args.element), args.level)
        _emit(args, [[str(ok).lower()]], [str(ok).lower()])
    elif args.command == "rist":
        verdict = in_rist(parse_element(aut, args.element), vertex(args.vertex, aut.p), args.depth)
        witness = "" if verdict.witness is None else _vertex_out(args, verdict.witness)
        _emit(args, [[str(verdict.holds).lower(), witness]], [str(verdict)])
    elif args.command == "phi":
        g = parse_element(aut, args.element)
        if args.level is None:
            sections, act = phi(g)
            rows = [[str(a), str(s)] for a, s in enumerate(sections)] + [["activity", str(act)]]
        else:
            rows = [[_vertex_out(args, v), str(s)]
                    for v, s in zip(level_vertices(args.level, aut.p), phi_n(g, args.level))]
        _emit(args, rows, [f"{a}\t{b}" for a, b in rows])
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
