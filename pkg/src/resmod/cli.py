"""Command line entry point.

Exit codes of ``prove``: 0 refuted, 1 saturated, 2 budget exhausted.
``check-proof`` and ``cutfree`` exit 0 on success and 1 otherwise.  Usage,
parse and configuration errors exit 3.
"""

from __future__ import annotations

import argparse
import sys

from .logic import Input
from .orders import OrderingError, SelectionError
from .saturation import ConfigError, Status, enumerate_refutations
from .sequent import ProofError, check_proof, cutfree_search
from .syntax import ParseError, format_proof, parse_proof, parse_sequent, parse_terms
from .workbench import METHODS, compare, emit_rules, format_table, load_problem, run

EXIT = {Status.REFUTED: 0, Status.SATURATED: 1, Status.BUDGET: 2}
USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _method_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=1000, help="maximum number of generated clauses")
    p.add_argument("--precedence", help='symbol ranking for ordered resolution, lowest first, e.g. "Q<P"')
    p.add_argument("--selection", help="none, all-neg or table=FILE (ordered resolution)")
    p.add_argument("--theory", help="comma separated theory clause ids for sos")
    p.add_argument("--subsumption", action="store_true", help="also delete subsumed clauses")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prove", help="saturate a problem with one method")
    p.add_argument("problem", help="problem file or built-in name")
    p.add_argument("--method", default="plain", choices=METHODS)
    p.add_argument("--timing", action="store_true", help="print the wall time")
    _method_options(p)

    p = sub.add_parser("compare", help="run several methods and tabulate outcomes")
    p.add_argument("problem")
    p.add_argument("--method", action="append", help="method (repeatable or comma separated)")
    _method_options(p)

    p = sub.add_parser("rules", help="print the rewrite system of the theory clauses")
    p.add_argument("problem")

    p = sub.add_parser("check-proof", help="check a proof file")
    p.add_argument("problem", help="problem whose rewrite system the proof is modulo")
    p.add_argument("proof", help="proof file")
    p.add_argument("--goal", required=True, help='sequent, e.g. "|- Q"')

    p = sub.add_parser("cutfree", help="search for a cut-free proof")
    p.add_argument("problem")
    p.add_argument("--goal", required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--fuel", type=int, default=3, help="maximum rewrite steps per side condition")
    p.add_argument("--terms", default="", help='instances for forall-left, e.g. "a,f(a)"')

    p = sub.add_parser("refutations", help="enumerate distinct plain refutations")
    p.add_argument("problem")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--depth", type=int, default=5)
    return parser


def _methods(raw: list[str] | None) -> list[str]:
    out = [m.strip() for item in raw or [] for m in item.split(",") if m.strip()]
    bad = [m for m in out if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown method {bad[0]!r}; choose from {', '.join(METHODS)}")
    return out


def _options(args) -> dict:
    return dict(precedence=args.precedence, selection=args.selection, theory=args.theory,
                subsumption=args.subsumption)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load_problem(args.problem)
        if args.command == "prove":
            report = run(problem, args.method, args.budget, **_options(args))
            print(report.render(timing=args.timing))
            return EXIT[report.outcome.status]
        if args.command == "compare":
            reports = compare(problem, _methods(args.method), args.budget, **_options(args))
            text = format_table(reports)
            if text:
                print(text)
            return 0
        if args.command == "rules":
            print(emit_rules(problem))
            return 0
        if args.command == "check-proof":
            with open(args.proof) as fh:
                proof = parse_proof(fh.read())
            try:
                check_proof(problem.system(), parse_sequent(args.goal), proof)
            except ProofError as e:
                print(f"REJECTED {e}")
                return 1
            print("ACCEPTED")
            return 0
        if args.command == "cutfree":
            proof = cutfree_search(problem.system(), parse_sequent(args.goal), args.depth,
                                   parse_terms(args.terms), args.fuel)
            if proof is None:
                print(f"no cut-free proof within depth={args.depth} fuel={args.fuel}")
                return 1
            print(format_proof(proof))
            return 0
        if args.command == "refutations":
            found = enumerate_refutations(problem.clauses, args.limit, args.depth)
            for n, ref in enumerate(found, 1):
                steps = ", ".join(f"{c.id}: {c} <- {c.origin}" for c in ref.clauses if not isinstance(c.origin, Input))
                print(f"refutation {n}: {steps}")
            print(f"found {len(found)}")
            return 0
    except (ParseError, ConfigError, OrderingError, SelectionError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return USAGE_ERROR
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
