"""Command-line front end.

Exit codes: 0 on success, 1 when an invariant check fails, 2 for usage,
parse and precondition errors.
"""
from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from . import checks
from .capacity import ext_pow, property_report
from .errors import DomainError, ParseError, SugenoLabError
from .integrals import choquet_integral, sugeno_integral
from .io import dumps, read_capacity, read_function
from .prenorms import (
    PrenormParams,
    dunford_schwartz_bruteforce,
    dunford_schwartz_prenorm,
    lorentz_choquet_quasinorm,
    lorentz_quadrature,
    sugeno_lorentz_routes,
)
from .topology import non_closed_ball_witness, non_open_sphere_witness, separation_radius

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0 or x == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a finite positive real, got {text}")
    return x


def _count(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {k}")
    return k


def _pq(sub: argparse.ArgumentParser):
    sub.add_argument("--p", type=_positive, default=1.0)
    sub.add_argument("--q", type=_positive, default=1.0)


def _output(sub: argparse.ArgumentParser, default: str):
    sub.add_argument("--output", choices=("text", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sugenolab", description="Capacities, Sugeno integrals and Sugeno-Lorentz prenorms.")
    cmds = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = cmds.add_parser("integrate", help="Sugeno or Choquet integral of a nonnegative function")
    s.add_argument("--kind", choices=("sugeno", "choquet"), default="sugeno")
    s.add_argument("--measure", required=True)
    s.add_argument("--function", required=True)
    _output(s, "json")

    s = cmds.add_parser("prenorm", help="evaluate a prenorm with an independent cross-check")
    s.add_argument(
        "--kind", choices=("sugeno-lorentz", "sugeno", "dunford-schwartz", "choquet-lorentz"), default="sugeno-lorentz"
    )
    s.add_argument("--measure", required=True)
    s.add_argument("--function", required=True)
    _pq(s)
    _output(s, "json")

    s = cmds.add_parser("report", help="decide the null-set properties of a capacity")
    s.add_argument("--measure", required=True)
    _output(s, "json")

    s = cmds.add_parser("witness", help="certificate that a sphere is not open or a ball not closed")
    s.add_argument("--kind", choices=("open-sphere", "closed-ball"), required=True)
    s.add_argument("--measure", required=True)
    _pq(s)
    _output(s, "json")

    s = cmds.add_parser("separate", help="radius of disjoint balls around two inequivalent functions")
    s.add_argument("--measure", required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    _pq(s)
    _output(s, "json")

    s = cmds.add_parser("check", help="run the seeded invariant sweeps")
    s.add_argument("--suite", choices=(*checks.SUITES, "all"), default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--instances", type=_count, default=100)
    _output(s, "text")

    s = cmds.add_parser("example43", help="prenorm table for the dyadic counting example")
    s.add_argument("--n-max", type=_count, default=10)
    _pq(s)
    _output(s, "text")
    return parser


def _params(args) -> PrenormParams:
    return PrenormParams(args.p, args.q)


def _emit(args, record: dict, text: str | None = None):
    if args.output == "json" or text is None:
        print(dumps(record))
    else:
        print(text)


def cmd_integrate(args) -> int:
    mu, f = read_capacity(args.measure), read_function(args.function)
    value = sugeno_integral(mu, f) if args.kind == "sugeno" else choquet_integral(mu, f)
    _emit(args, {"kind": args.kind, "value": value}, repr(value))
    return EXIT_OK


def cmd_prenorm(args) -> int:
    mu, f = read_capacity(args.measure), read_function(args.function)
    params = PrenormParams(1.0, 1.0) if args.kind == "sugeno" else _params(args)
    if args.kind in ("sugeno-lorentz", "sugeno"):
        cross, value = sugeno_lorentz_routes(mu, f, params)
        agree = checks.rel_close(value, cross)
    elif args.kind == "dunford-schwartz":
        value = dunford_schwartz_prenorm(mu, f)
        cross = dunford_schwartz_bruteforce(mu, f, 1e-4)
        agree = value <= cross + checks.SLACK
    else:
        value = lorentz_choquet_quasinorm(mu, f, params)
        cross = lorentz_quadrature(mu, f, params)
        agree = checks.rel_close(value, cross)
    record = {"kind": args.kind, "value": value, "cross_check_value": cross, "params": params.to_dict()}
    _emit(args, record, f"{value!r} (cross-check {cross!r})")
    if not agree:
        print("cross-check failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_report(args) -> int:
    rep = property_report(read_capacity(args.measure)).to_dict()
    text = "\n".join(f"{k}: {v}" for k, v in sorted(rep.items()))
    _emit(args, rep, text)
    return EXIT_OK


def cmd_witness(args) -> int:
    mu = read_capacity(args.measure)
    make = non_open_sphere_witness if args.kind == "open-sphere" else non_closed_ball_witness
    w = make(mu, _params(args))
    if w is None:
        record = {"kind": args.kind, "witness": None, "reason": "capacity is null-additive"}
        _emit(args, record, "no witness: capacity is null-additive")
        return EXIT_OK
    ok = w.verify(mu)
    record = {"kind": args.kind, "witness": w.to_dict(), "relations": w.relations(mu), "verified": ok}
    _emit(args, record)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_separate(args) -> int:
    mu = read_capacity(args.measure)
    f, g = read_function(args.f), read_function(args.g)
    cert = separation_radius(mu, f, g, _params(args))
    _emit(args, cert.to_dict())
    return EXIT_OK


def cmd_check(args) -> int:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    run = checks.run_suites(names, args.seed, args.instances)
    if args.output == "json":
        record = {
            name: {"cases": r.cases, "failures": r.failures, "first_failure": r.first_failure}
            for name, r in run.results.items()
        }
        print(dumps({"passed": run.passed, "checks": record}))
    else:
        for r in run.results.values():
            print(r.line())
        print("all checks passed" if run.passed else "some checks FAILED")
    return EXIT_OK if run.passed else EXIT_INVARIANT


def cmd_example43(args) -> int:
    params = _params(args)
    rows = checks.example43_rows(args.n_max, params)
    # the indicator formula gives each column independently
    p = params.p
    ok = True
    for row in rows:
        n = row["n"]
        expected = (
            min(1.0, ext_pow(0.5, 1 / p)),
            min(1.0, ext_pow(2 * (0.5 + 2.0 ** -(n + 1)), 1 / p)),
            min(1.0, ext_pow(2.0 ** -(n + 1), 1 / p)),
        )
        got = (row["f"], row["f_n"], row["f_n_minus_f"])
        ok &= all(checks.rel_close(a, b) for a, b in zip(got, expected))
    if args.output == "json":
        print(dumps({"N": args.n_max + 2, "params": params.to_dict(), "rows": rows, "matches_closed_form": ok}))
    else:
        print(f"counting_dyadic({args.n_max + 2}), p={params.p!r}, q={params.q!r}")
        print(f"{'n':>3}  {'(f)':<22}{'(f_n)':<22}(f_n - f)")
        for row in rows:
            print(f"{row['n']:>3}  {row['f']!r:<22}{row['f_n']!r:<22}{row['f_n_minus_f']!r}")
    return EXIT_OK if ok else EXIT_INVARIANT


COMMANDS = {
    "integrate": cmd_integrate,
    "prenorm": cmd_prenorm,
    "report": cmd_report,
    "witness": cmd_witness,
    "separate": cmd_separate,
    "check": cmd_check,
    "example43": cmd_example43,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
    except SugenoLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
