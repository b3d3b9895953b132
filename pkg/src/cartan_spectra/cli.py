"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (including a
verification suite that does not meet its tolerances).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from .catalog import DomainError, build_domain, parse_domain
from .special import selberg_integral_log
from .spectrum import (
    NumericalError,
    eigenvalue_table,
    records_to_csv,
    records_to_json,
    rectangular_denominator_check,
)
from .symbol import SymbolError, parse_builtin, parse_symbol
from .quadrature import radial_density_integral
from .verify import SUITES, suite_mc

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
THREADS_ENV = "CARTAN_SPECTRA_THREADS"


class UsageError(ValueError):
    pass


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer (got {env!r})") from None
    return 1


def cmd_info(args) -> int:
    d = build_domain(parse_domain(args.domain))
    fields = {
        "domain": d.label,
        "r": d.r,
        "a": d.a,
        "b": d.b,
        "n": d.n,
        "n_tube": d.n_tube,
        "p": d.p,
        "tube_type": d.tube_type,
        "formal": d.formal,
        "errata": list(d.errata),
    }
    if args.format == "json":
        _emit(json.dumps(fields, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [f"{d.label}: r={d.r} a={d.a} b={d.b} n={d.n} n_tube={d.n_tube} p={d.p}"]
    lines.append(f"tube_type={'yes' if d.tube_type else 'no'}")
    if d.formal:
        lines.append("formal: (r, a, b) is not realised by an irreducible domain")
    lines.extend(f"erratum: {note}" for note in d.errata)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _symbol(args, r):
    if (args.symbol is None) == (args.builtin is None):
        raise UsageError("give exactly one of --symbol or --builtin")
    if args.symbol is not None:
        return parse_symbol(args.symbol, r)
    return parse_builtin(args.builtin, r)


def cmd_eigs(args) -> int:
    d = build_domain(parse_domain(args.domain))
    psi = _symbol(args, d.r)
    if args.nodes is not None and args.nodes < 1:
        raise UsageError("--nodes must be >= 1")
    if args.alpha_max < 0:
        raise UsageError("--alpha-max must be >= 0")
    records = eigenvalue_table(d, args.lam, psi, args.alpha_max, args.nodes, threads=_threads(args))
    for rec in records:
        if not math.isfinite(rec.value):
            raise NumericalError(f"non-finite eigenvalue for alpha={rec.alpha}")
    text = records_to_json(records) if args.format == "json" else records_to_csv(records)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "mc":
        results = suite_mc(seed=args.seed if args.seed is not None else 0)
    else:
        results = SUITES[args.suite]()
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status} {res.name}: measured={res.measured:.3e} tol={res.tolerance:.0e}")
    ok = all(res.passed for res in results)
    lines.append(f"{args.suite}: {sum(r.passed for r in results)}/{len(results)} passed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_selberg(args) -> int:
    d = build_domain(parse_domain(args.domain))
    d.check_weight(args.lam)
    nodes = args.nodes or 32
    quad = radial_density_integral(d, args.lam, (args.m,) * d.r, None, nodes)
    closed_log = selberg_integral_log(d.r, args.m + d.b + 1, args.lam - d.p + 1, d.a / 2)
    err = rectangular_denominator_check(d, args.lam, args.m, nodes)
    lines = [
        f"domain={d.label} lambda={args.lam:.17g} m={args.m} nodes={nodes}",
        f"closed_form_log={closed_log:.17g}",
        f"quadrature={quad:.17g}",
        f"relative_error={err:.3e}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if err <= args.tol else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-spectra",
        description="Eigenvalues of radial Toeplitz operators on weighted Bergman spaces "
        "of bounded symmetric domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help=f"worker threads (fallback: ${THREADS_ENV})")

    p = sub.add_parser("info", parents=[common], help="print the invariants of a domain")
    p.add_argument("domain", nargs="?")
    p.add_argument("--domain", dest="domain_flag")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser(
        "eigs",
        parents=[common],
        help="tabulate c_alpha over all signatures with parts <= alpha-max",
        description="Symbols are functions of x_j = t_j^2, the squared radial coordinates.",
    )
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--symbol", help='expression in x1..xr, e.g. "x1*x2"')
    p.add_argument("--builtin", help="const:c | power_sum:m | elementary:k | det_power:s | ball_indicator:c")
    p.add_argument("--alpha-max", type=int, default=5)
    p.add_argument("--nodes", type=int, help="Gauss nodes per axis (default 48, 96 for non-polynomial symbols)")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("verify", parents=[common], help="run a fixed verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selberg", parents=[common], help="compare a rectangular denominator with its closed form")
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--nodes", type=int)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_selberg)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "info":
        args.domain = args.domain_flag or args.domain
        if not args.domain:
            parser.error("info needs a domain spec")
    try:
        return args.func(args)
    except (DomainError, SymbolError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
