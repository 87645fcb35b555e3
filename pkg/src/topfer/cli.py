"""Command-line front end.

    topfer blasius      [--method rk4|adaptive] [--checkpoints 6,8,10] ...
    topfer falkner-skan --beta B [--flow normal|reverse] [--h0 --h1] ...
    topfer sweep        (--betas B1,B2,... | --beta-range START:STOP:STEP) ...
    topfer beta-min     [--threshold 1e-5]

Exit status depends only on the class of outcome:
0 success, 1 invalid input, 2 no convergence (iteration cap, stalled
secant, runaway iterate, bad start), 3 two successive IVP blow-ups,
4 sweep finished with some points not converged.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from contextlib import contextmanager

import numpy as np

from . import tables
from .blasius import HISTORICAL, PRODUCTION, solve_toepfer
from .errors import BadStartError, DoubleBlowUpError, NoConvergenceError, TopferError
from .falkner_skan import (
    DEFAULT_H_MAX,
    DEFAULT_SEEDS,
    FalknerSkanCase,
    Flow,
    default_config,
    find_beta_min,
    solve_case,
    sweep_beta,
)

EXIT_OK, EXIT_INVALID, EXIT_NO_CONVERGENCE, EXIT_DOUBLE_BLOWUP, EXIT_PARTIAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is taken by no-convergence here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def positive(text: str) -> float:
    value = finite(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def float_list(text: str) -> list[float]:
    items = [s.strip() for s in text.split(",")]
    if not text.strip() or any(not s for s in items):
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")
    return [finite(s) for s in items]


def beta_range(text: str) -> list[float]:
    """``START:STOP:STEP`` with STOP included when it falls on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP, got {text!r}")
    start, stop, step = (finite(p) for p in parts)
    if step == 0 or (stop - start) * step < 0:
        raise argparse.ArgumentTypeError(f"STEP does not lead from START to STOP: {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [float(v) for v in np.round(start + step * np.arange(n + 1), 12)]


def _add_output(p):
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.add_argument("--output", "-o", default="-", help="report destination (default stdout)")


def _add_itm(p):
    p.add_argument("--flow", choices=[f.value for f in Flow], default=Flow.NORMAL.value)
    p.add_argument("--h0", type=positive, help="first secant seed (default depends on --flow)")
    p.add_argument("--h1", type=positive, help="second secant seed (default depends on --flow)")
    p.add_argument("--eta-inf", type=positive, default=20.0, help="truncated boundary in starred variables")
    p.add_argument("--tol", type=positive, default=1e-6)
    p.add_argument("--tol-r", type=positive, default=1e-6)
    p.add_argument("--tol-a", type=positive, default=1e-6)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--rtol", type=positive, default=1e-6)
    p.add_argument("--atol", type=positive, default=1e-6)
    p.add_argument("--h-max", type=positive, default=DEFAULT_H_MAX, help="abort when a secant iterate exceeds this")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topfer", description="Transformation-method solvers for Blasius and Falkner-Skan.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("blasius", help="Töpfer's non-iterative method")
    p.add_argument("--method", choices=("rk4", "adaptive"), default="adaptive")
    p.add_argument("--step", type=positive, default=HISTORICAL["step"], help="RK4 step")
    p.add_argument("--checkpoints", type=float_list, help="default 4,6 for rk4 and 6,8,10 for adaptive")
    p.add_argument("--agreement-tol", type=positive, help="default 1e-3 for rk4 and 1e-9 for adaptive")
    p.add_argument("--rtol", type=positive, default=PRODUCTION["rtol"])
    p.add_argument("--atol", type=positive, default=PRODUCTION["atol"])
    p.add_argument("--profile", metavar="PATH", help="write the physical profile CSV here ('-' for stdout)")
    _add_output(p)

    p = sub.add_parser("falkner-skan", help="one ITM solve with its iteration table")
    p.add_argument("--beta", type=finite, required=True)
    _add_itm(p)
    p.add_argument("--profile", metavar="PATH", help="write the physical profile CSV here ('-' for stdout)")
    _add_output(p)

    p = sub.add_parser("sweep", help="skin friction along a list of beta values")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--betas", type=float_list)
    g.add_argument("--beta-range", type=beta_range, metavar="START:STOP:STEP")
    p.add_argument("--no-warm-start", action="store_true", help="use the fixed seeds at every beta")
    _add_itm(p)
    _add_output(p)

    p = sub.add_parser("beta-min", help="continue both branches down to their merging point")
    p.add_argument("--threshold", type=positive, default=1e-5)
    _add_output(p)
    return parser


@contextmanager
def _open(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _itm_config(args):
    flow = Flow(args.flow)
    h0, h1 = DEFAULT_SEEDS[flow]
    return default_config(
        flow,
        h0=args.h0 if args.h0 is not None else h0,
        h1=args.h1 if args.h1 is not None else h1,
        eta_inf=args.eta_inf,
        tol=args.tol,
        tol_r=args.tol_r,
        tol_a=args.tol_a,
        max_iter=args.max_iter,
        rtol=args.rtol,
        atol=args.atol,
        h_max=args.h_max,
    )


def _iterations(records, fmt, comments=()) -> str:
    if fmt == "table":
        return "".join(f"# {c}\n" for c in comments) + tables.iterations_table(records)
    return tables.iterations_csv(records, comments)


def cmd_blasius(args) -> int:
    rk4 = args.method == "rk4"
    checkpoints = args.checkpoints or (HISTORICAL["checkpoints"] if rk4 else PRODUCTION["checkpoints"])
    agreement = args.agreement_tol or (1e-3 if rk4 else PRODUCTION["agreement_tol"])
    if len(checkpoints) < 2 or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])) or checkpoints[0] <= 0:
        raise UsageError("--checkpoints needs at least two positive increasing values")
    try:
        sol = solve_toepfer(
            checkpoints,
            agreement,
            integrator="fixed" if rk4 else "adaptive",
            step=args.step,
            rtol=args.rtol,
            atol=args.atol,
        )
    except NoConvergenceError as exc:
        with _open(args.output) as out:
            out.write(_checkpoints(exc.history, args.format))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    with _open(args.output) as out:
        out.write(_checkpoints(sol.lambda_checkpoints, args.format))
        out.write(f"# lambda = {tables.fmt(sol.lam)}\n")
    if args.profile:
        with _open(args.profile) as out:
            out.write(tables.profile_csv(sol.physical))
    return EXIT_OK


def _checkpoints(pairs, fmt) -> str:
    if fmt == "table":
        return tables.aligned(("eta_star", "lambda"), [(e, f"{lam:.10f}") for e, lam in pairs])
    return "eta_star,lambda\n" + "".join(f"{tables.fmt(e)},{tables.fmt(lam)}\n" for e, lam in pairs)


def cmd_falkner_skan(args) -> int:
    case = FalknerSkanCase(args.beta, Flow(args.flow), _itm_config(args))
    try:
        res = solve_case(case)
    except NoConvergenceError as exc:
        with _open(args.output) as out:
            out.write(_iterations(exc.history, args.format))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOUBLE_BLOWUP if isinstance(exc, DoubleBlowUpError) else EXIT_NO_CONVERGENCE
    summary = (
        f"beta = {tables.fmt(args.beta)}, flow = {case.flow.value}: lambda = {tables.fmt(res.lam)}, "
        f"h_star = {tables.fmt(res.h_star_root)}, fpp0 = {tables.fmt(res.fpp0)}"
    )
    with _open(args.output) as out:
        out.write(_iterations(res.iterations, args.format))
        out.write(f"# {summary}\n")
    if args.profile:
        with _open(args.profile) as out:
            out.write(tables.profile_csv(res.physical))
    return EXIT_OK


def cmd_sweep(args) -> int:
    betas = args.betas if args.betas is not None else args.beta_range
    points = sweep_beta(betas, Flow(args.flow), _itm_config(args), warm_start=not args.no_warm_start)
    with _open(args.output) as out:
        out.write(tables.branch_table(points) if args.format == "table" else tables.branch_csv(points))
    return EXIT_OK if all(p.converged for p in points) else EXIT_PARTIAL


def cmd_beta_min(args) -> int:
    try:
        res = find_beta_min(threshold=args.threshold)
    except BadStartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    rows = [
        ("beta_min", res.beta_min),
        ("fpp0_normal", res.fpp0_normal),
        ("fpp0_reverse", res.fpp0_reverse),
        ("bracket_low", res.bracket[0]),
        ("bracket_high", res.bracket[1]),
        ("probes", len(res.probes)),
    ]
    with _open(args.output) as out:
        if args.format == "table":
            out.write(tables.aligned(("quantity", "value"), [(k, tables.fmt(v)) for k, v in rows]))
        else:
            out.write("quantity,value\n" + "".join(f"{k},{tables.fmt(v)}\n" for k, v in rows))
    return EXIT_OK


COMMANDS = {
    "blasius": cmd_blasius,
    "falkner-skan": cmd_falkner_skan,
    "sweep": cmd_sweep,
    "beta-min": cmd_beta_min,
}


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def glue_negative_values(argv):
    """Turn ``--opt -0.1,-0.2`` into ``--opt=-0.1,-0.2``.

    argparse only recognises plain negative numbers as values; lists and
    ranges that start with a minus sign would be read as unknown options.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(glue_negative_values(argv))
    if getattr(args, "max_iter", 2) < 2:
        print("error: --max-iter must be at least 2", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        # Config validation (InvalidConfigError and friends are ValueErrors).
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TopferError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
