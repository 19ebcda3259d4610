"""Command-line front end: sine tables, iteration traces, verification, figures.

Artifacts (CSV / JSON / text / SVG) go to stdout or ``--out``; diagnostics go
to stderr.  Exit codes: 0 success, 2 usage or validation failure, 3 numeric
failure (non-convergence, accuracy or certification miss).  High-precision
values are serialized in scientific notation at full configured digits so
every format can be parsed back losslessly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import Decimal
from fractions import Fraction

from .errors import (
    ChainValidationError,
    ConvergenceError,
    KunstwegError,
    NumericOverflowError,
    ZeroVectorError,
)
from .geometry import SvgOptions, build_chain, certify_star, render_svg
from .iteration import START_PRESETS, IterationConfig, iterate, sine_table
from .operator import GridSpec, KunstwegOperator, NumericMode, eigen_residual
from .oracle import PrecisionContext, ref_sin, reference_sine_vector, verify_star

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

#: Only environment override: directory that relative --out/--svg paths land in.
OUT_DIR_ENV = "KUNSTWEG_OUT_DIR"

SCHEMA_VERSION = 1

_MODES = {"float": NumericMode.FLOAT, "decimal": NumericMode.DECIMAL,
          "exact": NumericMode.EXACT}


def _sci(value: Decimal, sig: int) -> str:
    return format(value, f".{max(sig - 1, 1)}e")


def _sci_float(value: float) -> str:
    return format(value, ".16e")


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text: str, path: str | None) -> None:
    resolved = _resolve_out(path)
    if resolved is None:
        sys.stdout.write(text)
    else:
        with open(resolved, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC-4180 style line endings
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _scalar_str(value, mode: NumericMode, digits: int | None) -> str:
    if value is None:
        return ""
    if mode is NumericMode.EXACT:
        f = Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    if mode is NumericMode.DECIMAL:
        return _sci(value, digits or 17)
    return _sci_float(value)


# ---------------------------------------------------------------- table ----

def cmd_table(args: argparse.Namespace) -> int:
    spec = GridSpec(args.n)
    rows = sine_table(spec, args.digits, max_steps=args.max_steps)
    oracle_ctx = PrecisionContext(args.digits + 8, ceiling=args.digits + 8)
    table = []
    for j, degrees, sine in rows:
        reference = ref_sin(spec.angle_turns(j), oracle_ctx)
        table.append((j, degrees, sine, abs(sine - reference)))
    threshold = Decimal(10) ** -args.digits
    max_error = max(err for _, _, _, err in table)
    passed = max_error <= threshold

    if args.format == "csv":
        text = _csv_text(
            ["j", "degrees", "sine", "abs_error"],
            [[j, repr(deg), _sci(sine, args.digits), _sci(err, 6)]
             for j, deg, sine, err in table])
    elif args.format == "json":
        text = _json_text({
            "schema_version": SCHEMA_VERSION,
            "command": "table",
            "n": args.n,
            "digits": args.digits,
            "rows": [{"j": j, "degrees": deg, "sine": _sci(sine, args.digits),
                      "abs_error": _sci(err, 6)} for j, deg, sine, err in table],
            "max_abs_error": _sci(max_error, 6),
            "passed": passed,
        })
    else:
        lines = [f"# sine table  n={args.n}  digits={args.digits}",
                 f"# {'j':>4} {'degrees':>12}  {'sine':<{args.digits + 8}} abs_error"]
        for j, deg, sine, err in table:
            lines.append(f"  {j:>4} {deg:>12}  {_sci(sine, args.digits):<{args.digits + 8}} "
                         f"{_sci(err, 6)}")
        lines.append(f"# max abs error {_sci(max_error, 6)}  "
                     f"threshold {_sci(threshold, 2)}  {'PASS' if passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    print(f"table n={args.n} digits={args.digits}: max error {_sci(max_error, 3)} "
          f"[{'PASS' if passed else 'FAIL'}]", file=sys.stderr)
    return EXIT_OK if passed else EXIT_NUMERIC


# -------------------------------------------------------------- iterate ----

def cmd_iterate(args: argparse.Namespace) -> int:
    spec = GridSpec(args.n)
    mode = _MODES[args.mode]
    if mode is NumericMode.FLOAT:
        tolerance = float(args.tolerance)
    elif mode is NumericMode.DECIMAL:
        tolerance = Decimal(args.tolerance)
    else:
        tolerance = Fraction(Decimal(args.tolerance))
    cfg = IterationConfig(spec, start=args.start, tolerance=tolerance,
                          max_steps=args.max_steps, mode=mode, digits=args.digits)
    vec, trace = iterate(cfg)

    def fmt(v):
        return _scalar_str(v, mode, args.digits)

    steps = list(range(1, trace.steps + 1))
    if args.format == "csv":
        text = _csv_text(
            ["step", "lambda_estimate", "delta"],
            [[k, fmt(lam), fmt(delta)]
             for k, lam, delta in zip(steps, trace.lambda_estimates, trace.deltas)])
    elif args.format == "json":
        text = _json_text({
            "schema_version": SCHEMA_VERSION,
            "command": "iterate",
            "n": args.n,
            "mode": args.mode,
            "tolerance": str(args.tolerance),
            "steps": trace.steps,
            "converged": trace.converged,
            "reason": trace.reason,
            "final_residual": fmt(trace.final_residual) if mode is not NumericMode.EXACT
                              else _sci_float(trace.final_residual),
            "trace": [{"step": k, "lambda_estimate": fmt(lam),
                       "delta": fmt(delta) if delta is not None else None}
                      for k, lam, delta in zip(steps, trace.lambda_estimates, trace.deltas)],
        })
    else:
        lines = [f"# iterate  n={args.n}  mode={args.mode}  tolerance={args.tolerance}"]
        for k, lam, delta in zip(steps, trace.lambda_estimates, trace.deltas):
            lines.append(f"  step {k:>4}  lambda {fmt(lam)}  delta {fmt(delta)}")
        lines.append(f"# steps={trace.steps} converged={trace.converged} "
                     f"reason={trace.reason}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    print(f"iterate n={args.n}: {trace.steps} steps, "
          f"{'converged' if trace.converged else 'NOT converged'} ({trace.reason})",
          file=sys.stderr)
    return EXIT_OK if trace.converged else EXIT_NUMERIC


# --------------------------------------------------------------- verify ----

def cmd_verify(args: argparse.Namespace) -> int:
    spec = GridSpec(args.n)
    ctx = PrecisionContext(args.digits)
    report = verify_star(spec, ctx)
    op = KunstwegOperator(spec)
    residual = eigen_residual(op, reference_sine_vector(spec, ctx),
                              digits=args.digits)
    residual_tol = Decimal(10) ** (5 - args.digits) * report.lam
    passed = report.passed and residual <= residual_tol

    if args.format == "csv":
        text = _csv_text(["j", "abs_gap"],
                         [[j + 1, _sci(gap, 6)] for j, gap in enumerate(report.gaps)])
    elif args.format == "json":
        text = _json_text({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "n": args.n,
            "digits": args.digits,
            "lambda": _sci(report.lam, args.digits),
            "equations": [{"j": j + 1, "abs_gap": _sci(gap, 6)}
                          for j, gap in enumerate(report.gaps)],
            "max_gap": _sci(report.max_gap, 6),
            "gap_tolerance": _sci(report.tolerance, 6),
            "eigen_residual": _sci(residual, 6),
            "residual_tolerance": _sci(residual_tol, 6),
            "passed": passed,
        })
    else:
        lines = [f"# verify  n={args.n}  digits={args.digits}",
                 f"# lambda = {_sci(report.lam, args.digits)}"]
        for j, gap in enumerate(report.gaps):
            lines.append(f"  equation {j + 1:>4}  gap {_sci(gap, 6)}")
        lines.append(f"# max gap {_sci(report.max_gap, 6)} "
                     f"(tolerance {_sci(report.tolerance, 6)})")
        lines.append(f"# eigen residual {_sci(residual, 6)} "
                     f"(tolerance {_sci(residual_tol, 6)})")
        lines.append(f"# {'PASS' if passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    print(f"verify n={args.n} digits={args.digits}: max gap {_sci(report.max_gap, 3)}, "
          f"residual {_sci(residual, 3)} [{'PASS' if passed else 'FAIL'}]",
          file=sys.stderr)
    return EXIT_OK if passed else EXIT_NUMERIC


# ------------------------------------------------------------- geometry ----

def cmd_geometry(args: argparse.Namespace) -> int:
    spec = GridSpec(args.n)
    chain = build_chain(spec, side=args.side, tau=args.tau)
    certs = certify_star(chain)
    passed = all(c.passed for c in certs)

    if args.svg:
        options = SvgOptions(show_path_vectors=args.svg_vectors,
                             show_cancellations=args.svg_cancellations)
        _emit(render_svg(chain, options), args.svg)

    if args.format == "csv":
        text = _csv_text(
            ["j", "geometric", "algebraic", "abs_gap", "passed"],
            [[c.j, _sci_float(c.geometric), _sci_float(c.algebraic),
              format(c.gap, ".3e"), c.passed] for c in certs])
    elif args.format == "json":
        text = _json_text({
            "schema_version": SCHEMA_VERSION,
            "command": "geometry",
            "n": args.n,
            "side": chain.side,
            "radius": chain.radius,
            "tau": chain.tau,
            "certificates": [{"j": c.j, "geometric": _sci_float(c.geometric),
                              "algebraic": _sci_float(c.algebraic),
                              "abs_gap": format(c.gap, ".3e"),
                              "passed": c.passed} for c in certs],
            "passed": passed,
        })
    else:
        lines = [f"# geometry  n={args.n}  side={chain.side}  "
                 f"radius={_sci_float(chain.radius)}  tau={format(chain.tau, '.3e')}"]
        for c in certs:
            lines.append(f"  j {c.j:>4}  rise {_sci_float(c.geometric)}  "
                         f"folded {_sci_float(c.algebraic)}  gap {format(c.gap, '.3e')}  "
                         f"{'ok' if c.passed else 'FAIL'}")
        lines.append(f"# {'PASS' if passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    print(f"geometry n={args.n}: {len(certs)} certificates, "
          f"max gap {max(c.gap for c in certs):.3e} [{'PASS' if passed else 'FAIL'}]",
          file=sys.stderr)
    return EXIT_OK if passed else EXIT_NUMERIC


# --------------------------------------------------------------- parser ----

def _add_output_args(parser: argparse.ArgumentParser,
                     formats: tuple[str, ...] = ("csv", "json", "text")) -> None:
    parser.add_argument("--format", choices=formats, default="text",
                        help="artifact format (default: text)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the artifact to PATH instead of stdout "
                             f"(relative paths honor ${OUT_DIR_ENV})")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kunstweg",
        description="Sine tables via Bürgi's Kunstweg iteration, with "
                    "high-precision and geometric verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="generate a sine table on the 90°/n grid")
    t.add_argument("--n", type=int, required=True, help="number of grid angles")
    t.add_argument("--digits", type=int, default=12,
                   help="significant digits per entry (default: 12)")
    t.add_argument("--max-steps", type=int, default=1000)
    _add_output_args(t)
    t.set_defaults(handler=cmd_table)

    i = sub.add_parser("iterate", help="run the power iteration and emit its trace")
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--tolerance", default="1e-12",
                   help="stop when successive iterates differ by at most this "
                        "(max norm; default 1e-12)")
    i.add_argument("--max-steps", type=int, default=1000)
    i.add_argument("--start", choices=START_PRESETS, default="ones")
    i.add_argument("--mode", choices=tuple(_MODES), default="float")
    i.add_argument("--digits", type=int, default=None,
                   help="working digits (decimal mode)")
    _add_output_args(i)
    i.set_defaults(handler=cmd_iterate)

    v = sub.add_parser("verify", help="check the eigen equations at high precision")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--digits", type=int, default=50)
    _add_output_args(v)
    v.set_defaults(handler=cmd_verify)

    g = sub.add_parser("geometry", help="build the 4n-gon chain, certify it, "
                                        "optionally render SVG")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--side", type=float, default=1.0, help="polygon side length")
    g.add_argument("--tau", type=float, default=None,
                   help="absolute certification tolerance (default 1e-9*R)")
    g.add_argument("--svg", default=None, metavar="PATH",
                   help="also write an SVG rendering to PATH")
    g.add_argument("--svg-vectors", action="store_true",
                   help="draw the per-path side vectors as arrows")
    g.add_argument("--svg-cancellations", action="store_true",
                   help="dash vectors whose vertical parts cancel")
    _add_output_args(g)
    g.set_defaults(handler=cmd_geometry)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        return args.handler(args)
    except ValueError as exc:  # includes PrecisionCeilingError and bad configs
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NumericOverflowError, ZeroVectorError,
            ChainValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except KunstwegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
