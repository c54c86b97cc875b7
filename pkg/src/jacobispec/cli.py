"""Command-line front end.

Subcommands: ``jost``, ``spectrum``, ``lt-sum``, ``enclosure``, ``steppot``,
``sharpness-sweep``, ``oracle``.  All numeric output is written with 17
significant digits so identical configurations reproduce identical bytes;
complex quantities are ``{re, im}`` pairs in JSON and column pairs in CSV.
Exit codes: 0 success, 2 invalid input, 3 numeric warnings under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import steppot as sp
from .jost import jost_backward, jost_volterra
from .operator import OperatorFormatError, load_operator
from .spectrum import spectrum_report
from .oracle import grid_zero_scan

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_STRICT_WARNINGS = 3


class SystemExit2(Exception):
    """Invalid-input failure carrying a diagnostic for exit code 2."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _parse_complex_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected RE,IM")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("need positive integers")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobispec",
                                     description="Jost functions and discrete spectra of half-line Jacobi operators")
    parser.add_argument("--strict", action="store_true",
                        help="exit with status 3 when any numeric warning was raised")
    parser.add_argument("--threads", type=int, default=1, metavar="K",
                        help="worker threads for independent evaluations (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jost", help="Jost components at one disk point, as CSV")
    p.add_argument("--op", required=True, help="operator description file (JSON)")
    p.add_argument("--z", required=True, type=_parse_complex_pair, metavar="RE,IM")
    p.add_argument("--method", choices=("backward", "volterra"), default="backward")
    p.add_argument("--tol", type=_positive, default=1e-12)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--plots", metavar="DIR", help="also render the modulus profile into DIR")

    p = sub.add_parser("spectrum", help="zero search report, as JSON")
    p.add_argument("--op", required=True)
    p.add_argument("--rmax", type=_unit_interval, default=0.999)
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--eps", type=_unit_interval, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--plots", metavar="DIR", help="also render figures into DIR")

    p = sub.add_parser("lt-sum", help="spectral sum at one exponent, as JSON")
    p.add_argument("--op", required=True)
    p.add_argument("--eps", type=_unit_interval, default=0.5)
    p.add_argument("--rmax", type=_unit_interval, default=0.999)
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--out")

    p = sub.add_parser("enclosure", help="enclosure verdicts, as JSON")
    p.add_argument("--op", required=True)
    p.add_argument("--rmax", type=_unit_interval, default=0.999)
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--out")

    p = sub.add_parser("steppot", help="step-potential roots (CSV) and summary (JSON)")
    p.add_argument("--n", required=True, type=int)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=_unit_interval, help="scaled family h = n^(-alpha)")
    group.add_argument("--h", type=_positive, help="explicit step height")
    p.add_argument("--a", type=float, default=None,
                   help="window parameter in (0, 1/4); default n^(-alpha/4), "
                        "falling back to the full first quadrant when that window is empty")
    p.add_argument("--all-roots", action="store_true",
                   help="exhaustive companion-matrix roots (small n)")
    p.add_argument("--tol", type=_positive, default=1e-12)
    p.add_argument("--out", help="roots CSV path (default stdout)")
    p.add_argument("--summary", help="summary JSON path (default stdout after the CSV)")
    p.add_argument("--plots", metavar="DIR")

    p = sub.add_parser("sharpness-sweep", help="normalised spectral sums over an n list, as CSV")
    p.add_argument("--alpha", required=True, type=_unit_interval)
    p.add_argument("--n-list", required=True, type=_int_list, metavar="N1,N2,...")
    p.add_argument("--tol", type=_positive, default=1e-12)
    p.add_argument("--out")
    p.add_argument("--plots", metavar="DIR")

    p = sub.add_parser("oracle", help="stable zeros of the truncated determinant, as CSV")
    p.add_argument("--op", required=True)
    p.add_argument("--n-trunc", required=True, type=int)
    p.add_argument("--scan", nargs=2, metavar=("RECT", "STEP"), default=None,
                   help="RECT as RE0,RE1,IM0,IM1 and a grid step")
    p.add_argument("--out")
    return parser


def _load(path: str):
    try:
        return load_operator(path)
    except OperatorFormatError as exc:
        raise SystemExit2(str(exc))


def _cmd_jost(args) -> list[str]:
    J = _load(args.op)
    if args.z == 0:
        raise SystemExit2("z = 0 is the analytic-continuation point; evaluate nearby instead")
    if args.method == "backward":
        ev = jost_backward(J, args.z)
    else:
        ev = jost_volterra(J, args.z, tol=args.tol)
    rows = [
        [k, float(v.real), float(v.imag), float(ev.component_error_bound(k))]
        for k, v in enumerate(ev.values)
    ]
    _emit(_csv_text(["k", "re", "im", "bound"], rows), args.out)
    return []


def _cmd_spectrum(args) -> list[str]:
    J = _load(args.op)
    report = spectrum_report(J, r_max=args.rmax, tol=args.tol, eps=args.eps, seed=args.seed)
    _emit(_json_dumps(report), args.out)
    if args.plots:
        from .figures import render_spectrum_figure

        render_spectrum_figure(report, Path(args.plots) / "spectrum.png")
    return list(report["warnings"])


def _cmd_lt_sum(args) -> list[str]:
    J = _load(args.op)
    report = spectrum_report(J, r_max=args.rmax, tol=args.tol, eps=args.eps)
    payload = {
        "eps": args.eps,
        "lt_sum": report["lt_sum"],
        "Delta": report["operator"]["Delta"],
        "lt_ratio": report["lt_ratio"],
        "blaschke_sum": report["blaschke_sum"],
        "eigenvalue_count": sum(zr["mult"] for zr in report["zeros"]),
    }
    _emit(_json_dumps(payload), args.out)
    return list(report["warnings"])


def _cmd_enclosure(args) -> list[str]:
    J = _load(args.op)
    report = spectrum_report(J, r_max=args.rmax, tol=args.tol)
    payload = dict(report["enclosures"])
    payload["eigenvalue_count"] = sum(zr["mult"] for zr in report["zeros"])
    _emit(_json_dumps(payload), args.out)
    return list(report["warnings"])


def _steppot_roots(args, op: sp.StepOperator):
    if args.all_roots:
        return sp.all_roots(op, tol=args.tol)
    if args.a is not None:
        seeds = sp.seed_roots(op, args.a)
    elif op.alpha is not None:
        try:
            seeds = sp.seed_roots(op, sp.default_window_parameter(op))
        except ValueError:
            k_lo, k_hi = sp.experiment_seed_span(op)
            seeds = sp.seed_roots_range(op, k_lo, k_hi)
    else:
        k_lo, k_hi = sp.experiment_seed_span(op)
        seeds = sp.seed_roots_range(op, k_lo, k_hi)
    return sp.newton_step_roots_parallel(op, seeds, tol=args.tol, threads=args.threads)


def _cmd_steppot(args) -> list[str]:
    if args.n < 1:
        raise SystemExit2("--n must be a positive integer")
    if args.a is not None and not 0.0 < args.a < 0.25:
        raise SystemExit2("--a must lie in (0, 1/4)")
    if args.alpha is not None:
        op = sp.StepOperator.from_alpha(args.n, args.alpha)
    else:
        op = sp.StepOperator(args.n, args.h)
    try:
        roots, warnings = _steppot_roots(args, op)
    except ValueError as exc:
        raise SystemExit2(str(exc))
    rows = [
        [
            r.k,
            float(r.zeta.real), float(r.zeta.imag),
            float(r.z.real), float(r.z.imag),
            float(r.lam.real), float(r.lam.imag),
            int(r.admissible),
            float(r.residual_pn), float(r.residual_char),
        ]
        for r in roots
    ]
    _emit(
        _csv_text(
            ["k", "zeta_re", "zeta_im", "z_re", "z_im", "lambda_re", "lambda_im",
             "admissible", "residual_pn", "residual_char"],
            rows,
        ),
        args.out,
    )
    admissible = [r for r in roots if r.admissible]
    summary = {
        "n": op.n,
        "h": op.h,
        "alpha": op.alpha,
        "seeds": len(roots) + sum("did not converge" in w for w in warnings),
        "roots": len(roots),
        "admissible": len(admissible),
        "sharpness_sum": sp.sharpness_sum(op, roots),
        "warnings": warnings,
    }
    if op.alpha is not None and admissible:
        rep = sp.asymptotics_report(op, roots)
        summary["asymptotics"] = {
            "max_theta_dev": rep.max_theta_dev,
            "max_rho_dev": rep.max_rho_dev,
            "max_im_dev": rep.max_im_dev,
            "max_sin_dev": rep.max_sin_dev,
        }
    _emit(_json_dumps(summary), args.summary)
    if args.plots:
        from .figures import render_step_roots_figure

        seeds = [sp.binomial_seed(op, r.k) for r in roots]
        render_step_roots_figure(op.n, op.h, seeds, roots, Path(args.plots) / "step_roots.png")
    return warnings


def _cmd_sweep(args) -> list[str]:
    rows = sp.sharpness_sweep(args.alpha, args.n_list, tol=args.tol)
    csv_rows = [
        [row["n"], float(row["sum"]), float(row["sum_over_log_n"]), row["admissible"]]
        for row in rows
    ]
    _emit(_csv_text(["n", "sum", "sum_over_log_n", "admissible"], csv_rows), args.out)
    if args.plots:
        from .figures import render_sharpness_figure

        render_sharpness_figure(rows, Path(args.plots) / "sharpness.png")
    return [f"n={row['n']}: {row['warnings']} seed warnings" for row in rows if row["warnings"]]


def _cmd_oracle(args) -> list[str]:
    J = _load(args.op)
    if args.n_trunc < 1:
        raise SystemExit2("--n-trunc must be a positive integer")
    if args.scan is None:
        region, step = (-2.5, 2.5, 0.01, 2.5), 0.02
    else:
        try:
            parts = [float(v) for v in args.scan[0].split(",")]
            if len(parts) != 4:
                raise ValueError("RECT needs four numbers RE0,RE1,IM0,IM1")
            region, step = tuple(parts), float(args.scan[1])
        except ValueError as exc:
            raise SystemExit2(f"bad --scan: {exc}")
    try:
        zeros = grid_zero_scan(J, args.n_trunc, region, step)
    except ValueError as exc:
        raise SystemExit2(str(exc))
    rows = [[float(w.real), float(w.imag)] for w in zeros]
    _emit(_csv_text(["re", "im"], rows), args.out)
    return []


_COMMANDS = {
    "jost": _cmd_jost,
    "spectrum": _cmd_spectrum,
    "lt-sum": _cmd_lt_sum,
    "enclosure": _cmd_enclosure,
    "steppot": _cmd_steppot,
    "sharpness-sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    for i, token in enumerate(argv[:-1]):
        # keep a RECT like -2.5,2.5,0,1 from being read as an option flag
        if token == "--scan" and argv[i + 1].startswith("-") and "," in argv[i + 1]:
            argv[i + 1] = " " + argv[i + 1]
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        warnings = _COMMANDS[args.command](args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (OperatorFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    if warnings and args.strict:
        return EXIT_STRICT_WARNINGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
