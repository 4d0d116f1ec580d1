"""Command-line driver: ``nevanlinna-lab <command> [options]``.

Exit codes: 0 when the report passes, 1 on a lemma failure or evaluation
error, 2 on usage errors, 3 on IO errors.

``--config FILE`` reads ``key = value`` lines (``#`` comments allowed) whose
keys are long option names; they act as defaults and command-line flags win.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import lab
from .census import CensusConfig, census, winding
from .errors import DomainError, LabError
from .nevanlinna import Disk, characteristic_T, jensen_residual
from .quadrature import QuadratureSpec
from .registry import resolve, value_divisors
from .reports import atomic_write, dumps, emit_report, utc_timestamp
from .zeta import EvalBudget

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

GRID_DEFAULTS = {
    "lemma6": dict(t_min=2.0, t_max=1e4, sigma=[0.5, 0.75, 1.0, 2.0]),
    "lemma8": dict(t_min=16.0, t_max=5000.0, sigma=[0.52, 0.6, 1.0]),
    "theorem": dict(t_min=16.0, t_max=1e4, sigma=[0.54, 0.75, 1.0, 2.0, 4.0]),
}


class _UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value defaults file; flags win")
    common.add_argument("--out-dir", type=Path, default=Path("."))
    common.add_argument("--format", choices=("json", "csv", "both"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default NEVANLINNA_LAB_JOBS or 1)")
    common.add_argument("--target-abs-err", type=float, default=1e-12)
    common.add_argument("--max-terms", type=int, default=2**20)
    common.add_argument("--bernoulli-order", type=int, default=10)
    common.add_argument("--quad-target", type=float, default=1e-10)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="nevanlinna-lab", description="Numerical lab for zeta growth bounds.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("lemma4", parents=[common], help="sum minus integral tail bound")
    p.add_argument("--fn", default="inv_x", choices=sorted(lab.LEMMA4_FUNCTIONS))
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--xi", type=float, default=1000.0)
    p.add_argument("--n-alpha", type=int, default=10**7)

    p = sub.add_parser("lemma5", parents=[common], help="zeta envelopes on sigma = 4")
    p.add_argument("--t-min", type=float, default=-1000.0)
    p.add_argument("--t-max", type=float, default=1000.0)
    p.add_argument("--t-step", type=float, default=0.1)

    for name, helptext in (("lemma6", "empirical c1"), ("lemma8", "log zeta growth fit"),
                           ("theorem", "zeta growth fit")):
        d = GRID_DEFAULTS[name]
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--t-min", type=float, default=d["t_min"])
        p.add_argument("--t-max", type=float, default=d["t_max"])
        p.add_argument("--per-decade", type=int, default=64)
        p.add_argument("--t-step", type=float, default=None, help="linear t spacing instead of log spacing")
        p.add_argument("--sigma", type=float, nargs="+", default=d["sigma"])
        p.add_argument("--delta", type=float, default=0.01)

    p = sub.add_parser("lemma9", parents=[common], help="1-points of zeta and the fitted c4")
    p.add_argument("--t", type=float, nargs="+", default=[16.0, 100.0, 1000.0, 10000.0])
    p.add_argument("--delta", type=float, default=0.01)

    p = sub.add_parser("census", parents=[common], help="zeros of f - target in a disk")
    p.add_argument("--fn", required=True)
    p.add_argument("--center", type=_complex, default=0j)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--target", type=_complex, default=0j)

    p = sub.add_parser("characteristic", parents=[common], help="m, n, N, T of f")
    p.add_argument("--fn", required=True)
    p.add_argument("--radius", type=float, nargs="+", required=True)

    p = sub.add_parser("jensen", parents=[common], help="Jensen formula residual")
    p.add_argument("--fn", required=True)
    p.add_argument("--rho", type=float, required=True)
    return parser


def _config_tokens(path: Path, parser: argparse.ArgumentParser, command: str) -> list[str]:
    sub = parser._subparsers._group_actions[0].choices[command]
    known = {opt for action in sub._actions for opt in action.option_strings}
    tokens = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        if not sep or flag not in known or flag == "--config":
            raise _UsageError(f"{path}:{lineno}: unknown setting {key.strip()!r}")
        value = value.strip().strip('"')
        tokens.append(flag)
        tokens.extend(value.split() if value else [])
    return tokens


def _parse(argv: list[str]) -> argparse.Namespace:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        idx = argv.index(args.command)
        extra = _config_tokens(args.config, parser, args.command)
        args = parser.parse_args(argv[: idx + 1] + extra + argv[idx + 1 :])
    return args


def _budget(args) -> EvalBudget:
    return EvalBudget(args.target_abs_err, args.max_terms, args.bernoulli_order)


def _t_grid(args) -> np.ndarray:
    if args.t_step is not None:
        if args.t_step <= 0 or args.t_max < args.t_min:
            raise _UsageError("need t-step > 0 and t-max >= t-min")
        count = int(round((args.t_max - args.t_min) / args.t_step)) + 1
        return np.linspace(args.t_min, args.t_max, count)
    return lab.log_spaced(args.t_min, args.t_max, args.per_decade)


def _scan_grid(args) -> lab.ScanGrid:
    return lab.ScanGrid(tuple(_t_grid(args)), tuple(sorted(args.sigma)), args.delta)


def _run_lemma(args) -> lab.LemmaReport:
    budget = _budget(args)
    if args.command == "lemma4":
        return lab.lemma4_report(args.fn, args.a, args.xi, args.n_alpha)
    if args.command == "lemma5":
        return lab.lemma5_scan(_t_grid(args), budget, args.jobs)
    if args.command == "lemma6":
        return lab.lemma6_report(_scan_grid(args), budget, args.jobs)
    if args.command == "lemma8":
        return lab.lemma8_scan(_scan_grid(args), budget, args.jobs)
    if args.command == "lemma9":
        return lab.lemma9_sweep(args.t, args.delta, CensusConfig(target=1.0), args.jobs)[0]
    return lab.theorem_scan(_scan_grid(args), budget, args.jobs)


def _run_function(args) -> tuple[dict, bool]:
    f = resolve(args.fn)
    quad = QuadratureSpec(target_abs_err=args.quad_target)
    if args.command == "census":
        cfg = CensusConfig(target=args.target)
        disk = Disk(args.center, args.radius)
        w = winding(f, disk, cfg)
        divisors = census(f, disk, cfg)
        doc = {"command": "census", "fn": args.fn, "center": {"re": disk.center.real, "im": disk.center.imag},
               "radius": disk.radius, "target": {"re": args.target.real, "im": args.target.imag},
               "winding": w.count, "winding_raw": w.raw, "divisors": divisors.to_list()}
        return doc, True
    if args.command == "characteristic":
        rows = []
        for r in args.radius:
            c = characteristic_T(f, r, quad)
            rows.append({"radius": c.radius, "m": c.m, "n": c.n_count, "N": c.N, "T": c.T})
        return {"command": "characteristic", "fn": args.fn, "values": rows}, True
    divisors = f.declared_divisors
    if divisors is None:
        divisors = value_divisors(f, args.rho, 0.0)
    residual = jensen_residual(f, divisors, args.rho, quad)
    ok = abs(residual) <= 10 * quad.target_abs_err
    doc = {"command": "jensen", "fn": args.fn, "rho": args.rho, "residual": residual, "pass": ok,
           "divisors": divisors.to_list()}
    return doc, ok


def _print_failure(report: lab.LemmaReport):
    print(f"{report.lemma_id}: FAIL", file=sys.stderr)
    if "error" in report.params:
        print(f"  error: {report.params['error']}", file=sys.stderr)
    for w in report.witnesses:
        print(f"  witness {w.label}: sigma={w.sigma!r} t={w.t!r} value={w.value!r}", file=sys.stderr)


def parse_and_dispatch(argv=None) -> int:
    """Run one command; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except _UsageError as exc:
        print(f"nevanlinna-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nevanlinna-lab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")

    if not args.out_dir.is_dir():
        print(f"nevanlinna-lab: output directory {args.out_dir} does not exist", file=sys.stderr)
        return EXIT_IO
    try:
        if args.command in ("census", "characteristic", "jensen"):
            doc, ok = _run_function(args)
            timestamp = utc_timestamp()
            doc["timestamp"] = timestamp
            text = dumps(doc) + "\n"
            path = atomic_write(args.out_dir / f"{args.command}-{timestamp}.json", text)
            sys.stdout.write(text)
            print(path, file=sys.stderr)
            return EXIT_OK if ok else EXIT_FAIL
        report = _run_lemma(args)
        paths = emit_report(report, args.out_dir, args.format)
    except (_UsageError, DomainError) as exc:
        # bad parameter values (grid, delta, function id, preconditions) are usage errors
        print(f"nevanlinna-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nevanlinna-lab: {exc}", file=sys.stderr)
        return EXIT_IO
    except LabError as exc:
        print(f"nevanlinna-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for path in paths:
        print(path)
    if not report.passed:
        _print_failure(report)
        return EXIT_FAIL
    print(f"{report.lemma_id}: PASS {report.constants}" if report.constants else f"{report.lemma_id}: PASS")
    return EXIT_OK


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
