"""Command-line front end.

Exit codes: 0 ran, 1 input error, 2 internal invariant violation or a failed
reproduction check.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from ._validation import InvalidStateError
from .cmn_detect import CmnParams, format_p, parse_p, detect, separable_max_search
from .discord import DiscordInvariantError, OptimizerConfig, discord_sweep_virzi
from .reproduce import SWEEP_PURE_COLUMNS, SATURATION_TOL, bounds_table, reproduce_gap, sweep_pure, verify_theorems
from .states import DensityMatrix

DEFAULT_SEED = 20200101
EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(Exception):
    pass


class InternalError(Exception):
    pass


def fmt(x):
    """12 significant digits, scientific."""
    return f"{x:.11e}"


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def load_state(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return DensityMatrix.from_json(text)
    except InvalidStateError as exc:
        inv = f" [{exc.invariant}]" if exc.invariant else ""
        raise InputError(f"invalid state in {path}{inv}: {exc}") from exc


def _p_list(args, default):
    try:
        return [parse_p(p) for p in args.p] if args.p else default
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def analyze_state(rho, h_list=None, p_list=None, tol=1e-9):
    verdict = detect(rho, h_list, p_list, tol)
    return verdict.to_dict()


def cmd_analyze(args):
    if not args.input:
        raise InputError("analyze requires --input")
    rho = load_state(args.input)
    h_list = args.h or None
    p_list = _p_list(args, None)
    try:
        report = analyze_state(rho, h_list, p_list, args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(json.dumps(report, indent=2, allow_nan=True) + "\n", args.output)


def cmd_sweep_pure(args):
    rows = sweep_pure(args.grid)
    _write(_csv(SWEEP_PURE_COLUMNS, [[fmt(x) for x in r] for r in rows]), args.output)


def cmd_sweep_virzi(args):
    p_list = _p_list(args, [2.0])
    h_list = args.h or [1]
    params = [CmnParams(h, p) for h in h_list for p in p_list]
    grid = np.linspace(0.0, 1.0, args.grid)
    opt = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    try:
        rows = discord_sweep_virzi(grid, grid, params, opt, n_jobs=args.jobs)
    except DiscordInvariantError as exc:
        raise InternalError(str(exc)) from exc
    out = [[fmt(q), fmt(r), h, format_p(p), fmt(v)] for q, r, h, p, v in rows]
    _write(_csv(["q", "r", "h", "p", "discord"], out), args.output)


def cmd_reproduce_gap(args):
    rep = reproduce_gap()
    lines = [
        f"q = {rep['q']}",
        f"M_(1,1) = {rep['M11']:.6f}  (reference 0.9981)",
        f"M_(2,1) = {rep['M21']:.6f}  (reference 0.3509)",
        f"bound (2+3*sqrt(2))/18 = {rep['bound']:.6f}",
        f"PPT entangled = {str(rep['ppt_entangled']).lower()}",
        f"triggered by = {', '.join(rep['triggered_by']) or 'none'}",
    ]
    lines += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in rep["checks"].items()]
    _write("\n".join(lines) + "\n", args.output)
    if not rep["passed"]:
        raise InternalError("gap-state reproduction failed")


def cmd_verify_theorems(args):
    cases = verify_theorems()
    lines = []
    failed = False
    for c in cases:
        ok = c.residual < SATURATION_TOL and c.fnf
        failed |= not ok
        lines.append(
            f"{'PASS' if ok else 'FAIL'} {c.family} {c.label}: spectrum residual {c.spectrum_residual:.3e}, "
            f"bound residual {c.bound_residual:.3e}, fnf={c.fnf}"
        )
    _write("\n".join(lines) + "\n", args.output)
    if failed:
        raise InternalError("theorem verification failed")


def cmd_bounds_table(args):
    rows = [[da, db, h, p, "n/a" if v is None else fmt(v)] for da, db, h, p, v in bounds_table(args.d_max)]
    _write(_csv(["d_a", "d_b", "h", "p", "bound"], rows), args.output)


def cmd_search_max(args):
    h = args.h[0] if args.h else 2
    p = _p_list(args, [1.0])[0]
    try:
        params = CmnParams(h, p)
        best, cand = separable_max_search(args.dims[0], args.dims[1], params, args.budget, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "dims": list(args.dims),
        "h": h,
        "p": format_p(p),
        "budget": args.budget,
        "seed": args.seed,
        "best_value": best,
        "best_state": cand.to_dict(),
    }
    _write(json.dumps(report, indent=2) + "\n", args.output)


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep-pure": cmd_sweep_pure,
    "sweep-virzi": cmd_sweep_virzi,
    "reproduce-gap": cmd_reproduce_gap,
    "verify-theorems": cmd_verify_theorems,
    "bounds-table": cmd_bounds_table,
    "search-max": cmd_search_max,
}


def _grid(value):
    n = int(value)
    if n < 2:
        raise argparse.ArgumentTypeError("grid resolution must be >= 2")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="corrminor", description="Correlation Minor Norm toolkit")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", help="state JSON file")
    parser.add_argument("--output", default="-", help="output file (default stdout)")
    parser.add_argument("--h", type=int, action="append", help="minor order (repeatable)")
    parser.add_argument("--p", action="append", help="Schatten order, number or 'inf' (repeatable)")
    parser.add_argument("--grid", type=_grid, default=21, help="grid points per axis")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--tol", type=float, default=1e-9, help="violation tolerance")
    parser.add_argument("--restarts", type=int, default=32, help="optimizer restarts for discord")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    parser.add_argument("--dims", type=int, nargs=2, default=(2, 2), metavar=("DA", "DB"))
    parser.add_argument("--budget", type=int, default=10_000, help="search-max perturbation steps")
    parser.add_argument("--d-max", type=int, default=4, dest="d_max")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalError, DiscordInvariantError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
