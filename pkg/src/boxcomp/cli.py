"""Command-line interface.

Subcommands: analyze (measure a box file), decompose (minimum-cost 1-bit
decomposition), simulate (one angle), sweep (angle grid to CSV), verify
(randomized property suites).  Exit codes: 0 ok, 1 invariant violation or
failed verification, 2 malformed input or usage, 3 infeasible decomposition,
4 numerical failure, 5 inconsistent strategy scopes.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

from .boxcore import is_nonsignaling, load_box
from .certify import complementarity_report, run_property_suite
from .decompose import ResourceSpec, min_comm_cost
from .errors import (
    BoxFormatError,
    BoxInvariantError,
    DomainError,
    Infeasible,
    NumericalError,
    ScopeError,
    WeightError,
)
from .measures import measure_report

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4
EXIT_SCOPE = 5


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _angle_list(text):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad angle list {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="boxcomp",
        description="Measure, decompose, verify, and simulate two-input binary correlation boxes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="report all measures of a box JSON file")
    p_an.add_argument("--box", required=True, help="path to a box JSON file")
    p_an.add_argument("--tol", type=float, default=1e-9)
    p_an.add_argument("--out", help="write the report here instead of stdout")
    p_an.add_argument("--format", choices=("text", "json"), default="text")

    p_de = sub.add_parser("decompose", help="minimum-communication 1-bit decomposition")
    p_de.add_argument("--box", required=True)
    p_de.add_argument("--tol", type=float, default=1e-9)
    p_de.add_argument("--out")
    p_de.add_argument("--format", choices=("text", "json"), default="text")

    p_si = sub.add_parser("simulate", help="singlet-statistics run at one angle")
    p_si.add_argument("--resource", required=True,
                      help='compact spec, e.g. "scope=000;S1+:0.5,S1-:0.5"')
    p_si.add_argument("--angle", type=float, required=True,
                      help="angle between measurement axes, radians")
    p_si.add_argument("--trials", type=_positive_int, default=1_000_000)
    p_si.add_argument("--seed", type=int, default=0)
    p_si.add_argument("--out")
    p_si.add_argument("--format", choices=("csv", "json", "text"), default="csv")

    p_sw = sub.add_parser("sweep", help="singlet-statistics sweep over angles")
    p_sw.add_argument("--resource", required=True)
    grid = p_sw.add_mutually_exclusive_group(required=True)
    grid.add_argument("--angles", type=_angle_list,
                      help='comma-separated radians, e.g. "0,0.7853981633974483,1.5707963267948966"')
    grid.add_argument("--angle-grid", type=_positive_int,
                      help="K evenly spaced angles covering [0, pi]")
    p_sw.add_argument("--trials", type=_positive_int, default=1_000_000)
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--out")
    p_sw.add_argument("--format", choices=("csv", "json", "text"), default="csv")

    p_ve = sub.add_parser("verify", help="run the randomized property suites")
    p_ve.add_argument("--seed", type=int, default=0)
    p_ve.add_argument("--instances", type=_positive_int, default=200)
    p_ve.add_argument("--tol", type=float, default=1e-9)
    p_ve.add_argument("--out")
    p_ve.add_argument("--format", choices=("text", "json"), default="text")
    p_ve.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)

    return parser


def _emit(text, out_path):
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(payload):
    return json.dumps(payload, indent=2, sort_keys=True)


def cmd_analyze(args):
    box = load_box(args.box)
    report = measure_report(box)
    cert = complementarity_report(box, tol=args.tol)
    nonsig = is_nonsignaling(box, tol=max(args.tol, 1e-12))
    if args.format == "json":
        payload = report.to_json()
        payload["nonsignaling"] = nonsig
        payload["label"] = box.label
        payload["flags"] = dict(cert.flags)
        payload["C_min"] = cert.C_min
        payload["feasible"] = cert.feasible
        _emit(_json_dumps(payload), args.out)
    else:
        lines = [f"box          = {box.label or args.box}",
                 f"nonsignaling = {nonsig}",
                 cert.render_text()]
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_decompose(args):
    box = load_box(args.box)
    try:
        dec = min_comm_cost(box, tol=args.tol)
    except Infeasible as exc:
        if args.format == "json":
            _emit(_json_dumps({"feasible": False, "infeasible": True,
                               "detail": str(exc)}), args.out)
        else:
            _emit(f"infeasible: {exc}", args.out)
        return EXIT_INFEASIBLE
    if args.format == "json":
        _emit(_json_dumps(dec.to_json()), args.out)
    else:
        lines = [f"C = {dec.C!r}"]
        for row in dec.to_json()["weights"]:
            lines.append(f"  {row['strategy']:<12} {row['kind']:<14} w = {row['w']!r}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def _sweep_common(args, angles):
    from .simulate import sweep_angles, write_sweep_csv

    spec = ResourceSpec.parse(args.resource)
    points = sweep_angles(spec, angles, args.trials, args.seed)
    worst = max(abs(p.estimate - p.target) for p in points)
    support = "one-way-pairs" if spec.one_way_support else "includes-two-way"
    if args.format == "json":
        payload = {
            "rows": [p.to_json() for p in points],
            "N": args.trials,
            "seed": args.seed,
            "max_abs_error": worst,
            "support": support,
        }
        _emit(_json_dumps(payload), args.out)
    elif args.format == "text":
        lines = [f"{'angle_rad':>12} {'estimate':>12} {'target':>12} {'stderr':>12}"]
        for p in points:
            lines.append(f"{p.angle:>12.6f} {p.estimate:>12.6f} {p.target:>12.6f} {p.stderr:>12.2e}")
        lines.append(f"max |estimate - target| = {worst!r} (support: {support})")
        _emit("\n".join(lines), args.out)
    else:
        buf = io.StringIO()
        write_sweep_csv(points, args.trials, args.seed, buf)
        _emit(buf.getvalue(), args.out)
    sys.stderr.write(f"max |estimate - target| = {worst!r} over {len(points)} angle(s); "
                     f"support: {support}\n")
    return EXIT_OK


def cmd_simulate(args):
    return _sweep_common(args, [args.angle])


def cmd_sweep(args):
    if args.angles is not None:
        angles = args.angles
        if not angles:
            raise DomainError("empty angle list")
    else:
        k = args.angle_grid
        angles = [math.pi * i / max(k - 1, 1) for i in range(k)]
    return _sweep_common(args, angles)


def cmd_verify(args):
    strategies = None
    if args.corrupt_table:
        from .boxcore import DeterministicStrategy, scope_strategies

        table = scope_strategies()
        s0 = table[0]
        flipped = tuple(bit ^ (1 if i == 3 else 0) for i, bit in enumerate(s0.fb))
        table[0] = DeterministicStrategy(s0.fa, flipped)  # deliberate corruption
        strategies = table
    report = run_property_suite(seed=args.seed, instances=args.instances,
                                tol=args.tol, strategies=strategies)
    if args.format == "json":
        _emit(_json_dumps(report.to_json()), args.out)
    else:
        _emit(report.render_text(), args.out)
    return EXIT_OK if report.passed else EXIT_INVARIANT


_COMMANDS = {
    "analyze": cmd_analyze,
    "decompose": cmd_decompose,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (BoxFormatError, WeightError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BoxInvariantError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVARIANT
    except ScopeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SCOPE
    except Infeasible as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


def entry():
    sys.exit(main())
