"""Command-line front end.

Subcommands: construct, verify-bound, boxdim, witness, bound.
Exit codes: 0 success / verified, 2 configuration error, 3 precision or
depth exhaustion, 4 separation failure, 5 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cf import TAU_INF, convergents, default_depth_cap
from .config import load_run_config, parse_number_spec
from .dimension import BoundParams, box_count, embed_threshold, theorem_bound, upper_box_dim_estimate
from .dioph import DiophantineSpec, make_number
from .errors import (
    AblabError,
    AmbiguousMembership,
    ConfigError,
    DepthExceeded,
    InadmissibleParams,
    PrecisionExhausted,
    SeparationFailed,
    WindowEmpty,
    WordTooShort,
)
from .exact import format_rational, log_ratio_bounds, parse_rational
from .pipeline import (
    EXIT_CONFIG,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_SEPARATION,
    atomic_write,
    replay_manifest,
    run_verify_bound,
    run_witness,
)
from .orbit import ORBIT_CSV_HEADER, read_points_csv, read_points_lines


def _err(message: str) -> None:
    print(f"ablab: error: {message}", file=sys.stderr)


def _parse_tau_arg(raw: str) -> Fraction | float:
    if raw.strip().lower() in ("inf", "infinity"):
        return TAU_INF
    return parse_rational(raw)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno}): "
            f"{exc.msg}") from None


def cmd_construct(args) -> int:
    spec_json = parse_number_spec(_load_json(args.spec), args.spec)
    if "kind" in spec_json:
        raise ConfigError("construct expects a Diophantine spec {tau, seed}")
    spec = DiophantineSpec.from_json(spec_json)
    number = make_number(spec, depth_cap=args.depth_cap)
    convs = convergents(number, args.terms)

    rows = ["n,p,q,realized_exponent_approx"]
    for c in convs[1:]:
        exponent = ""
        if c.q >= 2:
            try:
                a_next = number.quotient(c.n + 1)
            except DepthExceeded:
                a_next = None
            if a_next is not None:
                lo, _ = log_ratio_bounds(a_next, c.q)
                exponent = f"{float(2 + lo)!r}"
        rows.append(f"{c.n},{c.p},{c.q},{exponent}")
    table = "\n".join(rows) + "\n"
    payload = json.dumps(number.to_json_dict(), indent=2, sort_keys=True) + "\n"

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        atomic_write(out / "cf.json", payload)
        atomic_write(out / "convergents.csv", table)
        print(f"wrote {out / 'cf.json'} and {out / 'convergents.csv'}")
    else:
        sys.stdout.write(payload)
        sys.stdout.write(table)
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    if args.replay:
        outcome = replay_manifest(args.replay, args.out or "ablab-replay")
    else:
        if not args.config:
            raise ConfigError("verify-bound needs --config or --replay")
        config = load_run_config(args.config)
        if args.depth_cap is not None:
            config = _override(config, depth_cap=args.depth_cap)
        if args.precision is not None:
            config = _override(config, precision=parse_rational(args.precision))
        out_dir = args.out or config.output_dir or "ablab-run"
        outcome = run_verify_bound(config, out_dir, seed_override=args.seed)
    report = outcome.report
    print(f"theorem bound: {report['theorem_bound']} "
          f"(~{report['theorem_bound_approx']:.6g})")
    for rec in report["witnesses"]:
        status = rec["status"]
        line = f"l={rec['l']}: {status}"
        if status == "verified":
            line += (f"  members={rec['member_count']}"
                     f"  dim_datapoint={rec['dim_datapoint']}")
        print(line)
    if report["max_dim_datapoint"] is not None:
        print(f"max dim datapoint: {report['max_dim_datapoint']} "
              f"(~{report['max_dim_datapoint_approx']:.6g})")
    print(f"outputs in {outcome.out_dir}")
    return outcome.exit_code


def _override(config, **updates):
    return dataclasses.replace(config, **updates)


def cmd_boxdim(args) -> int:
    path = Path(args.points)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.points}: {exc}") from None
    if not text.strip():
        raise ConfigError(f"{args.points} is empty")
    first = text.splitlines()[0].strip()
    if first == ",".join(ORBIT_CSV_HEADER):
        points = read_points_csv(io.StringIO(text))
    else:
        points = read_points_lines(text.splitlines())
    if not points:
        raise ConfigError(f"{args.points} contains no points")

    scales = [parse_rational(s) for s in args.scales.split(",") if s.strip()]
    if not scales:
        raise ConfigError("no scales given")
    samples = [box_count(points, r) for r in scales]
    rows = ["r,count,ratio,ratio_approx"]
    for s in samples:
        ratio_lo, _ = log_ratio_bounds(s.count, 1 / s.r)
        rows.append(f"{format_rational(s.r)},{s.count},"
                    f"{format_rational(ratio_lo)},{float(ratio_lo)!r}")
    table = "\n".join(rows) + "\n"
    if args.out:
        atomic_write(Path(args.out), table)
    else:
        sys.stdout.write(table)
    if len(set(scales)) >= 2:
        est = upper_box_dim_estimate(samples)
        print(f"estimate: {format_rational(est.value)} (~{float(est.value):.6g})",
              file=sys.stderr)
    return EXIT_OK


def cmd_witness(args) -> int:
    config = load_run_config(args.config)
    record = run_witness(config, args.l)
    payload = json.dumps(record, indent=2, sort_keys=True) + "\n"
    if args.out:
        atomic_write(Path(args.out), payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_bound(args) -> int:
    params = BoundParams(parse_rational(args.tau1), _parse_tau_arg(args.tau2))
    bound = theorem_bound(params)
    threshold = embed_threshold(params)
    print(f"theorem_bound:   {format_rational(bound)} (~{float(bound):.6g})")
    print(f"embed_threshold: {format_rational(threshold)} (~{float(threshold):.6g})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ablab",
        description="Exact-arithmetic toolkit for alpha-beta orbits on the "
                    "circle: Diophantine-type construction, orbit generation, "
                    "separated-set certification, and box-dimension bounds.")
    parser.add_argument("--version", action="version", version=f"ablab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct",
                       help="build a number of prescribed type; emit CF JSON "
                            "and a convergent table")
    p.add_argument("spec", help="Diophantine spec JSON file: {\"tau\": ..., \"seed\": [...]}")
    p.add_argument("-n", "--terms", type=int, default=8,
                   help="number of convergents to tabulate (default 8)")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify-bound",
                       help="run the full separation/box-count pipeline")
    p.add_argument("--config", default=None, help="run configuration JSON")
    p.add_argument("--replay", default=None,
                   help="manifest JSON to reproduce (overrides --config)")
    p.add_argument("--seed", type=int, default=None, help="override the word seed")
    p.add_argument("--precision", default=None,
                   help="override orbit precision (exact rational)")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser("boxdim", help="box-count a point file at given scales")
    p.add_argument("points", help="orbit CSV or one exact rational per line")
    p.add_argument("--scales", required=True,
                   help="comma-separated exact radii, e.g. 1/8,1/64")
    p.add_argument("--out", default=None, help="output CSV path")
    p.set_defaults(func=cmd_boxdim)

    p = sub.add_parser("witness", help="extract one separation witness")
    p.add_argument("--config", required=True)
    p.add_argument("--l", type=int, required=True, help="witness index (1-based)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("bound", help="print the dimension bound calculators")
    p.add_argument("--tau1", required=True)
    p.add_argument("--tau2", required=True, help="rational or 'inf'")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # exact integers can be arbitrarily wide
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        default_depth_cap()  # validate ABLAB_DEPTH_CAP early
        return args.func(args)
    except (ConfigError, InadmissibleParams, WordTooShort) as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except (PrecisionExhausted, DepthExceeded, AmbiguousMembership) as exc:
        _err(str(exc))
        return EXIT_PRECISION
    except (SeparationFailed, WindowEmpty) as exc:
        _err(str(exc))
        return EXIT_SEPARATION
    except ValueError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except AblabError as exc:
        _err(str(exc))
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
