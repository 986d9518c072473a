"""End-to-end verification runs: orchestration, reports, and manifests.

A run is deterministic given its configuration, so the emitted manifest
(which embeds the resolved configuration) is sufficient to reproduce
every machine-readable output byte for byte.  Timings live only in the
manifest and are excluded from that guarantee.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import OmegaSpec, RunConfig, load_run_config
from .dimension import (
    BoundParams,
    SeparationWitness,
    box_count,
    embed_threshold,
    extract_separated_subset,
    theorem_bound,
    upper_box_dim_estimate,
)
from .errors import (
    AmbiguousMembership,
    ConfigError,
    DepthExceeded,
    PrecisionExhausted,
    SeparationFailed,
    WindowEmpty,
    WordTooShort,
)
from .exact import format_rational, log_ratio_bounds
from .orbit import balance_classify, gen_omega, orbit_points, write_orbit_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECISION = 3
EXIT_SEPARATION = 4
EXIT_INTERNAL = 5

OUTPUT_FILES = ("report.json", "witnesses.json", "orbit.csv", "boxcounts.csv")

_AMBIGUITY_RETRIES = 6


@dataclass
class RunOutcome:
    exit_code: int
    report: dict
    manifest: dict
    out_dir: Path


def config_hash(config: RunConfig) -> str:
    canonical = json.dumps(config.to_json_dict(), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def atomic_write(path: Path, content: str) -> None:
    tmp = path.with_name(f"{path.name}.tmp-{os.getpid()}")
    tmp.write_text(content)
    os.replace(tmp, path)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def build_word(spec: OmegaSpec, seed_override: int | None = None):
    seed = spec.seed if seed_override is None else seed_override
    return gen_omega(spec.strategy, spec.n, seed,
                     pattern=spec.pattern, p=spec.p)


def _approx(value: Fraction) -> float:
    return float(value)


def _independence_note(config: RunConfig) -> str:
    if (config.alpha_constructed and config.beta_constructed
            and config.tau1 != config.tau2):
        return ("alpha and beta are constructed with distinct exact orders, "
                "so rational independence is automatic")
    return ("rational independence of alpha and beta is an unchecked "
            "precondition for user-supplied numbers")


def run_verify_bound(config: RunConfig, out_dir: str | Path,
                     seed_override: int | None = None) -> RunOutcome:
    """Construct both numbers, walk the witness indices, certify
    separation, count boxes, and write the full output set."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    alpha = config.build_alpha()
    beta = config.build_beta()
    timings["construct"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    omega = build_word(config.omega, seed_override)
    burn_in = min(len(omega) - 1, len(omega) // 10)
    balance = balance_classify(omega, burn_in)
    if config.C is not None:
        comparability = config.C
    elif balance.C_estimate is not None:
        comparability = Fraction(-((-balance.C_estimate.numerator)
                                   // balance.C_estimate.denominator) + 1)
    else:
        comparability = Fraction(2)
    timings["omega"] = time.perf_counter() - t0

    bound_params = BoundParams(config.tau1, config.tau2)
    bound = theorem_bound(bound_params)

    t0 = time.perf_counter()
    witness_records: list[dict] = []
    witnesses: list[SeparationWitness] = []
    statuses: list[str] = []
    for l in range(config.l_range[0], config.l_range[1] + 1):
        try:
            w = extract_separated_subset(
                alpha, beta, omega, config.tau1, config.tau2,
                config.epsilon, l, comparability)
        except WindowEmpty as exc:
            statuses.append("window_empty")
            witness_records.append({"l": str(l), "status": "window_empty",
                                    "detail": str(exc)})
        except WordTooShort as exc:
            statuses.append("word_too_short")
            witness_records.append({"l": str(l), "status": "word_too_short",
                                    "detail": str(exc)})
        except (PrecisionExhausted, DepthExceeded) as exc:
            statuses.append("precision_exhausted")
            witness_records.append({"l": str(l), "status": "precision_exhausted",
                                    "detail": str(exc)})
        except SeparationFailed as exc:
            statuses.append("separation_failed")
            witness_records.append({
                "l": str(l), "status": "separation_failed", "detail": str(exc),
                "violating_pair": [[str(v) for v in pt] for pt in exc.pair]})
        else:
            statuses.append("verified")
            record = w.to_json_dict()
            record["status"] = "verified"
            witness_records.append(record)
            witnesses.append(w)
    timings["separation"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    boxdim_rows, dim_summary, points = _count_boxes(alpha, beta, omega, config)
    timings["boxcount"] = time.perf_counter() - t0

    max_datapoint = max((w.dim_datapoint for w in witnesses), default=None)
    report = {
        "tool_version": __version__,
        "theorem_bound": format_rational(bound),
        "theorem_bound_approx": _approx(bound),
        "embed_threshold": format_rational(embed_threshold(bound_params)),
        "tau1": format_rational(config.tau1),
        "tau2": "inf" if config.tau2 == float("inf") else format_rational(config.tau2),
        "epsilon": format_rational(config.epsilon),
        "comparability_C": format_rational(comparability),
        "balance": {
            "C_estimate": (None if balance.C_estimate is None
                           else format_rational(balance.C_estimate)),
            "longest_run": balance.longest_run,
            "classification": balance.classification,
            "burn_in": burn_in,
        },
        "witnesses": witness_records,
        "verified_count": statuses.count("verified"),
        "attempted": len(statuses),
        "max_dim_datapoint": (None if max_datapoint is None
                              else format_rational(max_datapoint)),
        "max_dim_datapoint_approx": (None if max_datapoint is None
                                     else _approx(max_datapoint)),
        "boxdim": dim_summary,
        "assumptions": [_independence_note(config)],
    }

    exit_code = EXIT_OK
    if "word_too_short" in statuses:
        exit_code = EXIT_CONFIG
    elif "precision_exhausted" in statuses:
        exit_code = EXIT_PRECISION
    elif "verified" not in statuses:
        exit_code = EXIT_SEPARATION
    report["exit_code"] = exit_code

    manifest = {
        "tool": "ablab",
        "version": __version__,
        "config": config.to_json_dict(),
        "config_hash": config_hash(config),
        "timings_s": {k: round(v, 6) for k, v in timings.items()},
        "outcome": {
            "exit_code": exit_code,
            "verified_count": statuses.count("verified"),
            "statuses": statuses,
        },
    }

    atomic_write(out / "report.json", _dump_json(report))
    atomic_write(out / "witnesses.json", _dump_json(witness_records))
    buf = io.StringIO()
    write_orbit_csv(points, buf)
    atomic_write(out / "orbit.csv", buf.getvalue())
    atomic_write(out / "boxcounts.csv", _boxcount_csv(boxdim_rows))
    atomic_write(out / "manifest.json", _dump_json(manifest))
    return RunOutcome(exit_code=exit_code, report=report, manifest=manifest,
                      out_dir=out)


def _count_boxes(alpha, beta, omega, config: RunConfig):
    """Orbit points plus an occupied-arc table over the configured scales.

    The same point list is exported and counted, so re-ingesting the
    orbit CSV reproduces these counts exactly.  On an ambiguous arc
    membership the whole orbit is re-evaluated at finer precision.
    """
    precision = config.precision
    if config.scales:
        precision = min(precision, min(config.scales) / 10)
    for _ in range(_AMBIGUITY_RETRIES):
        points = orbit_points(alpha, beta, omega, precision)
        values = [pt.value for pt in points]
        try:
            samples = [box_count(values, r) for r in config.scales]
        except AmbiguousMembership:
            precision /= 16
            continue
        break
    else:
        raise PrecisionExhausted(
            "arc membership still ambiguous after repeated refinement")
    rows = []
    for s in samples:
        ratio_lo, _ = log_ratio_bounds(s.count, 1 / s.r)
        rows.append((s.r, s.count, ratio_lo))
    summary = None
    if len({s.r for s in samples}) >= 2:
        est = upper_box_dim_estimate(samples)
        summary = {"estimate": format_rational(est.value),
                   "estimate_approx": _approx(est.value)}
    return rows, summary, points


def _boxcount_csv(rows) -> str:
    out = ["r,count,ratio,ratio_approx"]
    for r, count, ratio in rows:
        out.append(f"{format_rational(r)},{count},{format_rational(ratio)},"
                   f"{float(ratio)!r}")
    return "\n".join(out) + "\n"


def replay_manifest(manifest_path: str | Path, out_dir: str | Path) -> RunOutcome:
    """Re-run the configuration embedded in a manifest."""
    try:
        data = json.loads(Path(manifest_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest: {exc}") from None
    if "config" not in data:
        raise ConfigError("manifest has no embedded config")
    config = load_run_config(data["config"])
    return run_verify_bound(config, out_dir)


def run_witness(config: RunConfig, l: int) -> dict:
    """Extract and serialize a single separation witness."""
    alpha = config.build_alpha()
    beta = config.build_beta()
    omega = build_word(config.omega)
    if config.C is not None:
        comparability = config.C
    else:
        burn_in = min(len(omega) - 1, len(omega) // 10)
        balance = balance_classify(omega, burn_in)
        if balance.C_estimate is not None:
            comparability = Fraction(-((-balance.C_estimate.numerator)
                                       // balance.C_estimate.denominator) + 1)
        else:
            comparability = Fraction(2)
    witness = extract_separated_subset(
        alpha, beta, omega, config.tau1, config.tau2, config.epsilon, l,
        comparability)
    return witness.to_json_dict()
