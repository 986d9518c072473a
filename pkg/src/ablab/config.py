"""Run-configuration loading with field-level diagnostics.

Machine-readable configs keep every rational as a "num/den" (or
integer) string; floats are rejected so no precision is invented on the
way in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cf import CFNumber, TAU_INF, cf_from_json
from .dimension import BoundParams
from .dioph import DiophantineSpec, make_number
from .errors import ConfigError
from .exact import format_rational, parse_rational


@dataclass(frozen=True)
class OmegaSpec:
    """How to generate the choice word for a run."""

    strategy: str
    n: int
    seed: int | None = None
    pattern: str | None = None
    p: Fraction | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"strategy": self.strategy, "N": self.n}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.pattern is not None:
            out["pattern"] = self.pattern
        if self.p is not None:
            out["p"] = format_rational(self.p)
        return out


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of a verification run."""

    alpha_json: dict
    beta_json: dict
    omega: OmegaSpec
    tau1: Fraction
    tau2: Fraction | float
    epsilon: Fraction
    C: Fraction | None
    l_range: tuple[int, int]
    scales: tuple[Fraction, ...]
    precision: Fraction
    output_dir: str | None = None
    depth_cap: int | None = None
    alpha_constructed: bool = field(default=False, compare=False)
    beta_constructed: bool = field(default=False, compare=False)

    def build_alpha(self) -> CFNumber:
        return _build_number(self.alpha_json, self.depth_cap)

    def build_beta(self) -> CFNumber:
        return _build_number(self.beta_json, self.depth_cap)

    def to_json_dict(self) -> dict:
        out = {
            "alpha": self.alpha_json,
            "beta": self.beta_json,
            "omega": self.omega.to_json_dict(),
            "tau1": format_rational(self.tau1),
            "tau2": "inf" if self.tau2 == TAU_INF else format_rational(self.tau2),
            "epsilon": format_rational(self.epsilon),
            "l_range": list(self.l_range),
            "scales": [format_rational(s) for s in self.scales],
            "precision": format_rational(self.precision),
        }
        if self.C is not None:
            out["C"] = format_rational(self.C)
        if self.output_dir is not None:
            out["output_dir"] = self.output_dir
        if self.depth_cap is not None:
            out["depth_cap"] = self.depth_cap
        return out


def _build_number(spec_json: dict, depth_cap: int | None) -> CFNumber:
    if "kind" in spec_json:
        return cf_from_json(spec_json, depth_cap=depth_cap)
    return make_number(DiophantineSpec.from_json(spec_json), depth_cap=depth_cap)


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _req(data: dict, key: str, path: str):
    if key not in data:
        _fail(f"{path}.{key}", "missing required field")
    return data[key]


def _rational_field(data: dict, key: str, path: str) -> Fraction:
    raw = _req(data, key, path)
    if isinstance(raw, float):
        _fail(f"{path}.{key}", "floats are not accepted; use a \"num/den\" string")
    try:
        return parse_rational(raw)
    except (ValueError, ZeroDivisionError) as exc:
        _fail(f"{path}.{key}", f"not a rational: {exc}")


def parse_number_spec(data, path: str) -> dict:
    """Validate a number spec: Diophantine {tau, seed} or a CFNumber form."""
    if not isinstance(data, dict):
        _fail(path, "expected an object")
    try:
        if "kind" in data:
            cf_from_json(data)  # validates
        else:
            spec = DiophantineSpec.from_json(
                {"tau": _req(data, "tau", path), "seed": _req(data, "seed", path)})
            if spec.tau != TAU_INF and Fraction(spec.tau) < 2:
                _fail(f"{path}.tau", "tau >= 2 required")
    except ConfigError:
        raise
    except (KeyError, TypeError) as exc:
        _fail(path, f"malformed number spec: missing {exc}")
    except (ValueError, ZeroDivisionError) as exc:
        _fail(path, str(exc))
    return data


def _parse_omega(data, path: str) -> OmegaSpec:
    if not isinstance(data, dict):
        _fail(path, "expected an object")
    strategy = _req(data, "strategy", path)
    n = _req(data, "N", path)
    if not isinstance(n, int) or n < 1:
        _fail(f"{path}.N", "word length must be a positive integer")
    seed = data.get("seed")
    if seed is not None and not isinstance(seed, int):
        _fail(f"{path}.seed", "seed must be an integer")
    pattern = data.get("pattern")
    p = None
    if "p" in data:
        p = _rational_field(data, "p", path)
        if not 0 <= p <= 1:
            _fail(f"{path}.p", "p must lie in [0, 1]")
    if strategy not in ("alternating", "periodic", "bernoulli", "literal"):
        _fail(f"{path}.strategy", f"unknown strategy {strategy!r}")
    if strategy == "periodic" and not pattern:
        _fail(f"{path}.pattern", "periodic strategy needs a pattern")
    return OmegaSpec(strategy=strategy, n=n, seed=seed, pattern=pattern, p=p)


def _parse_tau2(data: dict, path: str) -> Fraction | float:
    raw = _req(data, "tau2", path)
    if isinstance(raw, str) and raw.strip().lower() in ("inf", "infinity"):
        return TAU_INF
    return _rational_field(data, "tau2", path)


def load_run_config(source: str | Path | dict) -> RunConfig:
    """Parse and validate a run configuration (path or already-loaded dict)."""
    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config is not valid JSON (line {exc.lineno}, column {exc.colno}): "
                f"{exc.msg}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")

    alpha_json = parse_number_spec(_req(data, "alpha", "config"), "config.alpha")
    beta_json = parse_number_spec(_req(data, "beta", "config"), "config.beta")
    omega = _parse_omega(_req(data, "omega", "config"), "config.omega")

    tau1 = _rational_field(data, "tau1", "config")
    if tau1 < 2:
        _fail("config.tau1", "tau1 >= 2 required")
    tau2 = _parse_tau2(data, "config")
    if tau2 != TAU_INF and tau2 < 2:
        _fail("config.tau2", "tau2 >= 2 required")
    if not BoundParams(tau1, tau2).admissible:
        _fail("config", f"inadmissible types: need 2*tau1 < tau2 + 2 "
                        f"(tau1={tau1}, tau2={tau2})")

    epsilon = _rational_field(data, "epsilon", "config")
    if epsilon <= 0:
        _fail("config.epsilon", "epsilon must be positive")

    C = None
    if "C" in data:
        C = _rational_field(data, "C", "config")
        if C < 1:
            _fail("config.C", "C must be >= 1")

    l_raw = _req(data, "l_range", "config")
    if (not isinstance(l_raw, (list, tuple)) or len(l_raw) != 2
            or not all(isinstance(v, int) for v in l_raw) or l_raw[0] < 1
            or l_raw[1] < l_raw[0]):
        _fail("config.l_range", "expected [lo, hi] with 1 <= lo <= hi")

    scales_raw = data.get("scales", [])
    scales = []
    for i, s in enumerate(scales_raw):
        if isinstance(s, float):
            _fail(f"config.scales[{i}]", "floats are not accepted")
        try:
            r = parse_rational(s)
        except ValueError as exc:
            _fail(f"config.scales[{i}]", str(exc))
        if not 0 < r < 1:
            _fail(f"config.scales[{i}]", "scale must lie in (0, 1)")
        scales.append(r)

    precision = _rational_field(data, "precision", "config")
    if not 0 < precision < Fraction(1, 2):
        _fail("config.precision", "precision must lie in (0, 1/2)")

    depth_cap = data.get("depth_cap")
    if depth_cap is not None and (not isinstance(depth_cap, int) or depth_cap < 1):
        _fail("config.depth_cap", "depth_cap must be a positive integer")

    output_dir = data.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        _fail("config.output_dir", "output_dir must be a string path")

    return RunConfig(
        alpha_json=alpha_json, beta_json=beta_json, omega=omega,
        tau1=tau1, tau2=tau2, epsilon=epsilon, C=C,
        l_range=(l_raw[0], l_raw[1]), scales=tuple(scales),
        precision=precision, output_dir=output_dir, depth_cap=depth_cap,
        alpha_constructed="kind" not in alpha_json,
        beta_constructed="kind" not in beta_json,
    )
