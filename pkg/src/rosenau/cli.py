"""Experiment orchestration: presets, configuration, persistence, plot-data export.

Subcommands: ``dispersion``, ``evolve``, ``norm-growth``, ``bounds``,
``hardy``, ``wellposed``, ``run``.  ``run`` consumes a YAML config (or a
preset name) and writes trace CSVs plus a verdict JSON whose checks mirror
the acceptance suite for that preset.  All outputs are byte-deterministic:
fixed float formatting, sorted JSON keys, no timestamps, and thread
parallelism only across independent time samples with index-ordered
collection.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import bounds as bounds_mod
from . import growth as growth_mod
from . import hardy as hardy_mod
from . import wellposed as wellposed_mod
from .catalog import data_from_spec, gaussian_profile
from .errors import InputDomainError, RosenauError
from .evolution import GridField, evolve_grid, total_energy, total_energy_grid
from .model import (
    ModelParams,
    SincConstants,
    band_boundaries,
    dispersion_derivatives,
    epsilon0,
    eval_dispersion,
)
from .moments import MomentDecomposition, l2_norm_sq
from .norms import (
    NormTrace,
    QuadratureConfig,
    compute_norm_trace,
    geometric_times,
    norm_squared,
    write_norm_trace_csv,
)

__all__ = ["ExperimentConfig", "run_experiment", "export_plotdata", "main"]

PRESETS = (
    "theorem-1-1",
    "theorem-1-2",
    "prop-4-1",
    "hardy-failure",
    "wellposed-check",
    "energy-conservation",
    "custom",
)

_BASE_CONFIG = {
    "preset": "custom",
    "params": {"delta": 1.0, "mu": 1.0, "kappa": 1.0, "theta": 2.0, "dim": 1},
    "sinc_threshold": 0.9,
    "data": {"name": "gaussian", "a": 1.0, "amplitude": 1.0},
    "gamma_moment": 1.0,
    "t_window": {"t_min": 1e2, "t_max": 1e6, "points_per_decade": 12},
    "quadrature": {
        "rel_tol": 1e-6,
        "points_per_period": 8,
        "r_max": None,
        "mode": "exact-adaptive",
    },
    "threads": 1,
    "output_dir": "out",
}

_PRESET_OVERRIDES = {
    "theorem-1-1": {
        "params": {"dim": 1},
        "t_window": {"t_min": 1e2, "t_max": 1e6, "points_per_decade": 12},
        "quadrature": {"mode": "exact-adaptive"},
    },
    "theorem-1-2": {
        "params": {"dim": 2},
        "t_window": {"t_min": 1e2, "t_max": 1e7, "points_per_decade": 12},
        "quadrature": {"mode": "oscillation-averaged"},
    },
    "prop-4-1": {
        "params": {"dim": 3},
        "t_window": {"t_min": 1e2, "t_max": 1e7, "points_per_decade": 12},
        "quadrature": {"mode": "oscillation-averaged"},
    },
    "hardy-failure": {
        "params": {"dim": 2, "theta": 1.0},
        "t_window": {"t_min": 1e2, "t_max": 1e3, "points_per_decade": 4},
    },
    "wellposed-check": {},
    "energy-conservation": {},
    "custom": {},
}


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def default_config(preset: str) -> dict:
    if preset not in PRESETS:
        raise InputDomainError(f"unknown preset {preset!r}; choose from {PRESETS}")
    cfg = _merge(_BASE_CONFIG, _PRESET_OVERRIDES[preset])
    cfg["preset"] = preset
    return cfg


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; see default_config() for the schema."""

    preset: str
    params: ModelParams
    sinc: SincConstants
    data_spec: dict
    gamma_moment: float
    t_window: tuple[float, float, int]
    quadrature: QuadratureConfig
    threads: int
    output_dir: Path

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        cfg = _merge(default_config(raw.get("preset", "custom")), raw)
        preset = cfg["preset"]
        p = cfg["params"]
        params = ModelParams(
            delta=float(p["delta"]),
            mu=float(p["mu"]),
            kappa=float(p["kappa"]),
            theta=float(p["theta"]),
            dim=int(p["dim"]),
        )
        if preset == "hardy-failure" and (params.theta != 1.0 or params.dim != 2):
            raise InputDomainError("preset hardy-failure requires theta = 1 and dim = 2")
        if preset == "theorem-1-1" and params.dim != 1:
            raise InputDomainError("preset theorem-1-1 requires dim = 1")
        if preset == "theorem-1-2" and params.dim != 2:
            raise InputDomainError("preset theorem-1-2 requires dim = 2")
        if preset == "prop-4-1" and params.dim < 3:
            raise InputDomainError("preset prop-4-1 requires dim >= 3")
        window = cfg["t_window"]
        t_min, t_max = float(window["t_min"]), float(window["t_max"])
        if t_min <= 0 or t_max <= t_min:
            raise InputDomainError("t_window must satisfy 0 < t_min < t_max")
        q = cfg["quadrature"]
        quad = QuadratureConfig(
            rel_tol=float(q["rel_tol"]),
            points_per_period=int(q["points_per_period"]),
            r_max=None if q["r_max"] in (None, "auto") else float(q["r_max"]),
            mode=str(q["mode"]),
        )
        threads = int(cfg["threads"])
        if threads < 1:
            raise InputDomainError("threads must be >= 1")
        return cls(
            preset=preset,
            params=params,
            sinc=SincConstants(delta0=float(cfg["sinc_threshold"])),
            data_spec=dict(cfg["data"]),
            gamma_moment=float(cfg["gamma_moment"]),
            t_window=(t_min, t_max, int(window["points_per_decade"])),
            quadrature=quad,
            threads=threads,
            output_dir=Path(cfg["output_dir"]),
        )


def _build_data(config: ExperimentConfig):
    spec = dict(config.data_spec)
    name = spec.pop("name")
    return data_from_spec(name, config.params.dim, **spec)


def _check(checks: dict, name: str, passed: bool, value, threshold) -> None:
    checks[name] = {
        "passed": bool(passed),
        "value": value,
        "threshold": threshold,
    }


def _trace_and_fits(config: ExperimentConfig, out: Path, checks: dict) -> NormTrace:
    params, quad = config.params, config.quadrature
    data = _build_data(config)
    t_min, t_max, ppd = config.t_window
    times = geometric_times(t_min, t_max, ppd)
    trace = compute_norm_trace(params, data, times, quad, config.sinc, threads=config.threads)
    write_norm_trace_csv(trace, out / "norm_trace.csv")

    window = (t_min, t_max)
    power = growth_mod.fit_power(trace, window)
    logfit = growth_mod.fit_log(trace, window)
    report = None
    if t_max >= 1e3 * t_min:
        report = growth_mod.classify_growth(trace, params.dim, window)
        growth_mod.write_fit_json(report, out / "fits.json")

    if config.data_spec.get("name") == "gaussian":
        profile = gaussian_profile(
            params.dim,
            float(config.data_spec.get("a", 1.0)),
            float(config.data_spec.get("amplitude", 1.0)),
        )
        gamma = config.gamma_moment if params.dim == 2 else max(config.gamma_moment, 0.75)
        moments = MomentDecomposition.from_profile(profile, gamma)
        if params.dim in (1, 2):
            sandwich = growth_mod.sandwich_report(trace, moments, params.dim)
            growth_mod.write_sandwich_csv(sandwich, out / "ratio_vs_t.csv")
            if config.preset == "theorem-1-1":
                _check(
                    checks,
                    "sandwich_ratio_last_decade",
                    sandwich.stable,
                    sandwich.upper_const / sandwich.lower_const,
                    1.25,
                )
        u1_l2 = math.sqrt(l2_norm_sq(profile))
        envelope_ts = [t for t in np.geomspace(1e2, min(t_max, 1e6), 9) if t >= 1e2]
        spot_quad = QuadratureConfig(
            rel_tol=quad.rel_tol,
            points_per_period=quad.points_per_period,
            r_max=quad.r_max,
            mode="exact-adaptive",
        )
        sandwich_ok = True
        worst = 0.0
        for t in envelope_ts:
            spec_sq = norm_squared(params, data, float(t), spot_quad, spectral=True)
            upper = bounds_mod.upper_envelope(
                params, config.sinc, moments.l1, u1_l2, 0.0, float(t), params.dim
            )
            if params.dim in (1, 2):
                lower = bounds_mod.lower_envelope(
                    params, config.sinc, moments, 0.0, float(t), params.dim
                )
                sandwich_ok &= lower <= 2.0 * spec_sq
                worst = max(worst, lower / (2.0 * spec_sq))
            sandwich_ok &= spec_sq <= upper
            worst = max(worst, spec_sq / upper)
        _check(checks, "envelope_sandwich", sandwich_ok, worst, 1.0)

    if config.preset == "theorem-1-1":
        _check(
            checks,
            "power_exponent",
            abs(power.exponent_or_offset - 0.5) <= 0.05,
            power.exponent_or_offset,
            "0.5 +/- 0.05",
        )
        _check(checks, "power_r_squared", power.r_squared >= 0.999, power.r_squared, 0.999)
    elif config.preset == "theorem-1-2":
        _check(checks, "log_fit_r_squared", logfit.r_squared >= 0.99, logfit.r_squared, 0.99)
        _check(checks, "log_fit_slope_positive", logfit.coeff > 0, logfit.coeff, 0.0)
        _check(
            checks,
            "competing_power_exponent",
            power.exponent_or_offset <= 0.05,
            power.exponent_or_offset,
            0.05,
        )
    elif config.preset == "prop-4-1":
        data_obj = data
        profile = gaussian_profile(
            params.dim,
            float(config.data_spec.get("a", 1.0)),
            float(config.data_spec.get("amplitude", 1.0)),
        )
        moments = MomentDecomposition.from_profile(profile, config.gamma_moment)
        u1_l2 = math.sqrt(l2_norm_sq(profile))
        ceiling = bounds_mod.upper_envelope(
            params, config.sinc, moments.l1, u1_l2, 0.0, float(trace.times[-1]), params.dim
        ) / (2.0 * math.pi) ** params.dim
        _check(
            checks,
            "trace_below_envelope",
            bool(np.all(trace.norms_sq <= ceiling)),
            float(np.max(trace.norms_sq)),
            ceiling,
        )
        late = trace.times >= 1e5
        early = trace.times <= 1e5
        if np.any(late) and np.any(early):
            ratio = float(np.max(trace.norms_sq[late]) / np.max(trace.norms_sq[early]))
            _check(checks, "late_to_early_max_ratio", ratio <= 1.05, ratio, 1.05)
        if report is not None:
            _check(
                checks,
                "verdict_bounded",
                report.verdict == "bounded",
                report.verdict,
                "bounded",
            )
    return trace


def _run_energy_conservation(config: ExperimentConfig, out: Path, checks: dict) -> None:
    params, quad = config.params, config.quadrature
    data = _build_data(config)
    reports = {t: total_energy(params, data, t) for t in (0.0, 1.0, 1e3, 1e6)}
    base = reports[0.0].total
    drift = max(abs(r.total - base) / base for t, r in reports.items() if t > 0)
    _check(checks, "radial_energy_drift", drift <= 1e-10, drift, 1e-10)

    n = min(params.dim, 2)
    grid_params = ModelParams(params.delta, params.mu, params.kappa, params.theta, n)
    size = 4096 if n == 1 else 256
    box = 200.0 if n == 1 else 60.0
    zero = GridField.from_function(lambda *xs: np.zeros_like(xs[0]), n, box, size)
    bump = GridField.from_function(
        lambda *xs: np.exp(-sum(x**2 for x in xs)), n, box, size
    )
    base_report = total_energy_grid(grid_params, zero, bump)
    grid_drift = 0.0
    for t in (1.0, 5.0, 10.0):
        u_t, v_t = evolve_grid(grid_params, zero, bump, t, with_velocity=True)
        rep = total_energy_grid(grid_params, u_t, v_t)
        grid_drift = max(grid_drift, abs(rep.total - base_report.total) / base_report.total)
    _check(checks, "grid_energy_drift", grid_drift <= 1e-8, grid_drift, 1e-8)

    rows = [(t, reports[t].total) for t in sorted(reports)]
    with open(out / "energy.csv", "w", newline="") as fh:
        fh.write("t,total_energy\r\n")
        for t, e in rows:
            fh.write(f"{t:.17g},{e:.17g}\r\n")


def _run_hardy(config: ExperimentConfig, out: Path, checks: dict) -> None:
    params = config.params
    grid = np.exp(np.array([3.0, 5.0, 8.0, 12.0, 16.0]))
    scan = hardy_mod.blowup_scan(hardy_mod.WeightFunction("a1_weight", 2), grid, 2)
    hardy_mod.write_quotient_csv(scan.trace, out / "quotient_vs_logR.csv")
    _check(checks, "a1_weight_unbounded", scan.verdict == "unbounded", scan.verdict, "unbounded")

    flat = hardy_mod.blowup_scan(hardy_mod.WeightFunction("plain_abs", 3), grid, 3)
    spread = float(np.max(flat.trace.quotients) / np.min(flat.trace.quotients) - 1.0)
    _check(checks, "plain_abs_3d_constant", spread <= 1e-6, spread, 1e-6)

    rellich = hardy_mod.rellich_quotient(hardy_mod.gaussian_bump(), 5)
    _check(checks, "rellich_gaussian_5d", rellich <= (4.0 / 5.0) ** 2 * 1.01, rellich, 0.6464)

    data = _build_data(config)
    identity = hardy_mod.energy_identity_check(params, data, 1e3, config.quadrature)
    _check(checks, "energy_identity_residual", identity.residual <= 1e-8, identity.residual, 1e-8)


def _run_wellposed(config: ExperimentConfig, out: Path, checks: dict) -> None:
    params = config.params
    scan = wellposed_mod.h_ratio_scan(params)
    wellposed_mod.write_multiplier_csv(scan, out / "h_ratio.csv")
    _check(checks, "h_ratio_infimum_positive", scan.m_lower > 0, scan.m_lower, 0.0)
    limit = wellposed_mod.high_frequency_limit(params)
    _check(
        checks,
        "h_ratio_endpoints",
        abs(scan.limits[0] - 1.0) <= 0.01 and abs(scan.limits[1] - limit) <= 0.01 * limit,
        list(scan.limits),
        [1.0, limit],
    )

    rng = np.random.default_rng(12345)
    coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    worst = 0.0
    for k in range(2):
        u_c, v_c = coeffs[2 * k], coeffs[2 * k + 1]
        u_hat = lambda r, c=u_c: c * np.exp(-np.asarray(r, dtype=float) ** 2)
        v_hat = lambda r, c=v_c: c * np.exp(-0.5 * np.asarray(r, dtype=float) ** 2)
        res = wellposed_mod.dissipativity_residual(params, u_hat, v_hat, params.dim)
        scale_hat = lambda r: np.exp(-np.asarray(r, dtype=float) ** 2)
        lhs, _, _ = wellposed_mod.sobolev_equivalence_check(params, scale_hat, params.dim)
        worst = max(worst, abs(res) / max(lhs, 1e-300))
    _check(checks, "dissipativity_residual", worst <= 1e-10, worst, 1e-10)

    gauss_hat = lambda r: np.exp(-np.asarray(r, dtype=float) ** 2)
    lhs, rhs_low, rhs_high = wellposed_mod.sobolev_equivalence_check(
        params, gauss_hat, params.dim
    )
    _check(
        checks,
        "sobolev_equivalence_order",
        rhs_low <= lhs <= rhs_high,
        [rhs_low, lhs, rhs_high],
        "rhs_low <= lhs <= rhs_high",
    )


@dataclass(frozen=True)
class ExperimentResult:
    checks: dict
    exit_code: int
    output_dir: Path


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one preset, write its artifacts, and return the verdicts."""
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    checks: dict = {}

    if config.preset in ("theorem-1-1", "theorem-1-2", "prop-4-1", "custom"):
        _trace_and_fits(config, out, checks)
    elif config.preset == "energy-conservation":
        _run_energy_conservation(config, out, checks)
    elif config.preset == "hardy-failure":
        _run_hardy(config, out, checks)
    elif config.preset == "wellposed-check":
        _run_wellposed(config, out, checks)

    all_passed = all(entry["passed"] for entry in checks.values()) if checks else True
    verdict = {
        "preset": config.preset,
        "checks": checks,
        "all_passed": all_passed,
    }
    with open(out / "verdict.json", "w") as fh:
        json.dump(verdict, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExperimentResult(checks=checks, exit_code=0 if all_passed else 1, output_dir=out)


# ---------------------------------------------------------------------------
# plot-data export

_CURVES = {
    "norm_vs_t": "six-column norm trace CSV",
    "norm_over_sqrt_t": "||u||/sqrt(t) against t",
    "norm_sq_vs_log_t": "||u||^2 against log t",
    "ratio_vs_t": "sandwich ratio against t",
    "quotient_vs_logR": "Rayleigh quotient against log R",
    "h_ratio": "multiplier equivalence ratio against r",
}


def export_plotdata(obj, curve: str, out_dir) -> Path:
    """Write one named curve of a result object as a two-column (or trace) CSV."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{curve}.csv"

    def two_column(header, xs, ys):
        with open(path, "w", newline="") as fh:
            fh.write(f"{header[0]},{header[1]}\r\n")
            for x, y in zip(xs, ys):
                fh.write(f"{x:.17g},{y:.17g}\r\n")

    if isinstance(obj, NormTrace):
        if curve == "norm_vs_t":
            write_norm_trace_csv(obj, path)
        elif curve == "norm_over_sqrt_t":
            two_column(("t", "norm_over_sqrt_t"), obj.times, np.sqrt(obj.norms_sq / obj.times))
        elif curve == "norm_sq_vs_log_t":
            two_column(("log_t", "norm_sq"), np.log(obj.times), obj.norms_sq)
        else:
            raise InputDomainError(
                f"unknown curve {curve!r} for NormTrace; available: {sorted(_CURVES)}"
            )
        return path
    if isinstance(obj, growth_mod.SandwichReport) and curve == "ratio_vs_t":
        growth_mod.write_sandwich_csv(obj, path)
        return path
    if isinstance(obj, hardy_mod.QuotientTrace) and curve == "quotient_vs_logR":
        hardy_mod.write_quotient_csv(obj, path)
        return path
    if isinstance(obj, wellposed_mod.MultiplierScan) and curve == "h_ratio":
        wellposed_mod.write_multiplier_csv(obj, path)
        return path
    raise InputDomainError(
        f"no curve {curve!r} for {type(obj).__name__}; available: {sorted(_CURVES)}"
    )


# ---------------------------------------------------------------------------
# argument parsing


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=1.0)
    parser.add_argument("--mu", type=float, default=1.0)
    parser.add_argument("--kappa", type=float, default=1.0)
    parser.add_argument("--theta", type=float, default=2.0)
    parser.add_argument("--dim", type=int, default=1)


def _params_from(args) -> ModelParams:
    return ModelParams(args.delta, args.mu, args.kappa, args.theta, args.dim)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rosenau",
        description="Spectral growth analysis for the generalized Rosenau equation.",
    )
    parser.add_argument(
        "--print-default-config",
        metavar="PRESET",
        choices=PRESETS,
        help="print the default YAML config for a preset and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p_disp = sub.add_parser("dispersion", help="evaluate f, f', f'' at radii")
    _add_param_flags(p_disp)
    p_disp.add_argument("--r", type=float, nargs="+", required=True)

    p_evolve = sub.add_parser("evolve", help="evolve a grid-field file")
    _add_param_flags(p_evolve)
    p_evolve.add_argument("--initial-position", type=Path, required=True)
    p_evolve.add_argument("--initial-velocity", type=Path, required=True)
    p_evolve.add_argument("--t", type=float, required=True)
    p_evolve.add_argument("--out", type=Path, required=True)

    p_norm = sub.add_parser("norm-growth", help="norm trace for Gaussian data")
    _add_param_flags(p_norm)
    p_norm.add_argument("--t-min", type=float, default=1e2)
    p_norm.add_argument("--t-max", type=float, default=1e4)
    p_norm.add_argument("--points-per-decade", type=int, default=8)
    p_norm.add_argument("--mode", default="exact-adaptive")
    p_norm.add_argument("--out", type=Path, default=Path("out"))
    p_norm.add_argument("--threads", type=int, default=1)

    p_bounds = sub.add_parser("bounds", help="envelope components at one time")
    _add_param_flags(p_bounds)
    p_bounds.add_argument("--t", type=float, required=True)
    p_bounds.add_argument("--gamma", type=float, default=1.0)
    p_bounds.add_argument("--out", type=Path, default=Path("out"))

    p_hardy = sub.add_parser("hardy", help="Hardy-weight blow-up scan")
    p_hardy.add_argument("--weight", default="a1_weight")
    p_hardy.add_argument("--dim", type=int, default=2)
    p_hardy.add_argument("--out", type=Path, default=Path("out"))

    p_well = sub.add_parser("wellposed", help="multiplier equivalence scan")
    _add_param_flags(p_well)
    p_well.add_argument("--out", type=Path, default=Path("out"))

    p_run = sub.add_parser("run", help="run a preset or config file")
    p_run.add_argument("config", nargs="?", type=Path, help="YAML config file")
    p_run.add_argument("--preset", choices=PRESETS)
    p_run.add_argument("--out", type=Path)
    p_run.add_argument("--threads", type=int)

    args = parser.parse_args(argv)

    if args.print_default_config:
        sys.stdout.write(yaml.safe_dump(default_config(args.print_default_config), sort_keys=True))
        return 0
    if args.command is None:
        parser.print_help()
        return 2

    try:
        return _dispatch(args)
    except RosenauError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "dispersion":
        params = _params_from(args)
        rows = []
        for r in args.r:
            f = eval_dispersion(params, r)
            if r > 0:
                fp, fpp = dispersion_derivatives(params, r)
            else:
                fp, fpp = math.sqrt(params.kappa), 0.0
            rows.append({"r": r, "f": f, "f_prime": fp, "f_second": fpp})
        print(json.dumps({"epsilon0": epsilon0(params), "values": rows}, indent=2, sort_keys=True))
        return 0

    if args.command == "evolve":
        params = _params_from(args)
        field0 = GridField.load(args.initial_position)
        field1 = GridField.load(args.initial_velocity)
        evolved = evolve_grid(params, field0, field1, args.t)
        evolved.save(args.out)
        print(json.dumps({"t": args.t, "l2_norm": evolved.l2_norm()}, sort_keys=True))
        return 0

    if args.command == "norm-growth":
        raw = {
            "preset": "custom",
            "params": {
                "delta": args.delta,
                "mu": args.mu,
                "kappa": args.kappa,
                "theta": args.theta,
                "dim": args.dim,
            },
            "t_window": {
                "t_min": args.t_min,
                "t_max": args.t_max,
                "points_per_decade": args.points_per_decade,
            },
            "quadrature": {"mode": args.mode},
            "threads": args.threads,
            "output_dir": str(args.out),
        }
        return run_experiment(ExperimentConfig.from_dict(raw)).exit_code

    if args.command == "bounds":
        params = _params_from(args)
        sinc = SincConstants()
        profile = gaussian_profile(params.dim)
        moments = MomentDecomposition.from_profile(profile, args.gamma)
        from .moments import l2_norm_sq as _l2

        report = bounds_mod.envelope_report(
            params, sinc, moments, 0.0, math.sqrt(_l2(profile)), 0.0, args.t
        )
        args.out.mkdir(parents=True, exist_ok=True)
        bounds_mod.write_envelope_json(report, args.out / "envelope.json")
        print((args.out / "envelope.json").read_text(), end="")
        return 0

    if args.command == "hardy":
        grid = np.exp(np.array([3.0, 5.0, 8.0, 12.0, 16.0]))
        scan = hardy_mod.blowup_scan(
            hardy_mod.WeightFunction(args.weight, args.dim), grid, args.dim
        )
        args.out.mkdir(parents=True, exist_ok=True)
        hardy_mod.write_quotient_csv(scan.trace, args.out / "quotient_vs_logR.csv")
        print(
            json.dumps(
                {
                    "weight": args.weight,
                    "dim": args.dim,
                    "verdict": scan.verdict,
                    "slope": scan.slope,
                    "r_squared": scan.r_squared,
                    "mechanism": scan.mechanism,
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 0

    if args.command == "wellposed":
        params = _params_from(args)
        scan = wellposed_mod.h_ratio_scan(params)
        args.out.mkdir(parents=True, exist_ok=True)
        wellposed_mod.write_multiplier_csv(scan, args.out / "h_ratio.csv")
        print(
            json.dumps(
                {
                    "m_lower": scan.m_lower,
                    "m_upper": scan.m_upper,
                    "limits": list(scan.limits),
                    "high_frequency_limit": wellposed_mod.high_frequency_limit(params),
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 0

    if args.command == "run":
        if args.config is not None:
            raw = yaml.safe_load(args.config.read_text()) or {}
        elif args.preset is not None:
            raw = {"preset": args.preset}
        else:
            raise InputDomainError("run needs a config file or --preset")
        if args.preset is not None:
            raw["preset"] = args.preset
        if args.out is not None:
            raw["output_dir"] = str(args.out)
        if args.threads is not None:
            raw["threads"] = args.threads
        result = run_experiment(ExperimentConfig.from_dict(raw))
        print(json.dumps({"exit_code": result.exit_code, "output_dir": str(result.output_dir)}, sort_keys=True))
        return result.exit_code

    raise InputDomainError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
