"""High-accuracy evaluation of ||u(t)||^2 as a radial Fourier integral.

The squared norm of the evolved state is

    ||u(t)||^2 = (2 pi)^(-n) omega_n integral_0^inf
                 |cos(t f) w0(r) + t sinc(t f) w1(r)|^2 r^(n-1) dr,

an integrand that oscillates in r with local period pi/(t f'(r)).  Two
evaluation modes are provided:

* exact-adaptive: a phase-resolved panel partition (>= points_per_period
  Gauss nodes per period) refined adaptively to the requested tolerance;
* oscillation-averaged: for t >= 1e3, sin^2 and cos^2 are replaced by 1/2 on
  regions of genuine oscillation, the discarded cos(2 t f) / sin(2 t f)
  contributions are bounded by one integration by parts (a boundary term
  plus one derivative term), and the result is reported as value +/-
  remainder.  Stationary points of f and the slow region t f <= Phi_0 are
  integrated exactly, so the remainder bound never meets a vanishing f'.

Truncation at r_max is certified against the declared tail of the data; the
tail bound is kept below rel_tol/10 of the running total.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InputDomainError,
    InvariantViolation,
    PreconditionError,
    UncertifiedTailError,
)
from .evolution import RadialInitialData, sinc, total_energy, energy_quadrature_nodes
from .model import (
    DEFAULT_SINC,
    ModelParams,
    SincConstants,
    band_boundaries,
    dispersion_derivatives,
    eval_dispersion,
    unit_sphere_area,
)
from .quadrature import integrate_adaptive, phase_resolved_edges, uniform_edges

__all__ = [
    "QuadratureConfig",
    "NormTrace",
    "BandSplit",
    "AveragedNorm",
    "norm_squared",
    "band_split_norm",
    "oscillation_averaged_norm",
    "compute_norm_trace",
    "write_norm_trace_csv",
]

_AVERAGING_MIN_T = 1e3
_PHASE_SLOW = 16.0 * math.pi


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance and resolution knobs for the radial quadrature."""

    rel_tol: float = 1e-6
    points_per_period: int = 8
    r_max: float | None = None
    mode: str = "exact-adaptive"

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-2):
            raise InputDomainError("rel_tol must lie in (0, 1e-2]")
        if self.points_per_period < 4:
            raise InputDomainError("points_per_period must be >= 4")
        if self.mode not in ("exact-adaptive", "oscillation-averaged"):
            raise InputDomainError(f"unknown quadrature mode {self.mode!r}")
        if self.r_max is not None and self.r_max <= 0:
            raise InputDomainError("r_max must be positive when given")


DEFAULT_QUADRATURE = QuadratureConfig()


def _physical_scale(dim: int, spectral: bool) -> float:
    area = unit_sphere_area(dim)
    return area if spectral else area / (2.0 * math.pi) ** dim


def _propagator_sq_ceiling(params: ModelParams, r0: float, t: float) -> float:
    """sup over r >= r0 of min(t, 1/f(r))^2, from explicit envelope bounds."""
    best = t * t
    if r0 >= 1.0:
        if params.mu > 0:
            best = min(best, (1.0 + params.delta) / (params.mu * r0 ** (4.0 - 2.0 * params.theta)))
        if params.theta <= 1.0:
            best = min(best, (1.0 + params.delta) / (params.kappa * r0 ** (2.0 - 2.0 * params.theta)))
    return best


def _tail_bound(params: ModelParams, data: RadialInitialData, r0: float, t: float) -> float:
    """Bound on the unscaled integrand mass beyond r0 (|a+b|^2 <= 2|a|^2 + 2|b|^2)."""
    m0 = data.w0_tail.mass_beyond(r0, data.dim)
    m1 = data.w1_tail.mass_beyond(r0, data.dim)
    if math.isinf(m0) or math.isinf(m1):
        return math.inf
    return 2.0 * m0 + 2.0 * _propagator_sq_ceiling(params, r0, t) * m1


def _coarse_estimate(params: ModelParams, data: RadialInitialData, t: float, hi: float) -> float:
    """Scale of the norm integral from the non-oscillatory envelope
    (|w0|^2 + min(t, 1/f)^2 |w1|^2) r^(n-1); used only to size the tail target."""
    n = data.dim

    def envelope(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        prop_sq = np.minimum(t, 1.0 / np.maximum(f, 1e-300)) ** 2 if t > 0 else 0.0
        w0 = np.abs(np.asarray(data.w0_profile(r))) ** 2
        w1 = np.abs(np.asarray(data.w1_profile(r))) ** 2
        return (w0 + prop_sq * w1) * r ** (n - 1)

    from .quadrature import panel_integrals

    edges = uniform_edges(0.0, hi, 256)
    return abs(float(np.sum(panel_integrals(envelope, edges[:-1], edges[1:]))))


def _resolve_r_max(
    params: ModelParams, data: RadialInitialData, t: float, cfg: QuadratureConfig
) -> float:
    if cfg.r_max is not None:
        return cfg.r_max
    support = data.support_radius()
    if support is not None:
        return max(support, 1e-6)
    if data.w0_tail.kind == "none" or data.w1_tail.kind == "none":
        raise UncertifiedTailError(
            "decay class gives no tail certificate; set an explicit r_max"
        )
    r0 = 4.0
    for tail in (data.w0_tail, data.w1_tail):
        if tail.kind == "gaussian":
            r0 = max(r0, math.sqrt(10.0 / tail.rate))
        elif tail.kind == "power":
            r0 = max(r0, tail.cutoff * 2.0)
    rough = max(_coarse_estimate(params, data, t, r0), 1e-280)
    target = cfg.rel_tol / 10.0 * rough
    for _ in range(400):
        if _tail_bound(params, data, r0, t) <= target:
            return r0
        r0 *= 1.2
    raise UncertifiedTailError(
        f"could not certify the tail below {target} within r <= {r0}"
    )


def _amplitude_sq(params: ModelParams, data: RadialInitialData, t: float):
    n = data.dim

    def fn(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        phase = t * f
        w = np.cos(phase) * np.asarray(data.w0_profile(r)) + (t * sinc(phase)) * np.asarray(
            data.w1_profile(r)
        )
        return (w.real**2 + w.imag**2) * r ** (n - 1)

    return fn


def _exact_interval(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
) -> tuple[float, float]:
    fn = _amplitude_sq(params, data, t)
    if hi <= lo:
        return 0.0, 0.0
    if t > 0:
        edges = phase_resolved_edges(
            params, t, lo, hi, cfg.points_per_period, max_width=(hi - lo) / 48.0
        )
    else:
        edges = uniform_edges(lo, hi, 64)
    return integrate_adaptive(fn, edges, 0.5 * cfg.rel_tol)


def norm_squared(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    spectral: bool = False,
) -> float:
    """||u(t)||^2, physical side by default (spectral=True skips (2 pi)^(-n))."""
    if t < 0:
        raise InputDomainError("time must be nonnegative")
    if params.dim != data.dim:
        raise InputDomainError("params.dim and data.dim disagree")
    if cfg.mode == "oscillation-averaged":
        return oscillation_averaged_norm(params, data, t, cfg, spectral=spectral).value
    r_max = _resolve_r_max(params, data, t, cfg)
    val, _ = _exact_interval(params, data, t, 0.0, r_max, cfg)
    return _physical_scale(data.dim, spectral) * val


@dataclass(frozen=True)
class BandSplit:
    """Contributions of the low / mid / high frequency bands to ||u(t)||^2."""

    low: float
    mid: float
    high: float
    beta: float
    split: float

    @property
    def total(self) -> float:
        return self.low + self.mid + self.high


def band_split_norm(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    sinc_constants: SincConstants = DEFAULT_SINC,
    spectral: bool = False,
) -> BandSplit:
    """Norm split at beta(t) and at gamma(t) (n = 1) or 1 (n >= 2).

    Requires t > e so the band radii are defined; the three parts sum to
    norm_squared within the configured tolerance.
    """
    if params.dim != data.dim:
        raise InputDomainError("params.dim and data.dim disagree")
    bands = band_boundaries(params, sinc_constants, t)
    split = bands.gamma_band if params.dim == 1 else 1.0
    r_max = _resolve_r_max(params, data, t, cfg)
    scale = _physical_scale(data.dim, spectral)

    beta = min(bands.beta, r_max)
    split = min(max(split, beta), r_max)

    averaged = cfg.mode == "oscillation-averaged" and t >= _AVERAGING_MIN_T
    low, _ = _exact_interval(params, data, t, 0.0, beta, cfg)
    if averaged:
        mid = _averaged_interval(params, data, t, beta, split, cfg).value
        high = _averaged_interval(params, data, t, split, r_max, cfg).value
    else:
        mid, _ = _exact_interval(params, data, t, beta, split, cfg)
        high, _ = _exact_interval(params, data, t, split, r_max, cfg)
    return BandSplit(scale * low, scale * mid, scale * high, beta, split)


# ---------------------------------------------------------------------------
# oscillation-averaged mode


@dataclass(frozen=True)
class AveragedNorm:
    """Averaged-mode result: value with a certified oscillation remainder."""

    value: float
    remainder: float
    used_fallback: bool = False


def _stationary_points(params: ModelParams, lo: float, hi: float) -> list[float]:
    if hi <= lo:
        return []
    from scipy.optimize import brentq

    r = np.geomspace(max(lo, 1e-10), hi, 2048)
    fp, _ = dispersion_derivatives(params, r)
    sign = np.sign(fp)
    flips = np.nonzero(sign[1:] * sign[:-1] < 0)[0]
    return [float(brentq(lambda x: dispersion_derivatives(params, x)[0], r[i], r[i + 1]))
            for i in flips]


def _oscillatory_ibp_bound(params: ModelParams, g, a: float, b: float, t: float) -> float:
    """Bound |integral_a^b g(r) e^(2 i t f(r)) dr| by parts: needs f' != 0 on [a, b]."""
    if b <= a:
        return 0.0
    r = np.linspace(a, b, 2049)
    fp, _ = dispersion_derivatives(params, r)
    ratio = np.asarray(g(r), dtype=float) / fp
    deriv = np.gradient(ratio, r)
    total_var = float(np.trapezoid(np.abs(deriv), r))
    return (abs(ratio[0]) + abs(ratio[-1]) + total_var) / (2.0 * t)


def _averaged_interval(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
) -> AveragedNorm:
    """Averaged value +/- remainder of the unscaled norm integrand over [lo, hi]."""
    if hi <= lo:
        return AveragedNorm(0.0, 0.0)
    n = data.dim

    # slow region t f <= Phi_0 handled exactly
    f_lo = eval_dispersion(params, max(lo, 0.0))
    f_hi = eval_dispersion(params, hi)
    if t * max(f_lo, f_hi) <= _PHASE_SLOW:
        val, err = _exact_interval(params, data, t, lo, hi, cfg)
        return AveragedNorm(val, err)
    if t * f_lo < _PHASE_SLOW:
        from scipy.optimize import brentq

        r_osc = float(
            brentq(lambda x: t * eval_dispersion(params, x) - _PHASE_SLOW, max(lo, 1e-300), hi)
        )
    else:
        r_osc = lo

    value, remainder = 0.0, 0.0
    if r_osc > lo:
        v, e = _exact_interval(params, data, t, lo, r_osc, cfg)
        value += v
        remainder += e

    # windows around stationary points of f are integrated exactly as well
    h_window = min(0.25, 2.0 * t**-0.25)
    exact_windows = []
    for r_star in _stationary_points(params, r_osc, hi):
        exact_windows.append((max(r_osc, r_star - h_window), min(hi, r_star + h_window)))

    segments = []
    cursor = r_osc
    for w_lo, w_hi in sorted(exact_windows):
        if w_lo > cursor:
            segments.append((cursor, w_lo, "avg"))
        segments.append((max(cursor, w_lo), w_hi, "exact"))
        cursor = max(cursor, w_hi)
    if cursor < hi:
        segments.append((cursor, hi, "avg"))

    def averaged_density(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        w0 = np.asarray(data.w0_profile(r))
        w1 = np.asarray(data.w1_profile(r))
        return 0.5 * (np.abs(w0) ** 2 + np.abs(w1) ** 2 / f**2) * r ** (n - 1)

    def cos_coefficient(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        w0 = np.asarray(data.w0_profile(r))
        w1 = np.asarray(data.w1_profile(r))
        return 0.5 * (np.abs(w0) ** 2 - np.abs(w1) ** 2 / f**2) * r ** (n - 1)

    def sin_coefficient(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        w0 = np.asarray(data.w0_profile(r))
        w1 = np.asarray(data.w1_profile(r))
        return np.real(w0 * np.conj(w1)) / f * r ** (n - 1)

    has_w0 = data.w0_tail.kind != "compact" or data.w0_tail.cutoff > 0.0
    for seg_lo, seg_hi, kind in segments:
        if seg_hi <= seg_lo:
            continue
        if kind == "exact":
            v, e = _exact_interval(params, data, t, seg_lo, seg_hi, cfg)
            value += v
            remainder += e
        else:
            edges = np.geomspace(max(seg_lo, 1e-12), seg_hi, 129)
            edges[0] = seg_lo
            v, e = integrate_adaptive(averaged_density, edges, 0.5 * cfg.rel_tol)
            value += v
            remainder += e
            remainder += _oscillatory_ibp_bound(params, cos_coefficient, seg_lo, seg_hi, t)
            if has_w0:
                remainder += _oscillatory_ibp_bound(params, sin_coefficient, seg_lo, seg_hi, t)

    return AveragedNorm(value, remainder)


def oscillation_averaged_norm(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    spectral: bool = False,
) -> AveragedNorm:
    """||u(t)||^2 with sin^2(t f) averaged to 1/2 where oscillation is fast.

    Valid for t >= 1e3.  Returns value +/- remainder; the exact-adaptive
    result lies inside the reported band.  Falls back to exact-adaptive with
    a warning when the remainder exceeds 10% of the value.
    """
    if t < _AVERAGING_MIN_T:
        raise PreconditionError(
            f"oscillation averaging needs t >= {_AVERAGING_MIN_T}, got {t}"
        )
    if params.dim != data.dim:
        raise InputDomainError("params.dim and data.dim disagree")
    r_max = _resolve_r_max(params, data, t, cfg)
    out = _averaged_interval(params, data, t, 0.0, r_max, cfg)
    scale = _physical_scale(data.dim, spectral)
    if out.remainder > 0.1 * abs(out.value):
        warnings.warn(
            f"averaged-mode remainder {out.remainder:.3g} exceeds 10% of the value; "
            "falling back to exact-adaptive",
            stacklevel=2,
        )
        val, err = _exact_interval(params, data, t, 0.0, r_max, cfg)
        return AveragedNorm(scale * val, scale * err, used_fallback=True)
    return AveragedNorm(scale * out.value, scale * out.remainder)


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class NormTrace:
    """Sampled (t, ||u(t)||^2) records with per-band contributions and energy."""

    times: np.ndarray
    norms_sq: np.ndarray
    band_low: np.ndarray
    band_mid: np.ndarray
    band_high: np.ndarray
    energy: np.ndarray

    def __post_init__(self) -> None:
        arrays = (
            self.times,
            self.norms_sq,
            self.band_low,
            self.band_mid,
            self.band_high,
            self.energy,
        )
        size = self.times.size
        if any(a.size != size for a in arrays):
            raise InputDomainError("trace columns must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise InputDomainError("times must be strictly increasing")
        recon = self.band_low + self.band_mid + self.band_high
        if np.any(np.abs(recon - self.norms_sq) > 1e-6 * np.abs(self.norms_sq) + 1e-300):
            raise InvariantViolation("band contributions do not reconstruct the norm")


def geometric_times(t_min: float, t_max: float, points_per_decade: int) -> np.ndarray:
    """Log-uniform sampling, points_per_decade per factor of 10."""
    decades = math.log10(t_max / t_min)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    return np.geomspace(t_min, t_max, count)


def compute_norm_trace(
    params: ModelParams,
    data: RadialInitialData,
    times,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    sinc_constants: SincConstants = DEFAULT_SINC,
    threads: int = 1,
) -> NormTrace:
    """Band-split norms and total energy over a sampled time window.

    In oscillation-averaged mode, samples below t = 1e3 silently use the
    exact path (the averaging precondition).  Thread-parallel over samples
    with index-ordered collection, so results do not depend on thread count.
    """
    ts = np.asarray(times, dtype=float)
    energy_edges = energy_quadrature_nodes(data)

    def one(t: float):
        split = band_split_norm(params, data, t, cfg, sinc_constants)
        report = total_energy(params, data, t, edges=energy_edges)
        return split.low, split.mid, split.high, report.total

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, ts))
    else:
        rows = [one(t) for t in ts]

    low = np.array([r[0] for r in rows])
    mid = np.array([r[1] for r in rows])
    high = np.array([r[2] for r in rows])
    energy = np.array([r[3] for r in rows])
    return NormTrace(
        times=ts,
        norms_sq=low + mid + high,
        band_low=low,
        band_mid=mid,
        band_high=high,
        energy=energy,
    )


def write_norm_trace_csv(trace: NormTrace, path) -> None:
    """Six-column CSV (t, norm_sq, band_low, band_mid, band_high, energy)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["t", "norm_sq", "band_low", "band_mid", "band_high", "energy"])
        for i in range(trace.times.size):
            writer.writerow(
                [
                    format(x, ".17g")
                    for x in (
                        trace.times[i],
                        trace.norms_sq[i],
                        trace.band_low[i],
                        trace.band_mid[i],
                        trace.band_high[i],
                        trace.energy[i],
                    )
                ]
            )
