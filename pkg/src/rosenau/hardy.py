"""Rayleigh quotients for Hardy-type weights and the low-dimension failure scans.

A weight w admits a Hardy-type inequality ||u/w|| <= C ||grad u|| exactly
when the Rayleigh quotient ||u/w||^2 / ||grad u||^2 stays bounded over the
admissible class.  This module evaluates such quotients by radial
quadrature, drives them over witness families (the logarithmic capacity
family in 2-D, dilations elsewhere), and renders bounded/unbounded verdicts.
It also contains the corrected energy identity for the time-integrated
solution (theta = 1, n = 2), whose left side a valid Hardy inequality would
force to stay bounded, and the Rellich quotient that is genuinely bounded
for n >= 5.

Weights whose zero at the origin makes the quotient of any origin-positive
test function an outright divergent integral (|x| in n <= 2, |x|^2 in
n <= 4) are scanned through an exhaustion sequence: the numerator truncated
to |x| >= 1/R for a fixed bump.  The quotient is +infinity there; the trace
records the divergence rate.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import (
    InputDomainError,
    IntegrabilityError,
    InvariantViolation,
    PreconditionError,
)
from .evolution import RadialInitialData, cosc, sinc
from .model import ModelParams, eval_dispersion, unit_sphere_area
from .norms import QuadratureConfig, DEFAULT_QUADRATURE, _resolve_r_max
from .quadrature import integrate_adaptive, phase_resolved_edges

__all__ = [
    "WeightFunction",
    "RadialTestFunction",
    "QuotientTrace",
    "BlowupScan",
    "EnergyIdentity",
    "rayleigh_quotient",
    "capacity_family",
    "dilation_family",
    "blowup_scan",
    "energy_identity_check",
    "rellich_quotient",
    "write_quotient_csv",
]

_WEIGHT_KINDS = ("a1_weight", "abs_log_weight", "plain_abs", "constant_one", "abs_squared")
_QUAD_OPTS = dict(limit=400, epsabs=1e-13, epsrel=1e-11)


@dataclass(frozen=True)
class WeightFunction:
    """Radial Hardy weight w(|x|) of one of the named kinds."""

    kind: str
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in _WEIGHT_KINDS:
            raise InputDomainError(f"unknown weight kind {self.kind!r}")
        if self.dim < 1:
            raise InputDomainError("dim must be >= 1")

    @property
    def vanishes_at_origin(self) -> bool:
        return self.kind in ("abs_log_weight", "plain_abs", "abs_squared")

    def evaluate(self, r):
        arr = np.asarray(r, dtype=float)
        if self.vanishes_at_origin and np.any(arr == 0.0):
            raise InputDomainError(f"weight {self.kind} vanishes at the origin")
        if self.kind == "a1_weight":
            return (1.0 + np.log1p(arr)) * (1.0 + arr)
        if self.kind == "abs_log_weight":
            return arr * (1.0 + np.abs(np.log(arr)))
        if self.kind == "plain_abs":
            return arr
        if self.kind == "constant_one":
            return np.ones_like(arr)
        return arr**2

    def quotient_diverges_for(self, u_origin_nonzero: bool) -> bool:
        """Whether ||u/w||^2 diverges at the origin for u with u(0) != 0."""
        if not u_origin_nonzero:
            return False
        if self.kind == "plain_abs":
            return self.dim <= 2
        if self.kind == "abs_log_weight":
            return self.dim <= 1
        if self.kind == "abs_squared":
            return self.dim <= 4
        return False


@dataclass(frozen=True)
class RadialTestFunction:
    """Radial profile with derivatives, for quotient evaluation."""

    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    second_deriv: Callable[[np.ndarray], np.ndarray] | None = None
    support: float | None = None
    kinks: tuple = ()
    label: str = ""


def gaussian_bump(scale: float = 1.0) -> RadialTestFunction:
    """exp(-(r/scale)^2) with closed-form derivatives.

    support is the effective truncation 6.8 * scale, where the squared
    envelope has decayed to ~1e-40 of its peak.
    """

    def val(r):
        return np.exp(-((np.asarray(r, dtype=float) / scale) ** 2))

    def der(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * r / scale**2 * np.exp(-((r / scale) ** 2))

    def der2(r):
        r = np.asarray(r, dtype=float)
        return (4.0 * r**2 / scale**4 - 2.0 / scale**2) * np.exp(-((r / scale) ** 2))

    return RadialTestFunction(
        val, der, der2, support=6.8 * scale, label=f"gaussian(scale={scale})"
    )


def capacity_family(R: float, dim: int = 2) -> RadialTestFunction:
    """Logarithmic cutoff: 1 on [0,1], log(R/r)/log R on [1,R], 0 beyond.

    ||grad u_R||^2 over the plane equals 2 pi / log R exactly.
    """
    if dim != 2:
        raise PreconditionError("the capacity family is the 2-D witness")
    if R <= math.e:
        raise InputDomainError("need R > e")
    log_r = math.log(R)

    def val(r):
        r = np.asarray(r, dtype=float)
        mid = np.log(np.maximum(R / np.maximum(r, 1e-300), 1.0)) / log_r
        return np.where(r <= 1.0, 1.0, np.where(r >= R, 0.0, mid))

    def der(r):
        r = np.asarray(r, dtype=float)
        inside = (r > 1.0) & (r < R)
        return np.where(inside, -1.0 / (np.maximum(r, 1e-300) * log_r), 0.0)

    return RadialTestFunction(val, der, support=R, kinks=(1.0, R), label=f"capacity(R={R})")


def dilation_family(R: float, base: RadialTestFunction | None = None) -> RadialTestFunction:
    """u_R(x) = phi(x/R) for a fixed bump phi (Gaussian by default)."""
    if R <= 0:
        raise InputDomainError("dilation scale must be positive")
    phi = base if base is not None else gaussian_bump()

    def val(r):
        return phi.value(np.asarray(r, dtype=float) / R)

    def der(r):
        return phi.deriv(np.asarray(r, dtype=float) / R) / R

    der2 = None
    if phi.second_deriv is not None:
        def der2(r):  # noqa: E306
            return phi.second_deriv(np.asarray(r, dtype=float) / R) / R**2

    support = phi.support * R if phi.support is not None else None
    return RadialTestFunction(val, der, der2, support=support, label=f"dilation(R={R})")


def _geometric_refine(segments):
    """Split wide finite segments geometrically so quad sees balanced pieces."""
    out = []
    for a, b in segments:
        if math.isfinite(b) and a > 0 and b / a > 10.0:
            n = 2 * int(math.ceil(math.log10(b / a))) + 1
            cuts = np.geomspace(a, b, n + 1)
            out.extend(zip(cuts[:-1], cuts[1:]))
        else:
            out.append((a, b))
    return out


def _radial_quad(fn, hi: float | None, kinks=()) -> float:
    """integral_0^hi fn(r) dr with kink-aware splitting; hi = None means infinity."""
    top = math.inf if hi is None else hi
    cuts = sorted({k for k in kinks if 0.0 < k < top})
    points = [0.0, *cuts]
    if math.isinf(top):
        points.append(max(points[-1] * 2.0, 10.0))
        segments = list(zip(points[:-1], points[1:])) + [(points[-1], math.inf)]
    else:
        points.append(top)
        segments = list(zip(points[:-1], points[1:]))
    total = 0.0
    for a, b in _geometric_refine(segments):
        # the scipy warning duplicates the explicit error check below
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(fn, a, b, **_QUAD_OPTS)[:2]
        if not math.isfinite(val) or (abs(val) > 0 and err > 0.05 * abs(val) + 1e-8):
            raise IntegrabilityError(
                f"quadrature over [{a}, {b}] failed to converge (value {val}, err {err})"
            )
        total += val
    return total


def gradient_norm_sq(u: RadialTestFunction, dim: int) -> float:
    """||grad u||^2 = omega_n integral |u'(r)|^2 r^(n-1) dr."""
    area = unit_sphere_area(dim)
    val = _radial_quad(
        lambda r: float(u.deriv(np.array([r]))[0]) ** 2 * r ** (dim - 1),
        u.support,
        u.kinks,
    )
    return area * val


def weighted_norm_sq(
    u: RadialTestFunction, weight: WeightFunction, dim: int, inner_cut: float = 0.0
) -> float:
    """||u/w||^2, optionally truncated to r >= inner_cut (exhaustion use)."""

    def fn(r):
        if r == 0.0 and weight.vanishes_at_origin:
            return 0.0
        w = float(weight.evaluate(np.array([r]))[0])
        return (float(u.value(np.array([r]))[0]) / w) ** 2 * r ** (dim - 1)

    area = unit_sphere_area(dim)
    if inner_cut > 0.0:
        top = u.support
        cuts = tuple(k for k in u.kinks if k > inner_cut)
        total = _radial_quad_from(fn, inner_cut, top, cuts)
        return area * total
    return area * _radial_quad(fn, u.support, u.kinks)


def _radial_quad_from(fn, lo: float, hi: float | None, kinks=()) -> float:
    top = math.inf if hi is None else hi
    cuts = sorted({k for k in kinks if lo < k < top})
    points = [lo, *cuts]
    if math.isinf(top):
        points.append(max(points[-1] * 2.0, 10.0))
        segments = list(zip(points[:-1], points[1:])) + [(points[-1], math.inf)]
    else:
        points.append(top)
        segments = list(zip(points[:-1], points[1:]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return sum(
            integrate.quad(fn, a, b, **_QUAD_OPTS)[0]
            for a, b in _geometric_refine(segments)
        )


def rayleigh_quotient(u: RadialTestFunction, weight: WeightFunction, dim: int) -> float:
    """||u/w||^2 / ||grad u||^2 by radial quadrature.

    Degenerate gradients and origin-divergent numerators raise instead of
    returning a number.
    """
    u0 = abs(complex(u.value(np.array([0.0]))[0]))
    if weight.quotient_diverges_for(u0 != 0.0):
        raise IntegrabilityError(
            f"||u/{weight.kind}||^2 diverges at the origin in dim {dim} "
            "for data with u(0) != 0"
        )
    grad = gradient_norm_sq(u, dim)
    if grad <= 0.0:
        raise InputDomainError("degenerate test function: ||grad u|| = 0")
    return weighted_norm_sq(u, weight, dim) / grad


@dataclass(frozen=True)
class QuotientTrace:
    """Quotient samples over a witness family."""

    family_param: np.ndarray
    quotients: np.ndarray
    gradient_norms_sq: np.ndarray

    def __post_init__(self) -> None:
        sizes = {self.family_param.size, self.quotients.size, self.gradient_norms_sq.size}
        if len(sizes) != 1:
            raise InputDomainError("trace columns must have equal length")
        if not (
            np.all(np.isfinite(self.quotients))
            and np.all(self.quotients > 0)
            and np.all(self.gradient_norms_sq > 0)
        ):
            raise InvariantViolation("quotient traces must be finite and positive")


@dataclass(frozen=True)
class BlowupScan:
    trace: QuotientTrace
    verdict: str
    slope: float
    r_squared: float
    mechanism: str


def blowup_scan(weight: WeightFunction, R_grid, dim: int) -> BlowupScan:
    """Drive the quotient over a witness family and classify its growth.

    Verdict "unbounded" when a linear fit of quotient vs log R has positive
    slope with r^2 >= 0.95, or when the sequence grows monotonically by a
    factor >= 2 across the grid (dilation quotients grow faster than
    linearly in log R).  For origin-divergent combinations the quotient is
    +infinity for any origin-positive test function; the scan then reports
    the exhaustion sequence of a fixed bump with the numerator truncated to
    |x| >= 1/R, whose growth certifies the divergence.
    """
    grid = np.asarray(R_grid, dtype=float)
    if grid.size < 5:
        raise InputDomainError("need at least 5 family parameters")
    if np.any(np.diff(grid) <= 0):
        raise InputDomainError("family parameters must increase")
    if math.log(grid[-1] / grid[0]) < 3.0:
        raise InputDomainError("family parameters must span >= 3 e-foldings")

    quotients = np.empty(grid.size)
    grads = np.empty(grid.size)
    if weight.quotient_diverges_for(True):
        mechanism = "exhaustion"
        bump = gaussian_bump()
        grad = gradient_norm_sq(bump, dim)
        for i, R in enumerate(grid):
            quotients[i] = weighted_norm_sq(bump, weight, dim, inner_cut=1.0 / R) / grad
            grads[i] = grad
    else:
        mechanism = "capacity" if dim == 2 else "dilation"
        for i, R in enumerate(grid):
            u = capacity_family(R, dim) if dim == 2 else dilation_family(R)
            grads[i] = gradient_norm_sq(u, dim)
            quotients[i] = weighted_norm_sq(u, weight, dim) / grads[i]

    trace = QuotientTrace(grid, quotients, grads)
    x = np.log(grid)
    slope, intercept = np.polyfit(x, quotients, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((quotients - pred) ** 2))
    ss_tot = float(np.sum((quotients - np.mean(quotients)) ** 2))
    r_sq = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0

    monotone = bool(np.all(np.diff(quotients) > 0) and quotients[-1] >= 2.0 * quotients[0])
    unbounded = (slope > 0 and r_sq >= 0.95) or monotone
    return BlowupScan(
        trace=trace,
        verdict="unbounded" if unbounded else "bounded",
        slope=float(slope),
        r_squared=float(max(r_sq, 0.0)),
        mechanism=mechanism,
    )


@dataclass(frozen=True)
class EnergyIdentity:
    lhs: float
    rhs: float
    residual: float
    solution_norm_sq_half: float


def energy_identity_check(
    params: ModelParams,
    data: RadialInitialData,
    t: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> EnergyIdentity:
    """Energy identity of the time-integrated solution (theta = 1, n = 2).

    With v(t) = integral_0^t u(s) ds and u0 = 0 the accumulated energy obeys

        1/2 ||v_t||^2 + delta/2 ||grad v_t||^2 + mu/2 ||Delta v||^2
        + kappa/2 ||grad v||^2  =  ((I - delta Laplacian) u1, v),

    where the right side carries the per-mode factor (1 + delta |xi|^2); the
    uncorrected pairing (u1, v) misses the fractional-inertia contribution.
    Both sides are evaluated by oscillation-resolved spectral quadrature.
    """
    if params.theta != 1.0:
        raise PreconditionError("the identity is stated for theta = 1")
    if params.dim != 2 or data.dim != 2:
        raise PreconditionError("the identity is stated for dim = 2")
    probe = np.linspace(0.0, 10.0, 11)
    if np.any(np.abs(np.asarray(data.w0_profile(probe))) > 0):
        raise PreconditionError("the time-integral route requires u0 = 0")
    if t < 0:
        raise InputDomainError("time must be nonnegative")

    scale = unit_sphere_area(2) / (2.0 * math.pi) ** 2
    de, mu, ka = params.delta, params.mu, params.kappa

    def lhs_density(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        phase = t * f
        w1 = np.asarray(data.w1_profile(r))
        w_sq = (t * sinc(phase)) ** 2 * np.abs(w1) ** 2
        v_sq = (t * t * cosc(phase)) ** 2 * np.abs(w1) ** 2
        return (
            0.5 * (1.0 + de * r**2) * w_sq + 0.5 * (mu * r**4 + ka * r**2) * v_sq
        ) * r

    def rhs_density(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        phase = t * f
        w1 = np.asarray(data.w1_profile(r))
        v_re = t * t * cosc(phase) * np.real(np.conj(w1) * w1)
        return (1.0 + de * r**2) * v_re * r

    r_max = _resolve_r_max(params, data, max(t, 1.0), cfg)
    if t == 0.0:
        return EnergyIdentity(0.0, 0.0, 0.0, 0.0)
    edges = phase_resolved_edges(params, 2.0 * t, 0.0, r_max, cfg.points_per_period,
                                 max_width=r_max / 48.0)
    lhs, _ = integrate_adaptive(lhs_density, edges, 1e-10)
    rhs, _ = integrate_adaptive(rhs_density, edges, 1e-10)
    lhs *= scale
    rhs *= scale

    def half_norm_density(r):
        r = np.asarray(r, dtype=float)
        f = eval_dispersion(params, r)
        phase = t * f
        w1 = np.asarray(data.w1_profile(r))
        return 0.5 * (t * sinc(phase)) ** 2 * np.abs(w1) ** 2 * r

    half_norm, _ = integrate_adaptive(half_norm_density, edges, 1e-9)
    residual = abs(lhs - rhs) / max(abs(lhs), 1e-300)
    if residual > 1e-8:
        raise InvariantViolation(
            f"energy identity residual {residual} exceeds 1e-8"
        )
    return EnergyIdentity(
        lhs=float(lhs),
        rhs=float(rhs),
        residual=float(residual),
        solution_norm_sq_half=float(scale * half_norm),
    )


def rellich_quotient(u: RadialTestFunction, dim: int) -> float:
    """||u/|x|^2||^2 / ||Delta u||^2 for dim >= 5 (the inequality fails below)."""
    if dim < 5:
        raise PreconditionError("the Rellich quotient is evaluated for dim >= 5")
    if u.second_deriv is None:
        raise InputDomainError("the Rellich quotient needs a second derivative")

    def num(r):
        return float(u.value(np.array([r]))[0]) ** 2 * r ** (dim - 5)

    def den(r):
        lap = float(u.second_deriv(np.array([r]))[0]) + (dim - 1) * float(
            u.deriv(np.array([r]))[0]
        ) / max(r, 1e-300)
        return lap**2 * r ** (dim - 1)

    numerator = _radial_quad(num, u.support, u.kinks)
    denominator = _radial_quad(den, u.support, u.kinks)
    if denominator <= 0:
        raise InputDomainError("degenerate test function: ||Delta u|| = 0")
    return numerator / denominator


def write_quotient_csv(trace: QuotientTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["R", "quotient", "grad_norm_sq"])
        for i in range(trace.family_param.size):
            writer.writerow(
                [
                    format(trace.family_param[i], ".17g"),
                    format(trace.quotients[i], ".17g"),
                    format(trace.gradient_norms_sq[i], ".17g"),
                ]
            )
