"""Symbol-level well-posedness checks: the operator multiplier and dissipativity.

The evolution rewrites as a first-order system whose spatial operator has
the Fourier symbol

    p(|xi|) = (1 + kappa |xi|^2 + mu |xi|^4) / (1 + delta |xi|^(2 theta)).

Its weighted square h(r) = (1 + kappa r^2 + mu r^4)^2 / (1 + delta r^(2
theta)) is two-sided comparable to 1 + r^(2 (4 - theta)): the ratio tends to
1 at r -> 0 and to mu^2/delta at r -> infinity (both limits positive exactly
when mu > 0), so the grid infimum over a wide log grid is a positive
equivalence constant.  The skew part of the generator satisfies
Re[(v, u)_{H2} - (p u, v)_{H theta}] = 0, checked here as a spectral
identity on arbitrary complex radial profiles.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputDomainError, InvariantViolation, PreconditionError
from .model import ModelParams, unit_sphere_area
from .quadrature import integrate_adaptive

__all__ = [
    "MultiplierScan",
    "p_multiplier",
    "h_weighted_symbol",
    "high_frequency_limit",
    "h_ratio_scan",
    "sobolev_equivalence_check",
    "dissipativity_residual",
    "write_multiplier_csv",
]


def p_multiplier(params: ModelParams, xi_norm):
    """Symbol (1 + kappa r^2 + mu r^4)/(1 + delta r^(2 theta)); equals 1 at r = 0."""
    r = np.asarray(xi_norm, dtype=float)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise InputDomainError("|xi| must be finite and nonnegative")
    out = (1.0 + params.kappa * r**2 + params.mu * r**4) / (
        1.0 + params.delta * r ** (2.0 * params.theta)
    )
    return out if np.ndim(xi_norm) else float(out)


def h_weighted_symbol(params: ModelParams, r):
    """h(r) = (1 + kappa r^2 + mu r^4)^2 / (1 + delta r^(2 theta))."""
    arr = np.asarray(r, dtype=float)
    out = (1.0 + params.kappa * arr**2 + params.mu * arr**4) ** 2 / (
        1.0 + params.delta * arr ** (2.0 * params.theta)
    )
    return out if np.ndim(r) else float(out)


def high_frequency_limit(params: ModelParams) -> float:
    """lim_{r -> inf} h(r)/(1 + r^(2 (4 - theta))) = mu^2 / delta (needs mu > 0).

    Both h and the comparison weight scale like r^(8 - 2 theta), with leading
    coefficients mu^2 / delta and 1.
    """
    params.require_mu_positive("the high-frequency equivalence limit")
    return params.mu**2 / params.delta


@dataclass(frozen=True)
class MultiplierScan:
    """Sampled ratio h(r)/(1 + r^(2 (4 - theta))) with its grid infimum."""

    r_grid: np.ndarray
    h_ratio: np.ndarray
    m_lower: float
    limits: tuple[float, float]

    def __post_init__(self) -> None:
        if not (np.all(self.h_ratio > 0) and self.m_lower > 0):
            raise InvariantViolation("equivalence ratios must be positive")
        if np.any(self.h_ratio < self.m_lower * (1.0 - 1e-12)):
            raise InvariantViolation("m_lower must bound every ratio from below")

    @property
    def m_upper(self) -> float:
        return float(np.max(self.h_ratio))


def _ratio(params: ModelParams, r: np.ndarray) -> np.ndarray:
    return h_weighted_symbol(params, r) / (1.0 + r ** (2.0 * (4.0 - params.theta)))


def h_ratio_scan(params: ModelParams, r_grid=None) -> MultiplierScan:
    """Scan the equivalence ratio over a log grid spanning >= 8 decades.

    The endpoint values must sit within 1% of the analytic limits 1 and
    mu^2/delta; mu = 0 breaks the high-frequency limit and is rejected.
    """
    params.require_mu_positive("the multiplier equivalence")
    if r_grid is None:
        r_grid = np.geomspace(1e-6, 1e6, 481)
    grid = np.asarray(r_grid, dtype=float)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InputDomainError("the grid must be positive and increasing")
    if math.log10(grid[-1] / grid[0]) < 8.0 or not grid[0] < 1.0 < grid[-1]:
        raise PreconditionError("the grid must span >= 8 decades around 1")

    ratios = _ratio(params, grid)
    limits = (float(ratios[0]), float(ratios[-1]))
    c_inf = high_frequency_limit(params)
    if abs(limits[0] - 1.0) > 0.01:
        raise InvariantViolation(
            f"low-frequency ratio endpoint {limits[0]} deviates from 1 by > 1%"
        )
    if abs(limits[1] - c_inf) > 0.01 * c_inf:
        raise InvariantViolation(
            f"high-frequency ratio endpoint {limits[1]} deviates from {c_inf} by > 1%"
        )
    return MultiplierScan(
        r_grid=grid,
        h_ratio=ratios,
        m_lower=float(np.min(ratios)),
        limits=limits,
    )


def sobolev_equivalence_check(
    params: ModelParams, u_hat, dim: int, r_max: float = 40.0
) -> tuple[float, float, float]:
    """Two-sided norm equivalence through the multiplier, on one profile.

    Returns (lhs, rhs_low, rhs_high) where lhs is the h-weighted spectral
    integral of |u_hat|^2 and rhs_low/rhs_high multiply the (1 + r^(2 (4 -
    theta)))-weighted integral by the grid infimum / supremum of the ratio.
    The ordering rhs_low <= lhs <= rhs_high is asserted.
    """
    params.require_mu_positive("the multiplier equivalence")
    scan = h_ratio_scan(params)
    area = unit_sphere_area(dim)

    def lhs_density(r):
        r = np.asarray(r, dtype=float)
        vals = np.abs(np.asarray(u_hat(r))) ** 2
        return h_weighted_symbol(params, r) * vals * r ** (dim - 1)

    def base_density(r):
        r = np.asarray(r, dtype=float)
        vals = np.abs(np.asarray(u_hat(r))) ** 2
        return (1.0 + r ** (2.0 * (4.0 - params.theta))) * vals * r ** (dim - 1)

    edges = np.concatenate([[0.0], np.geomspace(1e-6, r_max, 257)])
    lhs, _ = integrate_adaptive(lhs_density, edges, 1e-10)
    base, _ = integrate_adaptive(base_density, edges, 1e-10)
    lhs *= area
    base *= area
    rhs_low = scan.m_lower * base
    rhs_high = scan.m_upper * base
    tol = 1e-9 * max(abs(lhs), abs(base))
    if not (rhs_low <= lhs + tol and lhs <= rhs_high + tol):
        raise InvariantViolation(
            f"equivalence ordering failed: {rhs_low} <= {lhs} <= {rhs_high}"
        )
    return float(lhs), float(rhs_low), float(rhs_high)


def dissipativity_residual(params: ModelParams, u_hat, v_hat, dim: int, r_max: float = 40.0) -> float:
    """Re[(v, u)_{H2} - (p u, v)_{H theta}] evaluated spectrally; vanishes identically.

    The integrand reduces to (1 + kappa r^2 + mu r^4)(v u* - u v*), which is
    purely imaginary pointwise, so the real part integrates to zero up to
    quadrature round-off.
    """
    area = unit_sphere_area(dim)

    def residual_density(r):
        r = np.asarray(r, dtype=float)
        u = np.asarray(u_hat(r))
        v = np.asarray(v_hat(r))
        weight = 1.0 + params.kappa * r**2 + params.mu * r**4
        skew = v * np.conj(u) - u * np.conj(v)
        return weight * skew.real * r ** (dim - 1)

    edges = np.concatenate([[0.0], np.geomspace(1e-6, r_max, 257)])
    val, _ = integrate_adaptive(residual_density, edges, 1e-9, abs_tol=1e-14)
    return float(area * val)


def write_multiplier_csv(scan: MultiplierScan, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["r", "h_ratio"])
        for r, ratio in zip(scan.r_grid, scan.h_ratio):
            writer.writerow([format(r, ".17g"), format(ratio, ".17g")])
