"""Model coefficients, the dispersion rate, and the constants derived from them.

Every other module works through the dispersion rate

    f(r) = sqrt((mu r^4 + kappa r^2) / (1 + delta r^(2 theta))),

its first two derivatives, and a handful of universal constants: the sinc
supremum L, the half-level threshold delta0, the time-dependent band radii
beta(t) and gamma(t), and the unit-sphere areas omega_n.  Near r = 0 the rate
is evaluated in the factored form r * sqrt((mu r^2 + kappa)/(1 + delta r^(2
theta))) so that relative accuracy survives at the origin, where the
low-frequency quadrature needs it most.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputDomainError, InvariantViolation, PreconditionError

__all__ = [
    "ModelParams",
    "SincConstants",
    "BandBoundaries",
    "eval_dispersion",
    "dispersion_derivatives",
    "epsilon0",
    "derivative_floor",
    "second_derivative_bound",
    "band_boundaries",
    "unit_sphere_area",
]


@dataclass(frozen=True)
class ModelParams:
    """Coefficient tuple (delta, mu, kappa, theta, dim) of the evolution model.

    delta multiplies the fractional inertia term, mu the bi-Laplacian, kappa
    the Laplacian; theta in (0, 2] is the fractional order and dim >= 1 the
    spatial dimension.  mu = 0 is legal but the high-frequency ceilings and
    the multiplier equivalence require mu > 0 and reject it per-operation.
    """

    delta: float
    mu: float
    kappa: float
    theta: float
    dim: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise InputDomainError(f"delta must be positive, got {self.delta}")
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise InputDomainError(f"mu must be nonnegative, got {self.mu}")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise InputDomainError(f"kappa must be positive, got {self.kappa}")
        if not (math.isfinite(self.theta) and 0 < self.theta <= 2):
            raise InputDomainError(f"theta must lie in (0, 2], got {self.theta}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InputDomainError(f"dim must be an integer >= 1, got {self.dim}")

    def require_mu_positive(self, what: str) -> None:
        if self.mu <= 0:
            raise PreconditionError(f"{what} requires mu > 0 (got mu = {self.mu})")


DEFAULT_PARAMS = ModelParams(delta=1.0, mu=1.0, kappa=1.0, theta=2.0, dim=1)


@dataclass(frozen=True)
class SincConstants:
    """Supremum L of |sin(eta)/eta| and a threshold delta0 with sinc >= 1/2 below it.

    L is exactly 1; delta0 may be any value in (0, 1) (default 0.9), checked
    by dense sampling at construction.  A larger delta0 widens the
    low-frequency band and improves the lower-envelope constants.
    """

    L: float = 1.0
    delta0: float = 0.9

    def __post_init__(self) -> None:
        if self.L != 1.0:
            raise InvariantViolation("the sinc supremum L is exactly 1")
        if not (0.0 < self.delta0 < 1.0):
            raise InputDomainError(f"delta0 must lie in (0, 1), got {self.delta0}")
        eta = np.linspace(self.delta0 / 2048.0, self.delta0, 2048)
        vals = np.abs(np.sin(eta) / eta)
        if not np.all(vals >= 0.5):
            raise InvariantViolation(
                f"|sin(eta)/eta| dips below 1/2 on (0, {self.delta0}]"
            )


DEFAULT_SINC = SincConstants()


@dataclass(frozen=True)
class BandBoundaries:
    """Band radii at time t: low band ends at beta, the mid/high split is gamma_band."""

    beta: float
    gamma_band: float
    t: float

    def __post_init__(self) -> None:
        if not (self.beta > 0 and self.gamma_band > 0 and self.t > 0):
            raise InputDomainError("band radii and time must be positive")
        if self.beta >= self.gamma_band:
            raise InvariantViolation(
                f"beta(t) = {self.beta} must lie below gamma(t) = {self.gamma_band}"
            )


def _check_radii(r: np.ndarray, allow_zero: bool) -> None:
    if not np.all(np.isfinite(r)):
        raise InputDomainError("radius must be finite")
    low_ok = r >= 0 if allow_zero else r > 0
    if not np.all(low_ok):
        bound = "r >= 0" if allow_zero else "r > 0"
        raise InputDomainError(f"radius must satisfy {bound}")


def eval_dispersion(params: ModelParams, r):
    """Dispersion rate f(r) = r * sqrt((mu r^2 + kappa)/(1 + delta r^(2 theta))).

    Vectorized over r; f(0) = 0 exactly.
    """
    arr = np.asarray(r, dtype=float)
    _check_radii(arr, allow_zero=True)
    ratio = (params.mu * arr**2 + params.kappa) / (
        1.0 + params.delta * arr ** (2.0 * params.theta)
    )
    out = arr * np.sqrt(ratio)
    return out if isinstance(r, np.ndarray) else float(out)


def dispersion_derivatives(params: ModelParams, r):
    """First and second derivatives (f'(r), f''(r)) of the dispersion rate.

    Closed forms obtained by differentiating the factored form f = r*sqrt(h)
    with h = (mu r^2 + kappa)/(1 + delta r^(2 theta)), which is free of the
    0/0 cancellation the raw quotient rule suffers near the origin.  Requires
    r > 0.
    """
    arr = np.asarray(r, dtype=float)
    _check_radii(arr, allow_zero=False)
    de, mu, ka, th = params.delta, params.mu, params.kappa, params.theta

    num = mu * arr**2 + ka
    den = 1.0 + de * arr ** (2.0 * th)
    num_p = 2.0 * mu * arr
    den_p = 2.0 * de * th * arr ** (2.0 * th - 1.0)
    num_pp = 2.0 * mu
    den_pp = 2.0 * de * th * (2.0 * th - 1.0) * arr ** (2.0 * th - 2.0)

    h = num / den
    h_p = (num_p * den - num * den_p) / den**2
    h_pp = (num_pp * den - num * den_pp) / den**2 - 2.0 * den_p * (
        num_p * den - num * den_p
    ) / den**3

    s = np.sqrt(h)
    s_p = h_p / (2.0 * s)
    s_pp = h_pp / (2.0 * s) - h_p**2 / (4.0 * s**3)

    f_p = s + arr * s_p
    f_pp = 2.0 * s_p + arr * s_pp
    if isinstance(r, np.ndarray):
        return f_p, f_pp
    return float(f_p), float(f_pp)


def epsilon0(params: ModelParams) -> float:
    """Radius below which f' stays above its explicit positive floor.

    epsilon0 = min((kappa / (2 (mu + kappa) delta theta))^(1/(2 theta)), 1);
    always in (0, 1].
    """
    base = params.kappa / (
        2.0 * (params.mu + params.kappa) * params.delta * params.theta
    )
    return float(min(base ** (1.0 / (2.0 * params.theta)), 1.0))


def derivative_floor(params: ModelParams) -> float:
    """Lower bound of f' on (0, epsilon0]: kappa / (2 sqrt(mu+kappa) (1+delta)^(3/2))."""
    return params.kappa / (
        2.0 * math.sqrt(params.mu + params.kappa) * (1.0 + params.delta) ** 1.5
    )


def second_derivative_bound(params: ModelParams) -> float:
    """Constant C with |f''(r)| <= C (1 + 1/r) on (0, epsilon0].

    Assembled from a triangle-inequality chain on f'' = g''/(2 sqrt(g)) -
    (g')^2/(4 g^(3/2)) with g = f^2, bounding each coefficient on (0, 1]:
    |g'| <= G1 * r and |g''| <= G2 there, while g >= kappa r^2 / (1+delta).
    """
    de, mu, ka, th = params.delta, params.mu, params.kappa, params.theta
    g1 = 4.0 * mu + 2.0 * ka + 2.0 * de * th * (mu + ka)
    g2 = (
        12.0 * mu
        + 2.0 * ka
        + 2.0 * de * th * abs(2.0 * th - 1.0) * (mu + ka)
        + 8.0 * de * th * (2.0 * mu + ka)
        + 8.0 * de**2 * th**2 * (mu + ka)
    )
    return g2 * math.sqrt(1.0 + de) / (2.0 * math.sqrt(ka)) + g1**2 * (
        1.0 + de
    ) ** 1.5 / (4.0 * ka**1.5)


def band_boundaries(params: ModelParams, sinc: SincConstants, t: float) -> BandBoundaries:
    """Band radii beta(t) = delta0/(sqrt(mu+kappa) t), gamma(t) = delta0/(sqrt(mu+kappa) log t).

    Requires t > e so the radii are ordered, and beta(t) <= 1 so that
    t * f(r) <= delta0 holds throughout the low band (checked at r = beta).
    """
    if not (math.isfinite(t) and t > math.e):
        raise PreconditionError(f"band boundaries need t > e, got t = {t}")
    root = math.sqrt(params.mu + params.kappa)
    beta = sinc.delta0 / (root * t)
    gamma_band = sinc.delta0 / (root * math.log(t))
    if beta > 1.0:
        raise PreconditionError(
            f"t = {t} too small: beta(t) = {beta} exceeds 1 for these coefficients"
        )
    phase = t * eval_dispersion(params, beta)
    if phase > sinc.delta0 * (1.0 + 1e-12):
        raise InvariantViolation(
            f"t*f(beta(t)) = {phase} exceeds delta0 = {sinc.delta0}"
        )
    return BandBoundaries(beta=beta, gamma_band=gamma_band, t=float(t))


def unit_sphere_area(dim: int) -> float:
    """Surface area omega_n of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2)."""
    if int(dim) != dim or dim < 1:
        raise InputDomainError(f"dimension must be an integer >= 1, got {dim}")
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)
