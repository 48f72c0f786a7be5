"""Pointwise decay certificates used for certified integral truncation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputDomainError

__all__ = ["TailBound"]


@dataclass(frozen=True)
class TailBound:
    """Certified pointwise bound on a radial profile away from the origin.

    kind "gaussian": |g(r)| <= amplitude * exp(-rate r^2) for all r;
    kind "compact":  g(r) = 0 for r > cutoff;
    kind "power":    |g(r)| <= amplitude / r^power for r >= cutoff;
    kind "none":     no certificate available.
    """

    kind: str
    amplitude: float = 0.0
    rate: float = 0.0
    cutoff: float = 0.0
    power: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "compact", "power", "none"):
            raise InputDomainError(f"unknown tail kind {self.kind!r}")
        if self.kind == "gaussian" and self.rate <= 0:
            raise InputDomainError("gaussian tail needs a positive rate")
        if self.kind == "power" and (self.power <= 0 or self.cutoff <= 0):
            raise InputDomainError("power tail needs positive power and cutoff")

    def mass_beyond(self, r0: float, dim: int) -> float:
        """Upper bound on integral_{r0}^inf |g(r)|^2 r^(dim-1) dr."""
        from scipy.special import gammaincc, gamma as sp_gamma

        if self.kind == "compact":
            return 0.0
        if self.kind == "gaussian":
            s = 2.0 * self.rate
            half = dim / 2.0
            # integral_{r0}^inf e^{-s r^2} r^(n-1) dr = Gamma(n/2, s r0^2) / (2 s^(n/2))
            return float(
                self.amplitude**2
                * sp_gamma(half)
                * gammaincc(half, s * r0**2)
                / (2.0 * s**half)
            )
        if self.kind == "power":
            expo = dim - 2.0 * self.power
            if expo >= 0:
                return math.inf
            r_eff = max(r0, self.cutoff)
            return float(self.amplitude**2 * r_eff**expo / (-expo))
        return math.inf

    def weighted_l1_converges(self, dim: int, weight_power: float = 0.0) -> bool:
        """Whether integral |g(r)| r^(dim-1+weight_power) dr converges at infinity."""
        if self.kind in ("compact", "gaussian"):
            return True
        if self.kind == "power":
            return self.power > dim + weight_power
        return False
