import math

import numpy as np
import pytest

from rosenau import ModelParams
from rosenau.quadrature import (
    integrate_adaptive,
    panel_integrals,
    phase_resolved_edges,
    uniform_edges,
)

P = ModelParams(1.0, 1.0, 1.0, 2.0, 1)


def test_panel_integrals_polynomial_exact():
    # GL-16 integrates degree-31 polynomials exactly
    vals = panel_integrals(lambda x: x**7, np.array([0.0]), np.array([2.0]))
    assert vals[0] == pytest.approx(2.0**8 / 8.0, rel=1e-14)


def test_adaptive_gaussian_integral():
    val, err = integrate_adaptive(
        lambda x: np.exp(-(x**2)), uniform_edges(0.0, 12.0, 8), 1e-10
    )
    assert val == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)
    assert err <= 1e-8


def test_adaptive_oscillatory_against_closed_form():
    # integral_0^1 sin(omega x) dx = (1 - cos(omega))/omega
    omega = 2000.0
    edges = np.linspace(0.0, 1.0, 600)
    val, _ = integrate_adaptive(lambda x: np.sin(omega * x), edges, 1e-10)
    assert val == pytest.approx((1 - math.cos(omega)) / omega, abs=1e-12)


def test_phase_edges_resolve_periods():
    t = 1e4
    edges = phase_resolved_edges(P, t, 0.0, 3.0, points_per_period=8)
    # every panel must contain at most GL_ORDER/points_per_period periods
    from rosenau.model import dispersion_derivatives

    mids = 0.5 * (edges[1:] + edges[:-1])
    widths = np.diff(edges)
    fp, _ = dispersion_derivatives(P, mids)
    periods_per_panel = widths * t * np.abs(fp) / math.pi
    assert np.max(periods_per_panel) <= 16.0 / 8.0 + 0.2


def test_phase_edges_cover_interval():
    edges = phase_resolved_edges(P, 100.0, 0.5, 2.5, 8)
    assert edges[0] == 0.5 and edges[-1] == 2.5
    assert np.all(np.diff(edges) > 0)


def test_deterministic_repeatability():
    fn = lambda x: np.sin(37.0 * x) * np.exp(-x)  # noqa: E731
    edges = uniform_edges(0.0, 5.0, 16)
    a = integrate_adaptive(fn, edges, 1e-9)
    b = integrate_adaptive(fn, edges, 1e-9)
    assert a == b
