"""Panel-based quadrature tuned for integrands oscillating like sin(t f(r)).

The primitive is a composite 16-point Gauss-Legendre rule over an explicit
partition.  Two layers sit on top:

* ``phase_resolved_edges`` builds an initial partition whose panel widths
  track the local oscillation period pi/(t |f'(r)|), so that every period of
  sin^2(t f) receives at least ``points_per_period`` nodes;
* ``integrate_adaptive`` bisects panels until a width-proportional error
  allocation meets the requested relative tolerance.

Both layers are deterministic: the partition depends only on the inputs and
accepted panel contributions are summed in left-to-right order.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputDomainError
from .model import ModelParams, dispersion_derivatives

__all__ = [
    "GL_ORDER",
    "panel_integrals",
    "integrate_adaptive",
    "phase_resolved_edges",
    "uniform_edges",
]

GL_ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


_PANEL_CHUNK = 1 << 18


def panel_integrals(fn, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Gauss-Legendre estimate of the integral of fn over each [lo_i, hi_i].

    Evaluates in bounded chunks so huge phase-resolved partitions stay within
    memory; chunking does not change the per-panel results.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.empty(lo.shape, dtype=float)
    for start in range(0, lo.size, _PANEL_CHUNK):
        sl = slice(start, min(start + _PANEL_CHUNK, lo.size))
        mid = 0.5 * (lo[sl] + hi[sl])
        half = 0.5 * (hi[sl] - lo[sl])
        x = mid[:, None] + half[:, None] * _NODES[None, :]
        vals = np.asarray(fn(x.ravel()), dtype=float).reshape(x.shape)
        out[sl] = (vals @ _WEIGHTS) * half
    return out


def uniform_edges(lo: float, hi: float, panels: int) -> np.ndarray:
    return np.linspace(lo, hi, panels + 1)


def integrate_adaptive(
    fn,
    edges: np.ndarray,
    rel_tol: float,
    abs_tol: float = 0.0,
    max_rounds: int = 30,
) -> tuple[float, float]:
    """Integrate fn over the partition, bisecting panels until converged.

    A panel is accepted when |GL(panel) - GL(left half) - GL(right half)| is
    below the share of the global budget proportional to its width.  Returns
    (value, error_estimate).
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise InputDomainError("edges must be strictly increasing with >= 2 entries")
    total_len = edges[-1] - edges[0]

    pend_lo = edges[:-1].copy()
    pend_hi = edges[1:].copy()
    pend_coarse = panel_integrals(fn, pend_lo, pend_hi)

    acc_lo: list[np.ndarray] = []
    acc_val: list[np.ndarray] = []
    acc_err: list[np.ndarray] = []
    acc_sum = 0.0

    for _ in range(max_rounds):
        if pend_lo.size == 0:
            break
        mid = 0.5 * (pend_lo + pend_hi)
        left = panel_integrals(fn, pend_lo, mid)
        right = panel_integrals(fn, mid, pend_hi)
        fine = left + right
        err = np.abs(fine - pend_coarse)

        total_est = acc_sum + float(np.sum(fine))
        budget = max(rel_tol * abs(total_est), abs_tol, 1e-300)
        ok = err <= budget * (pend_hi - pend_lo) / total_len

        if np.any(ok):
            acc_lo.append(pend_lo[ok])
            acc_val.append(fine[ok])
            acc_err.append(err[ok])
            acc_sum += float(np.sum(fine[ok]))

        bad = ~ok
        pend_lo = np.concatenate([pend_lo[bad], mid[bad]])
        pend_hi = np.concatenate([mid[bad], pend_hi[bad]])
        pend_coarse = np.concatenate([left[bad], right[bad]])

    if pend_lo.size:
        # rounds exhausted: keep the deepest estimates, flag a pessimistic error
        acc_lo.append(pend_lo)
        acc_val.append(pend_coarse)
        acc_err.append(0.02 * np.abs(pend_coarse) + 1e-300)

    lo_all = np.concatenate(acc_lo) if acc_lo else np.empty(0)
    val_all = np.concatenate(acc_val) if acc_val else np.empty(0)
    err_all = np.concatenate(acc_err) if acc_err else np.empty(0)
    order = np.argsort(lo_all, kind="stable")
    value = float(np.sum(val_all[order]))
    err = float(np.sum(err_all[order]))
    return value, err


def phase_resolved_edges(
    params: ModelParams,
    t: float,
    lo: float,
    hi: float,
    points_per_period: int,
    max_width: float | None = None,
    base_points: int = 4096,
    safety: float = 0.8,
) -> np.ndarray:
    """Partition [lo, hi] so every oscillation of sin(t f) is node-resolved.

    The cumulative phase t * integral |f'| is sampled on a dense base grid
    and edges are placed at equal phase increments of safety * GL_ORDER * pi
    / points_per_period, guaranteeing >= points_per_period Gauss nodes per
    period of sin^2(t f).  A width cap keeps panels small where the phase is
    stationary (f' ~ 0) or t is small.
    """
    if hi <= lo:
        raise InputDomainError(f"need lo < hi, got [{lo}, {hi}]")
    if max_width is None:
        max_width = max((hi - lo) / 32.0, 1e-12)

    start = max(lo, 1e-14 * max(hi, 1.0))
    r = np.geomspace(start, hi, base_points)
    if lo < start:
        r = np.concatenate([[lo], r])
    fp, _ = dispersion_derivatives(params, np.maximum(r, start))
    speed = t * np.abs(fp)
    phase = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(r))])

    dphi = safety * GL_ORDER * math.pi / points_per_period
    n_phase = int(phase[-1] / dphi)
    if n_phase > 0:
        levels = np.arange(1, n_phase + 1) * dphi
        phase_edges = np.interp(levels, phase, r)
    else:
        phase_edges = np.empty(0)

    edges = np.unique(np.concatenate([[lo], phase_edges, [hi]]))
    edges = edges[(edges >= lo) & (edges <= hi)]
    if edges[0] != lo:
        edges = np.concatenate([[lo], edges])
    if edges[-1] != hi:
        edges = np.concatenate([edges, [hi]])

    widths = np.diff(edges)
    n_sub = np.maximum(1, np.ceil(widths / max_width).astype(int))
    if np.any(n_sub > 1):
        pieces = [np.array([edges[0]])]
        for a, w, k in zip(edges[:-1], widths, n_sub):
            pieces.append(a + w * np.arange(1, k + 1) / k)
        edges = np.concatenate(pieces)
    # drop degenerate panels produced by interpolation ties
    keep = np.concatenate([[True], np.diff(edges) > 0])
    return edges[keep]
