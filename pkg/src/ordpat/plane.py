"""Entropy-complexity plane geometry: attainable region and model trajectories.

The attainable (normalized entropy, complexity) region is bounded by two
curves.  The minimum-complexity curve comes from the one-parameter family
with a single large probability and the rest equal; the maximum-complexity
curve is the upper envelope over the families with z empty cells, one free
cell, and the remaining cells equal, z = 0 .. m!-2.  Both curves join
(0, 0) (one-point pmf) and (1, 0) (uniform pmf).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import ecstats
from .covariance import gct_pmf

__all__ = [
    "PlaneCurve",
    "boundary_curves",
    "gaussian_trajectory",
    "gct_trajectory",
    "curve_to_rows",
]


@dataclass(frozen=True)
class PlaneCurve:
    """Curve in the plane: h (normalized entropy) and c arrays plus a label."""

    h: np.ndarray
    c: np.ndarray
    label: str

    def interp(self, h_query) -> np.ndarray:
        """Piecewise-linear value of the curve at given entropy coordinates."""
        return np.interp(h_query, self.h, self.c)


def _ec_batch(pmfs: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """(H0 H, C) for each row of a stack of pmfs; vectorized over rows."""
    d = factorial(m)
    h0, d0 = ecstats.norm_constants(m)

    def h_rows(mat):
        out = np.zeros(mat.shape[0])
        mask = mat > 0
        vals = np.where(mask, mat, 1.0)
        out -= (np.where(mask, vals * np.log(vals), 0.0)).sum(axis=1)
        return out

    h = h_rows(pmfs)
    mid = (pmfs + 1.0 / d) / 2.0
    dis = h_rows(mid) - 0.5 * h - 0.5 * np.log(d)
    c = d0 * dis * h0 * h
    return h0 * h, c


def _alpha_grid(lo: float, hi: float, resolution: int) -> np.ndarray:
    """Uniform grid refined geometrically toward both endpoints."""
    base = np.linspace(lo, hi, resolution)
    span = hi - lo
    refine = span * 0.5 ** np.arange(2, 16)
    return np.unique(np.concatenate([base, lo + refine, hi - refine]))


def boundary_curves(m: int, resolution: int = 256) -> tuple[PlaneCurve, PlaneCurve]:
    """(lower, upper) complexity bounds over normalized entropy, for m in 2..6.

    Points are sorted by the entropy coordinate; between grid points the
    curves are meant to be interpolated linearly.
    """
    m = int(m)
    if not 2 <= m <= 6:
        raise ValueError("boundary curves supported for m in 2..6")
    resolution = int(resolution)
    if resolution < 10:
        raise ValueError("resolution must be >= 10")
    d = factorial(m)

    # minimum: one cell alpha in [1/d, 1], the others share the rest
    alphas = _alpha_grid(1.0 / d, 1.0, resolution)
    pmfs = np.empty((alphas.size, d))
    pmfs[:, 0] = alphas
    pmfs[:, 1:] = ((1.0 - alphas) / (d - 1))[:, None]
    h, c = _ec_batch(pmfs, m)
    order = np.argsort(h)
    lower = PlaneCurve(h=h[order], c=np.maximum(c[order], 0.0), label="lower")

    # maximum: envelope over z empty cells, one free cell in [0, 1/(d-z)],
    # the rest equal
    h_grid = np.linspace(0.0, 1.0, 4 * resolution)
    env = np.full(h_grid.size, -np.inf)
    for z in range(0, d - 1):
        free_hi = 1.0 / (d - z)
        alphas = _alpha_grid(0.0, free_hi, resolution)
        pmfs = np.zeros((alphas.size, d))
        pmfs[:, 0] = alphas
        if d - z - 1 > 0:
            pmfs[:, 1 : d - z] = ((1.0 - alphas) / (d - z - 1))[:, None]
        fh, fc = _ec_batch(pmfs, m)
        order = np.argsort(fh)
        fh, fc = fh[order], fc[order]
        # half-step tolerance so exact endpoints (h = 0, 1) stay covered
        # despite rounding in the family coordinates
        tol = 1e-9
        inside = (h_grid >= fh[0] - tol) & (h_grid <= fh[-1] + tol)
        vals = np.interp(h_grid[inside], fh, fc)
        env[inside] = np.maximum(env[inside], vals)
    known = np.isfinite(env)
    upper = PlaneCurve(h=h_grid[known], c=np.maximum(env[known], 0.0), label="upper")
    return lower, upper


def gaussian_trajectory(v_grid) -> PlaneCurve:
    """Trajectory of stationary Gaussian processes at m = 3.

    Their pattern pmf is (v, (1-2v)/4, (1-2v)/4, (1-2v)/4, (1-2v)/4, v) with
    v in (0, 1/2); v = 1/6 is the uniform pmf, v = 1/4 the random-walk point.
    """
    v = np.asarray(v_grid, dtype=float).ravel()
    if v.size == 0 or np.any(v <= 0.0) or np.any(v >= 0.5):
        raise ValueError("v values must lie in (0, 0.5)")
    pmfs = np.empty((v.size, 6))
    pmfs[:, 0] = pmfs[:, 5] = v
    pmfs[:, 1:5] = ((1.0 - 2.0 * v) / 4.0)[:, None]
    h, c = _ec_batch(pmfs, 3)
    return PlaneCurve(h=h, c=c, label="gaussian")


def gct_trajectory(p_grid) -> PlaneCurve:
    """Trajectory of the coin-tossing order at m = 3 over its coin parameter."""
    p = np.asarray(p_grid, dtype=float).ravel()
    if p.size == 0 or np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("p values must lie in (0, 1)")
    pmfs = np.stack([gct_pmf(v, 3) for v in p])
    h, c = _ec_batch(pmfs, 3)
    return PlaneCurve(h=h, c=c, label="gct")


def curve_to_rows(curve: PlaneCurve) -> list[tuple[float, float, str]]:
    """(h, c, label) rows for CSV-style serialization."""
    return [(float(h), float(c), curve.label) for h, c in zip(curve.h, curve.c)]
