"""Entropy, disequilibrium, complexity, and their asymptotic covariances.

Natural logarithms throughout.  For a pattern pmf p of dimension d = m!:

    H(p) = -sum p_k ln p_k                       (0 ln 0 = 0)
    D(p) = H((p+u)/2) - H(p)/2 - ln(d)/2          (u uniform)
    C(p) = D0 D(p) * H0 H(p)

with H0 = 1/ln(d) and D0 the reciprocal of D at a one-point pmf, so both
normalized factors live in [0, 1].

When p is NOT uniform, the delta method propagates the normal asymptotics
of the frequency vector through these maps; the three 2x2 covariances are

    acov_entropy_mixture     for sqrt(n) (H(p^), H((p^+u)/2))   [unnormalized]
    acov_entropy_diseq       for sqrt(n) (H(p^), D(p^))          [unnormalized]
    acov_entropy_complexity  for sqrt(n) (H0 H(p^), C(p^))       [normalized pair]

At the uniform pmf the linear terms vanish and n-scaled statistics follow a
weighted chi-square law instead; `uniform_scalings` returns the scaling
vectors of that regime. Regime choice is the caller's: these functions
reject a (numerically) uniform p rather than guessing.
"""

from __future__ import annotations

from math import factorial, log
from typing import NamedTuple

import numpy as np

from .errors import RegimeError
from .quadform import qf_weights

__all__ = [
    "shannon_entropy",
    "norm_constants",
    "disequilibrium",
    "complexity",
    "ec_point",
    "is_effectively_uniform",
    "repair_zero_probs",
    "acov_entropy_mixture",
    "acov_entropy_diseq",
    "acov_entropy_complexity",
    "uniform_scalings",
    "UniformScalings",
    "qf_weights",
]

UNIFORM_EPS = 1e-9


def _check_pmf(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if p.size < 2:
        raise ValueError("pmf must have at least two entries")
    if np.any(p < -1e-12) or not np.all(np.isfinite(p)):
        raise ValueError("pmf entries must be non-negative finite reals")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"pmf entries must sum to 1, got {p.sum()!r}")
    return np.clip(p, 0.0, None)


def shannon_entropy(p) -> float:
    """H(p) = -sum p_k ln p_k with the 0 ln 0 = 0 convention."""
    p = _check_pmf(p)
    pos = p[p > 0]
    return float(-(pos * np.log(pos)).sum())


def norm_constants(m: int) -> tuple[float, float]:
    """(H0, D0): reciprocals of the entropy and disequilibrium maxima.

    H0 = 1/ln(m!); 1/D0 = -((m!+1)/(2 m!)) ln(m!+1) + ln(2 m!) - ln(m!)/2,
    the disequilibrium of a one-point pmf.
    """
    m = int(m)
    if m < 2:
        raise ValueError("m must be >= 2")
    d = factorial(m)
    h0 = 1.0 / log(d)
    d0_inv = -((d + 1) / (2 * d)) * log(d + 1) + log(2 * d) - 0.5 * log(d)
    return h0, 1.0 / d0_inv


def disequilibrium(p) -> float:
    """Jensen-Shannon divergence from the uniform pmf (unnormalized)."""
    p = _check_pmf(p)
    d = p.size
    mid = (p + 1.0 / d) / 2.0
    return float(shannon_entropy(mid) - 0.5 * shannon_entropy(p) - 0.5 * log(d))


def complexity(p) -> float:
    """Normalized statistical complexity C(p) = D0 D(p) * H0 H(p)."""
    p = _check_pmf(p)
    m = _order_of(p.size)
    h0, d0 = norm_constants(m)
    return d0 * disequilibrium(p) * h0 * shannon_entropy(p)


def ec_point(p) -> tuple[float, float]:
    """(normalized entropy, complexity) coordinates of a pmf."""
    p = _check_pmf(p)
    m = _order_of(p.size)
    h0, _ = norm_constants(m)
    return h0 * shannon_entropy(p), complexity(p)


def _order_of(d: int) -> int:
    m, f = 2, 2
    while f < d:
        m += 1
        f *= m
    if f != d:
        raise ValueError(f"pmf length {d} is not a factorial")
    return m


def is_effectively_uniform(p, eps: float = UNIFORM_EPS) -> bool:
    p = _check_pmf(p)
    return bool(np.abs(p - 1.0 / p.size).max() <= eps)


def repair_zero_probs(p, n: int) -> np.ndarray:
    """Continuity correction for plug-in frequency vectors with empty cells.

    Zero entries become 1/(2n) (half an observation) and the vector is
    renormalized; the log-based covariances below are singular at exact
    zeros.
    """
    p = _check_pmf(p)
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    out = np.where(p > 0, p, 0.5 / n)
    return out / out.sum()


def _check_regime(p, sigma, eps_uniform):
    p = _check_pmf(p)
    d = p.size
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (d, d):
        raise ValueError(f"covariance must be {d}x{d}")
    if is_effectively_uniform(p, eps_uniform):
        raise RegimeError(
            "pattern pmf is (numerically) uniform: the delta-method covariances "
            "degenerate; use the quadratic-form machinery (uniform_scalings, qf_sf)"
        )
    if np.any(p == 0.0):
        raise ValueError(
            "pmf has zero entries: log-derivatives are singular; "
            "see repair_zero_probs for the continuity correction"
        )
    return p, sigma


def acov_entropy_mixture(p, sigma, eps_uniform: float = UNIFORM_EPS) -> np.ndarray:
    """Asymptotic covariance of sqrt(n) (H(p^), H((p^+u)/2)), p non-uniform.

    Entries are double sums of log p_i / log((p_j + 1/d)/2) weights against
    sigma; the constant parts of the gradients drop because sigma's rows sum
    to zero.
    """
    p, sigma = _check_regime(p, sigma, eps_uniform)
    lp = np.log(p)
    lm = np.log((p + 1.0 / p.size) / 2.0)
    s11 = lp @ sigma @ lp
    s12 = 0.5 * (lp @ sigma @ lm)
    s22 = 0.25 * (lm @ sigma @ lm)
    return np.array([[s11, s12], [s12, s22]])


def acov_entropy_diseq(p, sigma, eps_uniform: float = UNIFORM_EPS) -> np.ndarray:
    """Asymptotic covariance of sqrt(n) (H(p^), D(p^)), p non-uniform.

    Computed from the direct double-sum form with log((p_j + 1/d)/(2 p_j))
    weights and cross-checked against the linear-map form
    B [[1,0],[-1/2,1]] applied to acov_entropy_mixture; the two must agree
    to rounding.
    """
    p, sigma = _check_regime(p, sigma, eps_uniform)
    lp = np.log(p)
    lr = np.log((p + 1.0 / p.size) / (2.0 * p))
    s11 = lp @ sigma @ lp
    s12 = 0.5 * (lp @ sigma @ lr)
    s22 = 0.25 * (lr @ sigma @ lr)
    direct = np.array([[s11, s12], [s12, s22]])

    b = np.array([[1.0, 0.0], [-0.5, 1.0]])
    via_mixture = b @ acov_entropy_mixture(p, sigma, eps_uniform) @ b.T
    scale = max(np.abs(direct).max(), 1e-30)
    if np.abs(direct - via_mixture).max() > 1e-9 * scale:
        raise AssertionError("internal cross-check failed: double-sum vs linear-map form")
    return direct


def acov_entropy_complexity(p, sigma, eps_uniform: float = UNIFORM_EPS) -> np.ndarray:
    """Asymptotic covariance of sqrt(n) (H0 H(p^), C(p^)), p non-uniform."""
    p, sigma = _check_regime(p, sigma, eps_uniform)
    m = _order_of(p.size)
    h0, d0 = norm_constants(m)
    s2 = acov_entropy_diseq(p, sigma, eps_uniform)
    hp = shannon_entropy(p)
    dp = disequilibrium(p)
    s11 = h0**2 * s2[0, 0]
    s12 = h0**2 * d0 * (dp * s2[0, 0] + hp * s2[0, 1])
    s22 = h0**2 * d0**2 * (dp**2 * s2[0, 0] + 2 * hp * dp * s2[0, 1] + hp**2 * s2[1, 1])
    return np.array([[s11, s12], [s12, s22]])


class UniformScalings(NamedTuple):
    """Scaling vectors of the n-scaled limits at the uniform pmf.

    n (H - ln m!, D)        -> hd * Q
    n (H/ln m! - 1, C)      -> hc * Q
    with Q the weighted chi-square limit of the frequency fluctuation.
    """

    hd: tuple[float, float]
    hc: tuple[float, float]


def uniform_scalings(m: int) -> UniformScalings:
    m = int(m)
    if m < 2:
        raise ValueError("m must be >= 2")
    d = factorial(m)
    _, d0 = norm_constants(m)
    return UniformScalings(
        hd=(-d / 2.0, d / 8.0),
        hc=(-d / (2.0 * log(d)), (d / 8.0) * d0),
    )
