"""Distribution of positively weighted sums of independent chi-square variables.

Q = sum_i lambda_i * chi2(1), with weights repeated per multiplicity, is the
limit law of the entropy-type statistics when the pattern distribution is
uniform.  The survival function is evaluated by numerical inversion of the
characteristic function (Imhof's single integral),

    P(Q > x) = 1/2 + (1/pi) * int_0^inf sin(theta(u)) / (u * rho(u)) du,
    theta(u) = (1/2) * sum_k arctan(lambda_k u) - x u / 2,
    rho(u)   = prod_k (1 + lambda_k^2 u^2)^(1/4),

with an adaptive head and Fourier-weighted tails.  Equal weights reduce Q
to an exact scaled chi-square and are dispatched to it; weights are scaled
to lambda_max = 1 first (the law is scale-equivariant), and a chi-square
lower bound short-circuits x so small that the answer is 1 within target
accuracy.  Absolute error target 1e-8.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, optimize, stats

__all__ = ["symmetric_eigen", "qf_weights", "qf_sf", "qf_cdf", "qf_quantile"]

_OMEGA_QAWF_MIN = 1e-7  # below this the tail is effectively non-oscillatory


def symmetric_eigen(matrix, sym_tol: float = 1e-8):
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues descending, eigenvectors as columns in the same
    order).  The input is symmetrized before factoring; asymmetry beyond
    `sym_tol` (relative to the largest entry) is rejected.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > sym_tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    vals, vecs = np.linalg.eigh((m + m.T) / 2.0)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def qf_weights(matrix, rel_tol: float = 1e-10) -> np.ndarray:
    """Non-negligible eigenvalues of a PSD matrix, descending, one per multiplicity.

    Eigenvalues with |lambda| <= rel_tol * max|lambda| are treated as zero
    (long-run covariance matrices are rank deficient by construction, and
    HAC estimates carry noisy near-zero eigenvalues).  A genuinely negative
    eigenvalue beyond that cut is rejected: the quadratic form is defined
    for non-negative weights only.
    """
    vals, _ = symmetric_eigen(matrix)
    cut = rel_tol * max(np.abs(vals).max(), np.finfo(float).tiny)
    if vals.min() < -cut:
        raise ValueError(
            f"matrix has a negative eigenvalue {vals.min():.3e}; "
            "not a valid PSD covariance (consider PSD clipping)"
        )
    lam = vals[vals > cut]
    if lam.size == 0:
        raise ValueError("matrix has no non-zero eigenvalues")
    return lam


def _checked_weights(weights) -> np.ndarray:
    lam = np.sort(np.asarray(weights, dtype=float).ravel())[::-1]
    if lam.size == 0:
        raise ValueError("empty weight list")
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise ValueError("weights must be positive finite reals")
    return lam


def _imhof_sf(lam: np.ndarray, x: float) -> float:
    """Imhof integral for scaled weights (lam[0] == 1), x > 0."""

    def envelope(u):
        return 1.0 / (u * np.prod((1.0 + (lam * u) ** 2) ** 0.25))

    def phase(u):
        return 0.5 * np.sum(np.arctan(lam * u))

    def integrand(u):
        if u == 0.0:
            return 0.5 * lam.sum() - 0.5 * x
        return np.sin(phase(u) - 0.5 * x * u) * envelope(u)

    omega = 0.5 * x
    # keep only a handful of oscillation periods in the adaptive head; the
    # Fourier-weighted tails take over from u0
    u0 = min(10.0, 10.0 / (1.0 + omega))
    head, _ = integrate.quad(integrand, 0.0, u0, limit=400, epsabs=1e-12, epsrel=1e-10)
    if omega < _OMEGA_QAWF_MIN:
        # oscillation negligible where the amplitude lives
        tail, _ = integrate.quad(integrand, u0, np.inf, limit=400, epsabs=1e-11)
    else:
        # sin(theta) = sin(phase) cos(omega u) - cos(phase) sin(omega u);
        # QAWF integrates the Fourier-weighted, algebraically decaying parts
        def amp_sin(u):
            return np.sin(phase(u)) * envelope(u)

        def amp_cos(u):
            return np.cos(phase(u)) * envelope(u)

        tail_cos, _ = integrate.quad(amp_sin, u0, np.inf, weight="cos", wvar=omega,
                                     limlst=200, limit=300, epsabs=1e-11)
        tail_sin, _ = integrate.quad(amp_cos, u0, np.inf, weight="sin", wvar=omega,
                                     limlst=200, limit=300, epsabs=1e-11)
        tail = tail_cos - tail_sin

    value = 0.5 + (head + tail) / np.pi
    return float(min(1.0, max(0.0, value)))


def qf_sf(weights, x: float) -> float:
    """P(Q > x) for Q = sum_k weights[k] * chi2(1)."""
    lam = _checked_weights(weights)
    x = float(x)
    if x <= 0.0:
        return 1.0  # all weights positive, so Q > 0 almost surely
    k = lam.size
    if lam[0] - lam[-1] <= 1e-14 * lam[0]:
        return float(stats.chi2.sf(x / lam[0], k))  # exact: Q = lam * chi2(k)
    # scale so lam_max = 1; the law satisfies sf(c lam, c x) = sf(lam, x)
    scale = lam[0]
    lam = lam / scale
    x = x / scale
    # Q >= lam_min chi2(k): if even that lower bound exceeds x with near
    # certainty, the answer is 1 within target accuracy
    if stats.chi2.cdf(x / lam[-1], k) < 1e-10:
        return 1.0
    return _imhof_sf(lam, x)


def qf_cdf(weights, x: float) -> float:
    """P(Q <= x)."""
    return 1.0 - qf_sf(weights, x)


def qf_quantile(weights, prob: float) -> float:
    """x with P(Q <= x) = prob.

    Brackets come from the exact stochastic bounds
    lam_max chi2(1) <= Q <= lam_max chi2(k), then Brent iteration.
    """
    lam = _checked_weights(weights)
    prob = float(prob)
    if not 0.0 < prob < 1.0:
        raise ValueError(f"prob must be in (0,1), got {prob}")
    k = lam.size
    if lam[0] - lam[-1] <= 1e-14 * lam[0]:
        return float(lam[0] * stats.chi2.ppf(prob, k))
    lo = float(lam[0] * stats.chi2.ppf(prob, 1))
    hi = float(lam[0] * stats.chi2.ppf(prob, k))

    def f(x):
        return qf_cdf(lam, x) - prob

    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0.0 or f_hi < 0.0:  # guard against quadrature noise at the ends
        lo *= 0.5
        hi *= 2.0
        f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    return float(optimize.brentq(f, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200))
