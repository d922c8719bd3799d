"""Long-run covariance of pattern frequencies.

sqrt(n) * (p_hat - p) is asymptotically normal with covariance

    sigma_ij = p_i (delta_ij - p_j) + sum_{k>=1} (p_ij(k) + p_ji(k) - 2 p_i p_j),

where p_ij(k) is the joint probability of pattern i at time 0 and pattern j
at lag k.  This module provides the known closed forms (i.i.d. and symmetric
random walk at m=3, equal-weight MA(q) and q-dependent Gaussian processes at
m=2, the generalized coin-tossing order at m=2,3) and a simulation +
Newey-West recipe for everything else.

Every closed-form matrix is symmetric, PSD, and has zero row sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from . import generators
from .errors import SingularModelError
from .patterns import pattern_series

__all__ = [
    "HacScheme",
    "iid_cov_m3",
    "random_walk_cov_m3",
    "ma_equal_cov_m2",
    "iid_cov_m2",
    "gaussian_cov_m2",
    "increment_autocorr_ma_gaussian",
    "gct_pmf",
    "gct_cov",
    "truncation_lag",
    "hac_estimate",
    "hac_from_patterns",
    "simulate_cov",
    "cov_to_json",
    "cov_from_json",
    "cov_to_csv",
]

RULES = ("textbook_cube_root", "fifth_root", "fixed")


@dataclass(frozen=True)
class HacScheme:
    """Kernel weights and truncation rule for the lagged-covariance sum.

    weights: "bartlett" (1 - k/u) or "unit" (1).
    rule: "textbook_cube_root" (floor(0.75 n^(1/3))), "fifth_root"
          (floor(n^(1/5))), or "fixed" with `fixed_u`.
    """

    weights: str = "unit"
    rule: str = "fifth_root"
    fixed_u: int | None = None

    def __post_init__(self):
        if self.weights not in ("bartlett", "unit"):
            raise ValueError(f"unknown weight scheme {self.weights!r}")
        if self.rule not in RULES:
            raise ValueError(f"unknown truncation rule {self.rule!r}")
        if self.rule == "fixed":
            if self.fixed_u is None or int(self.fixed_u) < 0:
                raise ValueError("fixed rule requires fixed_u >= 0")
            object.__setattr__(self, "fixed_u", int(self.fixed_u))

    def lag_weight(self, k: int, u: int) -> float:
        if self.weights == "bartlett":
            return 1.0 - k / u
        return 1.0


def truncation_lag(n: int, scheme: HacScheme) -> int:
    """Resolved truncation u for a sample of n vectors, clamped to [0, n-1].

    Integer arithmetic throughout: floor(0.75 n^(1/3)) is the largest u with
    64 u^3 <= 27 n, and floor(n^(1/5)) the largest u with u^5 <= n; float
    roots misrank exact cases such as n = 10^6.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if scheme.rule == "fixed":
        if scheme.fixed_u >= n:
            raise ValueError(f"fixed truncation u={scheme.fixed_u} must be < n={n}")
        return scheme.fixed_u
    if scheme.rule == "textbook_cube_root":
        u = int(round(0.75 * n ** (1.0 / 3.0)))
        while 64 * (u + 1) ** 3 <= 27 * n:
            u += 1
        while u > 0 and 64 * u**3 > 27 * n:
            u -= 1
    else:
        u = int(round(n ** (1.0 / 5.0)))
        while (u + 1) ** 5 <= n:
            u += 1
        while u > 0 and u**5 > n:
            u -= 1
    return max(0, min(u, n - 1))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

_IID_M3_NUM = [
    [46, -23, -23, 7, 7, -14],
    [-23, 28, 10, -20, -2, 7],
    [-23, 10, 28, -2, -20, 7],
    [7, -20, -2, 28, 10, -23],
    [7, -2, -20, 10, 28, -23],
    [-14, 7, 7, -23, -23, 46],
]

_SRW_M3_NUM = [
    [60, -6, -6, -6, -6, -36],
    [-6, 15, 7, -9, -1, -6],
    [-6, 7, 15, -1, -9, -6],
    [-6, -9, -1, 15, 7, -6],
    [-6, -1, -9, 7, 15, -6],
    [-36, -6, -6, -6, -6, 60],
]


def iid_cov_m3() -> np.ndarray:
    """Exact 6x6 long-run covariance for an i.i.d. process, m = 3 (entries k/360)."""
    return np.array(_IID_M3_NUM, dtype=float) / 360.0


def random_walk_cov_m3() -> np.ndarray:
    """Exact 6x6 long-run covariance for a symmetric random walk, m = 3 (entries k/192)."""
    return np.array(_SRW_M3_NUM, dtype=float) / 192.0


def ma_equal_cov_m2() -> np.ndarray:
    """Long-run covariance for an equal-weight MA(q), m = 2: (1/12) [[1,-1],[-1,1]].

    Independent of q and of the innovation law; coincides with the i.i.d. case.
    """
    return np.array([[1.0, -1.0], [-1.0, 1.0]]) / 12.0


def iid_cov_m2() -> np.ndarray:
    """i.i.d. long-run covariance at m = 2 (equals the MA(q) equal-weight matrix)."""
    return ma_equal_cov_m2()


def increment_autocorr_ma_gaussian(thetas, sigma2: float = 1.0) -> np.ndarray:
    """Increment autocorrelations rho(1..q+1) of a Gaussian MA(q) process.

    With gamma(k) = sigma2 * sum_{l=k}^q theta_l theta_{l-k} (theta_0 = 1),

        rho(k) = (2 gamma(k) - gamma(k+1) - gamma(k-1)) / (2 (gamma(0) - gamma(1))).

    sigma2 cancels; a zero denominator (gamma(0) = gamma(1)) is degenerate.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    if thetas.size < 1:
        raise ValueError("need q >= 1 moving-average weights")
    sigma2 = float(sigma2)
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    w = np.concatenate([[1.0], thetas])
    q = thetas.size

    def gamma(k):
        if k > q:
            return 0.0
        return sigma2 * float(np.dot(w[k:], w[: q + 1 - k]))

    denom = 2.0 * (gamma(0) - gamma(1))
    # denom = Var(increment) >= sigma2 whenever theta_0 = 1; guarded anyway
    if abs(denom) < 1e-14 * abs(sigma2):
        raise SingularModelError("increment variance vanishes: gamma(0) == gamma(1)")
    return np.array([(2 * gamma(k) - gamma(k + 1) - gamma(k - 1)) / denom for k in range(1, q + 2)])


def gaussian_cov_m2(rho) -> np.ndarray:
    """Long-run covariance at m = 2 for a q-dependent Gaussian increment process.

    rho holds the increment autocorrelations rho(1..q+1).  Each lag-k pair of
    comparisons is a bivariate-normal orthant event, so

        sigma_11 = 1/4 + (1/pi) * sum_k arcsin(rho(k)),

    and the matrix is sigma_11 * [[1,-1],[-1,1]].  (The factor 1/pi, not
    1/(2 pi): the lag sum adds p_ij(k) + p_ji(k), doubling each orthant term;
    with MA(1) weights this reproduces the equal-weight MA value 1/12.)
    """
    r = np.asarray(rho, dtype=float).ravel()
    if np.any(np.abs(r) > 1.0):
        raise ValueError("autocorrelations must lie in [-1, 1]")
    s11 = 0.25 + float(np.arcsin(r).sum()) / np.pi
    return s11 * np.array([[1.0, -1.0], [-1.0, 1.0]])


def gct_pmf(p: float, m: int) -> np.ndarray:
    """Pattern pmf of the coin-tossing order: (p, q) at m=2 and
    (p^2, p^2 q, p^2 q, p q^2, p q^2, q^2) at m=3, with q = 1 - p."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    q = 1.0 - p
    if m == 2:
        return np.array([p, q])
    if m == 3:
        return np.array([p * p, p * p * q, p * p * q, p * q * q, p * q * q, q * q])
    raise ValueError("closed-form pmf available for m in {2, 3}")


def gct_cov(p: float, m: int) -> np.ndarray:
    """Long-run covariance of the coin-tossing order at m = 2 or 3.

    m=2: p(1-p) [[1,-1],[-1,1]].  m=3: the 6x6 polynomial matrix in p,
    q = 1-p; the pattern process is 1-dependent so only the lag-1 joint
    probabilities contribute.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    q = 1.0 - p
    if m == 2:
        return p * q * np.array([[1.0, -1.0], [-1.0, 1.0]])
    if m != 3:
        raise ValueError("closed-form covariance available for m in {2, 3}")
    return np.array(
        [
            [p**2 * (1 + 2 * p - 3 * p**2), p**3 * q * (1 - 3 * p), p**3 * q * (1 - 3 * p),
             p**2 * q**2 * (1 - 3 * p), p**2 * q**2 * (1 - 3 * p), -3 * p**2 * q**2],
            [p**3 * q * (1 - 3 * p), p**2 * q * (1 - 3 * p**2 * q), p**3 * q * (1 - 3 * p * q),
             -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * p * q), p**2 * q**2 * (1 - 3 * q)],
            [p**3 * q * (1 - 3 * p), p**3 * q * (1 - 3 * p * q), p**2 * q * (1 - 3 * p**2 * q),
             p**2 * q**2 * (1 - 3 * p * q), -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * q)],
            [p**2 * q**2 * (1 - 3 * p), -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * p * q),
             p * q**2 * (1 - 3 * p * q**2), p * q**3 * (1 - 3 * p * q), p * q**3 * (3 * p - 2)],
            [p**2 * q**2 * (1 - 3 * p), p**2 * q**2 * (1 - 3 * p * q), -3 * p**3 * q**3,
             p * q**3 * (1 - 3 * p * q), p * q**2 * (1 - 3 * p * q**2), p * q**3 * (3 * p - 2)],
            [-3 * p**2 * q**2, p**2 * q**2 * (1 - 3 * q), p**2 * q**2 * (1 - 3 * q),
             p * q**3 * (3 * p - 2), p * q**3 * (3 * p - 2), p * q**2 * (4 - 3 * p)],
        ]
    )


def gct_cov_exact(p: Fraction, m: int = 3):
    """gct_cov with Fraction entries, for exact fixture comparisons."""
    p = Fraction(p)
    q = 1 - p
    if m == 2:
        return [[p * q, -p * q], [-p * q, p * q]]
    if m != 3:
        raise ValueError("m must be 2 or 3")
    return [
        [p**2 * (1 + 2 * p - 3 * p**2), p**3 * q * (1 - 3 * p), p**3 * q * (1 - 3 * p),
         p**2 * q**2 * (1 - 3 * p), p**2 * q**2 * (1 - 3 * p), -3 * p**2 * q**2],
        [p**3 * q * (1 - 3 * p), p**2 * q * (1 - 3 * p**2 * q), p**3 * q * (1 - 3 * p * q),
         -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * p * q), p**2 * q**2 * (1 - 3 * q)],
        [p**3 * q * (1 - 3 * p), p**3 * q * (1 - 3 * p * q), p**2 * q * (1 - 3 * p**2 * q),
         p**2 * q**2 * (1 - 3 * p * q), -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * q)],
        [p**2 * q**2 * (1 - 3 * p), -3 * p**3 * q**3, p**2 * q**2 * (1 - 3 * p * q),
         p * q**2 * (1 - 3 * p * q**2), p * q**3 * (1 - 3 * p * q), p * q**3 * (3 * p - 2)],
        [p**2 * q**2 * (1 - 3 * p), p**2 * q**2 * (1 - 3 * p * q), -3 * p**3 * q**3,
         p * q**3 * (1 - 3 * p * q), p * q**2 * (1 - 3 * p * q**2), p * q**3 * (3 * p - 2)],
        [-3 * p**2 * q**2, p**2 * q**2 * (1 - 3 * q), p**2 * q**2 * (1 - 3 * q),
         p * q**3 * (3 * p - 2), p * q**3 * (3 * p - 2), p * q**2 * (4 - 3 * p)],
    ]


# ---------------------------------------------------------------------------
# HAC estimation
# ---------------------------------------------------------------------------


def _finalize(sigma: np.ndarray, psd_clip: bool) -> np.ndarray:
    sigma = (sigma + sigma.T) / 2.0
    if psd_clip:
        vals, vecs = np.linalg.eigh(sigma)
        if vals.min() < 0.0:
            vals = np.clip(vals, 0.0, None)
            sigma = (vecs * vals) @ vecs.T
            sigma = (sigma + sigma.T) / 2.0
    return sigma


def hac_estimate(vectors, scheme: HacScheme = HacScheme(), psd_clip: bool = False) -> np.ndarray:
    """Newey-West estimate Omega_0 + sum_k w(k,u) (Omega_k + Omega_k^T).

    `vectors` is an (n, d) array; Omega_k is the lag-k sample covariance
    about the full-sample mean with divisor n.  The result is symmetrized;
    with psd_clip=True eigenvalues below -1e-8 are clipped to zero (the
    downstream eigen machinery needs a PSD input).
    """
    z = np.asarray(vectors, dtype=float)
    if z.ndim != 2:
        raise ValueError("expected an (n, d) array of observation vectors")
    n = z.shape[0]
    if n < 2:
        raise ValueError("need at least two observations")
    u = truncation_lag(n, scheme)
    zc = z - z.mean(axis=0)
    sigma = zc.T @ zc / n
    for k in range(1, u + 1):
        w = scheme.lag_weight(k, u)
        omega_k = zc[:-k].T @ zc[k:] / n
        sigma = sigma + w * (omega_k + omega_k.T)
    return _finalize(sigma, psd_clip)


class _PatternHacAccumulator:
    """Streaming pattern-count form of hac_estimate: O(u d^2) memory.

    For one-hot vectors the lag-k cross product matrix is the joint count
    N_k[i,j] = #{t : pattern_t = i, pattern_{t+k} = j}; the mean correction
    needs only the head/tail marginal counts, tracked exactly.
    """

    def __init__(self, d: int, u: int):
        self.d = d
        self.u = u
        self.n = 0
        self.joint = np.zeros((u + 1, d, d))
        self.counts = np.zeros(d)
        self.head = []  # first u pattern ids
        self.tail = np.empty(0, dtype=np.int64)

    def update(self, pats: np.ndarray) -> None:
        d, u = self.d, self.u
        ext = np.concatenate([self.tail, pats])
        off = self.tail.size
        self.counts += np.bincount(pats, minlength=d)
        self.joint[0] += np.bincount(pats * d + pats, minlength=d * d).reshape(d, d)
        for k in range(1, u + 1):
            lead = ext[max(off - k, 0) : ext.size - k]
            lag = ext[max(off - k, 0) + k :]
            self.joint[k] += np.bincount(lead * d + lag, minlength=d * d).reshape(d, d)
        if len(self.head) < u:
            self.head.extend(pats[: u - len(self.head)].tolist())
        self.tail = ext[max(ext.size - u, 0) :].copy()
        self.n += pats.size

    def finalize(self, scheme: HacScheme, psd_clip: bool) -> np.ndarray:
        n, d, u = self.n, self.d, self.u
        if n < 2:
            raise ValueError("need at least two observations")
        p_hat = self.counts / n
        sigma = self.joint[0] / n - np.outer(p_hat, p_hat)
        head = np.asarray(self.head[:u], dtype=np.int64)
        for k in range(1, u + 1):
            w = scheme.lag_weight(k, u)
            # head/tail marginals of the n-k lagged pairs
            lead_counts = self.counts - np.bincount(self.tail[-k:], minlength=d)
            lag_counts = self.counts - np.bincount(head[:k], minlength=d)
            omega = (
                self.joint[k]
                - np.outer(lead_counts, p_hat)
                - np.outer(p_hat, lag_counts)
                + (n - k) * np.outer(p_hat, p_hat)
            ) / n
            sigma = sigma + w * (omega + omega.T)
        return _finalize(sigma, psd_clip)


def hac_from_patterns(patterns, m: int, scheme: HacScheme = HacScheme(),
                      psd_clip: bool = False) -> np.ndarray:
    """hac_estimate of the one-hot binarised pattern series, via exact counts."""
    pats = np.asarray(patterns, dtype=np.int64)
    d = factorial(int(m))
    if pats.size and (pats.min() < 0 or pats.max() >= d):
        raise ValueError(f"pattern id out of range 0..{d - 1}")
    u = truncation_lag(max(pats.size, 1), scheme)
    acc = _PatternHacAccumulator(d, u)
    acc.update(pats)
    return acc.finalize(scheme, psd_clip)


def simulate_cov(spec: generators.DgpSpec, m: int, scheme: HacScheme = HacScheme(),
                 psd_clip: bool = False) -> np.ndarray:
    """Simulation-based long-run covariance estimate for an arbitrary process.

    Streams the process in chunks (memory independent of the length for a
    fixed truncation), converts values to patterns, and accumulates the
    Newey-West sums over exact pattern counts.  For `gct_patterns` the spec
    length is the pattern count n; for value processes it is the series
    length T, giving n = T - m + 1 patterns.
    """
    m = int(m)
    d = factorial(m)
    if spec.kind == "gct_patterns":
        if int(spec.params.get("m", 3)) != m:
            raise ValueError("pattern order of the spec does not match m")
        n_patterns = spec.length
    else:
        n_patterns = spec.length - m + 1
        if n_patterns < 2:
            raise ValueError("series too short for covariance estimation")
    u = truncation_lag(n_patterns, scheme)
    acc = _PatternHacAccumulator(d, u)
    if spec.kind == "gct_patterns":
        for pats in generators.iter_chunks(spec):
            acc.update(pats)
    else:
        carry = np.empty(0)
        for values in generators.iter_chunks(spec):
            block = np.concatenate([carry, values]) if carry.size else values
            if block.size >= m:
                acc.update(pattern_series(block, m))
                carry = block[-(m - 1) :].copy()
            else:
                carry = block
    return acc.finalize(scheme, psd_clip)


# ---------------------------------------------------------------------------
# serialization: JSON (row-major + dimension) and CSV
# ---------------------------------------------------------------------------


def cov_to_json(sigma: np.ndarray) -> dict:
    sigma = np.asarray(sigma, dtype=float)
    return {"dim": int(sigma.shape[0]), "entries": [float(v) for v in sigma.ravel()]}


def cov_from_json(obj) -> np.ndarray:
    d = int(obj["dim"])
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.size != d * d:
        raise ValueError(f"expected {d * d} entries, got {entries.size}")
    return entries.reshape(d, d)


def cov_to_csv(sigma: np.ndarray) -> str:
    sigma = np.asarray(sigma, dtype=float)
    return "\n".join(",".join(f"{v:.17g}" for v in row) for row in sigma) + "\n"
