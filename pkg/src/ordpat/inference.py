"""Serial-dependence tests and uncertainty geometry in the entropy-complexity plane.

Under serial independence the pattern distribution is uniform, so the
n-scaled entropy-type statistics follow the weighted chi-square law built
from the exact i.i.d. long-run covariance; the three scalar statistics

    H  = n (2/m!) (ln m! - H(p^))
    HD = (n/m!) (ln m! - H(p^) + 4 D(p^))
    HC = (n/m!) (ln m! - H(p^) + (4/D0) C(p^))

share that null law, and rejection is upper-tailed.  n is the pattern
count T - m + 1.

Away from uniformity the normal asymptotics supply standard errors, the
local regression line of complexity on entropy, and one of two uncertainty
geometries: a quantile segment along the dominant eigenvector when the 2x2
covariance is (numerically) rank one, or a coverage ellipse when it is
truly bivariate.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, log

import numpy as np
from scipy import stats

from . import covariance, ecstats, generators, quadform
from .errors import InsufficientDataError, RegimeError, SingularModelError
from .patterns import pattern_series, relative_frequencies

__all__ = [
    "TestResult",
    "SegmentSpec",
    "EllipseSpec",
    "h_statistic",
    "hd_statistic",
    "hc_statistic",
    "null_cov",
    "null_weights",
    "dependence_test",
    "standard_errors",
    "asymptotic_line",
    "uniform_line",
    "segment_from_cov",
    "uncertainty_segment",
    "ellipse_from_cov",
    "uncertainty_ellipse",
    "mc_rejection_rate",
]

RANK_ONE_RATIO = 1e-6


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    kind: str
    n: int
    m: int
    weights_source: str
    level: float
    reject: bool

    def to_json(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "weights_source": self.weights_source,
            "level": self.level,
            "reject": self.reject,
        }


@dataclass(frozen=True)
class SegmentSpec:
    """Quantile segment: center point, unit direction, (prob, signed offset) list."""

    center: tuple[float, float]
    direction: tuple[float, float]
    offsets: tuple[tuple[float, float], ...]

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "direction": list(self.direction),
            "offsets": [[p, d] for p, d in self.offsets],
        }


@dataclass(frozen=True)
class EllipseSpec:
    """Coverage ellipse: semi-axes a >= b, rotation of the major axis (radians)."""

    center: tuple[float, float]
    semi_axes: tuple[float, float]
    rotation: float
    coverage: float

    def to_json(self) -> dict:
        return {
            "center": list(self.center),
            "semi_axes": list(self.semi_axes),
            "rotation": self.rotation,
            "coverage": self.coverage,
        }


# ---------------------------------------------------------------------------
# statistics and the null law
# ---------------------------------------------------------------------------


def h_statistic(freqs, n: int, m: int) -> float:
    d = factorial(int(m))
    return float(n * (2.0 / d) * (log(d) - ecstats.shannon_entropy(freqs)))


def hd_statistic(freqs, n: int, m: int) -> float:
    d = factorial(int(m))
    h = ecstats.shannon_entropy(freqs)
    dis = ecstats.disequilibrium(freqs)
    return float(n / d * (log(d) - h + 4.0 * dis))


def hc_statistic(freqs, n: int, m: int) -> float:
    d = factorial(int(m))
    _, d0 = ecstats.norm_constants(m)
    h = ecstats.shannon_entropy(freqs)
    c = ecstats.complexity(freqs)
    return float(n / d * (log(d) - h + 4.0 / d0 * c))


_STATISTICS = {"h": h_statistic, "hd": hd_statistic, "hc": hc_statistic}


def null_cov(m: int) -> np.ndarray:
    """Exact i.i.d. long-run covariance used as the null: m=3 closed form,
    m=2 the MA-coincident matrix (1/12)[[1,-1],[-1,1]]."""
    m = int(m)
    if m == 3:
        return covariance.iid_cov_m3()
    if m == 2:
        return covariance.iid_cov_m2()
    raise ValueError("no closed-form null covariance for m outside {2, 3}; pass sigma explicitly")


@lru_cache(maxsize=None)
def _null_weights_cached(m: int) -> tuple[float, ...]:
    return tuple(float(v) for v in quadform.qf_weights(null_cov(m)))


def null_weights(m: int) -> np.ndarray:
    """Weights of the null weighted-chi-square law for order m."""
    return np.asarray(_null_weights_cached(int(m)))


@lru_cache(maxsize=None)
def _critical_value(weights: tuple, prob: float) -> float:
    return quadform.qf_quantile(np.asarray(weights), prob)


def dependence_test(values, m: int = 3, kind: str = "hd", level: float = 0.05,
                    sigma=None) -> TestResult:
    """Test the null of serial independence on a value series.

    kind is "h", "hd", or "hc"; p-value is the upper tail of the weighted
    chi-square null law.  sigma overrides the null long-run covariance
    (required for m outside {2,3}).  n = T - m + 1 patterns.
    """
    kind = kind.lower()
    if kind not in _STATISTICS:
        raise ValueError(f"unknown statistic kind {kind!r}; expected h, hd, or hc")
    if not 0.0 < level <= 1.0:
        raise ValueError("level must be in (0, 1]")
    x = np.asarray(values, dtype=float)
    if x.size < m + 1:
        raise InsufficientDataError(f"need at least m+1 = {m + 1} observations")
    pats = pattern_series(x, m)
    freqs = relative_frequencies(pats, m)
    n = pats.size
    stat = _STATISTICS[kind](freqs, n, m)
    if sigma is None:
        weights = null_weights(m)
        source = f"exact i.i.d. closed form (m={m})"
    else:
        weights = quadform.qf_weights(sigma)
        source = "user-supplied covariance"
    p_value = quadform.qf_sf(weights, stat)
    return TestResult(
        statistic=stat,
        p_value=p_value,
        kind=kind,
        n=n,
        m=int(m),
        weights_source=source,
        level=float(level),
        reject=bool(p_value < level),
    )


# ---------------------------------------------------------------------------
# uncertainty in the entropy-complexity plane (non-uniform regime)
# ---------------------------------------------------------------------------


def standard_errors(p, sigma, n: int) -> tuple[float, float]:
    """(se of H0 H(p^), se of C(p^)) at sample size n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    s3 = ecstats.acov_entropy_complexity(p, sigma)
    return float(np.sqrt(s3[0, 0] / n)), float(np.sqrt(s3[1, 1] / n))


def asymptotic_line(p, sigma) -> tuple[float, float]:
    """(intercept, slope) of the asymptotic complexity-on-entropy line.

    C = C(p) + (s12/s11) (h - H0 H(p)) in the (H0 H, C) plane, where s are
    the entries of the normalized-pair covariance.
    """
    s3 = ecstats.acov_entropy_complexity(p, sigma)
    if s3[0, 0] <= 0 or not np.isfinite(s3[0, 0]):
        raise SingularModelError("entropy variance is degenerate; no regression line")
    slope = s3[0, 1] / s3[0, 0]
    h_norm, c = ecstats.ec_point(p)
    return float(c - slope * h_norm), float(slope)


def uniform_line(m: int) -> tuple[float, float]:
    """(intercept, slope) of the uniform-regime line through (1, 0):
    C = (ln m!/4) D0 (1 - H0 H)."""
    d = factorial(int(m))
    _, d0 = ecstats.norm_constants(m)
    k = (log(d) / 4.0) * d0
    return float(k), float(-k)


def segment_from_cov(center, cov2, n: int, probs=(0.1, 0.25, 0.5, 0.75, 0.9),
                     rank_tol: float = RANK_ONE_RATIO, force: bool = False) -> SegmentSpec:
    """Quantile segment from an explicit 2x2 asymptotic covariance.

    The segment runs along the dominant eigenvector of cov2/n through
    `center`; each prob maps to its normal quantile offset.  Rank-two
    inputs are rejected (the ellipse is the right geometry) unless
    force=True.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    probs = tuple(sorted(float(v) for v in probs))
    if any(not 0.0 < v < 1.0 for v in probs):
        raise ValueError("probs must lie in (0, 1)")
    vals, vecs = quadform.symmetric_eigen(cov2)
    if vals[0] <= 0:
        raise SingularModelError("covariance has no positive direction")
    if not force and vals[1] > rank_tol * vals[0]:
        raise RegimeError(
            f"covariance is not rank one (ratio {vals[1] / vals[0]:.2e}); "
            "use uncertainty_ellipse, or pass force=True"
        )
    direction = vecs[:, 0]
    if direction[0] < 0:
        direction = -direction
    sd = math.sqrt(vals[0] / n)
    offsets = tuple((prob, float(stats.norm.ppf(prob) * sd)) for prob in probs)
    return SegmentSpec(
        center=(float(center[0]), float(center[1])),
        direction=(float(direction[0]), float(direction[1])),
        offsets=offsets,
    )


def uncertainty_segment(p, sigma, n: int, probs=(0.1, 0.25, 0.5, 0.75, 0.9),
                        rank_tol: float = RANK_ONE_RATIO, force: bool = False) -> SegmentSpec:
    """Quantile segment of the entropy-complexity estimate at sample size n.

    Valid when the normalized-pair covariance at p is (numerically) rank
    one, which is the typical case: the estimates line up along a single
    direction.
    """
    s3 = ecstats.acov_entropy_complexity(p, sigma)
    return segment_from_cov(ecstats.ec_point(p), s3, n, probs, rank_tol, force)


def ellipse_from_cov(center, cov2, n: int, coverage: float = 0.95,
                     rank_tol: float = 1e-10, force: bool = False) -> EllipseSpec:
    """Coverage ellipse from an explicit 2x2 asymptotic covariance.

    {x : (x - center)' (cov2/n)^{-1} (x - center) <= chi2_2 ppf(coverage)};
    half-axes sqrt(q lambda_i / n) along the eigenvectors.  A rank-one
    covariance is rejected toward segment_from_cov unless force=True.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < coverage < 1.0:
        raise ValueError("coverage must be in (0, 1)")
    vals, vecs = quadform.symmetric_eigen(cov2)
    if not force and vals[1] <= rank_tol * max(vals[0], 0.0):
        raise RegimeError(
            "covariance is singular (rank one within tolerance); "
            "use uncertainty_segment, or pass force=True"
        )
    if vals[1] <= 0:
        raise SingularModelError("covariance is not positive definite")
    q = float(stats.chi2.ppf(coverage, df=2))
    a = math.sqrt(q * vals[0] / n)
    b = math.sqrt(q * vals[1] / n)
    major = vecs[:, 0]
    rotation = math.atan2(major[1], major[0])
    if rotation <= -math.pi / 2:
        rotation += math.pi
    elif rotation > math.pi / 2:
        rotation -= math.pi
    return EllipseSpec(
        center=(float(center[0]), float(center[1])),
        semi_axes=(float(a), float(b)),
        rotation=float(rotation),
        coverage=float(coverage),
    )


def uncertainty_ellipse(p, sigma, n: int, coverage: float = 0.95,
                        rank_tol: float = 1e-10, force: bool = False) -> EllipseSpec:
    """Coverage ellipse of the entropy-complexity estimate at sample size n."""
    s3 = ecstats.acov_entropy_complexity(p, sigma)
    return ellipse_from_cov(ecstats.ec_point(p), s3, n, coverage, rank_tol, force)


# ---------------------------------------------------------------------------
# Monte Carlo power harness
# ---------------------------------------------------------------------------


def _rejections(template: generators.DgpSpec, T: int, m: int, kind: str,
                crit: float, rep_range) -> int:
    count = 0
    d = factorial(m)
    stat_fn = _STATISTICS[kind]
    for r in rep_range:
        rep_seed = int(generators.derive_seed(template.seed, r).generate_state(1)[0])
        spec = generators.DgpSpec(template.kind, template.params, seed=rep_seed, length=T)
        values = generators.generate(spec)
        pats = values if spec.kind == "gct_patterns" else pattern_series(values, m)
        freqs = np.bincount(pats, minlength=d) / pats.size
        if stat_fn(freqs, pats.size, m) > crit:
            count += 1
    return count


def _worker(args) -> int:
    spec_json, T, m, kind, crit, start, stop = args
    template = generators.spec_from_json(spec_json)
    return _rejections(template, T, m, kind, crit, range(start, stop))


def mc_rejection_rate(dgp: generators.DgpSpec, T: int, m: int = 3, kind: str = "hd",
                      level: float = 0.05, reps: int = 2000, master_seed: int = 0,
                      workers: int | None = 1) -> float:
    """Fraction of replications rejecting at `level` (size under the null,
    power under an alternative).

    Each replication r draws its own stream from
    SeedSequence(master_seed, spawn_key=(r,)), so the result is
    deterministic for fixed master_seed and independent of `workers`.
    The seed and length of `dgp` are ignored (overridden per replication).
    """
    kind = kind.lower()
    if kind not in _STATISTICS:
        raise ValueError(f"unknown statistic kind {kind!r}")
    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if not 0.0 < level <= 1.0:
        raise ValueError("level must be in (0, 1]")
    if level == 1.0:
        return 1.0
    if dgp.kind == "gct_patterns" and int(dgp.params.get("m", 3)) != int(m):
        raise ValueError("pattern order of the GCT spec does not match m")
    template = generators.DgpSpec(dgp.kind, dgp.params, seed=int(master_seed), length=max(T, 1))
    crit = _critical_value(_null_weights_cached(int(m)), 1.0 - float(level))
    if workers is None:
        import os

        workers = os.cpu_count() or 1
    workers = max(1, int(workers))
    if workers == 1:
        hits = _rejections(template, int(T), int(m), kind, crit, range(reps))
    else:
        chunk = -(-reps // workers)
        jobs = [
            (generators.spec_to_json(template), int(T), int(m), kind, crit,
             start, min(start + chunk, reps))
            for start in range(0, reps, chunk)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(_worker, jobs))
    return hits / reps
