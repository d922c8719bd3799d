"""Reproduction checks: exact reference fixtures plus desk-scale Monte Carlo.

Each check_* function runs one verification at a documented tolerance and
returns a CheckResult; run_all executes the whole battery.  The acceptance
test suite calls the same functions, and `ordpat repro` prints the table.

All randomness is seeded inside the checks, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import log, sqrt

import numpy as np
from scipy import stats

from . import covariance, ecstats, generators, inference, patterns, plane, quadform

__all__ = ["CheckResult", "run_all"]

SRW_PMF = np.array([0.25, 0.125, 0.125, 0.125, 0.125, 0.25])

# sRW-point 2x2 covariances and their positive eigenvalues, as printed
REF_ACOV_MIXTURE = np.array([[0.1201, 0.0309], [0.0309, 0.0080]])
REF_ACOV_DISEQ = np.array([[0.1201, -0.0292], [-0.0292, 0.0071]])
REF_ACOV_COMPLEXITY = np.array([[0.0374, -0.0335], [-0.0335, 0.0300]])
REF_EIGS = (0.1281, 0.1272, 0.0674)

# coin-tossing pattern probabilities for m=4, exponents (a, b) of p^a q^b
# in lexicographic pattern order
GCT_M4_EXPONENTS = (
    (3, 0), (3, 1), (4, 1), (3, 2), (3, 2), (3, 2),
    (3, 1), (4, 2), (3, 2), (2, 3), (3, 3), (2, 3),
    (3, 2), (3, 3), (3, 2), (2, 3), (2, 4), (1, 3),
    (2, 3), (2, 3), (2, 3), (1, 4), (1, 3), (0, 3),
)


def gct_lag1_joint_reference(p: float) -> np.ndarray:
    """Printed joint pmf of consecutive m=3 patterns for the coin-tossing order."""
    q = 1.0 - p
    return np.array(
        [
            [p**3, p**3 * q, 0, p**2 * q**2, 0, 0],
            [0, 0, p**4 * q, 0, p**3 * q**2, p**2 * q**2],
            [p**3 * q, p**3 * q**2, 0, p**2 * q**3, 0, 0],
            [0, 0, p**3 * q**2, 0, p**2 * q**3, p * q**3],
            [p**2 * q**2, p**2 * q**3, 0, p * q**4, 0, 0],
            [0, 0, p**2 * q**2, 0, p * q**3, q**3],
        ]
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# 1. exact fixtures
# ---------------------------------------------------------------------------


def check_exact_fixtures() -> CheckResult:
    f = Fraction
    iid_num = [
        [46, -23, -23, 7, 7, -14], [-23, 28, 10, -20, -2, 7], [-23, 10, 28, -2, -20, 7],
        [7, -20, -2, 28, 10, -23], [7, -2, -20, 10, 28, -23], [-14, 7, 7, -23, -23, 46],
    ]
    srw_num = [
        [60, -6, -6, -6, -6, -36], [-6, 15, 7, -9, -1, -6], [-6, 7, 15, -1, -9, -6],
        [-6, -9, -1, 15, 7, -6], [-6, -1, -9, 7, 15, -6], [-36, -6, -6, -6, -6, 60],
    ]
    fair_num = [
        [20, -2, -2, -2, -2, -12], [-2, 5, 1, -3, 1, -2], [-2, 1, 5, 1, -3, -2],
        [-2, -3, 1, 5, 1, -2], [-2, 1, -3, 1, 5, -2], [-12, -2, -2, -2, -2, 20],
    ]
    quarter = [
        [f(21, 4**4), f(3, 4**5), f(3, 4**5), f(9, 4**5), f(9, 4**5), f(-27, 4**4)],
        [f(3, 4**5), f(165, 4**6), f(21, 4**6), f(-81, 4**6), f(63, 4**6), f(-45, 4**5)],
        [f(3, 4**5), f(21, 4**6), f(165, 4**6), f(63, 4**6), f(-81, 4**6), f(-45, 4**5)],
        [f(9, 4**5), f(-81, 4**6), f(63, 4**6), f(333, 4**6), f(189, 4**6), f(-135, 4**5)],
        [f(9, 4**5), f(63, 4**6), f(-81, 4**6), f(189, 4**6), f(333, 4**6), f(-135, 4**5)],
        [f(-27, 4**4), f(-45, 4**5), f(-45, 4**5), f(-135, 4**5), f(-135, 4**5), f(117, 4**4)],
    ]
    errs = [
        np.abs(covariance.iid_cov_m3() - np.array(iid_num) / 360.0).max(),
        np.abs(covariance.random_walk_cov_m3() - np.array(srw_num) / 192.0).max(),
        np.abs(covariance.gct_cov(0.5, 3) - np.array(fair_num) / 64.0).max(),
        np.abs(covariance.gct_cov(0.25, 3) - np.array(quarter, dtype=float)).max(),
    ]
    worst = max(errs)
    return _result("exact-fixtures", worst <= 1e-12, f"max entry error {worst:.2e} (tol 1e-12)")


# ---------------------------------------------------------------------------
# 2-4. transform fixtures at the random-walk / coin-tossing points
# ---------------------------------------------------------------------------


def check_det_acov_mixture_gct025() -> CheckResult:
    sigma = covariance.gct_cov(0.25, 3)
    pmf = covariance.gct_pmf(0.25, 3)
    det = float(np.linalg.det(ecstats.acov_entropy_mixture(pmf, sigma)))
    return _result(
        "det-acov-gct025", abs(det - 0.00184) <= 1e-4, f"det {det:.6f} vs 0.00184 (tol 1e-4)"
    )


def check_transform_fixtures() -> CheckResult:
    worst = 0.0
    for sigma in (covariance.random_walk_cov_m3(), covariance.gct_cov(0.5, 3)):
        s1 = ecstats.acov_entropy_mixture(SRW_PMF, sigma)
        s2 = ecstats.acov_entropy_diseq(SRW_PMF, sigma)
        s3 = ecstats.acov_entropy_complexity(SRW_PMF, sigma)
        for got, ref in ((s1, REF_ACOV_MIXTURE), (s2, REF_ACOV_DISEQ), (s3, REF_ACOV_COMPLEXITY)):
            worst = max(worst, np.abs(got - ref).max())
        for mat, eig_ref in zip((s1, s2, s3), REF_EIGS):
            top = np.linalg.eigvalsh(mat)[-1]
            worst = max(worst, abs(top - eig_ref))
    return _result(
        "transform-fixtures", worst <= 5e-4, f"max |error| {worst:.2e} (tol 5e-4)"
    )


def check_scalar_fixtures() -> CheckResult:
    h_norm, c = ecstats.ec_point(SRW_PMF)
    ok = abs(h_norm - 0.9671) <= 1e-4 and abs(c - 0.0306) <= 1e-4
    details = [f"H0H {h_norm:.5f}, C {c:.5f}"]
    for sigma in (covariance.random_walk_cov_m3(), covariance.gct_cov(0.5, 3)):
        intercept, slope = inference.asymptotic_line(SRW_PMF, sigma)
        ok &= abs(intercept - 0.896) <= 5e-3 and abs(slope + 0.895) <= 5e-3
    pmf = covariance.gct_pmf(0.25, 3)
    sigma = covariance.gct_cov(0.25, 3)
    intercept, slope = inference.asymptotic_line(pmf, sigma)
    ok &= abs(intercept - 0.497) <= 5e-3 and abs(slope + 0.434) <= 5e-3
    s3 = ecstats.acov_entropy_complexity(pmf, sigma)
    corr = s3[0, 1] / sqrt(s3[0, 0] * s3[1, 1])
    ok &= abs(corr + 0.983) <= 5e-3
    details.append(f"line025 ({intercept:.4f}, {slope:.4f}), corr {corr:.4f}")
    return _result("scalar-fixtures", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 5. simulated covariance reproduction
# ---------------------------------------------------------------------------


def check_hac_reproduction(n: int = 10**6) -> CheckResult:
    scheme = covariance.HacScheme(weights="unit", rule="fifth_root")
    cases = [
        ("iid", generators.DgpSpec("iid_gaussian", {}, seed=101, length=n + 2),
         covariance.iid_cov_m3()),
        ("srw", generators.DgpSpec("random_walk_gaussian", {}, seed=102, length=n + 2),
         covariance.random_walk_cov_m3()),
        ("gct", generators.DgpSpec("gct_patterns", {"p": 0.5, "m": 3}, seed=103, length=n),
         covariance.gct_cov(0.5, 3)),
    ]
    errs = []
    for name, spec, truth in cases:
        approx = covariance.simulate_cov(spec, 3, scheme)
        errs.append((name, np.abs(approx - truth).max()))
    worst = max(e for _, e in errs)
    detail = ", ".join(f"{name} {e:.4f}" for name, e in errs) + " (tol 0.01)"
    return _result("hac-reproduction", worst <= 0.01, detail)


# ---------------------------------------------------------------------------
# 6. coin-tossing simulator oracle
# ---------------------------------------------------------------------------


def check_gct_oracle(n: int = 10**6) -> CheckResult:
    worst_m4 = 0.0
    for i, p in enumerate((0.3, 0.5, 0.7)):
        spec = generators.DgpSpec("gct_patterns", {"p": p, "m": 4}, seed=200 + i, length=n)
        pats = generators.generate(spec)
        freqs = np.bincount(pats, minlength=24) / n
        q = 1.0 - p
        expected = np.array([p**a * q**b for a, b in GCT_M4_EXPONENTS])
        worst_m4 = max(worst_m4, np.abs(freqs - expected).max())
    worst_pair = 0.0
    for i, p in enumerate((0.3, 0.5, 0.7)):
        spec = generators.DgpSpec("gct_patterns", {"p": p, "m": 3}, seed=300 + i, length=n)
        pats = generators.generate(spec)
        joint = np.bincount(pats[:-1] * 6 + pats[1:], minlength=36).reshape(6, 6) / (n - 1)
        worst_pair = max(worst_pair, np.abs(joint - gct_lag1_joint_reference(p)).max())
    ok = worst_m4 <= 3e-3 and worst_pair <= 3e-3
    return _result(
        "gct-oracle", ok,
        f"m=4 freq error {worst_m4:.5f}, pair error {worst_pair:.5f} (tol 0.003)"
    )


# ---------------------------------------------------------------------------
# 7. size and power table
# ---------------------------------------------------------------------------

_TABLE2 = {
    "iid_gaussian": (None, None),
    "ar1": ({100: 0.25, 250: 0.61, 500: 0.93, 1000: 1.00}, 0.03),
    "qma1": ({100: 0.16, 250: 0.34, 500: 0.60, 1000: 0.89}, 0.04),
    "tear1": ({100: 0.25, 250: 0.53, 500: 0.83, 1000: 0.99}, 0.04),
}

_TABLE2_PARAMS = {
    "iid_gaussian": {},
    "ar1": {"phi": 0.5},
    "qma1": {"theta": 0.8},
    "tear1": {"p_b": 0.15, "scale": 0.85},
}


def check_table2(reps: int = 2000, workers: int | None = None) -> CheckResult:
    lines = []
    ok = True
    seed = 0
    for kind, (targets, tol) in _TABLE2.items():
        spec = generators.DgpSpec(kind, _TABLE2_PARAMS[kind], seed=0, length=8)
        for T in (100, 250, 500, 1000):
            for stat in ("hd", "hc"):
                seed += 1
                rate = inference.mc_rejection_rate(
                    spec, T, 3, stat, 0.05, reps, master_seed=7000 + seed, workers=workers
                )
                if targets is None:
                    good = 0.035 <= rate <= 0.065
                    target_txt = "size"
                else:
                    good = abs(rate - targets[T]) <= tol
                    target_txt = f"{targets[T]:.2f}"
                ok &= good
                if not good:
                    lines.append(f"{kind} T={T} {stat}: {rate:.3f} vs {target_txt}")
    detail = "all rates in band" if ok else "; ".join(lines)
    return _result("table2-power", ok, detail)


# ---------------------------------------------------------------------------
# 8. quadratic-form engine
# ---------------------------------------------------------------------------


def check_qf_engine(mc: int = 10**6) -> CheckResult:
    xs = np.linspace(0.05, 12.0, 20)
    chi_err = max(abs(quadform.qf_sf([1.0], x) - stats.chi2.sf(x, 1)) for x in xs)
    lam = quadform.qf_weights(covariance.iid_cov_m3())
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(400)))
    draws = rng.standard_normal((mc, lam.size)) ** 2 @ lam
    grid = np.quantile(draws, np.linspace(0.02, 0.98, 25))
    mc_sf = (draws[None, :] > grid[:, None]).mean(axis=1)
    an_sf = np.array([quadform.qf_sf(lam, x) for x in grid])
    sup = np.abs(mc_sf - an_sf).max()
    ok = chi_err <= 1e-6 and sup <= 5e-3
    return _result(
        "qf-engine", ok, f"chi2(1) error {chi_err:.2e} (tol 1e-6), MC sup {sup:.4f} (tol 0.005)"
    )


# ---------------------------------------------------------------------------
# 9. uniform-regime law
# ---------------------------------------------------------------------------


def check_uniform_law(reps: int = 10**4, T: int = 1000) -> CheckResult:
    m, d = 3, 6
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(500)))
    values = rng.standard_normal((reps, T))
    pats = patterns._pattern_series_batch(values, m)
    n = pats.shape[1]
    freqs = np.stack([(pats == k).sum(axis=1) for k in range(d)], axis=1) / n
    pos = np.where(freqs > 0, freqs, 1.0)
    h = -(np.where(freqs > 0, pos * np.log(pos), 0.0)).sum(axis=1)
    h_stats = n * (2.0 / d) * (log(d) - h)

    lam = quadform.qf_weights(covariance.iid_cov_m3())
    srt = np.sort(h_stats)
    grid = np.linspace(srt[0], srt[-1], 512)
    cdf_grid = np.array([quadform.qf_cdf(lam, x) for x in grid])
    cdf_vals = np.interp(srt, grid, cdf_grid)
    i = np.arange(1, reps + 1)
    ks = max(np.abs(i / reps - cdf_vals).max(), np.abs((i - 1) / reps - cdf_vals).max())

    # linear relations implied by the uniform-regime limits; residual is the
    # orthogonal distance to the limit line, range the extent of the points
    # projected onto it
    mid = (freqs + 1.0 / d) / 2.0
    h_mid = -(mid * np.log(mid)).sum(axis=1)
    diseq = h_mid - 0.5 * h - 0.5 * log(d)
    h0, d0 = ecstats.norm_constants(m)
    compl = d0 * diseq * h0 * h

    def line_fit(xy, direction):
        direction = direction / np.linalg.norm(direction)
        normal = np.array([-direction[1], direction[0]])
        proj = xy @ direction
        return np.abs(xy @ normal).max() / (proj.max() - proj.min())

    rel_hd = line_fit(np.stack([h - log(d), diseq], axis=1), np.array([-d / 2.0, d / 8.0]))
    slope_c = (log(d) / 4.0) * d0
    rel_hc = line_fit(np.stack([h0 * h - 1.0, compl], axis=1), np.array([1.0, -slope_c]))
    ok = ks <= 0.02 and rel_hd <= 0.02 and rel_hc <= 0.02
    return _result(
        "uniform-law", ok,
        f"KS {ks:.4f} (tol 0.02), line residuals {rel_hd:.4f}/{rel_hc:.4f} (tol 0.02)"
    )


# ---------------------------------------------------------------------------
# 10. non-uniform delta method
# ---------------------------------------------------------------------------


def check_delta_method(reps: int = 10**4, n: int = 10**4) -> CheckResult:
    p_coin, m, d = 0.25, 3, 6
    pmf = covariance.gct_pmf(p_coin, m)
    sigma = covariance.gct_cov(p_coin, m)
    s3 = ecstats.acov_entropy_complexity(pmf, sigma)
    h0, d0 = ecstats.norm_constants(m)
    mu = np.array(ecstats.ec_point(pmf))

    points = np.empty((reps, 2))
    for r in range(reps):
        spec = generators.DgpSpec(
            "gct_patterns", {"p": p_coin, "m": m},
            seed=int(generators.derive_seed(600, r).generate_state(1)[0]), length=n,
        )
        freqs = np.bincount(generators.generate(spec), minlength=d) / n
        h = ecstats.shannon_entropy(freqs)
        points[r, 0] = h0 * h
        points[r, 1] = d0 * ecstats.disequilibrium(freqs) * h0 * h
    scaled = sqrt(n) * (points - points.mean(axis=0))
    sample_cov = scaled.T @ scaled / (reps - 1)
    rel = np.abs(sample_cov - s3) / np.abs(s3)
    cov_ok = rel.max() <= 0.10

    q = stats.chi2.ppf(0.95, df=2)
    inv = np.linalg.inv(s3 / n)
    delta = points - mu
    dist = (delta @ inv * delta).sum(axis=1)
    coverage = float((dist <= q).mean())
    ok = cov_ok and 0.93 <= coverage <= 0.97
    return _result(
        "delta-method", ok,
        f"cov rel error {rel.max():.3f} (tol 0.10), ellipse coverage {coverage:.3f} "
        f"(band [0.93, 0.97])"
    )


# ---------------------------------------------------------------------------
# 11. property battery
# ---------------------------------------------------------------------------


def check_properties() -> CheckResult:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(700)))
    problems = []

    # pmf normalization over random pattern series
    for _ in range(20):
        pats = rng.integers(0, 6, size=rng.integers(1, 500))
        freqs = patterns.relative_frequencies(pats, 3)
        if abs(freqs.sum() - 1.0) > 1e-12 or freqs.min() < 0:
            problems.append("pmf normalization")
            break

    # closed-form covariance identities
    mats = [covariance.iid_cov_m3(), covariance.random_walk_cov_m3(),
            covariance.ma_equal_cov_m2()]
    mats += [covariance.gct_cov(p, 3) for p in np.linspace(0.1, 0.9, 9)]
    for mat in mats:
        if np.abs(mat.sum(axis=1)).max() > 1e-8:
            problems.append("row sums")
        if np.abs(mat - mat.T).max() > 1e-10:
            problems.append("symmetry")
        if np.linalg.eigvalsh(mat).min() < -1e-8:
            problems.append("PSD")

    # monotone-transform invariance of patterns
    x = rng.standard_normal(512)
    base = patterns.pattern_series(x, 3)
    for transform in (np.exp, np.arctan, lambda v: v**3 + 2.0 * v):
        if not np.array_equal(base, patterns.pattern_series(transform(x), 3)):
            problems.append("monotone invariance")
            break

    # rank-1 mixture covariance at m=2 on randomized inputs
    for _ in range(25):
        a = rng.uniform(0.05, 0.95)
        if abs(a - 0.5) < 0.01:
            continue
        c = rng.uniform(0.01, 1.0)
        sig = c * np.array([[1.0, -1.0], [-1.0, 1.0]])
        s1 = ecstats.acov_entropy_mixture(np.array([a, 1 - a]), sig)
        if abs(np.linalg.det(s1)) > 1e-12:
            problems.append("m=2 determinant")
            break

    # permutation equivariance of the entropy family
    pmf = covariance.gct_pmf(0.25, 3)
    sigma = covariance.gct_cov(0.25, 3)
    perm = rng.permutation(6)
    h_ref = ecstats.shannon_entropy(pmf)
    c_ref = ecstats.complexity(pmf)
    s3_ref = ecstats.acov_entropy_complexity(pmf, sigma)
    s3_perm = ecstats.acov_entropy_complexity(pmf[perm], sigma[np.ix_(perm, perm)])
    if abs(ecstats.shannon_entropy(pmf[perm]) - h_ref) > 1e-12 \
            or abs(ecstats.complexity(pmf[perm]) - c_ref) > 1e-12 \
            or np.abs(s3_perm - s3_ref).max() > 1e-12:
        problems.append("permutation equivariance")

    # qf_sf monotone in x and scale-equivariant
    lam = quadform.qf_weights(covariance.iid_cov_m3())
    xs = np.linspace(0.0, 6.0, 25)
    sf = [quadform.qf_sf(lam, x) for x in xs]
    if np.any(np.diff(sf) > 1e-10) or sf[0] != 1.0:
        problems.append("qf monotonicity")
    for c in (0.5, 3.0):
        if abs(quadform.qf_sf(c * lam, c * 2.0) - quadform.qf_sf(lam, 2.0)) > 1e-8:
            problems.append("qf scaling")
            break

    # random pmfs stay inside the boundary curves
    lower, upper = plane.boundary_curves(3, 256)
    draws = rng.dirichlet(np.ones(6), size=10**4)
    h_all, c_all = plane._ec_batch(draws, 3)
    if np.any(c_all > upper.interp(h_all) + 1e-3) or np.any(c_all < lower.interp(h_all) - 1e-3):
        problems.append("boundary containment")

    ok = not problems
    return _result("property-suite", ok, "all properties hold" if ok else "; ".join(problems))


# ---------------------------------------------------------------------------


def run_all(reps: int = 2000, hac_n: int = 10**6, mc_reps: int = 10**4,
            workers: int | None = None) -> list[CheckResult]:
    return [
        check_exact_fixtures(),
        check_det_acov_mixture_gct025(),
        check_transform_fixtures(),
        check_scalar_fixtures(),
        check_hac_reproduction(hac_n),
        check_gct_oracle(),
        check_table2(reps, workers),
        check_qf_engine(),
        check_uniform_law(mc_reps),
        check_delta_method(mc_reps),
        check_properties(),
    ]
