"""Joint asymptotics of permutation entropy and statistical complexity.

The pattern frequencies determine the normalized entropy H0*H and the
complexity C.  Their joint limit law depends on whether the true pattern
distribution is uniform:

  non-uniform: sqrt(n)-normal with a 2x2 covariance obtained from the
               frequency covariance by the delta method;
  uniform:     the linear terms vanish and n-scaled statistics follow a
               weighted chi-square law instead.
"""

import numpy as np

from ordpat import (
    acov_entropy_complexity,
    acov_entropy_diseq,
    acov_entropy_mixture,
    asymptotic_line,
    ec_point,
    gct_cov,
    gct_pmf,
    iid_cov_m3,
    norm_constants,
    qf_quantile,
    qf_sf,
    qf_weights,
    random_walk_cov_m3,
    standard_errors,
    uniform_scalings,
)

np.set_printoptions(precision=4, suppress=True)

# --- non-uniform regime: the random-walk point -------------------------
p_rw = np.array([1 / 4, 1 / 8, 1 / 8, 1 / 8, 1 / 8, 1 / 4])
h_norm, c = ec_point(p_rw)
print(f"random-walk point: H0*H = {h_norm:.4f}, C = {c:.4f}")

sigma = random_walk_cov_m3()
print("\ncovariance of (H, H((p+u)/2)):\n", acov_entropy_mixture(p_rw, sigma))
print("covariance of (H, D):\n", acov_entropy_diseq(p_rw, sigma))
s3 = acov_entropy_complexity(p_rw, sigma)
print("covariance of (H0*H, C):\n", s3)

# the same pattern distribution arises from the fair coin-tossing order,
# with a slightly different frequency covariance -- yet the transformed
# 2x2 matrices coincide
s3_ct = acov_entropy_complexity(p_rw, gct_cov(0.5, 3))
print("same from the coin-tossing covariance:", np.abs(s3 - s3_ct).max() < 1e-14)

se_h, se_c = standard_errors(p_rw, sigma, n=250)
print(f"\nstandard errors at n=250: H0*H +- {se_h:.4f}, C +- {se_c:.4f}")

intercept, slope = asymptotic_line(p_rw, sigma)
print(f"asymptotic line: C = {intercept:.3f} {slope:+.3f} * H0*H")

# a truly bivariate case: the p=0.25 coin-tossing order
p25 = gct_pmf(0.25, 3)
s3_25 = acov_entropy_complexity(p25, gct_cov(0.25, 3))
corr = s3_25[0, 1] / np.sqrt(s3_25[0, 0] * s3_25[1, 1])
print(f"\ncoin order p=0.25: correlation of the pair = {corr:.3f} (still almost a line)")

# --- uniform regime: weighted chi-square law ----------------------------
lam = qf_weights(iid_cov_m3())
print("\nuniform case weights (non-zero eigenvalues):", lam)
print("P(Q > 1.0) =", qf_sf(lam, 1.0).__round__(4), "   95% quantile =",
      qf_quantile(lam, 0.95).__round__(4))
sc = uniform_scalings(3)
h0, d0 = norm_constants(3)
print("scalings: n(H - ln 6, D) -> ", sc.hd, " * Q;  n(H/ln 6 - 1, C) ->",
      tuple(round(v, 4) for v in sc.hc), "* Q")
