"""Long-run covariance of pattern frequencies: closed forms vs simulation.

sqrt(n) (p_hat - p) is asymptotically normal; the covariance sums lagged
joint pattern probabilities over all lags.  Closed forms exist for a few
processes; everything else uses a long simulated series plus a Newey-West
estimate on the one-hot pattern indicators.
"""

import numpy as np

from ordpat import (
    DgpSpec,
    HacScheme,
    gaussian_cov_m2,
    gct_cov,
    iid_cov_m3,
    increment_autocorr_ma_gaussian,
    random_walk_cov_m3,
    simulate_cov,
    truncation_lag,
)

np.set_printoptions(precision=3, suppress=True)

print("i.i.d. (m=3), exact:")
print(iid_cov_m3())
print("\nGaussian random walk (m=3), exact:")
print(random_walk_cov_m3())
print("\nfair coin-tossing order (m=3), exact:")
print(gct_cov(0.5, 3))

# every long-run covariance of frequencies has zero row sums: the
# frequencies sum to one, so their fluctuations cancel along (1,...,1)
print("\nrow sums:", iid_cov_m3().sum(axis=1))

# the m=2 Gaussian closed form needs only the increment autocorrelations
rho = increment_autocorr_ma_gaussian([0.6, -0.3])
print("\nGaussian MA(2) increment correlations:", np.round(rho, 4))
print("m=2 covariance:", gaussian_cov_m2(rho)[0, 0].round(5), "* [[1,-1],[-1,1]]")

# the simulation route: unit lag weights with the n^(1/5) truncation rule
scheme = HacScheme(weights="unit", rule="fifth_root")
n = 200_000
print(f"\ntruncation at n={n}: u = {truncation_lag(n, scheme)} lags")

spec = DgpSpec("iid_gaussian", {}, seed=11, length=n + 2)
approx = simulate_cov(spec, 3, scheme)
print("simulated i.i.d. estimate, max |error| vs exact:",
      np.abs(approx - iid_cov_m3()).max().round(4))

# processes without any closed form work the same way
spec = DgpSpec("qma1", {"theta": 0.8}, seed=12, length=n + 2)
print("\nquadratic MA(1) estimate (no closed form exists):")
print(simulate_cov(spec, 3, scheme))
