"""Uncertainty geometry inside the entropy-complexity plane.

The attainable (H0*H, C) region sits between a minimum and a maximum
complexity curve.  The asymptotics of the estimated pair give either a
quantile segment (when the 2x2 covariance is rank one, the generic case)
or a coverage ellipse (when it is truly bivariate), drawn around the
point of the process.
"""

import numpy as np

from ordpat import (
    RegimeError,
    boundary_curves,
    gaussian_trajectory,
    gct_cov,
    gct_pmf,
    gct_trajectory,
    random_walk_cov_m3,
    uncertainty_ellipse,
    uncertainty_segment,
)

# the attainable region for m=3; curves are (h, c) polylines ready for CSV
lower, upper = boundary_curves(3, resolution=128)
print(f"lower curve: {lower.h.size} points, apex of upper curve: "
      f"C = {upper.c.max():.4f} at H0*H = {upper.h[upper.c.argmax()]:.3f}")

# model trajectories: stationary Gaussian processes vs coin-tossing orders;
# they cross only at the random-walk / fair-coin point
g = gaussian_trajectory(np.linspace(0.01, 0.49, 97))
t = gct_trajectory(np.linspace(0.01, 0.99, 99))
print(f"gaussian trajectory spans h in [{g.h.min():.3f}, {g.h.max():.3f}]")
print(f"coin-toss trajectory spans h in [{t.h.min():.3f}, {t.h.max():.3f}]")

# random-walk point: the pair covariance is rank one, so the honest
# uncertainty picture is a segment with normal quantile marks
p_rw = np.array([1 / 4, 1 / 8, 1 / 8, 1 / 8, 1 / 8, 1 / 4])
seg = uncertainty_segment(p_rw, random_walk_cov_m3(), n=250)
print("\nrandom walk at n=250: segment through", tuple(round(v, 4) for v in seg.center))
print("  direction", tuple(round(v, 4) for v in seg.direction))
for prob, dist in seg.offsets:
    print(f"  q{int(prob * 100):02d} offset {dist:+.5f}")

# asking for the ellipse there is refused: the geometry would be degenerate
try:
    uncertainty_ellipse(p_rw, random_walk_cov_m3(), n=250)
except RegimeError as exc:
    print("ellipse refused:", str(exc).split(";")[0])

# the p=0.25 coin-tossing order has a truly bivariate limit: ellipses work
p25 = gct_pmf(0.25, 3)
for coverage in (0.5, 0.95):
    ell = uncertainty_ellipse(p25, gct_cov(0.25, 3), n=1000, coverage=coverage)
    print(f"coin order p=0.25, {int(coverage * 100)}% ellipse: semi-axes "
          f"({ell.semi_axes[0]:.5f}, {ell.semi_axes[1]:.5f}), "
          f"rotation {np.degrees(ell.rotation):.1f} deg")
