"""Testing serial independence with entropy-type statistics.

Under the i.i.d. null the pattern distribution is uniform and the n-scaled
statistics H, HD, HC share a weighted chi-square null law (no nuisance
parameters: the test is distribution-free).  Rejection is upper-tailed.
"""

from ordpat import DgpSpec, dependence_test, generate, mc_rejection_rate

# a single test run on simulated data
x = generate(DgpSpec("iid_gaussian", {}, seed=21, length=500))
for kind in ("h", "hd", "hc"):
    res = dependence_test(x, m=3, kind=kind, level=0.05)
    print(f"i.i.d. data, {kind.upper():>2}: statistic {res.statistic:7.4f}  "
          f"p={res.p_value:.3f}  reject={res.reject}")

y = generate(DgpSpec("ar1", {"phi": 0.5}, seed=21, length=500))
res = dependence_test(y, m=3, kind="hd")
print(f"\nAR(1) data,  HD: statistic {res.statistic:7.4f}  p={res.p_value:.4g}  "
      f"reject={res.reject}")

# size and power by Monte Carlo: each replication generates a fresh series
# from a derived seed, so the study is reproducible and parallelizable
print("\nrejection rates at the 5% level (500 replications per cell):")
print(f"{'T':>6} {'i.i.d.':>8} {'AR(1)':>8} {'QMA(1)':>8} {'TEAR(1)':>8}")
dgps = {
    "i.i.d.": DgpSpec("iid_gaussian", {}, seed=0, length=8),
    "AR(1)": DgpSpec("ar1", {"phi": 0.5}, seed=0, length=8),
    "QMA(1)": DgpSpec("qma1", {"theta": 0.8}, seed=0, length=8),
    "TEAR(1)": DgpSpec("tear1", {"p_b": 0.15, "scale": 0.85}, seed=0, length=8),
}
for T in (100, 250, 500):
    rates = [
        mc_rejection_rate(spec, T, m=3, kind="hd", level=0.05, reps=500, master_seed=T + i)
        for i, spec in enumerate(dgps.values())
    ]
    print(f"{T:>6} " + " ".join(f"{r:8.3f}" for r in rates))
print("\nthe null rate stays near 0.05 while power grows with T")
