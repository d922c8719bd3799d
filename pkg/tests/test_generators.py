"""Process generators: determinism, marginal fixtures, and the coin-tossing order."""

from math import factorial

import numpy as np
import pytest

from ordpat import (
    DgpSpec,
    derive_seed,
    gct_exact_pmf,
    gct_lag1_joint_m3,
    gct_pmf,
    gen_ar1,
    gen_iid_gaussian,
    generate,
    pattern_series,
    relative_frequencies,
    spec_from_json,
    spec_to_json,
)
from ordpat.generators import iter_chunks
from ordpat.repro import GCT_M4_EXPONENTS, gct_lag1_joint_reference


def freqs_of(spec, m):
    data = generate(spec)
    pats = data if spec.kind == "gct_patterns" else pattern_series(data, m)
    return relative_frequencies(pats, m)


class TestSpec:
    def test_json_round_trip(self):
        spec = DgpSpec("ma_gaussian", {"thetas": [0.5, -0.2], "mu": 1.0, "sigma": 2.0},
                       seed=9, length=100)
        again = spec_from_json(spec_to_json(spec))
        assert again == spec

    def test_validation(self):
        with pytest.raises(ValueError):
            DgpSpec("ar1", {"phi": 1.0}, seed=0, length=10)
        with pytest.raises(ValueError):
            DgpSpec("tear1", {"p_b": 0.0}, seed=0, length=10)
        with pytest.raises(ValueError):
            DgpSpec("gct_patterns", {"p": 1.5, "m": 3}, seed=0, length=10)
        with pytest.raises(ValueError):
            DgpSpec("gct_patterns", {"p": 0.5, "m": 5}, seed=0, length=10)
        with pytest.raises(ValueError):
            DgpSpec("ma_gaussian", {"thetas": [1.0], "sigma": 0.0}, seed=0, length=10)
        with pytest.raises(ValueError):
            DgpSpec("nope", {}, seed=0, length=10)

    def test_determinism_bitwise(self):
        for kind, params in [
            ("iid_gaussian", {}),
            ("ar1", {"phi": 0.5}),
            ("ma_equal", {"q": 3}),
            ("ma_gaussian", {"thetas": [0.7], "mu": 0.5, "sigma": 2.0}),
            ("qma1", {"theta": 0.8}),
            ("tear1", {"p_b": 0.15, "scale": 0.85}),
            ("random_walk_gaussian", {}),
            ("gct_patterns", {"p": 0.3, "m": 3}),
        ]:
            spec = DgpSpec(kind, params, seed=77, length=5000)
            assert np.array_equal(generate(spec), generate(spec)), kind

    def test_single_stream_kinds_chunk_invariant(self):
        # one raw draw stream per process: any chunking reproduces the
        # default stream exactly
        for kind, params in [
            ("iid_gaussian", {}),
            ("ar1", {"phi": 0.5}),
            ("ma_equal", {"q": 4}),
            ("ma_gaussian", {"thetas": [0.7, 0.1], "mu": 0.0, "sigma": 1.0}),
            ("qma1", {"theta": 0.8}),
            ("random_walk_gaussian", {}),
        ]:
            spec = DgpSpec(kind, params, seed=5, length=3500)
            chunked = np.concatenate(list(iter_chunks(spec, 997)))
            assert np.allclose(chunked, generate(spec), rtol=0, atol=1e-12), kind

    def test_tear1_chunk_carry_against_reference(self):
        # reference recursion consuming the same per-chunk draw layout
        p_b, scale, burn = 0.2, 0.8, 10_000
        spec = DgpSpec("tear1", {"p_b": p_b, "scale": scale}, seed=5, length=3500)
        chunk = 977
        got = np.concatenate(list(iter_chunks(spec, chunk)))
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
        x = 0.0
        ref = []
        blocks = [burn] + [chunk] * (3500 // chunk) + [3500 % chunk]
        for bi, size in enumerate(blocks):
            b = rng.random(size) < p_b
            eps = rng.standard_exponential(size)
            for t in range(size):
                x = (x if b[t] else 0.0) + scale * eps[t]
                if bi > 0:
                    ref.append(x)
        assert np.allclose(got, np.asarray(ref), rtol=0, atol=1e-10)

    def test_gct_chunk_carry_keeps_windows_consistent(self):
        # consecutive patterns share m-1 objects; the suffix order of one
        # window must equal the prefix order of the next even across chunk
        # boundaries
        from ordpat import lex_unrank

        def compact(ranks):
            return tuple(sorted(ranks).index(r) + 1 for r in ranks)

        for m in (3, 4):
            spec = DgpSpec("gct_patterns", {"p": 0.35, "m": m}, seed=6, length=4000)
            pats = np.concatenate(list(iter_chunks(spec, 313)))
            for t in range(pats.size - 1):
                left = lex_unrank(int(pats[t]), m)
                right = lex_unrank(int(pats[t + 1]), m)
                assert compact(left[1:]) == compact(right[:-1]), (m, t)

    def test_derive_seed_distinct(self):
        a = derive_seed(1, 0).generate_state(2)
        b = derive_seed(1, 1).generate_state(2)
        assert not np.array_equal(a, b)


class TestValueProcesses:
    def test_iid_moments_and_uniform_patterns(self):
        spec = DgpSpec("iid_gaussian", {}, seed=1, length=10**6)
        x = gen_iid_gaussian(spec)
        assert abs(x.mean()) < 0.005
        assert abs(x.var() - 1.0) < 0.01
        freqs = relative_frequencies(pattern_series(x, 3), 3)
        assert np.abs(freqs - 1 / 6).max() < 0.005

    def test_ar1_phi_zero_equals_iid(self):
        iid = generate(DgpSpec("iid_gaussian", {}, seed=3, length=4000))
        ar = gen_ar1(DgpSpec("ar1", {"phi": 0.0}, seed=3, length=4000))
        assert np.array_equal(iid, ar)

    def test_ar1_autocorrelation_and_patterns(self):
        x = generate(DgpSpec("ar1", {"phi": 0.5}, seed=4, length=10**6))
        acf1 = np.corrcoef(x[:-1], x[1:])[0, 1]
        assert abs(acf1 - 0.5) < 0.005
        freqs = relative_frequencies(pattern_series(x, 3), 3)
        ref = np.array([0.210, 0.145, 0.145, 0.145, 0.145, 0.210])
        assert np.abs(freqs - ref).max() < 0.005

    def test_ma_equal_q0_is_iid(self):
        iid = generate(DgpSpec("iid_gaussian", {}, seed=30, length=3000))
        ma0 = generate(DgpSpec("ma_equal", {"q": 0}, seed=30, length=3000))
        assert np.array_equal(iid, ma0)

    def test_ma_equal_increasing_probability_half(self):
        for q in (0, 2, 5):
            x = generate(DgpSpec("ma_equal", {"q": q}, seed=5 + q, length=10**6))
            freqs = relative_frequencies(pattern_series(x, 2), 2)
            assert abs(freqs[0] - 0.5) < 0.005, q

    def test_ma_equal_q1_m3_pattern_fixture(self):
        x = generate(DgpSpec("ma_equal", {"q": 1}, seed=8, length=10**6))
        freqs = relative_frequencies(pattern_series(x, 3), 3)
        ref = np.array([0.25, 0.125, 0.125, 0.125, 0.125, 0.25])
        assert np.abs(freqs - ref).max() < 0.005

    def test_ma_gaussian_autocovariances(self):
        thetas, sigma = [0.6, -0.3], 1.5
        spec = DgpSpec("ma_gaussian", {"thetas": thetas, "mu": 0.0, "sigma": sigma},
                       seed=9, length=10**6)
        x = generate(spec)
        w = np.array([1.0] + thetas)
        for k in range(4):
            expected = sigma**2 * float(np.dot(w[k:], w[: w.size - k])) if k < w.size else 0.0
            got = np.mean(x[: x.size - k] * x[k:]) - x.mean() ** 2
            assert abs(got - expected) < 0.02, k

    def test_ma_gaussian_equal_weights_matches_ma_equal_law(self):
        # same distribution, checked through pattern frequencies
        a = freqs_of(DgpSpec("ma_gaussian", {"thetas": [1.0], "mu": 0.0, "sigma": 1.0},
                             seed=10, length=10**6), 3)
        b = freqs_of(DgpSpec("ma_equal", {"q": 1}, seed=11, length=10**6), 3)
        assert np.abs(a - b).max() < 0.005

    def test_ma_equal_exponential_innovations(self):
        x = generate(DgpSpec("ma_equal", {"q": 1, "innovation": "exponential"},
                             seed=12, length=10**5))
        assert x.min() > 0.0
        assert abs(x.mean() - 2.0) < 0.05  # sum of two Exp(1)

    def test_qma1_moment_and_patterns(self):
        x = generate(DgpSpec("qma1", {"theta": 0.8}, seed=13, length=10**6))
        assert abs(x.mean() - 0.8) < 0.01  # E eps^2 = 1
        freqs = relative_frequencies(pattern_series(x, 3), 3)
        ref = np.array([0.150, 0.170, 0.180, 0.151, 0.142, 0.207])
        assert np.abs(freqs - ref).max() < 0.005
        y = generate(DgpSpec("qma1", {"theta": 0.0}, seed=13, length=10**5))
        assert np.abs(relative_frequencies(pattern_series(y, 3), 3) - 1 / 6).max() < 0.01

    def test_tear1_positive_and_pattern_fixture(self):
        x = generate(DgpSpec("tear1", {"p_b": 0.15, "scale": 0.85}, seed=14, length=10**6))
        assert x.min() > 0.0
        freqs = relative_frequencies(pattern_series(x, 3), 3)
        ref = np.array([0.218, 0.137, 0.148, 0.185, 0.174, 0.137])
        assert np.abs(freqs - ref).max() < 0.005

    def test_tear1_small_pb_near_iid_exponential(self):
        x = generate(DgpSpec("tear1", {"p_b": 1e-9, "scale": 1.0}, seed=15, length=10**5))
        assert abs(x.mean() - 1.0) < 0.02
        assert np.abs(relative_frequencies(pattern_series(x, 3), 3) - 1 / 6).max() < 0.01

    def test_random_walk_increments_recover_gaussian_stream(self):
        w = generate(DgpSpec("random_walk_gaussian", {}, seed=16, length=4000))
        z = generate(DgpSpec("iid_gaussian", {}, seed=16, length=4000))
        assert np.allclose(np.diff(w), z[1:], atol=1e-9)
        assert w[0] == z[0]

    def test_random_walk_pattern_fixtures(self):
        w = generate(DgpSpec("random_walk_gaussian", {}, seed=17, length=10**6))
        freqs3 = relative_frequencies(pattern_series(w, 3), 3)
        assert np.abs(freqs3 - np.array([0.25, 0.125, 0.125, 0.125, 0.125, 0.25])).max() < 0.005
        freqs2 = relative_frequencies(pattern_series(w, 2), 2)
        assert np.abs(freqs2 - 0.5).max() < 0.005


class TestCoinTossing:
    def test_exact_pmf_matches_closed_form(self):
        for p in (0.2, 0.5, 0.77):
            for m in (2, 3):
                assert np.abs(gct_exact_pmf(p, m) - gct_pmf(p, m)).max() < 1e-14

    def test_exact_pmf_m4_matches_monomial_table(self):
        for p in (0.3, 0.5, 0.7):
            q = 1 - p
            ref = np.array([p**a * q**b for a, b in GCT_M4_EXPONENTS])
            assert np.abs(gct_exact_pmf(p, 4) - ref).max() < 1e-14

    def test_exact_lag1_joint_matches_reference(self):
        for p in (0.25, 0.5, 0.66):
            assert np.abs(gct_lag1_joint_m3(p) - gct_lag1_joint_reference(p)).max() < 1e-14

    def test_sampled_frequencies_fair_and_biased(self):
        f_fair = freqs_of(DgpSpec("gct_patterns", {"p": 0.5, "m": 3}, seed=20, length=10**6), 3)
        assert np.abs(f_fair - np.array([0.25, 0.125, 0.125, 0.125, 0.125, 0.25])).max() < 0.005
        f_q = freqs_of(DgpSpec("gct_patterns", {"p": 0.25, "m": 3}, seed=21, length=10**6), 3)
        ref = np.array([1 / 16, 3 / 64, 3 / 64, 9 / 64, 9 / 64, 9 / 16])
        assert np.abs(f_q - ref).max() < 0.005

    def test_sampled_m2_and_m4(self):
        f2 = freqs_of(DgpSpec("gct_patterns", {"p": 0.3, "m": 2}, seed=22, length=10**6), 2)
        assert np.abs(f2 - np.array([0.3, 0.7])).max() < 0.005
        f4 = freqs_of(DgpSpec("gct_patterns", {"p": 0.6, "m": 4}, seed=23, length=10**6), 4)
        assert np.abs(f4 - gct_exact_pmf(0.6, 4)).max() < 0.003

    def test_consecutive_pairs_follow_lag1_joint(self):
        pats = generate(DgpSpec("gct_patterns", {"p": 0.4, "m": 3}, seed=24, length=10**6))
        joint = np.bincount(pats[:-1] * 6 + pats[1:], minlength=36).reshape(6, 6) / (pats.size - 1)
        assert np.abs(joint - gct_lag1_joint_m3(0.4)).max() < 0.003

    def test_lag_two_patterns_uncorrelated(self):
        pats = generate(DgpSpec("gct_patterns", {"p": 0.5, "m": 3}, seed=25, length=10**6))
        z = np.zeros((pats.size, 6))
        z[np.arange(pats.size), pats] = 1.0
        for lag in (2, 3):
            a = z[:-lag] - z.mean(axis=0)
            b = z[lag:] - z.mean(axis=0)
            cov = a.T @ b / a.shape[0]
            sd = z.std(axis=0)
            corr = cov / np.outer(sd, sd)
            assert np.abs(corr).max() < 0.005, lag

    def test_pattern_ids_always_valid(self):
        for m in (2, 3, 4):
            pats = generate(DgpSpec("gct_patterns", {"p": 0.8, "m": m}, seed=26, length=5000))
            assert pats.min() >= 0
            assert pats.max() < factorial(m)
