"""Seedable generators for the bundled data-generating processes.

Every generator is driven by a DgpSpec and is bit-for-bit reproducible:
the PRNG is numpy's PCG64 seeded through SeedSequence(spec.seed), values
are produced in fixed chunks of CHUNK samples, and per-replication streams
are derived via derive_seed(master, r) = SeedSequence(master, spawn_key=(r,)).

Value processes return float arrays of length spec.length; the coin-tossing
order ("gct_patterns") returns a pattern-id series of that length directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Iterator, Mapping

import numpy as np

from .patterns import lex_rank

CHUNK = 1 << 20
_TEAR_BURN_IN = 10_000

KINDS = (
    "iid_gaussian",
    "ar1",
    "ma_equal",
    "ma_gaussian",
    "qma1",
    "tear1",
    "random_walk_gaussian",
    "gct_patterns",
)

__all__ = [
    "DgpSpec",
    "KINDS",
    "derive_seed",
    "generate",
    "iter_chunks",
    "gen_iid_gaussian",
    "gen_ar1",
    "gen_ma_equal",
    "gen_ma_gaussian",
    "gen_qma1",
    "gen_tear1",
    "gen_random_walk",
    "gen_gct_patterns",
    "gct_exact_pmf",
    "gct_lag1_joint_m3",
    "spec_to_json",
    "spec_from_json",
]


@dataclass(frozen=True)
class DgpSpec:
    """Tagged description of a data-generating process.

    params by kind:
      iid_gaussian          {}
      ar1                   {"phi": float with |phi| < 1}
      ma_equal              {"q": int >= 0, "innovation": "normal"|"exponential"}
      ma_gaussian           {"thetas": [theta_1..theta_q], "mu": float, "sigma": float > 0}
      qma1                  {"theta": float}
      tear1                 {"p_b": float in (0,1), "scale": float}
      random_walk_gaussian  {}
      gct_patterns          {"p": float in (0,1), "m": 2|3|4}
    """

    kind: str
    params: Mapping = field(default_factory=dict)
    seed: int = 0
    length: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown DGP kind {self.kind!r}; expected one of {KINDS}")
        if int(self.length) < 1:
            raise ValueError("length must be positive")
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "seed", int(self.seed) & (2**64 - 1))
        object.__setattr__(self, "params", dict(self.params))
        _VALIDATORS[self.kind](self.params)


def _v_none(params):
    pass


def _v_ar1(params):
    phi = float(params.get("phi", 0.0))
    if not abs(phi) < 1:
        raise ValueError(f"ar1 requires |phi| < 1, got {phi}")


def _v_ma_equal(params):
    q = int(params.get("q", 0))
    if q < 0:
        raise ValueError("ma_equal requires q >= 0")
    law = params.get("innovation", "normal")
    if law not in ("normal", "exponential"):
        raise ValueError(f"unknown innovation law {law!r}")


def _v_ma_gaussian(params):
    thetas = list(params.get("thetas", []))
    if len(thetas) < 1:
        raise ValueError("ma_gaussian requires at least one theta")
    if float(params.get("sigma", 1.0)) <= 0:
        raise ValueError("ma_gaussian requires sigma > 0")


def _v_tear1(params):
    p_b = float(params.get("p_b", 0.15))
    if not 0 < p_b < 1:
        raise ValueError(f"tear1 requires p_b in (0,1), got {p_b}")


def _v_gct(params):
    p = float(params.get("p", 0.5))
    if not 0 < p < 1:
        raise ValueError(f"gct_patterns requires p in (0,1), got {p}")
    m = int(params.get("m", 3))
    if m not in (2, 3, 4):
        raise ValueError(f"gct_patterns supports m in {{2,3,4}}, got {m}")


_VALIDATORS = {
    "iid_gaussian": _v_none,
    "ar1": _v_ar1,
    "ma_equal": _v_ma_equal,
    "ma_gaussian": _v_ma_gaussian,
    "qma1": _v_none,
    "tear1": _v_tear1,
    "random_walk_gaussian": _v_none,
    "gct_patterns": _v_gct,
}


def derive_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    """Per-replication seed stream: SeedSequence(master, spawn_key=(index,))."""
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))


def _rng(spec: DgpSpec) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))


# ---------------------------------------------------------------------------
# chunked production; generate() is the concatenation of iter_chunks(), so a
# streaming consumer sees exactly the same stream
# ---------------------------------------------------------------------------


def iter_chunks(spec: DgpSpec, chunk: int | None = None) -> Iterator[np.ndarray]:
    """Yield the output of `spec` in order, in arrays of at most `chunk` values.

    The canonical stream is the one produced at the module default CHUNK;
    generate() is its concatenation.  For processes that interleave several
    raw draw streams per chunk (tear1, gct_patterns), a non-default `chunk`
    reorders raw PRNG draws across boundaries and therefore yields a
    different (equally distributed) realization; single-stream processes
    produce identical values for every chunk size.
    """
    if chunk is None:
        chunk = CHUNK
    if chunk < 1:
        raise ValueError("chunk must be positive")
    if spec.kind == "gct_patterns":
        yield from _gct_chunks(spec, chunk)
        return
    rng = _rng(spec)
    total = spec.length
    produced = 0
    state = _init_state(spec, rng)
    while produced < total:
        take = min(chunk, total - produced)
        vals = _next_values(spec, rng, state, take)
        produced += take
        yield vals


def generate(spec: DgpSpec) -> np.ndarray:
    """Full output series for a spec (float values, or int64 pattern ids for GCT)."""
    parts = list(iter_chunks(spec))
    return parts[0] if len(parts) == 1 else np.concatenate(parts)


def _init_state(spec: DgpSpec, rng: np.random.Generator) -> dict:
    p = spec.params
    if spec.kind == "ar1":
        phi = float(p.get("phi", 0.0))
        # stationary start; with phi = 0 this is the first i.i.d. draw itself,
        # so ar1(phi=0) equals iid_gaussian at the same seed bit-for-bit
        return {"last": None, "phi": phi}
    if spec.kind == "random_walk_gaussian":
        return {"level": 0.0}
    if spec.kind in ("ma_equal", "ma_gaussian"):
        if spec.kind == "ma_equal":
            q = int(p.get("q", 0))
            weights = np.ones(q + 1)
            law = p.get("innovation", "normal")
            mu, sigma = 0.0, 1.0
        else:
            thetas = np.asarray(p["thetas"], dtype=float)
            weights = np.concatenate([[1.0], thetas])
            law = "normal"
            mu, sigma = float(p.get("mu", 0.0)), float(p.get("sigma", 1.0))
        q = weights.size - 1
        tail = _draw(rng, law, q, mu, sigma) if q else np.empty(0)
        return {"weights": weights, "law": law, "mu": mu, "sigma": sigma, "tail": tail}
    if spec.kind == "qma1":
        return {"prev_eps": rng.standard_normal()}
    if spec.kind == "tear1":
        p_b = float(p.get("p_b", 0.15))
        scale = float(p.get("scale", 1.0 - p_b))
        state = {"p_b": p_b, "scale": scale, "last": 0.0}
        _tear_advance(rng, state, _TEAR_BURN_IN)  # stationarity warm-up
        return state
    return {}


def _draw(rng, law, size, mu=0.0, sigma=1.0):
    if law == "exponential":
        return rng.standard_exponential(size)
    return mu + sigma * rng.standard_normal(size)


def _tear_advance(rng, state, size) -> np.ndarray:
    """TEAR(1) recursion X_t = B_t X_{t-1} + scale * eps_t, vectorised.

    At a switch B_t = 0 the value restarts at scale * eps_t, so within a
    block X_t = scale * (eps summed from the most recent switch, inclusive);
    the carried value persists only while the leading B run is unbroken.
    """
    b = rng.random(size) < state["p_b"]
    eps = rng.standard_exponential(size)
    idx = np.arange(1, size + 1)
    # 1-based position of the most recent B=0 (0 = none in this block)
    start = np.maximum.accumulate(np.where(~b, idx, 0))
    csum = np.concatenate([[0.0], np.cumsum(eps)])
    x = state["scale"] * (csum[idx] - csum[np.maximum(start - 1, 0)])
    if start[-1] == 0:
        x += state["last"]
    elif start[0] == 0:
        head = int(np.argmax(start > 0))  # first position after the carry run
        x[:head] += state["last"]
    state["last"] = float(x[-1])
    return x


def _next_values(spec: DgpSpec, rng, state, size) -> np.ndarray:
    kind = spec.kind
    if kind == "iid_gaussian":
        return rng.standard_normal(size)
    if kind == "random_walk_gaussian":
        x = state["level"] + np.cumsum(rng.standard_normal(size))
        state["level"] = float(x[-1])
        return x
    if kind == "ar1":
        from scipy.signal import lfilter

        phi = state["phi"]
        eps = rng.standard_normal(size)
        if state["last"] is None:
            # stationary start; at phi = 0 the stream equals iid_gaussian bitwise
            x0 = eps[0] / np.sqrt(1.0 - phi * phi)
            rest, zf = lfilter([1.0], [1.0, -phi], eps[1:], zi=[phi * x0])
            x = np.concatenate([[x0], rest])
        else:
            x, zf = lfilter([1.0], [1.0, -phi], eps, zi=[phi * state["last"]])
        state["last"] = float(x[-1])
        return x
    if kind in ("ma_equal", "ma_gaussian"):
        w = state["weights"]
        q = w.size - 1
        eps = _draw(rng, state["law"], size, state["mu"], state["sigma"])
        if q == 0:
            return w[0] * eps
        ext = np.concatenate([state["tail"], eps])
        x = np.zeros(size)
        for lag in range(q + 1):
            x += w[lag] * ext[q - lag : q - lag + size]
        state["tail"] = ext[-q:].copy()
        return x
    if kind == "qma1":
        theta = float(spec.params.get("theta", 0.8))
        eps = rng.standard_normal(size)
        ext = np.concatenate([[state["prev_eps"]], eps])
        state["prev_eps"] = float(eps[-1])
        return ext[1:] + theta * ext[:-1] ** 2
    if kind == "tear1":
        return _tear_advance(rng, state, size)
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# generalized coin-tossing order
#
# A new object is compared with the window objects at increasing lag; each
# comparison is resolved by transitivity where possible, otherwise by an
# independent coin giving "older < newer" with probability p.  The lag-1
# relation is always a fresh toss; higher-lag relations are forced exactly
# when an intermediate object sits between the pair.
# ---------------------------------------------------------------------------


def _gct_arrays(p: float, m: int, n: int, rng, carry: dict | None):
    """Relation arrays for n consecutive windows, continuing from `carry`."""
    need1 = n + (m - 2)  # lag-1 relations spanning the n windows
    old1 = carry["l1"] if carry else np.empty(0, dtype=bool)
    fresh1 = rng.random(need1 - old1.size) < p
    l1 = np.concatenate([old1, fresh1])
    out = {"l1": l1}
    if m >= 3:
        need2 = n + (m - 3)
        old2 = carry["l2"] if carry else np.empty(0, dtype=bool)
        toss2 = rng.random(need2 - old2.size) < p
        a, b = l1[old2.size : old2.size + toss2.size], l1[old2.size + 1 : old2.size + toss2.size + 1]
        fresh2 = np.where(a == b, a, toss2)
        out["l2"] = np.concatenate([old2, fresh2])
    if m >= 4:
        toss3 = rng.random(n) < p
        l2 = out["l2"]
        a = l1[:n]          # (t, t+1)
        b = out["l2"][1 : n + 1]  # (t+1, t+3)
        c = l2[:n]          # (t, t+2)
        d = l1[2 : n + 2]   # (t+2, t+3)
        forced_less = (a & b) | (c & d)
        forced_greater = (~a & ~b) | (~c & ~d)
        out["l3"] = np.where(forced_less, True, np.where(forced_greater, False, toss3))
    return out


def _gct_ids(arrays: dict, m: int, n: int) -> np.ndarray:
    l1 = arrays["l1"]
    if m == 2:
        return (~l1[:n]).astype(np.int64)
    if m == 3:
        c0 = (~l1[:n]).astype(np.int64) + (~arrays["l2"][:n])
        c1 = (~l1[1 : n + 1]).astype(np.int64)
        return 2 * c0 + c1
    c0 = (~l1[:n]).astype(np.int64) + (~arrays["l2"][:n]) + (~arrays["l3"][:n])
    c1 = (~l1[1 : n + 1]).astype(np.int64) + (~arrays["l2"][1 : n + 1])
    c2 = (~l1[2 : n + 2]).astype(np.int64)
    return 6 * c0 + 2 * c1 + c2


def _gct_chunks(spec: DgpSpec, chunk: int) -> Iterator[np.ndarray]:
    p = float(spec.params.get("p", 0.5))
    m = int(spec.params.get("m", 3))
    rng = _rng(spec)
    total = spec.length
    produced = 0
    carry = None
    while produced < total:
        n = min(chunk, total - produced)
        arrays = _gct_arrays(p, m, n, rng, carry)
        yield _gct_ids(arrays, m, n)
        carry = {k: v[n:].copy() for k, v in arrays.items()}
        produced += n


# exact enumeration of the same mechanism (oracle for the sampler and the
# closed forms); states are rank tuples of the window objects in arrival order


def _gct_insertions(ranks: tuple[int, ...], p: float):
    """All (new_ranks, probability) outcomes of one arrival."""
    k = len(ranks)
    out = []

    def recurse(lag, lo, hi, prob):
        if lag > k:
            new = tuple(r + 1 if r > lo else r for r in ranks) + (lo + 1,)
            out.append((new, prob))
            return
        r_t = ranks[k - lag]
        if lo >= r_t or hi <= r_t - 1:  # forced by transitivity
            recurse(lag + 1, lo, hi, prob)
        else:
            recurse(lag + 1, max(lo, r_t), hi, prob * p)
            recurse(lag + 1, lo, min(hi, r_t - 1), prob * (1.0 - p))

    recurse(1, 0, k, 1.0)
    return out


def _gct_window_states(p: float, m: int) -> dict[tuple[int, ...], float]:
    states = {(1,): 1.0}
    for _ in range(m - 1):
        nxt: dict[tuple[int, ...], float] = {}
        for ranks, prob in states.items():
            for new, w in _gct_insertions(ranks, p):
                nxt[new] = nxt.get(new, 0.0) + prob * w
        states = nxt
    return states


def gct_exact_pmf(p: float, m: int) -> np.ndarray:
    """Exact pattern pmf of the coin-tossing order, by branch enumeration (m <= 4)."""
    _v_gct({"p": p, "m": m})
    pmf = np.zeros(factorial(m))
    for ranks, prob in _gct_window_states(float(p), m).items():
        pmf[lex_rank(ranks)] += prob
    return pmf


def gct_lag1_joint_m3(p: float) -> np.ndarray:
    """Exact joint pmf of consecutive pattern pairs, m = 3 (6x6 matrix)."""
    _v_gct({"p": p, "m": 3})
    p = float(p)
    joint = np.zeros((6, 6))
    for ranks, prob in _gct_window_states(p, 3).items():
        i = lex_rank(ranks)
        rest = ranks[1:]
        compact = tuple(sorted(rest).index(r) + 1 for r in rest)
        for new, w in _gct_insertions(compact, p):
            joint[i, lex_rank(new)] += prob * w
    return joint


# ---------------------------------------------------------------------------
# spec-typed wrappers, one per process
# ---------------------------------------------------------------------------


def _expect(spec: DgpSpec, kind: str):
    if spec.kind != kind:
        raise ValueError(f"spec kind {spec.kind!r} does not match generator {kind!r}")


def gen_iid_gaussian(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "iid_gaussian")
    return generate(spec)


def gen_ar1(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "ar1")
    return generate(spec)


def gen_ma_equal(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "ma_equal")
    return generate(spec)


def gen_ma_gaussian(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "ma_gaussian")
    return generate(spec)


def gen_qma1(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "qma1")
    return generate(spec)


def gen_tear1(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "tear1")
    return generate(spec)


def gen_random_walk(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "random_walk_gaussian")
    return generate(spec)


def gen_gct_patterns(spec: DgpSpec) -> np.ndarray:
    _expect(spec, "gct_patterns")
    return generate(spec)


# ---------------------------------------------------------------------------
# JSON form: {"kind": ..., "params": {...}, "seed": ..., "length": ...}
# ---------------------------------------------------------------------------


def spec_to_json(spec: DgpSpec) -> dict:
    return {"kind": spec.kind, "params": dict(spec.params), "seed": spec.seed, "length": spec.length}


def spec_from_json(obj: Mapping) -> DgpSpec:
    missing = {"kind", "seed", "length"} - set(obj)
    if missing:
        raise ValueError(f"DGP spec missing fields: {sorted(missing)}")
    return DgpSpec(
        kind=obj["kind"],
        params=dict(obj.get("params", {})),
        seed=obj["seed"],
        length=obj["length"],
    )
