"""Command-line interface.

Subcommands: analyze, simulate, covariance, test, uncertainty, power-study,
plane, repro.  Data goes to stdout (or --out); diagnostics to stderr.  Exit
codes: 0 on success, 2 on validation errors, 3 on I/O errors (repro returns
1 when a check fails).  Every report embeds the fully resolved
configuration, so a run is reproducible from its own output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, covariance, ecstats, generators, inference, patterns, plane
from .errors import InsufficientDataError, RegimeError

SCHEMA = "ordpat/1"

_RULE_FLAGS = {
    "fifth-root": "fifth_root",
    "textbook-cube-root": "textbook_cube_root",
    "fixed": "fixed",
}


class _InputError(Exception):
    """File-level problem (unreadable or malformed input): exit code 3."""


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ordpat", description=__doc__)
    top.add_argument("--version", action="version", version=f"ordpat {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def add_io(p, fmt_default="json"):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default=fmt_default)

    def add_scheme(p):
        p.add_argument("--scheme", choices=["unit", "bartlett"], default="unit")
        p.add_argument("--rule", choices=list(_RULE_FLAGS), default="fifth-root")
        p.add_argument("--fixed-u", type=int, default=None)

    def add_dgp(p):
        p.add_argument("--dgp", required=True, choices=list(generators.KINDS))
        p.add_argument("--phi", type=float, default=0.5, help="ar1 coefficient")
        p.add_argument("--q", type=int, default=1, help="ma_equal order")
        p.add_argument("--innovation", choices=["normal", "exponential"], default="normal")
        p.add_argument("--thetas", default="1.0", help="ma_gaussian weights, comma separated")
        p.add_argument("--mu", type=float, default=0.0)
        p.add_argument("--sigma", type=float, default=1.0)
        p.add_argument("--theta", type=float, default=0.8, help="qma1 coefficient")
        p.add_argument("--p-b", type=float, default=0.15, help="tear1 switch probability")
        p.add_argument("--scale", type=float, default=0.85, help="tear1 innovation scale")
        p.add_argument("--p", type=float, default=0.5, help="gct coin probability")
        p.add_argument("--gct-m", type=int, default=3, help="gct pattern order")

    p = sub.add_parser("analyze", help="pattern frequencies, entropy-complexity report")
    p.add_argument("--input", required=True)
    p.add_argument("--csv-column", default=None, help="read CSV column (name or index)")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--regime", choices=["uniform", "nonuniform"], default="uniform")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--coverage", type=float, default=0.95)
    p.add_argument("--zero-fix", action="store_true",
                   help="continuity-correct empty pattern cells (1/(2n))")
    add_scheme(p)
    add_io(p)

    p = sub.add_parser("simulate", help="write a simulated series or pattern file")
    add_dgp(p)
    p.add_argument("--n", type=int, required=True, help="output length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("covariance", help="closed-form or simulated long-run covariance")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--closed-form", choices=["iid", "srw", "ma-equal", "gaussian", "gct"])
    g.add_argument("--simulate", choices=list(generators.KINDS), dest="sim_kind")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5, help="gct coin probability")
    p.add_argument("--thetas", default="1.0", help="gaussian closed form / ma weights")
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--innovation", choices=["normal", "exponential"], default="normal")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--p-b", type=float, default=0.15)
    p.add_argument("--scale", type=float, default=0.85)
    p.add_argument("--gct-m", type=int, default=3)
    p.add_argument("--n", type=int, default=10**6, help="simulation length")
    p.add_argument("--seed", type=int, default=0)
    add_scheme(p)
    add_io(p)

    p = sub.add_parser("test", help="serial-independence test on a series file")
    p.add_argument("--input", required=True)
    p.add_argument("--csv-column", default=None)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--kind", choices=["h", "hd", "hc"], default="hd")
    p.add_argument("--level", type=float, default=0.05)
    add_io(p)

    p = sub.add_parser("uncertainty", help="segment or ellipse for a series' entropy-complexity point")
    p.add_argument("--input", required=True)
    p.add_argument("--csv-column", default=None)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--geometry", choices=["auto", "segment", "ellipse"], default="auto")
    p.add_argument("--coverage", type=float, default=0.95)
    p.add_argument("--probs", default="0.1,0.25,0.5,0.75,0.9",
                   help="segment quantiles, comma separated")
    p.add_argument("--zero-fix", action="store_true")
    add_scheme(p)
    add_io(p)

    p = sub.add_parser("power-study", help="Monte Carlo rejection rate of a test")
    add_dgp(p)
    p.add_argument("--T", type=int, required=True, help="series length per replication")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--kind", choices=["h", "hd", "hc"], default="hd")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="workers (default: all cores)")
    add_io(p)

    p = sub.add_parser("plane", help="boundary curves, trajectories, and data points")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--trajectories", default="", help="comma list from {gaussian,gct}")
    p.add_argument("--points", default=None,
                   help="JSON file with analyze reports or [[h,c],...] pairs")
    add_io(p, fmt_default="csv")

    p = sub.add_parser("repro", help="run the acceptance checks and print a table")
    p.add_argument("--reps", type=int, default=2000, help="power-study replications")
    p.add_argument("--hac-n", type=int, default=10**6, help="simulated covariance length")
    p.add_argument("--mc-reps", type=int, default=10**4, help="law-validation replications")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--fast", action="store_true", help="reduced scales, smoke test only")
    return top


def _config_dict(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())}
    return cfg


def _emit(args, payload: dict, csv_text: str | None = None) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        lines = [f"# schema={SCHEMA}"]
        for key, val in sorted(payload.get("config", {}).items()):
            lines.append(f"# config.{key}={val}")
        lines.append(csv_text if csv_text is not None else _flat_csv(payload))
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _flat_csv(payload: dict) -> str:
    rows = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                if k == "config":
                    continue
                walk(f"{prefix}{k}.", v)
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(f"{prefix}{i}.", v)
        else:
            rows.append((prefix.rstrip("."), obj))

    walk("", payload)
    return "\n".join(f"{k},{_fmt(v)}" for k, v in rows)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _read_values(args) -> np.ndarray:
    try:
        if args.csv_column is not None:
            col = args.csv_column
            if col.lstrip("-").isdigit():
                col = int(col)
            return patterns.read_series_csv(args.input, col)
        return patterns.read_series_text(args.input)
    except OSError as exc:
        raise _InputError(str(exc)) from exc
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _dgp_params(args, kind: str) -> dict:
    if kind == "ar1":
        return {"phi": args.phi}
    if kind == "ma_equal":
        return {"q": args.q, "innovation": args.innovation}
    if kind == "ma_gaussian":
        thetas = [float(v) for v in str(args.thetas).split(",") if v.strip()]
        return {"thetas": thetas, "mu": args.mu, "sigma": args.sigma}
    if kind == "qma1":
        return {"theta": args.theta}
    if kind == "tear1":
        return {"p_b": args.p_b, "scale": args.scale}
    if kind == "gct_patterns":
        return {"p": args.p, "m": args.gct_m}
    return {}


def _scheme(args) -> covariance.HacScheme:
    return covariance.HacScheme(
        weights=args.scheme, rule=_RULE_FLAGS[args.rule], fixed_u=args.fixed_u
    )


def _matrix(m: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.asarray(m)]


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_analyze(args) -> int:
    values = _read_values(args)
    m = args.m
    pats = patterns.pattern_series(values, m)
    freqs = patterns.relative_frequencies(pats, m)
    n = int(pats.size)
    h0, _ = ecstats.norm_constants(m)
    h = ecstats.shannon_entropy(freqs)
    report = {
        "schema": SCHEMA,
        "config": _config_dict(args),
        "n": n,
        "m": m,
        "frequencies": [float(v) for v in freqs],
        "entropy": h,
        "entropy_normalized": h0 * h,
        "disequilibrium": ecstats.disequilibrium(freqs),
        "complexity": ecstats.complexity(freqs),
        "regime": args.regime,
    }
    warnings = []
    if np.any(freqs == 0.0):
        warnings.append("degenerate pmf: some patterns never occur")
    if args.regime == "uniform":
        tests = {}
        for kind in ("h", "hd", "hc"):
            res = inference.dependence_test(values, m, kind, args.level)
            tests[kind] = res.to_json()
        report["tests"] = tests
    else:
        p_used = freqs
        if np.any(freqs == 0.0):
            if args.zero_fix:
                p_used = ecstats.repair_zero_probs(freqs, n)
                warnings.append("continuity correction applied to empty cells")
            else:
                p_used = None
                warnings.append("delta-method block skipped (empty cells; pass --zero-fix)")
        if p_used is not None and ecstats.is_effectively_uniform(p_used):
            p_used = None
            warnings.append("delta-method block skipped (frequencies numerically uniform)")
        if p_used is not None:
            sigma = covariance.hac_from_patterns(pats, m, _scheme(args), psd_clip=True)
            s1 = ecstats.acov_entropy_mixture(p_used, sigma)
            s2 = ecstats.acov_entropy_diseq(p_used, sigma)
            s3 = ecstats.acov_entropy_complexity(p_used, sigma)
            se_h, se_c = inference.standard_errors(p_used, sigma, n)
            intercept, slope = inference.asymptotic_line(p_used, sigma)
            report.update(
                {
                    "sigma_hac": _matrix(sigma),
                    "acov_entropy_mixture": _matrix(s1),
                    "acov_entropy_diseq": _matrix(s2),
                    "acov_entropy_complexity": _matrix(s3),
                    "se_entropy_normalized": se_h,
                    "se_complexity": se_c,
                    "line_intercept": intercept,
                    "line_slope": slope,
                }
            )
            try:
                geom = inference.uncertainty_segment(p_used, sigma, n)
                report["uncertainty"] = {"kind": "segment", **geom.to_json()}
            except RegimeError:
                geom = inference.uncertainty_ellipse(p_used, sigma, n, args.coverage)
                report["uncertainty"] = {"kind": "ellipse", **geom.to_json()}
    if warnings:
        report["warnings"] = warnings
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
    _emit(args, report)
    return 0


def _cmd_simulate(args) -> int:
    spec = generators.DgpSpec(args.dgp, _dgp_params(args, args.dgp),
                              seed=args.seed, length=args.n)
    data = generators.generate(spec)
    if args.out:
        if spec.kind == "gct_patterns":
            patterns.write_pattern_file(args.out, data, int(spec.params["m"]))
        else:
            patterns.write_series_text(args.out, data)
        return 0
    if spec.kind == "gct_patterns":
        sys.stdout.write(f"#ordpat m={int(spec.params['m'])}\n")
        for v in data:
            sys.stdout.write(f"{int(v)}\n")
    else:
        for v in data:
            sys.stdout.write(f"{float(v):.17g}\n")
    return 0


def _cmd_covariance(args) -> int:
    scheme = _scheme(args)
    if args.sim_kind:
        kind = args.sim_kind
        m = args.gct_m if kind == "gct_patterns" else args.m
        length = args.n if kind == "gct_patterns" else args.n + m - 1
        spec = generators.DgpSpec(kind, _dgp_params(args, kind), seed=args.seed, length=length)
        sigma = covariance.simulate_cov(spec, m, scheme)
        source = f"simulated:{kind}"
    else:
        cf = args.closed_form
        if cf == "iid":
            if args.m not in (2, 3):
                raise ValueError("i.i.d. closed form is available for m in {2, 3}")
            sigma = covariance.iid_cov_m3() if args.m == 3 else covariance.iid_cov_m2()
        elif cf == "srw":
            if args.m != 3:
                raise ValueError("random-walk closed form is available for m=3")
            sigma = covariance.random_walk_cov_m3()
        elif cf == "ma-equal":
            if args.m != 2:
                raise ValueError("MA equal-weight closed form is available for m=2")
            sigma = covariance.ma_equal_cov_m2()
        elif cf == "gaussian":
            if args.m != 2:
                raise ValueError("Gaussian closed form is available for m=2")
            thetas = [float(v) for v in str(args.thetas).split(",") if v.strip()]
            rho = covariance.increment_autocorr_ma_gaussian(thetas, args.sigma2)
            sigma = covariance.gaussian_cov_m2(rho)
        else:
            sigma = covariance.gct_cov(args.p, args.m)
        source = f"closed-form:{cf}"
    payload = {
        "schema": SCHEMA,
        "config": _config_dict(args),
        "source": source,
        "covariance": covariance.cov_to_json(sigma),
    }
    _emit(args, payload, csv_text=covariance.cov_to_csv(sigma).rstrip("\n"))
    return 0


def _cmd_test(args) -> int:
    values = _read_values(args)
    res = inference.dependence_test(values, args.m, args.kind, args.level)
    payload = {"schema": SCHEMA, "config": _config_dict(args), "result": res.to_json()}
    decision = "reject serial independence" if res.reject else "fail to reject"
    payload["decision"] = decision
    _emit(args, payload)
    return 0


def _cmd_uncertainty(args) -> int:
    values = _read_values(args)
    m = args.m
    pats = patterns.pattern_series(values, m)
    freqs = patterns.relative_frequencies(pats, m)
    n = int(pats.size)
    if np.any(freqs == 0.0):
        if not args.zero_fix:
            raise ValueError("frequency vector has empty cells; pass --zero-fix")
        freqs = ecstats.repair_zero_probs(freqs, n)
    sigma = covariance.hac_from_patterns(pats, m, _scheme(args), psd_clip=True)
    probs = tuple(float(v) for v in str(args.probs).split(",") if v.strip())
    payload = {"schema": SCHEMA, "config": _config_dict(args), "n": n, "m": m}
    if args.geometry == "segment":
        geom = inference.uncertainty_segment(freqs, sigma, n, probs, force=True)
    elif args.geometry == "ellipse":
        geom = inference.uncertainty_ellipse(freqs, sigma, n, args.coverage, force=True)
    else:
        try:
            geom = inference.uncertainty_segment(freqs, sigma, n, probs)
        except RegimeError:
            geom = inference.uncertainty_ellipse(freqs, sigma, n, args.coverage)
    kind = "segment" if isinstance(geom, inference.SegmentSpec) else "ellipse"
    payload["kind"] = kind
    payload[kind] = geom.to_json()
    _emit(args, payload)
    return 0


def _cmd_power_study(args) -> int:
    spec = generators.DgpSpec(args.dgp, _dgp_params(args, args.dgp), seed=0, length=max(args.T, 2))
    rate = inference.mc_rejection_rate(
        spec, args.T, args.m, args.kind, args.level, args.reps, args.seed, workers=args.threads
    )
    payload = {
        "schema": SCHEMA,
        "config": _config_dict(args),
        "rejection_rate": rate,
        "reps": args.reps,
    }
    _emit(args, payload)
    return 0


def _geometry_rows(geom: dict) -> list[tuple[float, float, str]]:
    """Outline rows for an embedded uncertainty block of an analyze report."""
    rows = []
    if geom.get("kind") == "segment":
        cx, cy = geom["center"]
        dx, dy = geom["direction"]
        for _, dist in geom["offsets"]:
            rows.append((cx + dist * dx, cy + dist * dy, "segment"))
    elif geom.get("kind") == "ellipse":
        cx, cy = geom["center"]
        a, b = geom["semi_axes"]
        rot = geom["rotation"]
        theta = np.linspace(0.0, 2.0 * np.pi, 65)
        xs = a * np.cos(theta)
        ys = b * np.sin(theta)
        cos_r, sin_r = np.cos(rot), np.sin(rot)
        for x, y in zip(xs, ys):
            rows.append((cx + cos_r * x - sin_r * y, cy + sin_r * x + cos_r * y, "ellipse"))
    return rows


def _load_points(path):
    """Points (and any uncertainty geometry) from a JSON file.

    Accepts analyze reports (single or a list) or bare [h, c] pairs.
    Returns (points, geometry_rows).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise _InputError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path}: invalid JSON: {exc}") from exc
    reports = obj if isinstance(obj, list) else [obj]
    points = []
    geometry = []
    for item in reports:
        if isinstance(item, dict):
            try:
                points.append((float(item["entropy_normalized"]), float(item["complexity"])))
            except KeyError:
                raise _InputError(
                    f"{path}: expected analyze reports or [h, c] pairs"
                ) from None
            if "uncertainty" in item:
                geometry.extend(_geometry_rows(item["uncertainty"]))
        else:
            try:
                h, c = item
                points.append((float(h), float(c)))
            except (TypeError, ValueError):
                raise _InputError(f"{path}: expected [h, c] pairs") from None
    return points, geometry


def _cmd_plane(args) -> int:
    lower, upper = plane.boundary_curves(args.m, args.resolution)
    rows = plane.curve_to_rows(lower) + plane.curve_to_rows(upper)
    wanted = [t.strip() for t in args.trajectories.split(",") if t.strip()]
    for name in wanted:
        if args.m != 3:
            raise ValueError("trajectories are defined for m=3")
        if name == "gaussian":
            grid = np.linspace(0.002, 0.498, 512)
            rows += plane.curve_to_rows(plane.gaussian_trajectory(grid))
        elif name == "gct":
            grid = np.linspace(0.002, 0.998, 512)
            rows += plane.curve_to_rows(plane.gct_trajectory(grid))
        else:
            raise ValueError(f"unknown trajectory {name!r}")
    if args.points:
        points, geometry = _load_points(args.points)
        for h, c in points:
            rows.append((h, c, "point"))
        rows.extend(geometry)
    payload = {
        "schema": SCHEMA,
        "config": _config_dict(args),
        "rows": [[h, c, label] for h, c, label in rows],
    }
    csv_text = "h_norm,c,label\n" + "\n".join(f"{_fmt(h)},{_fmt(c)},{label}" for h, c, label in rows)
    _emit(args, payload, csv_text=csv_text)
    return 0


def _cmd_repro(args) -> int:
    from . import repro

    if args.fast:
        print(
            "warning: --fast shrinks the Monte Carlo scales but keeps the "
            "full-scale tolerance bands; FAILs on the sampled checks are "
            "expected noise. Use the default scales for a meaningful verdict.",
            file=sys.stderr,
        )
        results = repro.run_all(reps=200, hac_n=10**5, mc_reps=1000, workers=args.threads)
    else:
        results = repro.run_all(
            reps=args.reps, hac_n=args.hac_n, mc_reps=args.mc_reps, workers=args.threads
        )
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        failed += not r.passed
        print(f"{mark}  {r.name:<{width}}  {r.detail}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


_COMMANDS = {
    "analyze": _cmd_analyze,
    "simulate": _cmd_simulate,
    "covariance": _cmd_covariance,
    "test": _cmd_test,
    "uncertainty": _cmd_uncertainty,
    "power-study": _cmd_power_study,
    "plane": _cmd_plane,
    "repro": _cmd_repro,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, InsufficientDataError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
