"""End-to-end command-line interface behaviour."""

import json

import numpy as np
import pytest

from ordpat import DgpSpec, generate, iid_cov_m3, write_series_text
from ordpat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def ar1_file(tmp_path):
    path = tmp_path / "ar1.txt"
    write_series_text(path, generate(DgpSpec("ar1", {"phi": 0.5}, seed=1, length=10**5)))
    return path


class TestAnalyze:
    def test_monotone_series_degenerate(self, tmp_path, capsys):
        path = tmp_path / "mono.txt"
        write_series_text(path, np.arange(50.0))
        code, out, err = run(capsys, "analyze", "--input", str(path), "--m", "3")
        assert code == 0
        report = json.loads(out)
        assert report["entropy"] == 0.0
        assert report["complexity"] == 0.0
        assert any("degenerate" in w for w in report["warnings"])

    def test_ar1_normalized_entropy_fixture(self, ar1_file, capsys):
        code, out, _ = run(capsys, "analyze", "--input", str(ar1_file), "--m", "3",
                           "--regime", "nonuniform")
        assert code == 0
        report = json.loads(out)
        assert abs(report["entropy_normalized"] - 0.9910) < 0.01
        assert "sigma_hac" in report
        assert "uncertainty" in report
        assert report["config"]["m"] == 3

    def test_byte_identical_reruns(self, ar1_file, capsys):
        _, out1, _ = run(capsys, "analyze", "--input", str(ar1_file))
        _, out2, _ = run(capsys, "analyze", "--input", str(ar1_file))
        assert out1 == out2

    def test_uniform_regime_reports_tests(self, tmp_path, capsys):
        path = tmp_path / "iid.txt"
        write_series_text(path, generate(DgpSpec("iid_gaussian", {}, seed=2, length=2000)))
        code, out, _ = run(capsys, "analyze", "--input", str(path), "--regime", "uniform")
        assert code == 0
        report = json.loads(out)
        assert set(report["tests"]) == {"h", "hd", "hc"}
        for res in report["tests"].values():
            assert 0.0 <= res["p_value"] <= 1.0

    def test_missing_file_io_error(self, capsys):
        code, _, err = run(capsys, "analyze", "--input", "/nonexistent/file.txt")
        assert code == 3
        assert "error" in err

    def test_malformed_file_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("1.0\nwhat\n")
        code, _, err = run(capsys, "analyze", "--input", str(path))
        assert code == 3
        assert "bad.txt:2" in err

    def test_csv_column_input(self, tmp_path, capsys):
        path = tmp_path / "data.csv"
        path.write_text("a,b\n1,0.5\n2,1.5\n3,0.25\n4,2.5\n")
        code, out, _ = run(capsys, "analyze", "--input", str(path), "--csv-column", "b",
                           "--m", "2")
        assert code == 0
        assert json.loads(out)["n"] == 3

    def test_csv_format_output(self, ar1_file, capsys):
        code, out, _ = run(capsys, "analyze", "--input", str(ar1_file), "--format", "csv")
        assert code == 0
        assert out.startswith("# schema=ordpat/1")
        assert "entropy_normalized," in out


class TestSimulate:
    def test_gct_pattern_output(self, capsys):
        code, out, _ = run(capsys, "simulate", "--dgp", "gct_patterns", "--p", "0.5",
                           "--gct-m", "3", "--n", "1000", "--seed", "7")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "#ordpat m=3"
        ids = [int(v) for v in lines[1:]]
        assert len(ids) == 1000
        assert all(0 <= v <= 5 for v in ids)

    def test_iid_series_output(self, capsys):
        code, out, _ = run(capsys, "simulate", "--dgp", "iid_gaussian", "--n", "100",
                           "--seed", "1")
        assert code == 0
        values = [float(v) for v in out.strip().split("\n")]
        assert len(values) == 100

    def test_invalid_phi_exit_code(self, capsys):
        code, _, err = run(capsys, "simulate", "--dgp", "ar1", "--phi", "0.9999999999",
                           "--n", "10")
        assert code == 0  # still < 1
        code, _, err = run(capsys, "simulate", "--dgp", "ar1", "--phi", "1.0", "--n", "10")
        assert code == 2
        assert "error" in err

    def test_file_round_trip(self, tmp_path, capsys):
        out_path = tmp_path / "series.txt"
        code, _, _ = run(capsys, "simulate", "--dgp", "tear1", "--n", "500", "--seed", "3",
                         "--out", str(out_path))
        assert code == 0
        from ordpat import read_series_text

        assert read_series_text(out_path).size == 500


class TestCovariance:
    def test_closed_form_iid(self, capsys):
        code, out, _ = run(capsys, "covariance", "--closed-form", "iid", "--m", "3")
        assert code == 0
        payload = json.loads(out)
        got = np.array(payload["covariance"]["entries"]).reshape(6, 6)
        assert np.abs(got - iid_cov_m3()).max() < 1e-15

    def test_closed_form_gct_quarter(self, capsys):
        code, out, _ = run(capsys, "covariance", "--closed-form", "gct", "--p", "0.25")
        payload = json.loads(out)
        got = np.array(payload["covariance"]["entries"]).reshape(6, 6)
        assert got[0, 0] == pytest.approx(21 / 4**4, abs=1e-15)
        assert got[1, 1] == pytest.approx(165 / 4**6, abs=1e-15)

    def test_simulated_gct(self, capsys):
        code, out, _ = run(capsys, "covariance", "--simulate", "gct_patterns", "--p", "0.5",
                           "--gct-m", "3", "--n", "100000", "--scheme", "unit",
                           "--rule", "fifth-root", "--seed", "5")
        assert code == 0
        payload = json.loads(out)
        got = np.array(payload["covariance"]["entries"]).reshape(6, 6)
        from ordpat import gct_cov

        assert np.abs(got - gct_cov(0.5, 3)).max() < 0.03

    def test_csv_matrix_output(self, capsys):
        code, out, _ = run(capsys, "covariance", "--closed-form", "ma-equal", "--m", "2",
                           "--format", "csv")
        assert code == 0
        data_lines = [ln for ln in out.strip().split("\n") if not ln.startswith("#")]
        assert len(data_lines) == 2
        assert float(data_lines[0].split(",")[0]) == pytest.approx(1 / 12)


class TestTestCommand:
    def test_reports_pvalue_and_decision(self, tmp_path, capsys):
        path = tmp_path / "iid.txt"
        write_series_text(path, generate(DgpSpec("iid_gaussian", {}, seed=4, length=1000)))
        code, out, _ = run(capsys, "test", "--input", str(path), "--kind", "hd",
                           "--level", "0.05")
        assert code == 0
        payload = json.loads(out)
        assert 0.0 <= payload["result"]["p_value"] <= 1.0
        assert payload["decision"] in ("reject serial independence", "fail to reject")


class TestUncertainty:
    def test_auto_geometry_on_random_walk(self, tmp_path, capsys):
        path = tmp_path / "rw.txt"
        write_series_text(path, generate(DgpSpec("random_walk_gaussian", {}, seed=6,
                                                 length=20_000)))
        code, out, _ = run(capsys, "uncertainty", "--input", str(path), "--m", "3")
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] in ("segment", "ellipse")
        geom = payload[payload["kind"]]
        assert len(geom["center"]) == 2

    def test_forced_ellipse(self, tmp_path, capsys):
        path = tmp_path / "ar.txt"
        write_series_text(path, generate(DgpSpec("ar1", {"phi": 0.5}, seed=7, length=20_000)))
        code, out, _ = run(capsys, "uncertainty", "--input", str(path), "--geometry",
                           "ellipse", "--coverage", "0.9")
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "ellipse"
        assert payload["ellipse"]["coverage"] == 0.9

    def test_empty_cells_need_zero_fix(self, tmp_path, capsys):
        path = tmp_path / "dip.txt"
        x = np.arange(100.0)
        x[50] -= 1.5  # almost monotone: a few patterns never occur
        write_series_text(path, x)
        code, _, err = run(capsys, "uncertainty", "--input", str(path))
        assert code == 2
        assert "zero-fix" in err
        code, out, _ = run(capsys, "uncertainty", "--input", str(path), "--zero-fix",
                           "--geometry", "segment")
        assert code == 0
        assert json.loads(out)["kind"] == "segment"

    def test_constant_patterns_have_no_geometry(self, tmp_path, capsys):
        path = tmp_path / "mono.txt"
        write_series_text(path, np.arange(100.0))
        code, _, err = run(capsys, "uncertainty", "--input", str(path), "--zero-fix")
        assert code == 2
        assert "no positive direction" in err


class TestPowerStudy:
    def test_iid_size_near_level(self, capsys):
        code, out, _ = run(capsys, "power-study", "--dgp", "iid_gaussian", "--T", "250",
                           "--reps", "400", "--kind", "hd", "--seed", "11", "--threads", "1")
        assert code == 0
        payload = json.loads(out)
        assert 0.02 <= payload["rejection_rate"] <= 0.09

    def test_ar1_power_high(self, capsys):
        code, out, _ = run(capsys, "power-study", "--dgp", "ar1", "--phi", "0.5", "--T", "500",
                           "--reps", "300", "--kind", "hc", "--seed", "12", "--threads", "1")
        payload = json.loads(out)
        assert payload["rejection_rate"] > 0.85


class TestPlane:
    def test_bundle_csv(self, tmp_path, capsys):
        points = tmp_path / "points.json"
        points.write_text(json.dumps([[0.9671, 0.0306]]))
        code, out, _ = run(capsys, "plane", "--m", "3", "--resolution", "64",
                           "--trajectories", "gaussian,gct", "--points", str(points))
        assert code == 0
        lines = [ln for ln in out.strip().split("\n") if not ln.startswith("#")]
        assert lines[0] == "h_norm,c,label"
        labels = {ln.split(",")[2] for ln in lines[1:]}
        assert labels == {"lower", "upper", "gaussian", "gct", "point"}

    def test_accepts_analyze_report(self, tmp_path, ar1_file, capsys):
        code, report_out, _ = run(capsys, "analyze", "--input", str(ar1_file))
        report_path = tmp_path / "report.json"
        report_path.write_text(report_out)
        code, out, _ = run(capsys, "plane", "--m", "3", "--resolution", "32",
                           "--points", str(report_path), "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert any(row[2] == "point" for row in payload["rows"])

    def test_bundles_uncertainty_geometry(self, tmp_path, ar1_file, capsys):
        code, report_out, _ = run(capsys, "analyze", "--input", str(ar1_file),
                                  "--regime", "nonuniform")
        report_path = tmp_path / "report.json"
        report_path.write_text(report_out)
        code, out, _ = run(capsys, "plane", "--m", "3", "--resolution", "32",
                           "--points", str(report_path), "--format", "json")
        assert code == 0
        labels = {row[2] for row in json.loads(out)["rows"]}
        assert "point" in labels
        assert labels & {"segment", "ellipse"}

    def test_bad_points_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "plane", "--m", "3", "--resolution", "32",
                           "--points", str(bad))
        assert code == 3


class TestRepro:
    def test_table_and_exit_codes(self, capsys, monkeypatch):
        from ordpat import repro

        fake = [
            repro.CheckResult("alpha", True, "fine"),
            repro.CheckResult("beta", False, "off by 1"),
        ]
        monkeypatch.setattr(repro, "run_all", lambda **kw: fake)
        code, out, _ = run(capsys, "repro")
        assert code == 1
        assert "PASS  alpha" in out
        assert "FAIL  beta" in out
        assert "1/2 checks passed" in out
        monkeypatch.setattr(repro, "run_all", lambda **kw: fake[:1])
        code, out, _ = run(capsys, "repro")
        assert code == 0


class TestArgHandling:
    def test_unknown_command_exits_2(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0
