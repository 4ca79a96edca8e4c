"""CLI: golden invocations, exit codes, byte-identical reruns."""

import json
import math

import numpy as np
import pytest

from fbmlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(*argv):
    return main(list(argv))


def read_csv_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ")
    header = json.loads(lines[0][2:])
    cols = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if not line.startswith("#")]
    return header, cols, rows


class TestKernelEval:
    def test_half_kernel_at_zero(self, tmp_path):
        out = tmp_path / "k.csv"
        assert run("kernel-eval", "--kernel", "ifbm-half",
                   "--grid", "0:5:11", "--out", str(out)) == EXIT_OK
        header, cols, rows = read_csv_rows(out)
        assert header["kernel"] == "ifbm-half"
        assert cols == ["t", "value"]
        assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-15)

    def test_general_matches_half_at_H_half(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        grid = "0.01:40:100:log"
        assert run("kernel-eval", "--kernel", "ifbm", "--hurst", "0.5",
                   "--grid", grid, "--out", str(a)) == EXIT_OK
        assert run("kernel-eval", "--kernel", "ifbm-half",
                   "--grid", grid, "--out", str(b)) == EXIT_OK
        va = np.array([float(r[1]) for r in read_csv_rows(a)[2]])
        vb = np.array([float(r[1]) for r in read_csv_rows(b)[2]])
        assert np.max(np.abs(va - vb)) <= 1e-12

    def test_ou_reduction_at_log4(self, tmp_path):
        out = tmp_path / "k.csv"
        t = math.log(4.0)
        assert run("kernel-eval", "--kernel", "fbm", "--hurst", "0.5",
                   "--grid", f"{t}:{t}:1", "--out", str(out)) == EXIT_OK
        assert float(read_csv_rows(out)[2][0][1]) == pytest.approx(0.5, abs=1e-14)

    def test_missing_hurst_is_usage_error(self, tmp_path):
        assert run("kernel-eval", "--kernel", "ifbm",
                   "--grid", "0:1:5", "--out", str(tmp_path / "x.csv")) == EXIT_USAGE


class TestAudit:
    def test_single_inequality_passes(self, tmp_path):
        out = tmp_path / "audit.json"
        code = run("audit", "--inequality", "ifbm-vs-fbm", "--grid", "150:150", "--out", str(out))
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["pass"] is True
        assert payload["reports"][0]["inequality"] == "ifbm-vs-fbm"

    def test_claims_run(self, tmp_path):
        out = tmp_path / "claims.json"
        assert run("audit", "--inequality", "claims", "--out", str(out)) == EXIT_OK
        payload = json.loads(out.read_text())
        ids = {c["id"] for c in payload["claims"]}
        assert ids == {f"c{i}" for i in range(1, 9)}

    def test_invalid_selector_exit_2_no_file(self, tmp_path):
        out = tmp_path / "bad.json"
        assert run("audit", "--inequality", "9.9", "--out", str(out)) == EXIT_USAGE
        assert not out.exists()


class TestBounds:
    def test_table_and_plot_data(self, tmp_path):
        out = tmp_path / "bounds.csv"
        assert run("bounds", "--grid", "0.01:0.99:99", "--out", str(out)) == EXIT_OK
        header, cols, rows = read_csv_rows(out)
        assert cols == ["H", "lower", "upper", "hypothesis", "lower_clause", "upper_clause"]
        assert len(rows) == 99
        mid = rows[49]
        assert float(mid[0]) == pytest.approx(0.5)
        assert float(mid[1]) == pytest.approx(0.25) and float(mid[2]) == pytest.approx(0.25)
        for r in rows:
            assert float(r[1]) <= float(r[3]) + 1e-15 <= float(r[2]) + 2e-15
        dat = tmp_path / "bounds.csv.dat"
        body = [l for l in dat.read_text().splitlines() if not l.startswith("#")]
        assert len(body) == 99 and len(body[0].split()) == 4

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run("bounds", "--grid", "0.1:0.9:17", "--out", str(a))
        run("bounds", "--grid", "0.1:0.9:17", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_bad_grid_usage_error(self, tmp_path):
        assert run("bounds", "--grid", "nope", "--out", str(tmp_path / "x.csv")) == EXIT_USAGE


class TestEstimate:
    ARGS = ("estimate", "--hurst", "0.5", "--side", "dual", "--ladder", "2:5:4",
            "--batch", "2000", "--dt", "0.1", "--seed", "3", "--no-mesh-check")

    def test_small_run_and_rerun(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(*self.ARGS, "--out", str(a)) == EXIT_OK
        assert run(*self.ARGS, "--out", str(b)) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        footer = json.loads(lines[-1][2:])
        assert "theta_hat" in footer and "verdicts" in footer
        assert footer["meta"]["config"]["master_seed"] == 3

    def test_json_format_writes_report(self, tmp_path):
        out = tmp_path / "est.csv"
        assert run(*self.ARGS, "--format", "json", "--out", str(out)) == EXIT_OK
        report = json.loads((tmp_path / "est.json").read_text())
        assert report["side"] == "dual"


class TestSample:
    def test_csv_export_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ("sample", "--process", "fbm", "--hurst", "0.7", "--grid", "16:0.25",
                "--batch", "4", "--seed", "11", "--format", "csv")
        assert run(*args, "--out", str(a)) == EXIT_OK
        assert run(*args, "--out", str(b)) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        header = json.loads(a.read_text().splitlines()[0][2:])
        assert header["notes"]["config"]["command"] == "sample"

    def test_binary_export(self, tmp_path):
        out = tmp_path / "p.bin"
        assert run("sample", "--process", "stationary", "--kernel", "ifbm-half",
                   "--grid", "32:0.1", "--batch", "8", "--seed", "2",
                   "--out", str(out)) == EXIT_OK
        assert out.exists() and out.with_suffix(".bin.json").exists()
        data = np.fromfile(out)
        assert data.size == 32 * 8

    def test_unknown_kernel_usage_error(self, tmp_path):
        assert run("sample", "--process", "stationary", "--grid", "8:0.1",
                   "--out", str(tmp_path / "x.bin")) == EXIT_USAGE
