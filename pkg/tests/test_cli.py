"""Command line surface: each subcommand end to end, in process."""

import json
import subprocess
import sys

import numpy as np
import pytest

from lscusum import read_table
from lscusum.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def run_cli(*args):
    return main([str(a) for a in args])


# -- simulate ---------------------------------------------------------------

def test_simulate_tvar_writes_csv(tmp_path):
    out = tmp_path / "series.csv"
    assert run_cli("simulate", "--model", "tvar", "--scenario", "h0",
                   "--n", 150, "--seed", 4, "--out", out) == 0
    columns, data = read_table(out)
    assert columns == ["x"]
    assert data.shape == (150, 1)


def test_simulate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        run_cli("simulate", "--model", "tvar", "--scenario", "h1",
                "--n", 100, "--seed", 7, "--out", out)
    assert a.read_bytes() == b.read_bytes()


def test_simulate_tvvar_columns(tmp_path):
    out = tmp_path / "var.csv"
    assert run_cli("simulate", "--model", "tvvar", "--scenario", "h2",
                   "--n", 80, "--out", out) == 0
    columns, data = read_table(out)
    assert columns == ["x1", "x2"]
    assert data.shape == (80, 2)


def test_simulate_custom_tvar_constants(tmp_path):
    out = tmp_path / "custom.csv"
    assert run_cli("simulate", "--model", "tvar", "--scenario", "custom",
                   "--a-const", "0.5", "--sigma-const", "2.0", "--alpha-const", "1.0",
                   "--n", 60, "--out", out) == 0
    _, data = read_table(out)
    assert data.shape == (60, 1)


def test_simulate_custom_tvar_needs_coefficient(tmp_path, capsys):
    assert run_cli("simulate", "--model", "tvar", "--scenario", "custom",
                   "--n", 60, "--out", tmp_path / "x.csv") == 1
    assert "a-const" in capsys.readouterr().err


def test_simulate_custom_unstable_rejected(tmp_path, capsys):
    assert run_cli("simulate", "--model", "tvar", "--scenario", "custom",
                   "--a-const", "1.2", "--n", 60, "--out", tmp_path / "x.csv") == 1
    assert "error:" in capsys.readouterr().err


def test_simulate_regression_columns(tmp_path):
    out = tmp_path / "reg.csv"
    assert run_cli("simulate", "--model", "regression", "--scenario", "h0",
                   "--n", 120, "--out", out) == 0
    columns, data = read_table(out)
    assert columns == ["z", "w1", "w2"]
    assert data.shape == (120, 3)


def test_simulate_regression_custom_is_library_only(tmp_path, capsys):
    assert run_cli("simulate", "--model", "regression", "--scenario", "custom",
                   "--n", 60, "--out", tmp_path / "x.csv") == 1
    assert "library-only" in capsys.readouterr().err


# -- test -----------------------------------------------------------------------

@pytest.fixture()
def tvar_csv(tmp_path):
    out = tmp_path / "series.csv"
    run_cli("simulate", "--model", "tvar", "--scenario", "h0",
            "--n", 400, "--seed", 3, "--out", out)
    return out


def test_test_report_json_to_stdout(tvar_csv, capsys):
    assert run_cli("test", "--in", tvar_csv, "--functional", "autocorr:1",
                   "--boot-m", 50, "--seed", 2) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["functional"] == "autocorr:1"
    assert 0.0 < payload["p_value"] <= 1.0
    assert payload["n_raw"] == 400


def test_test_report_file_and_paths(tvar_csv, tmp_path, capsys):
    report = tmp_path / "report.json"
    prefix = tmp_path / "out"
    assert run_cli("test", "--in", tvar_csv, "--functional", "mean",
                   "--boot-m", 50, "--seed", 2, "--out-report", report,
                   "--out-paths", prefix) == 0
    payload = json.loads(report.read_text())
    assert payload["functional"] == "mean"
    text = capsys.readouterr().out
    assert "p-value" in text and "critical value" in text

    _, integrated = read_table(f"{prefix}_integrated.csv")
    _, cusum = read_table(f"{prefix}_cusum.csv")
    _, thresholds = read_table(f"{prefix}_thresholds.csv")
    assert integrated.shape == (401, 2)
    assert cusum.shape == (401, 2)
    assert thresholds.shape == (2, 2)
    # delimited output and the figure views must agree with the report
    assert integrated[-1, 1] == pytest.approx(payload["integrated_estimate_at_1"])
    for figure in (f"{prefix}_integrated.png", f"{prefix}_cusum.png"):
        with open(figure, "rb") as fh:
            assert fh.read(8) == PNG_MAGIC


def test_test_explicit_tuning_flags(tvar_csv, capsys):
    assert run_cli("test", "--in", tvar_csv, "--functional", "mean",
                   "--bandwidth", 25, "--lag", 3, "--offset", 25, "--block-len", 3,
                   "--boot-m", 40, "--levels", "0.01,0.05,0.2",
                   "--bootstrap-weight", "literal") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["config"]["bandwidth"] == 25
    assert payload["weighting"] == "literal"
    assert set(payload["critical_values"]) == {"0.01", "0.05", "0.2"}


def test_test_regression_column_handling(tmp_path, capsys):
    reg = tmp_path / "reg.csv"
    run_cli("simulate", "--model", "regression", "--scenario", "h0",
            "--n", 300, "--seed", 5, "--out", reg)
    capsys.readouterr()
    assert run_cli("test", "--in", reg, "--functional", "regression:1",
                   "--column", "z", "--boot-m", 40, "--seed", 1) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["functional"] == "regression:1"
    assert payload["m"] == 300


def test_test_unknown_column_fails(tvar_csv, capsys):
    assert run_cli("test", "--in", tvar_csv, "--column", "volume",
                   "--boot-m", 20) == 1
    assert "error:" in capsys.readouterr().err


def test_test_invalid_level_fails(tvar_csv, capsys):
    assert run_cli("test", "--in", tvar_csv, "--levels", "1.5",
                   "--boot-m", 20) == 1
    assert "error:" in capsys.readouterr().err


# -- mc ---------------------------------------------------------------------------

def read_text_table(path):
    """mc tables mix strings with numbers, so read_table cannot parse them."""
    lines = [ln for ln in open(path, encoding="utf-8").read().splitlines() if ln.strip()]
    header = [c.strip() for c in lines[0].split(",")]
    rows = [[c.strip() for c in ln.split(",")] for ln in lines[1:]]
    return header, rows


def test_mc_size_power_table(tmp_path):
    out = tmp_path / "table.csv"
    assert run_cli("mc", "--table", "size-power", "--n-list", "200",
                   "--scenarios", "h0,h1", "--reps", 4, "--boot-m", 19,
                   "--out", out) == 0
    columns, rows = read_text_table(out)
    assert columns == ["model", "scenario", "n", "c", "level", "rate",
                       "reps", "boot_m", "mean_runtime"]
    assert len(rows) == 4  # 2 scenarios x 2 levels
    for row in rows:
        assert 0.0 <= float(row[5]) <= 1.0


def test_mc_estimator_error_table(tmp_path):
    out = tmp_path / "err.csv"
    assert run_cli("mc", "--table", "estimator-error", "--n-list", "200,300",
                   "--scenarios", "h0", "--reps", 3, "--boot-m", 19,
                   "--out", out) == 0
    columns, rows = read_text_table(out)
    assert columns == ["scenario", "n", "c", "estimator", "mae", "bias",
                       "target", "reps"]
    assert len(rows) == 4  # 2 sizes x 2 estimators
    assert {row[3] for row in rows} == {"linearized", "plugin"}


def test_mc_pvalues_table_with_histograms(tmp_path):
    out = tmp_path / "pvals.csv"
    assert run_cli("mc", "--table", "pvalues", "--n-list", "200,240",
                   "--reps", 4, "--boot-m", 19, "--out", out) == 0
    columns, data = read_table(out)
    assert columns == ["n", "rep", "p_value", "ks"]
    assert data.shape[0] == 8
    for n in (200, 240):
        with open(tmp_path / f"pvals_n{n}.png", "rb") as fh:
            assert fh.read(8) == PNG_MAGIC


def test_mc_ols_table(tmp_path):
    out = tmp_path / "ols.csv"
    assert run_cli("mc", "--table", "ols", "--n-list", "150", "--scenarios", "h0",
                   "--reps", 3, "--boot-m", 19, "--out", out) == 0
    _, rows = read_text_table(out)
    assert len(rows) == 2


# -- ingest ------------------------------------------------------------------------

def test_ingest_price_pipeline(tmp_path):
    prices = tmp_path / "prices.csv"
    rng = np.random.default_rng(0)
    path = 100.0 * np.exp(np.cumsum(0.01 * rng.standard_normal(200)))
    with open(prices, "w", encoding="utf-8") as fh:
        fh.write("date,close\n")
        for i, p in enumerate(path):
            fh.write(f"{i},{p:.17g}\n")
    out = tmp_path / "returns.csv"
    assert run_cli("ingest", "--in", prices, "--price-col", "close",
                   "--log-returns", "--arctan-gamma", "1e-4", "--out", out) == 0
    columns, data = read_table(out)
    assert columns == ["x"]
    assert data.shape == (199, 1)
    assert np.all(np.abs(data) < np.pi / 2)


def test_ingest_without_transform(tmp_path):
    src = tmp_path / "raw.csv"
    src.write_text("x\n1.5\n2.5\n")
    out = tmp_path / "copy.csv"
    assert run_cli("ingest", "--in", src, "--out", out) == 0
    _, data = read_table(out)
    np.testing.assert_array_equal(data, [[1.5], [2.5]])


def test_ingest_bad_gamma_fails(tmp_path, capsys):
    src = tmp_path / "raw.csv"
    src.write_text("x\n1.0\n")
    assert run_cli("ingest", "--in", src, "--arctan-gamma", "zero",
                   "--out", tmp_path / "o.csv") == 1
    assert "error:" in capsys.readouterr().err


def test_ingest_nonpositive_price_fails(tmp_path, capsys):
    src = tmp_path / "raw.csv"
    src.write_text("x\n1.0\n-2.0\n")
    assert run_cli("ingest", "--in", src, "--log-returns",
                   "--out", tmp_path / "o.csv") == 1
    assert "error:" in capsys.readouterr().err


# -- process-level smoke -------------------------------------------------------------

def test_cli_module_entry_point(tmp_path):
    out = tmp_path / "series.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "lscusum.cli", "simulate", "--model", "tvar",
         "--scenario", "h0", "--n", "50", "--out", str(out)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert "wrote 50 x 1 series" in proc.stdout
