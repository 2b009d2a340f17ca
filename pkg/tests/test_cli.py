"""Command-line interface: subcommands, exit codes, formats, config files.

Runs main() in process so stdout/stderr and exit codes can be asserted
cheaply; one subprocess smoke test confirms the installed entry point.
"""

import json
import subprocess
import sys

import pytest

from numvar import rows_from_csv
from numvar.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# variance
# ---------------------------------------------------------------------------

def test_variance_csv_stdout(capsys):
    code, out, err = run_cli(
        capsys, "variance", "--seq", "monomial:d=2",
        "--schedule", "n=30", "--alphas", "3",
    )
    assert code == 0 and err == ""
    rows = rows_from_csv(out)
    assert len(rows) == 3
    assert all(r.N == 30 and r.method == "exact_tent" for r in rows)


def test_variance_json_summary(capsys):
    code, out, _ = run_cli(
        capsys, "variance", "--seq", "monomial:d=2",
        "--schedule", "n=30", "--alphas", "3", "--format", "json",
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["per_N"][0]["N"] == 30
    assert summary["per_N"][0]["n_alpha"] == 3


def test_variance_out_file_preserves_crlf(tmp_path, capsys):
    out_path = tmp_path / "rows.csv"
    code, out, _ = run_cli(
        capsys, "variance", "--seq", "monomial:d=2",
        "--schedule", "n=20", "--alphas", "2", "--out", str(out_path),
    )
    assert code == 0 and out == ""
    data = out_path.read_bytes()
    assert data.count(b"\r\n") == 3
    assert rows_from_csv(data.decode("utf-8"))[0].N == 20


def test_variance_montecarlo_mode(capsys):
    code, out, _ = run_cli(
        capsys, "variance", "--seq", "monomial:d=2",
        "--schedule", "n=25", "--alphas", "2", "--mc", "500",
    )
    assert code == 0
    assert all(r.method == "monte_carlo" for r in rows_from_csv(out))


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "seq = monomial:d=2\nschedule = n=30\nalphas = 2\nbeta = 0.45\n",
        encoding="utf-8",
    )
    code, out, _ = run_cli(
        capsys, "variance", "--config", str(cfg), "--beta", "0.25",
    )
    assert code == 0
    assert all(r.beta == 0.25 for r in rows_from_csv(out))  # flag wins


def test_custom_sequence_file(tmp_path, capsys):
    seq_file = tmp_path / "terms.txt"
    seq_file.write_text("# hand-picked terms\n3\n1\n4\n15\n", encoding="utf-8")
    code, out, _ = run_cli(
        capsys, "variance", "--seq", "custom:%s" % seq_file,
        "--schedule", "n=4", "--alphas", "2",
    )
    assert code == 0
    assert all(r.seq_id.startswith("custom:") for r in rows_from_csv(out))


# ---------------------------------------------------------------------------
# paircorr
# ---------------------------------------------------------------------------

def test_paircorr_routes_agree(capsys):
    code, out, _ = run_cli(
        capsys, "paircorr", "--seq", "monomial:d=2",
        "--schedule", "n=32", "--alphas", "2", "--tol", "1e-3",
        "--format", "json",
    )
    assert code == 0
    records = json.loads(out)
    assert len(records) == 2
    for rec in records:
        assert abs(rec["r2_direct"] - rec["r2_fourier"]) <= 1e-3 + 1e-9
        assert rec["truncation_bound"] <= 1e-3


def test_paircorr_csv_header(capsys):
    code, out, _ = run_cli(
        capsys, "paircorr", "--seq", "monomial:d=2",
        "--schedule", "n=16", "--alphas", "1", "--tol", "1e-3",
    )
    assert code == 0
    assert out.split("\r\n")[0] == (
        "seq_id,N,beta,L,alpha_hex,r2_direct,r2_fourier,truncation_bound"
    )


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def test_energy_table(capsys):
    code, out, _ = run_cli(
        capsys, "energy", "--seq", "lacunary:base=2",
        "--schedule", "n=8,16,32", "--format", "json",
    )
    assert code == 0
    table = json.loads(out)
    assert [row["energy"] for row in table] == [120, 496, 2016]  # 2N^2 - N


def test_energy_budget_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "energy", "--seq", "monomial:d=2", "--schedule", "n=9000",
    )
    assert code == 3
    assert "budget" in err


def test_energy_generation_error_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "energy", "--seq", "lacunary:base=2", "--schedule", "n=100",
    )
    assert code == 2
    assert "config error" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_single_suite(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suites", "identity", "--seed", "4",
    )
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["suites"][0]["name"] == "identity"


def test_verify_bad_suite_name(capsys):
    code, _, err = run_cli(capsys, "verify", "--suites", "nope")
    assert code == 2 and "config error" in err


def test_verify_zero_tol_budget(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--suites", "identity", "--tol", "0",
    )
    assert code == 3 and "budget" in err


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------

def test_coeffs_output(capsys):
    code, out, _ = run_cli(
        capsys, "coeffs", "--seq", "monomial:d=2", "--schedule", "n=12",
        "--kmax", "5", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert [c["k"] for c in payload] == [1, 2, 3, 4, 5]
    assert all(c["N"] == 12 for c in payload)


def test_coeffs_kmax_validated(capsys):
    code, _, err = run_cli(
        capsys, "coeffs", "--seq", "monomial:d=2", "--schedule", "n=12",
        "--kmax", "0",
    )
    assert code == 2 and "config error" in err


# ---------------------------------------------------------------------------
# shared error handling
# ---------------------------------------------------------------------------

def test_missing_schedule_is_config_error(capsys):
    code, _, err = run_cli(capsys, "variance", "--seq", "monomial:d=2")
    assert code == 2 and "config error" in err


def test_missing_config_file_is_config_error(capsys):
    code, _, err = run_cli(
        capsys, "variance", "--config", "/nonexistent/path.cfg",
    )
    assert code == 2


def test_overflowing_sequence_is_config_error(capsys):
    code, _, err = run_cli(
        capsys, "variance", "--seq", "lacunary:base=2", "--schedule", "n=256",
    )
    assert code == 2 and "config error" in err


def test_installed_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "numvar.cli"],
        capture_output=True,
        text=True,
    )
    # argparse usage error for the missing subcommand
    assert proc.returncode == 2
    proc = subprocess.run(
        [
            "numvar", "energy", "--seq", "monomial:d=2",
            "--schedule", "n=4,8",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("N,")
