import csv
import io
import json

import pytest

from ckbateman.cli import (
    EXIT_FAILED, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, RunConfig, SuiteResult, Check, main,
    render_report,
)


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("suite", ["algebras", "invariants", "bateman-rep", "appendix"])
def test_exact_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["failures"] == 0 and report["checks"] > 0


def test_invariant_residuals_render_as_zero(capsys):
    _, out, _ = run(capsys, "verify", "invariants", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["value"] == "0" for r in rows if r["check"].startswith("invariant"))


def test_verify_all_is_byte_reproducible(tmp_path):
    a, b = tmp_path / "a.md", tmp_path / "b.md"
    assert main(["verify", "all", "--seed", "7", "--format", "markdown", "--out", str(a)]) == EXIT_OK
    assert main(["verify", "all", "--seed", "7", "--format", "markdown", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    for heading in ("## Invariants", "## Lie algebras", "## Bateman representation",
                    "## Classical Bateman", "## First-order spectra", "## Damped particle"):
        assert heading in text


def test_failures_give_exit_one():
    cfg = RunConfig("verify")
    bad = [SuiteResult("algebras", [Check("x", False, "1")])]
    assert json.loads(render_report(bad, cfg))["failures"] == 1


def test_verify_reports_suite_errors_as_runtime(capsys):
    # critical damping makes the canonical map divide by Omega^2 = 0
    code, out, _ = run(capsys, "verify", "canonical", "--gamma", "2", "--omega", "1")
    assert code == EXIT_RUNTIME
    assert "suite error" in out


def test_simulate_equilibrium(capsys):
    code, out, err = run(capsys, "simulate", "--state", "0,0,0,0", "--t-end", "2", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "x", "p_x", "y", "p_y", "H"]
    assert all(float(v) == 0 for r in rows[1:] for v in r[1:])
    assert json.loads(err)["energy_drift"] == 0


def test_simulate_default_energy_drift(capsys):
    code, out, _ = run(capsys, "simulate", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["relative_energy_drift"] <= 1e-9


def test_simulate_reduction(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "simulate", "--reduction", "--x0", "1", "--v0", "0", "--out", str(path))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["max_ck_deviation"] <= 1e-7
    assert path.read_text().startswith("t,x,p_x,y,p_y,H\n")


def test_simulate_runtime_failure(capsys):
    # overdamped over a long horizon: roundoff growth breaks the constraint
    code, _, err = run(capsys, "simulate", "--reduction", "--gamma", "3", "--t-end", "10")
    assert code == EXIT_RUNTIME
    assert "failed" in err


def test_spectrum_grid(capsys):
    code, out, _ = run(capsys, "spectrum", "under", "--label=-2:2", "--lam=-1,0,1")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert len(rows) == 15
    assert all(r["residual_max"] <= 1e-9 for r in rows)
    assert {tuple(r["labels"].values()) for r in rows} == {
        (float(n), float(l)) for n in range(-2, 3) for l in (-1, 0, 1)}


def test_spectrum_examples(capsys):
    _, out, _ = run(capsys, "spectrum", "critical", "--label", "0", "--lam", "0")
    assert json.loads(out)[0]["E"] == 0
    _, out, _ = run(capsys, "spectrum", "over", "--label", "1", "--lam", "0", "--hbar", "1", "--freq", "0.3")
    assert json.loads(out)[0]["E"] == pytest.approx(0.3)


def test_spectrum_invalid_label(capsys):
    code, _, err = run(capsys, "spectrum", "under", "--label", "0.5")
    assert code == EXIT_USAGE and "integer" in err


def test_spectrum_regime_mismatch(capsys):
    code, _, err = run(capsys, "spectrum", "over", "--label", "1")
    assert code == EXIT_USAGE and "--freq" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify", "nothing")[0] == EXIT_USAGE
    assert run(capsys, "verify", "algebras", "--tol", "-1")[0] == EXIT_USAGE
    assert run(capsys, "simulate", "--state", "1,2")[0] == EXIT_USAGE


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[params]\ngamma = 0.5\nomega = 2\n\n[run]\nseed = 3\nformat = csv\n")
    code, out, _ = run(capsys, "verify", "appendix", "--config", str(cfg))
    assert code == EXIT_OK and out.startswith("suite,check")
    code, out, _ = run(capsys, "verify", "appendix", "--config", str(cfg), "--format", "json",
                       "--gamma", "0.7")
    params = json.loads(out)["params"]
    assert params["gamma"] == 0.7 and params["omega"] == 2.0 and params["seed"] == 3


@pytest.mark.parametrize("text", ["[params]\nspin = 1\n", "[other]\na = 1\n", "[params]\ngamma = fast\n",
                                  "not an ini file"])
def test_bad_config(tmp_path, capsys, text):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    assert run(capsys, "verify", "appendix", "--config", str(cfg))[0] == EXIT_USAGE


def test_missing_config(capsys, tmp_path):
    assert run(capsys, "verify", "appendix", "--config", str(tmp_path / "none.ini"))[0] == EXIT_USAGE


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RUNTIME) == (0, 1, 2, 3)
