import json
import subprocess
import sys

import pytest

from monogamy_qkd.cli import run_cli
from monogamy_qkd.figures import CSV_HEADER


def run_json(capsys, *argv):
    code = run_cli(["--json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_critical_qm_json(capsys):
    code = run_cli(["critical", "--theory", "qm", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["status"] == "root"
    assert doc["beta_star"] == pytest.approx(0.8413, abs=1e-4)
    assert doc["rounded"] == "0.841" and doc["below_tsirelson"] is True


def test_critical_ns_human(capsys):
    assert run_cli(["critical", "--theory", "ns"]) == 0
    out = capsys.readouterr().out
    assert "status: root" in out and "rounded: 0.881" in out


def test_critical_custom_curve(tmp_path, capsys):
    curve = tmp_path / "flat.csv"
    curve.write_text("beta,f\n0.5,0.5\n1.0,0.5\n")
    code, doc = run_json(capsys, "critical", "--theory", "custom", "--curve", str(curve))
    assert code == 0 and doc["status"] == "always_secure"


def test_check_ns_insecure(capsys):
    code, doc = run_json(capsys, "check", "--beta", "0.87", "--theory", "ns")
    assert code == 0 and doc["secure"] is False
    assert doc["rhs_bits"] == pytest.approx(0.48, abs=1e-12)
    assert doc["lhs_bits"] == pytest.approx(0.5574, abs=1e-4)


def test_pointwise(capsys):
    code, doc = run_json(capsys, "pointwise", "--pb", "1.0", "--pe", "0.5")
    assert code == 0 and doc["secure"] and doc["margin_bits"] == pytest.approx(1.0)


def test_counterexample_json(capsys):
    code, doc = run_json(capsys, "counterexample", "--pb", "0.85", "--slack", "0.3")
    assert code == 0
    assert set(doc) == {"p_b", "strategy", "p_e", "i_ab", "i_ae"}
    assert doc["p_e"] < doc["p_b"] and doc["i_ae"] > doc["i_ab"]
    assert set(doc["strategy"]) == {"weights", "conditionals"}


def test_oracle(capsys):
    code, doc = run_json(capsys, "oracle", "--pe", "0.775", "--alphabet", "2", "--grid", "50")
    assert code == 0 and doc["min_value"] == pytest.approx(0.45, abs=0.02)


def test_strategy_file(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text('{"weights": [0.45, 0.275, 0.275], "conditionals": [0.5, 1.0, 0.0]}')
    code, doc = run_json(capsys, "strategy", str(path))
    assert code == 0
    assert doc["p_e"] == pytest.approx(0.775) and doc["i_ae"] == pytest.approx(0.55)
    assert doc["bound"]["tight"] is True


def test_bound(capsys):
    code, doc = run_json(capsys, "bound", "--samples", "1000", "--seed", "3")
    assert code == 0 and doc["violations"] == 0 and doc["seed"] == 3


@pytest.mark.parametrize("fmt", ["csv", "json", "svg"])
def test_figure_formats(tmp_path, capsys, fmt):
    out = tmp_path / f"fig.{fmt}"
    assert run_cli(["figure", "--out", str(out), "--format", fmt, "--points", "3"]) == 0
    assert out.exists() and out.stat().st_size > 0
    if fmt == "csv":
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 4


def test_report(tmp_path, capsys):
    code, doc = run_json(capsys, "report", "--outdir", str(tmp_path / "r"), "--points", "11")
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "r").iterdir())
    assert names == ["critical.csv", "curves.csv", "figure.json", "figure.svg"]
    crit = (tmp_path / "r" / "critical.csv").read_text().splitlines()
    assert crit[0] == "theory,beta_star,f_at_beta_star,before_p,iterations"
    assert crit[1].startswith("qm,0.841") and crit[1].split(",")[3] == "true"
    assert crit[2].startswith("ns,0.881") and crit[2].split(",")[3] == "false"


@pytest.mark.parametrize(
    "argv, code, flag",
    [
        (["check", "--beta", "abc", "--theory", "qm"], 2, "--beta"),
        (["critical", "--theory", "qm", "--tol", "x"], 2, "--tol"),
        (["critical", "--theory", "qm", "--bogus"], 2, "--bogus"),
        (["critical", "--theory", "xx"], 2, "--theory"),
        (["critical", "--theory", "custom"], 2, "--curve"),
        (["critical", "--theory", "qm", "--tol", "-1"], 2, "tolerance"),
        (["oracle", "--pe", "0.8", "--alphabet", "9", "--grid", "20"], 2, "alphabet_size"),
        (["check", "--beta", "0.9", "--theory", "qm"], 1, "beta"),
        (["pointwise", "--pb", "0.3", "--pe", "0.6"], 1, "p_b"),
        (["counterexample", "--pb", "1.0"], 1, "p_b"),
        ([], 2, "command"),
    ],
)
def test_error_exit_codes(capsys, argv, code, flag):
    assert run_cli(argv) == code
    assert flag in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monogamy_qkd", "critical", "--theory", "ns", "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rounded"] == "0.881"
