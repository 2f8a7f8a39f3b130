import csv
import io
import json
import os
import subprocess
import sys

import pytest

from modvar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_json(capsys):
    code, out, _ = run(capsys, "moments", "--slits", "2", "--separation", "5", "--width", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["product"] == pytest.approx(0.5678618083866, rel=1e-10)
    assert doc["methods"]["sdev_pmod"] == "SingleFringeQuadrature"
    assert doc["config"]["slits"] == 2 and doc["units"]["hbar"] == 1


def test_moments_refined_check(capsys):
    code, out, _ = run(capsys, "moments", "-m", "8", "--refined")
    doc = json.loads(out)
    assert code == 0
    assert doc["sdev_pmod_refined_check"] == pytest.approx(doc["sdev_pmod_refined"], abs=1e-10)


@pytest.mark.parametrize("argv", [
    ["moments", "--slits", "3"],
    ["moments", "--slits", "2", "--width", "6"],
    ["sweep", "--m-end", "9"],
    ["sweep", "--m-start", "10", "--m-end", "4"],
    ["fringe-data", "--slits", "6", "--k-range", "-1", "1"],
    ["fringe-data", "--slits", "4", "--k-range", "1", "-1"],
    ["commutator", "--state", "psi-x"],
    ["commutator", "--state", "single-slit", "--refined"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["moments"])
    assert info.value.code == 2


def test_numeric_failure_exits_3(capsys):
    code, _, err = run(capsys, "commutator", "--k-max", "3.3")
    assert code == 3 and "numerical failure" in err


def test_sweep_csv_is_deterministic(capsys, tmp_path):
    path = tmp_path / "s.csv"
    run(capsys, "sweep", "--m-end", "12", "--output", str(path))
    first = path.read_bytes()
    _, out, _ = run(capsys, "sweep", "--m-end", "12")
    assert out.encode() == first
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["m"]) for r in rows] == [2, 4, 6, 8, 10, 12]
    assert float(rows[0]["product"]) == pytest.approx(0.5678618083866, rel=1e-12)


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--m-end", "4", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 2


def test_fringe_data(capsys):
    code, out, _ = run(capsys, "fringe-data", "--slits", "8", "--k-range", "-10", "10", "--points", "11")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["k", "intensity", "envelope_intensity"]
    assert len(rows) == 12
    centre = rows[6]
    assert float(centre[0]) == 0 and float(centre[1]) == pytest.approx(8 / 3.141592653589793 * 0.5)


def test_commutator_and_profile(capsys, tmp_path):
    prof = tmp_path / "r.csv"
    code, out, _ = run(capsys, "commutator", "--state", "psi-4", "--resolution", "coarse",
                       "--profile", str(prof))
    doc = json.loads(out)
    assert code == 0 and doc["l2_residual"] < 1e-3
    lines = prof.read_text().splitlines()
    assert lines[0] == "k,abs_residual" and len(lines) == doc["n_points"] + 1
    code, out, _ = run(capsys, "commutator", "--state", "single-slit", "--resolution", "coarse")
    assert json.loads(out)["l2_residual"] > 0.1


def test_verify_single_suite(capsys):
    code, out, err = run(capsys, "verify", "--suite", "dirichlet", "--suite", "product-sum")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert {c["suite"] for c in doc["checks"]} == {"dirichlet", "product-sum"}
    assert "checks passed" in err


def test_verify_fails_under_impossible_tolerance():
    env = dict(os.environ, MODVAR_TOL="1e-20")
    proc = subprocess.run([sys.executable, "-m", "modvar", "verify", "--suite", "integrals"],
                          env=env, capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["passed"] is False
    assert "FAIL" in proc.stderr


def test_verify_all_suites_pass(capsys):
    code, out, _ = run(capsys, "verify")
    doc = json.loads(out)
    assert code == 0
    assert all(c["passed"] for c in doc["checks"])
