"""Command-line surface: JSON output, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from jetweyl.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_dims(capsys):
    code, doc = run(["dims", "2"], capsys)
    assert code == 0
    assert doc["dim_jet_space"] == 23
    assert doc["dim_equation"] == 21


def test_reduce(capsys):
    code, doc = run(["reduce", "u_tx"], capsys)
    assert code == 0
    assert "u_yy" in doc["reduced"]
    assert "u_tx" not in doc["reduced"]


def test_check_symmetry_single_family(capsys):
    code, doc = run(["check-symmetry", "3"], capsys)
    assert code == 0 and doc["ok"]


def test_grading(capsys):
    code, doc = run(["grading", ], capsys)
    assert code == 0 and doc["ok"]


def test_orbit_dim_special_point(capsys):
    code, doc = run(["orbit-dim", "2", "--point", "special"], capsys)
    assert code == 0
    assert doc["dimension"] == 18
    assert doc["expected"] == 18


def test_invariants_eval(capsys):
    code, doc = run(
        ["invariants", "--eval", "(u_xy + v_xx)/u_x^2", "--at", "u_x=1,u_xx=1,u_xy=1,v_xx=1"],
        capsys,
    )
    assert code == 0
    assert doc["eval"]["value"] == "2"
    assert doc["I"]["1"] == "(u_xy + v_xx)/u_x^2"


def test_invariants_eval_singular_point_is_a_domain_error(capsys):
    code, _ = run(
        ["invariants", "--eval", "(u_xy + v_xx)/u_x^2", "--at", "u_x=0,u_xx=1"], capsys
    )
    assert code == 4


def test_counts(capsys):
    code, doc = run(["counts", "ms", "--upto", "6"], capsys)
    assert code == 0
    by_k = {rec["k"]: rec for rec in doc["values"]}
    assert by_k[2]["h"] == 3 and by_k[6]["h"] == 21
    assert "poincare" in doc


def test_check_solution_catalog(capsys):
    code, doc = run(["check-solution", "trivial"], capsys)
    assert code == 0
    assert doc["solves_system"] and doc["ew_exact"]
    assert doc["lambda"] == "0"


def test_check_solution_negative_control(capsys):
    code, doc = run(["check-solution", "u = x*y ; v = 0"], capsys)
    assert code == 1
    assert doc["solves_system"] is False


def test_check_solution_parse_error(capsys):
    code, _ = run(["check-solution", "u = ; v = 0"], capsys)
    assert code == 3


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_transform_reflection(capsys):
    code, doc = run(["transform", "hierarchy", "--w", "x^3", "--reflect", "txy"], capsys)
    assert code == 0
    assert doc["still_solution"]


def test_transform_element(capsys):
    code, doc = run(["transform", "hierarchy", "--w", "x^3", "--D", "4*t", "--E", "2"], capsys)
    assert code == 0 and doc["still_solution"]


def test_signature_and_compare_round_trip(tmp_path, capsys):
    sl2 = tmp_path / "sl2.json"
    exp = tmp_path / "exp.json"
    code, _ = run(
        ["signature", "sl2-family", "--f", "0", "--h", "0", "--out", str(sl2)], capsys
    )
    assert code == 0
    code, _ = run(
        ["signature", "exp-family", "--f", "1", "--h", "1", "--out", str(exp)], capsys
    )
    assert code == 0
    code, doc = run(["compare", str(sl2), str(exp)], capsys)
    assert code == 1
    assert doc["verdict"] == "distinct"
    code, doc = run(["compare", str(sl2), str(sl2)], capsys)
    assert code == 0
    assert doc["verdict"] == "equivalent-evidence"


def test_signature_singular_branch_is_a_domain_error(capsys):
    code, _ = run(["signature", "trivial"], capsys)
    assert code == 4


def test_signature_bytes_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        code, _ = run(
            ["signature", "sl2-family", "--f", "0", "--h", "0", "--seed", "5", "--out", str(out)],
            capsys,
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_all_single_suite(capsys):
    code, doc = run(["verify-all", "--only", "coframe"], capsys)
    assert code == 0
    assert doc["suites"]["coframe"]["ok"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jetweyl.cli", "dims", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim_equation"] == 11
