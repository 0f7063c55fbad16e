"""Thin-client behavior: exit codes, output channels, golden checks."""

import json

import pytest

from plectic.cli import EXIT_CODES, EXIT_GOLDEN_MISMATCH, main

from conftest import fixture_path


def run_cli(capsys, *argv):
    code = 0
    try:
        main(list(argv))
    except SystemExit as exc:
        code = exc.code or 0
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_fixture_ok(capsys):
    code, out, err = run_cli(capsys, "check-fixture", "--fixture",
                             fixture_path("synthetic_p3_m3.json"))
    assert code == 0
    assert "ok: p=3 m_max=3" in out


def test_check_fixture_truncated_exit_2(capsys, tmp_path):
    bad = tmp_path / "t.json"
    bad.write_text("{\"p\": 3,")
    code, out, err = run_cli(capsys, "check-fixture", "--fixture", str(bad))
    assert code == EXIT_CODES["SchemaError"] == 2
    body = json.loads(err.strip().splitlines()[-1])
    assert body["error"] == "SchemaError"


def test_harmonize_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "harmonize", "--fixture",
                           fixture_path("synthetic_p3_m3_zero.json"),
                           "--depth", "2", "--prec", "7")
    assert code == 0 and "support=0" in out
    code, _, err = run_cli(capsys, "harmonize", "--fixture",
                           fixture_path("synthetic_p3_m3.json"),
                           "--depth", "2", "--prec", "7")
    assert code == EXIT_CODES["DegenerationUnderdetermined"]
    assert json.loads(err.strip().splitlines()[-1])["error"] == \
        "DegenerationUnderdetermined"


def test_point_side_golden_pass(capsys):
    code, out, _ = run_cli(
        capsys, "point-side",
        "--curve", fixture_path("curve_37_63_2d1_instance1.json"),
        "--golden", fixture_path("golden_point_side_instance1.json"))
    assert code == 0
    assert "√−1⊗√−1" in out
    assert "golden: agreement=10" in out


def test_point_side_golden_mismatch(capsys, tmp_path):
    wrong = {"p": 3, "digits": 7,
             "coords": ["0", "0", "0", "1 + 3 + 2·3^3 + O(3^9)"]}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(wrong))
    code, _, err = run_cli(
        capsys, "point-side",
        "--curve", fixture_path("curve_37_63_2d1_instance1.json"),
        "--golden", str(path))
    assert code == EXIT_GOLDEN_MISMATCH
    assert "MISMATCH" in err


def test_integrate_emit_json(capsys):
    code, out, _ = run_cli(capsys, "integrate", "--spec",
                           fixture_path("integrate_dirac_example.json"),
                           "--emit-json")
    assert code == 0
    body = json.loads(out)
    assert len(body["value"]["coords"]) == 4


def test_compare_equal_dumps_exit_0(capsys, tmp_path):
    dump = {"p": 3, "coords": ["0", "0", "0", "2·3^2 + 3^6 + O(3^7)"]}
    a = tmp_path / "a.json"
    a.write_text(json.dumps(dump, ensure_ascii=False))
    code, out, _ = run_cli(capsys, "compare", str(a), str(a))
    assert code == 0
    assert "agreement=7" in out


def test_compare_below_threshold_exit_1(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(json.dumps({"p": 3, "coords": ["0", "0", "0",
                                                "1 + O(3^8)"]}))
    b.write_text(json.dumps({"p": 3, "coords": ["0", "0", "0",
                                                "1 + 3 + O(3^8)"]}))
    code, _, _ = run_cli(capsys, "compare", str(a), str(b), "--digits", "4")
    assert code == 1


def test_plectic_subcommand(capsys):
    code, out, _ = run_cli(capsys, "plectic", "--fixture",
                           fixture_path("curve_p3_m3_demo.json"),
                           "--depth", "2", "--prec", "10")
    assert code == 0
    assert out.strip() == "0 | 0 | 0 | 0"
