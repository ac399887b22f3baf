import json

import pytest

from kodaira.cli import (
    EXIT_OK,
    EXIT_PRECISION_EXHAUSTED,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    main,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_curve_info_json(capsys):
    code, out, _ = run_cli(capsys, "curve-info", "--lambda", "1/1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["schema"] == "1"
    assert payload["j_ratio"]["value"] == "1/31"
    assert payload["j_standard"]["value"] == "6912/31"
    assert payload["discriminant"]["value"] == "-496/1"


def test_curve_info_text(capsys):
    code, out, _ = run_cli(capsys, "curve-info", "--lambda", "1/1",
                           "--format", "text")
    assert code == EXIT_OK
    assert "j (bare ratio)" in out
    assert "j (standard" in out


def test_genus_command(capsys):
    code, out, _ = run_cli(capsys, "genus", "--r", "8")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["genus_by_recursion"] == 1025
    assert payload["genus_closed_form"] == 1025


def test_slope_table_csv(capsys):
    code, out, _ = run_cli(capsys, "slope-table", "--r-min", "8",
                           "--r-max", "12", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[1:] == ["8,7,17,8,gamma-1", "10,8,59,28,gamma-1",
                         "12,9,67,32,gamma-1"]


def test_find_points_writes_certificate(capsys, tmp_path):
    target = tmp_path / "cert.json"
    code, out, _ = run_cli(capsys, "find-points", "--r", "4",
                           "--output", str(target))
    assert code == EXIT_OK
    payload = json.loads(target.read_text())
    assert payload["r"] == 4
    assert len(payload["points"]) == 3
    assert all(c["passed"] for c in payload["checks"])


def test_verify_subcommand_passes(capsys):
    code, out, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                           "--samples", "5")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["status"] == "pass"


def test_verify_byte_identical_reports(capsys):
    _, first, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                          "--samples", "5", "--seed", "7")
    _, second, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                           "--samples", "5", "--seed", "7")
    assert first.encode() == second.encode()


def test_verify_dump_enumeration(capsys, tmp_path):
    target = tmp_path / "branch.csv"
    code, _, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                         "--samples", "3", "--dump-enumeration", str(target))
    assert code == EXIT_OK
    lines = target.read_text().strip().split("\n")
    assert lines[0] == "x1,y1,x2,y2"
    assert len(lines) == 1 + 4


def test_k_squared_symbolic(capsys):
    code, out, _ = run_cli(capsys, "k-squared", "--symbolic")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["k_squared"] == "4*gamma*r + 19*gamma - 4*r - 19"
    assert payload["adjunction"] == {"Rsq": "-x1/2", "x2": "x1"}
    assert payload["transcript"]["steps"]


def test_invariants_command(capsys):
    code, out, _ = run_cli(capsys, "invariants", "--r", "8", "--gamma", "2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["k_squared"] == "51/1"
    assert payload["upsilon"] == "17/8"
    assert payload["tau"] == "1/1"


def test_invalid_lambda_exit_code(capsys):
    code, _, err = run_cli(capsys, "curve-info", "--lambda", "0/1")
    assert code == EXIT_USAGE
    assert "singular" in err


def test_odd_r_exit_code(capsys):
    code, _, err = run_cli(capsys, "invariants", "--r", "7")
    assert code == EXIT_USAGE
    assert "even" in err


def test_unknown_flag_exit_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["curve-info", "--no-such-flag"])
    assert excinfo.value.code == EXIT_USAGE


def test_verification_failure_exit_code(capsys, monkeypatch):
    import kodaira.verifier as verifier_module

    def failing(ctx, run, tally, rng):
        tally.record(False)

    monkeypatch.setattr(verifier_module, "_CHECKS", (("forced", failing),))
    code, out, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                           "--samples", "1")
    assert code == EXIT_VERIFICATION_FAILED
    assert json.loads(out)["status"] == "fail"


def test_precision_exhaustion_exit_code(capsys):
    code, _, err = run_cli(capsys, "verify-config-curve", "--r", "3",
                           "--samples", "2", "--tol", "1e-1")
    assert code == EXIT_PRECISION_EXHAUSTED


def test_complex_lambda_verify(capsys):
    code, out, _ = run_cli(capsys, "verify-config-curve", "--r", "2",
                           "--samples", "3", "--lambda", "0.5,0.25")
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "pass"


def test_precision_env_var(capsys, monkeypatch):
    monkeypatch.setenv("KODAIRA_PRECISION_BITS", "128")
    from kodaira.cli import build_parser

    args = build_parser().parse_args(["curve-info"])
    assert args.precision == 128
