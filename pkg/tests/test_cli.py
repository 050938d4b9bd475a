"""CLI surface: flags, formats, exit codes, determinism."""

import io
import json

import pytest

from bernsym.cli import main, parse_grid_file


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_verify_pass_exit_zero():
    code, out, _ = run_cli(["verify", "--theorem", "1", "--d", "1", "--r", "3",
                            "--j", "1", "--w", "1,2", "--n-max", "4", "--mode", "as-stated"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["sides"][0]["weight"] == "w1*w2"


def test_verify_counterexample_exit_one_with_witness():
    code, out, _ = run_cli(["verify", "--theorem", "3", "--d", "1", "--r", "3",
                            "--j", "1", "--w", "1,2", "--n-max", "1", "--mode", "as-stated"])
    assert code == 1
    doc = json.loads(out)
    assert doc["pass"] is False
    wit = doc["witness"]
    assert wit["n"] == 1 and wit["y"] == ["0"]
    assert wit["value_a"] == {"m": 3, "coeffs": ["-2/3", "-1/3"]}
    assert wit["value_b"] == {"m": 3, "coeffs": ["-4/3", "-2/3"]}


def test_verify_normalized_mode_passes():
    code, out, _ = run_cli(["verify", "--theorem", "3", "--d", "1", "--r", "3",
                            "--w", "1,2", "--n-max", "1", "--mode", "normalized"])
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_out_of_range_theorem_is_usage_error():
    code, _, err = run_cli(["verify", "--theorem", "12", "--d", "1", "--r", "3", "--w", "1,2"])
    assert code == 2
    assert "error:" in err and err.count("\n") == 1


def test_unknown_flag_rejected():
    code, _, _ = run_cli(["verify", "--theorem", "1", "--frobnicate", "1"])
    assert code == 2


def test_help_exits_zero():
    code, _, _ = run_cli(["--help"])
    assert code == 0


def test_precondition_violation_is_usage_error():
    code, _, err = run_cli(["verify", "--theorem", "1", "--d", "1", "--r", "3", "--w", "1,3"])
    assert code == 2 and "r=3" in err


def test_bernoulli_output_and_csv():
    code, out, _ = run_cli(["bernoulli", "--d", "1", "--r", "3", "--n-max", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["numbers"][0] == {"m": 3, "coeffs": ["0", "0"]}
    assert doc["numbers"][2] == {"m": 3, "coeffs": ["2/3", "0"]}
    code, out, _ = run_cli(["bernoulli", "--d", "1", "--r", "3", "--n-max", "2",
                            "--format", "csv", "--x", "0"])
    lines = out.strip().splitlines()
    assert lines[0] == "n,value,B_n(0)"
    assert len(lines) == 4


def test_chars_listing():
    code, out, _ = run_cli(["chars", "--d", "5"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["characters"]) == 4
    orders = sorted(c["order"] for c in doc["characters"])
    assert orders == [1, 2, 4, 4]
    code, out, _ = run_cli(["chars", "--d", "5", "--primitive-only"])
    assert len(json.loads(out)["characters"]) == 3


def test_power_sum_value():
    code, out, _ = run_cli(["power-sum", "--d", "1", "--r", "3", "--k", "1", "--upper", "2"])
    assert code == 0
    # zeta3 + 2 zeta3^2 = -2 - zeta3 on the power basis
    assert json.loads(out)["value"] == {"m": 3, "coeffs": ["-2", "-1"]}


def test_quotient_series_coefficients():
    code, out, _ = run_cli(["quotient", "--type", "G1", "--d", "1", "--r", "3",
                            "--w", "1,2", "--order", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["egf_coefficients"][0] == {"m": 3, "coeffs": ["0", "0"]}
    assert doc["egf_coefficients"][1] == {"m": 3, "coeffs": ["-2/3", "-1/3"]}


def test_quotient_condition_violation():
    code, _, err = run_cli(["quotient", "--type", "G0", "--d", "1", "--r", "3",
                            "--w", "3,1", "--order", "2"])
    assert code == 2 and "w1" in err


def test_consistency_command():
    code, out, _ = run_cli(["consistency", "--type", "L23:2", "--d", "1", "--r", "5",
                            "--w", "1,2,3", "--n-max", "4"])
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_padic_command():
    code, out, _ = run_cli(["padic", "--p", "5", "--r", "3", "--d", "1", "--n", "1",
                            "--levels", "3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert [row["valuation"] for row in doc["table"]] == [1, 2, 3]


def test_padic_bad_prime_usage_error():
    code, _, _ = run_cli(["padic", "--p", "6", "--r", "5", "--n", "1"])
    assert code == 2


def test_audit_roundtrip(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(
        "theorems = 1,3\nd = 1\nchars = all\nr = 3\nj = 1\n"
        "w_components = 1,2\nn_max = 2\nmodes = as-stated,normalized\n"
    )
    code, out, _ = run_cli(["audit", "--grid-file", str(cfg)])
    assert code == 1  # theorem 3 fails as stated at w1 != w2
    doc = json.loads(out)
    by_key = {(row["theorem"], row["mode"]): row for row in doc["summary"]}
    assert by_key[(1, "as-stated")]["fail"] == 0
    assert by_key[(3, "as-stated")]["fail"] == 2
    assert by_key[(3, "normalized")]["fail"] == 0
    assert by_key[(3, "as-stated")]["first_witness"]["n"] == 1


def test_audit_deterministic_bytes(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text("theorems = 11\nd = 1\nr = 3\nw_components = 1,2\nn_max = 2\n")
    outputs = set()
    for _ in range(2):
        _, out, _ = run_cli(["audit", "--grid-file", str(cfg)])
        outputs.add(out)
    assert len(outputs) == 1


def test_grid_file_parsing_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense_key = 1\n")
    code, _, err = run_cli(["audit", "--grid-file", str(bad)])
    assert code == 2 and "nonsense_key" in err
    missing = tmp_path / "missing.cfg"
    code, _, _ = run_cli(["audit", "--grid-file", str(missing)])
    assert code == 3  # i/o failure


def test_grid_file_explicit_chars(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(
        "theorems = 11\nd = 5\nchars = explicit\nchar_labels = 5:2\n"
        "r = 3\nw_components = 1,2\nn_max = 1\n"
    )
    config, fmt = parse_grid_file(str(cfg))
    assert config.char_labels == ((5, (2,)),)
    assert config.characters(5)[0].exponents == (2,)


def test_verify_values_flag():
    code, out, _ = run_cli(["verify", "--theorem", "11", "--d", "1", "--r", "3",
                            "--w", "1,1,2", "--n-max", "1", "--values"])
    assert code == 0
    doc = json.loads(out)
    # no y variables: one grid point per n; n=0 gives S_0(0)S_0(0)S_0(1) = 1 + zeta3
    assert doc["sides"][0]["values"] == [[{"m": 3, "coeffs": ["1", "1"]}],
                                         [{"m": 3, "coeffs": ["0", "1"]}]]
