import json

import pytest

from coarse_abelian.cli import config_argv, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_norm_dyadic(capsys):
    code, out, _ = run(capsys, "norm", "--group", "Z[1/2]", "--metric", "dyadic", "5/8", "-11/4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["element,norm", "5/8,3", "-11/4,4"]


def test_classify_rationals(capsys):
    code, out, _ = run(capsys, "classify", "Q", "Sum(Z^1, Q/Z)", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"] == [["Q", "Sum(Z^1, Q/Z)", "equivalent", "rank-and-cd"]]
    assert doc["summary"]["left_invariants"]["cd_q"] == 2
    assert doc["input"]["a"] == "Q"


def test_classify_not_equivalent_is_not_a_violation(capsys):
    code, out, _ = run(capsys, "classify", "Z^2", "Sum(Z^1, CyclicSum([3]; repeat-last))")
    assert code == 0
    assert "not-equivalent" in out


def test_decompose_and_split(capsys):
    code, out, _ = run(capsys, "decompose", "--group", "Z[1/3]", "5/9")
    assert code == 0
    assert "h = 1; r = {1: -1, 2: -1}" in out
    code, out, _ = run(capsys, "split", "dyadic", "-11/4", "--format", "csv")
    assert code == 0
    assert "-11/4" in out and "1/4" in out
    code, out, _ = run(capsys, "split", "rational", "--schedule", "3,3", "7/2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == '7/2,"(3,1/2)",7/2'


def test_transfer(capsys):
    code, out, _ = run(
        capsys, "transfer", "--from", "Sum(Z^1, CyclicSum([3]; repeat-last))", "--to", "Z[1/3]", "(5,{0:1})",
        "--bound-at", "2", "--format", "json",
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"] == [["(5,{0:1})", "16/3"]]
    assert doc["summary"] == {"C_2": "6"}


def test_verify_dyadic_split_with_unit_slack(capsys):
    code, out, _ = run(capsys, "verify", "dyadic-split", "--bound", "16", "--grid", "1..8", "--slack", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "delta,eps_max,predicted,pass"
    assert len(out.splitlines()) == 9


def test_verify_dyadic_split_against_delta_exits_one(capsys):
    code, _, _ = run(capsys, "verify", "dyadic-split", "--bound", "16", "--grid", "1..8")
    assert code == 1


def test_corrupted_scales_fail_norm_axioms(capsys):
    ok, _, _ = run(capsys, "verify", "norm-axioms", "--group", "Z[1/3]", "--metric", "pseudo", "--bound", "9")
    assert ok == 0
    bad, _, _ = run(
        capsys, "verify", "norm-axioms", "--group", "Z[1/3]", "--metric", "pseudo", "--scales", "1/2,1", "--bound", "9"
    )
    assert bad == 1
    unchecked, out, _ = run(
        capsys, "verify", "norm-axioms", "--group", "Z[1/3]", "--metric", "pseudo", "--scales", "1/2,1",
        "--bound", "9", "--unchecked",
    )
    assert unchecked == 1
    assert "triangle" in out


def test_growth_csv(capsys):
    code, out, _ = run(capsys, "growth", "--group", "Z^2", "--bound", "8", "--s", "3/2", "--n-max", "5", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,count"
    assert [int(l.split(",")[1]) for l in lines[1:]] == [2 * n * n + 2 * n + 1 for n in range(6)]


def test_growth_compare_refutation_exits_one(capsys):
    code, _, _ = run(capsys, "growth", "--group", "Z^2", "--bound", "12", "--s", "3/2", "--n-max", "10", "--compare", "n")
    assert code == 1


def test_json_reports_are_byte_deterministic(capsys, tmp_path):
    argv = ["verify", "transfer", "--format", "json"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["input"]["target"] == "transfer"
    assert "version" in doc


def test_config_file_matches_flags(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "norm", "group": "Z[1/2]", "metric": "dyadic", "format": "json", "args": ["5/8", "3/4"]}))
    assert config_argv(str(cfg)) == ["norm", "--format", "json", "--group", "Z[1/2]", "--metric", "dyadic", "5/8", "3/4"]
    code_a, via_config, _ = run(capsys, "--config", str(cfg))
    code_b, via_flags, _ = run(capsys, "norm", "--group", "Z[1/2]", "--metric", "dyadic", "--format", "json", "5/8", "3/4")
    assert code_a == code_b == 0
    assert via_config == via_flags


@pytest.mark.parametrize(
    "argv",
    [
        ["invariants", "Z[1/4]"],
        ["classify", "Q"],
        ["norm", "--group", "Q/Z", "1/2", "--metric", "word"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_missing_config_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "--config", str(tmp_path / "nope.json"))
    assert code == 2
    assert "error" in err


def test_rationals_print_exactly(capsys):
    code, out, _ = run(capsys, "ball", "--group", "Z[1/2]", "--bound", "2", "--format", "csv")
    assert code == 0
    assert "1/2" in out
    assert "0.5" not in out
