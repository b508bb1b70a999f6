from __future__ import annotations

import csv
import io
import json
import math

import pytest

from isospace.catalog import twostage
from isospace.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from isospace.report import parse_table_csv
from isospace.serialize import dumps, game_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def payoffs_line(out):
    return next(line for line in out.splitlines() if line.startswith("payoffs"))


@pytest.mark.parametrize("argv,want", [
    (["analyze", "chainstore", "--spec", "q=1"], "(0, 1)"),
    (["analyze", "ipd", "-N", "2", "--spec", "X=MKV,Y=MKV"], "(4, 4)"),
    (["analyze", "twostage", "--spec", "identity"], "(2, 2)"),
    (["analyze", "twostage", "--spec", "rho=0"], "(5/2, 5/2)"),
])
def test_analyze_examples(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert payoffs_line(out).endswith(want)


def test_analyze_prints_payoff_polynomials(capsys):
    _, out, _ = run(capsys, "analyze", "ipd", "-N", "2", "--spec", "X=MKV,Y=MKV")
    assert "<Pi^X> = 4 - p1 - q1" in out
    assert "dimension: 2" in out


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "chainstore", "--spec", "q=1", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["equilibrium"]["payoffs"] == {"X": "0", "Y": "1"}


def test_usage_errors(capsys):
    assert run(capsys, "analyze", "go")[0] == EXIT_USAGE
    assert run(capsys, "table", "twostage", "--family", "nope")[0] == EXIT_USAGE
    assert run(capsys, "curve", "rho-sweep", "--from", "-2")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_table_named_ipd(capsys):
    code, out, _ = run(capsys, "table", "ipd", "-N", "2", "--family", "named")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "| X \\ Y | MKV | IND | TFT | ALLD |"
    assert lines[2].startswith("| MKV | (4, 4) * | (3, 3) | (4, 4) | (2, 2) |")


def test_table_centipede_shape(capsys):
    _, out, _ = run(capsys, "table", "centipede", "--family", "markov", "--format", "csv")
    records = parse_table_csv(out)
    assert len(records) == 32
    assert len({r.row for r in records}) == 8 and len({r.col for r in records}) == 4


def test_table_public_goods(capsys):
    _, out, _ = run(capsys, "table", "publicgoods", "--family", "anticorr", "--format", "csv")
    assert [r.payoffs for r in parse_table_csv(out)] == [(4, 4), (3, 7), (7, 3), (6, 6)]


def test_table_reduce(capsys):
    _, out, _ = run(capsys, "table", "twostage", "--family", "signs", "--reduce", "--format", "csv")
    assert len(parse_table_csv(out)) == 3


def test_curve_rho_sweep(capsys):
    code, out, _ = run(capsys, "curve", "rho-sweep", "--game", "dtree", "--from", "-1", "--to", "1",
                       "--steps", "9")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 9
    values = [float(r["value"]) for r in rows]
    want = [3, 3, 3, 3, 3, 2.02693, 1.40068, 1.03032, 1]
    assert values == pytest.approx(want, abs=2e-4)


def test_curve_single_step(capsys):
    _, out, _ = run(capsys, "curve", "rho-sweep", "--from", "0", "--to", "1", "--steps", "1")
    (row,) = csv.DictReader(io.StringIO(out))
    assert float(row["rho"]) == 0 and float(row["value"]) == pytest.approx(3)


def test_curve_entropy_and_plot(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "curve.png"
    _, out, _ = run(capsys, "curve", "entropy-max", "--from", "0", "--to", "0", "--steps", "1",
                    "--plot", str(png))
    (row,) = csv.DictReader(io.StringIO(out))
    assert float(row["value"]) == pytest.approx(2 * math.log(2), abs=1e-6)
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_measure_behavioural(capsys):
    code, out, _ = run(capsys, "measure", "behavioural", "--point", "1/2,0,1")
    assert code == EXIT_OK
    assert "I(x;y): 0.6931471806" in out
    assert "rho(x,y): 1" in out


def test_measure_degenerate_marginal(capsys):
    _, out, _ = run(capsys, "measure", "behavioural", "--point", "0,1/2,1/2")
    assert "rho(x,y): 0 (*)" in out
    assert "fisher information: undefined" in out


def test_measure_out_of_range_point(capsys):
    assert run(capsys, "measure", "behavioural", "--point", "2,0,0")[0] == EXIT_USAGE


def test_verify_deterministic_and_reproducible(capsys):
    argv = ["verify", "ipd", "-N", "2", "--spec", "X=IND,Y=IND", "-n", "100000"]
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert first == second
    assert "analytic 2," in first
    code, out, _ = run(capsys, "verify", "ipd", "-N", "2", "--spec", "X=MKV,Y=MKV", "--point", "0,0", "-n", "500")
    assert code == EXIT_OK and "z +0.000" in out


def test_verify_flags_wrong_expectation(capsys, monkeypatch):
    from isospace import cli
    monkeypatch.setattr(cli, "VERIFY_Z_LIMIT", -1.0)
    code, out, _ = run(capsys, "verify", "twostage", "--point", "1/2,1/2,1/2", "-n", "1000")
    assert code == EXIT_VERIFY
    assert "FAILED" in out


def test_list_and_json_game_file(capsys, tmp_path):
    code, out, _ = run(capsys, "list")
    assert code == EXIT_OK and "ipd" in out and "spaces:" in out
    path = tmp_path / "g.json"
    path.write_text(dumps(game_to_json(twostage())), encoding="utf-8")
    _, out, _ = run(capsys, "analyze", str(path))
    assert payoffs_line(out).endswith("(2, 2)")


def test_output_file(capsys, tmp_path):
    target = tmp_path / "t.md"
    code, out, _ = run(capsys, "table", "chainstore", "--family", "standard", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert "(0, 1) *" in target.read_text(encoding="utf-8")
