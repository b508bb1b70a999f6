from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isospace.catalog import chainstore, get_space_family, ipd
from isospace.report import (
    CSV_HEADER,
    FORMATS,
    curve_csv,
    exact_text,
    fmt_number,
    fmt_pair,
    fmt_point,
    parse_number,
    parse_table_csv,
    render_table,
    table_records,
)
from isospace.solver import comparison_table

F = Fraction


@pytest.fixture(scope="module")
def endgame():
    fam = get_space_family("endgame", ipd(3))
    return comparison_table(ipd(3), fam.rows, fam.cols)


@pytest.fixture(scope="module")
def chain():
    fam = get_space_family("standard", chainstore())
    return comparison_table(chainstore(), fam.rows, fam.cols, fam.row_player)


def test_number_formatting():
    assert fmt_number(F(8, 3)) == "8/3"
    assert fmt_number(F(4)) == "4"
    assert fmt_number(F(1, 1001)) == "0.000999001"
    assert fmt_number(2.0) == "2"
    assert fmt_number(1.0303249) == "1.03032"
    assert fmt_number(True) == "1"
    assert fmt_pair((F(14, 3), 2)) == "(14/3, 2)"
    assert fmt_point({"p": F(1, 2), "q": 0}) == "{p=1/2, q=0}"


@given(st.fractions(max_denominator=10**6) | st.floats(allow_nan=False, allow_infinity=False))
def test_exact_text_round_trips(x):
    assert parse_number(exact_text(x)) == x


def test_markdown_marks_meta_and_alternatives(endgame):
    md = render_table(endgame, "md")
    lines = md.splitlines()
    assert lines[0] == "| X \\ Y | k=0 | k=1 | k=2 |"
    assert "(4, 7) / (4, 4)" in lines[2]
    assert lines[3].count("*") == 1 and "(5, 5) *" in lines[3]


def test_csv_round_trip(endgame):
    text = render_table(endgame, "csv")
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert parse_table_csv(text) == table_records(endgame)
    alts = {(r.row, r.col): r.alternatives for r in parse_table_csv(text)}
    assert alts[("X:k=0", "Y:k=1")] == ((4, 4),)


def test_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        parse_table_csv("a,b\n1,2\n")


def test_json_document(chain):
    doc = json.loads(render_table(chain, "json"))
    assert doc["rows"] == ["Y:free", "Y:q=0", "Y:q=1"]
    assert doc["meta"] == [[2, 0]]
    cell = doc["cells"][2][0]
    assert cell["payoffs"] == {"X": "0", "Y": "1"}
    assert cell["kind"] == "pure"


def test_every_format_renders(chain):
    for fmt in FORMATS:
        assert render_table(chain, fmt).endswith("\n")
    with pytest.raises(ValueError):
        render_table(chain, "xlsx")


def test_curve_csv():
    text = curve_csv(["rho", "value"], [(0.5, 1 / 3), (1.0, 2)])
    assert text == "rho,value\n0.5,0.3333333333\n1,2\n"
