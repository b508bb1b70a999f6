"""Text, Markdown, CSV and JSON renderings of results."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .polynomial import Polynomial
from .solver import ComparisonTable, EquilibriumResult

MAX_DENOMINATOR = 1000
FORMATS = ("md", "csv", "json")
CSV_HEADER = ("rowSpec", "colSpec", "payoffX", "payoffY", "kind", "alternatives")


def fmt_number(x) -> str:
    """Exact rational when the denominator is at most 1000, else 6 significant digits."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        if x.denominator <= MAX_DENOMINATOR:
            return f"{x.numerator}/{x.denominator}"
        return f"{float(x):.6g}"
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.6g}"


def exact_text(x) -> str:
    """Lossless text for machine formats: a rational, or repr of a float."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def parse_number(text: str):
    text = text.strip()
    try:
        return Fraction(text) if "." not in text and "e" not in text.lower() else float(text)
    except ValueError:
        return float(text)


def fmt_pair(values: Sequence) -> str:
    return "(" + ", ".join(fmt_number(v) for v in values) + ")"


def fmt_point(point: dict) -> str:
    return "{" + ", ".join(f"{k}={fmt_number(v)}" for k, v in point.items()) + "}"


def fmt_polynomial(poly: Polynomial) -> str:
    return str(poly)


# tables ---------------------------------------------------------------------

def _short(label: str) -> str:
    return label.split(":", 1)[-1]


def table_markdown(table: ComparisonTable) -> str:
    """Grid of payoff pairs; ``*`` marks meta-equilibria, ``/`` separates alternatives."""
    meta = set(table.meta)
    head = [f"{table.row_player} \\ {table.col_player}"] + [_short(c) for c in table.col_labels]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for i, label in enumerate(table.row_labels):
        cells = []
        for j in range(table.shape[1]):
            text = " / ".join(fmt_pair(o) for o in table.options(i, j))
            cells.append(text + (" *" if (i, j) in meta else ""))
        lines.append("| " + " | ".join([_short(label)] + cells) + " |")
    players = ", ".join(table.players)
    lines.append("")
    lines.append(f"Payoffs ({players}); * marks meta-equilibria.")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TableRecord:
    row: str
    col: str
    payoffs: tuple
    kind: str
    alternatives: tuple[tuple, ...] = ()


def table_records(table: ComparisonTable) -> list[TableRecord]:
    out = []
    for i, rl in enumerate(table.row_labels):
        for j, cl in enumerate(table.col_labels):
            opts = table.options(i, j)
            out.append(TableRecord(rl, cl, tuple(opts[0]), table.cells[i][j].kind, tuple(map(tuple, opts[1:]))))
    return out


def table_csv(table: ComparisonTable) -> str:
    """One row per cell in row-major order; payoffs as exact rationals."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in table_records(table):
        alts = ";".join(",".join(exact_text(v) for v in alt) for alt in rec.alternatives)
        w.writerow([rec.row, rec.col, *(exact_text(v) for v in rec.payoffs), rec.kind, alts])
    return buf.getvalue()


def parse_table_csv(text: str) -> list[TableRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        alts = tuple(tuple(parse_number(v) for v in alt.split(",")) for alt in row[5].split(";") if alt)
        out.append(TableRecord(row[0], row[1], (parse_number(row[2]), parse_number(row[3])), row[4], alts))
    return out


def _jsonable(x) -> Any:
    if isinstance(x, Fraction):
        return exact_text(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        return x
    return x


def result_json(result: EquilibriumResult) -> dict[str, Any]:
    return {"spec": result.spec.label,
            "constraints": result.spec.describe(),
            "point": _jsonable(result.point),
            "payoffs": _jsonable(result.payoffs),
            "kind": result.kind,
            "pure_profile": result.pure_profile,
            "alternatives": _jsonable(list(result.alternatives)),
            "method": result.method}


def table_json(table: ComparisonTable) -> str:
    doc = {"game": table.game,
           "players": list(table.players),
           "row_player": table.row_player,
           "col_player": table.col_player,
           "rows": list(table.row_labels),
           "cols": list(table.col_labels),
           "meta": [list(m) for m in table.meta],
           "cells": [[result_json(c) for c in row] for row in table.cells]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_table(table: ComparisonTable, fmt: str) -> str:
    if fmt == "md":
        return table_markdown(table)
    if fmt == "csv":
        return table_csv(table)
    if fmt == "json":
        return table_json(table)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


# curves ---------------------------------------------------------------------

def curve_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.10g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()
