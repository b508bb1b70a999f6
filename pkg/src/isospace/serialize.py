"""JSON documents for spaces, constraints and games."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .gamemodel import GameDefinition
from .polynomial import Polynomial
from .probspace import (
    Constraint,
    CorrelationFix,
    DerivedVar,
    FunctionalAssignment,
    MoveVar,
    ParamFix,
    ParamTie,
    ProbabilitySpace,
)


def _number(x: Fraction) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def polynomial_to_json(poly: Polynomial) -> list:
    """Terms as ``[coefficient, {variable: exponent}]`` pairs in a stable order."""
    return [[_number(c), dict(mono)] for mono, c in sorted(poly.terms.items())]


def polynomial_from_json(data) -> Polynomial:
    if isinstance(data, str):
        return Polynomial.parse(data)
    if isinstance(data, (int, float)):
        return Polynomial.const(Fraction(str(data)))
    return Polynomial({tuple(sorted((v, int(e)) for v, e in mono.items())): Fraction(str(c))
                       for c, mono in data})


def _table_to_json(table) -> list:
    return [[list(k), v] for k, v in table]


def _table_from_json(data) -> tuple:
    return tuple((tuple(k), int(v)) for k, v in data)


# variables ------------------------------------------------------------------

def variable_to_json(var) -> dict[str, Any]:
    if isinstance(var, DerivedVar):
        return {"kind": "derived", "id": var.id, "inputs": list(var.inputs),
                "table": _table_to_json(var.table), "stage": var.stage}
    out: dict[str, Any] = {"kind": "move", "id": var.id, "domain": list(var.domain),
                           "owner": var.owner, "stage": var.stage}
    if var.observes is not None:
        out["observes"] = list(var.observes)
    if var.active_if:
        out["active_if"] = [[m, v] for m, v in var.active_if]
    if var.reference is not None:
        out["reference"] = var.reference
    if var.chance is not None:
        out["chance"] = [_number(c) for c in var.chance]
    if var.labels:
        out["labels"] = [[list(k), lab if isinstance(lab, str) else list(lab)] for k, lab in var.labels]
    return out


def variable_from_json(data: dict[str, Any]):
    if data.get("kind", "move") == "derived":
        return DerivedVar(data["id"], tuple(data["inputs"]), _table_from_json(data["table"]),
                          int(data.get("stage", 0)))
    observes = data.get("observes")
    chance = data.get("chance")
    return MoveVar(
        data["id"],
        domain=tuple(int(v) for v in data.get("domain", (0, 1))),
        owner=data.get("owner"),
        stage=int(data.get("stage", 1)),
        observes=None if observes is None else tuple(observes),
        active_if=tuple((m, int(v)) for m, v in data.get("active_if", ())),
        reference=data.get("reference"),
        chance=None if chance is None else tuple(Fraction(str(c)) for c in chance),
        labels=tuple((tuple(k), lab if isinstance(lab, str) else tuple(lab))
                     for k, lab in data.get("labels", ())),
    )


def space_to_json(space: ProbabilitySpace) -> dict[str, Any]:
    return {"name": space.name,
            "params": [p.name for p in space.params],
            "moves": [variable_to_json(v) for v in space.variables],
            "visible": list(space.visible)}


def space_from_json(data: dict[str, Any]) -> ProbabilitySpace:
    """Build a space; the ``params`` list is informational and ignored."""
    return ProbabilitySpace([variable_from_json(v) for v in data["moves"]],
                            visible=data.get("visible"), name=data.get("name", "space"))


# constraints ----------------------------------------------------------------

def constraint_to_json(c: Constraint) -> dict[str, Any]:
    if isinstance(c, ParamFix):
        return {"kind": "fix", "param": c.param, "value": _number(c.value)}
    if isinstance(c, ParamTie):
        return {"kind": "tie", "param": c.b, "to": c.a}
    if isinstance(c, CorrelationFix):
        return {"kind": "correlation", "x": c.x, "y": c.y, "rho": c.rho}
    if isinstance(c, FunctionalAssignment):
        out: dict[str, Any] = {"kind": "assign", "move": c.move}
        if c.expr is not None:
            out["expr"] = polynomial_to_json(c.expr)
        else:
            out["sources"] = list(c.sources)
            out["table"] = _table_to_json(c.table)
        if c.when:
            out["when"] = [[m, v] for m, v in c.when]
        return out
    raise TypeError(f"cannot serialize {type(c).__name__}")


def constraint_from_json(data: dict[str, Any]) -> Constraint:
    kind = data.get("kind")
    if kind == "fix":
        return ParamFix(data["param"], Fraction(str(data["value"])))
    if kind == "tie":
        return ParamTie(data["to"], data["param"])
    if kind == "correlation":
        return CorrelationFix(data["x"], data["y"], float(data["rho"]))
    if kind == "assign":
        when = tuple((m, int(v)) for m, v in data.get("when", ()))
        if "expr" in data:
            return FunctionalAssignment(data["move"], polynomial_from_json(data["expr"]), when=when)
        return FunctionalAssignment(data["move"], None, tuple(data["sources"]),
                                    _table_from_json(data["table"]), when)
    raise ValueError(f"unknown constraint kind {kind!r}")


def space_document(space: ProbabilitySpace, constraints=()) -> dict[str, Any]:
    doc = space_to_json(space)
    doc["constraints"] = [constraint_to_json(c) for c in constraints]
    return doc


def load_space_document(data: dict[str, Any]) -> tuple[ProbabilitySpace, tuple[Constraint, ...]]:
    return space_from_json(data), tuple(constraint_from_json(c) for c in data.get("constraints", ()))


# games ----------------------------------------------------------------------

def game_to_json(game: GameDefinition) -> dict[str, Any]:
    return {"name": game.name,
            "players": list(game.players),
            "description": game.description,
            "correlation_pair": list(game.correlation_pair) if game.correlation_pair else None,
            "params": dict(game.params),
            "space": space_to_json(game.space),
            "payoffs": {p: polynomial_to_json(poly) for p, poly in game.payoffs.items()}}


def game_from_json(data: dict[str, Any]) -> GameDefinition:
    pair = data.get("correlation_pair")
    return GameDefinition(
        data["name"], tuple(data["players"]), space_from_json(data["space"]),
        {p: polynomial_from_json(t) for p, t in data["payoffs"].items()},
        data.get("description", ""), tuple(pair) if pair else None, dict(data.get("params", {})))


def load_game(path: str | Path) -> GameDefinition:
    with open(path, encoding="utf-8") as fh:
        return game_from_json(json.load(fh))


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=False)
