"""Finite games as payoff polynomials over move variables, plus space specs."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import UnknownParam, UnsupportedShape
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
    ResolvedSpace,
    describe_constraint,
    resolve,
)


@dataclass(frozen=True)
class SpaceSpec:
    """A labelled set of constraints, usually one player's choice of space."""

    label: str = "identity"
    constraints: tuple[Constraint, ...] = ()
    owner: str | None = None

    def __add__(self, other: "SpaceSpec") -> "SpaceSpec":
        return combine(self, other)

    def describe(self) -> str:
        return ", ".join(describe_constraint(c) for c in self.constraints) or "unconstrained"


def combine(*specs: SpaceSpec) -> SpaceSpec:
    labels = [s.label for s in specs]
    cons = tuple(c for s in specs for c in s.constraints)
    return SpaceSpec(" x ".join(labels), cons)


IDENTITY = SpaceSpec()


@dataclass
class GameDefinition:
    name: str
    players: tuple[str, ...]
    space: ProbabilitySpace
    payoffs: dict[str, Polynomial]
    description: str = ""
    correlation_pair: tuple[str, str] | None = None  # binary moves a bare "rho=" refers to
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        known = {v.id for v in self.space.variables}
        for player, poly in self.payoffs.items():
            unknown = poly.variables - known
            if unknown:
                raise ValueError(f"payoff of {player} refers to unknown moves {sorted(unknown)}")
        for m in self.space.moves:
            if m.owner is not None and m.owner not in self.players:
                raise ValueError(f"move {m.id!r} owned by unknown player {m.owner!r}")

    @property
    def moves(self) -> tuple[MoveVar, ...]:
        return self.space.moves

    def owner_of(self, move_id: str) -> str | None:
        return self.space[move_id].owner

    def resolve(self, spec: SpaceSpec = IDENTITY, collapse: bool = True) -> ResolvedSpace:
        return resolve(self.space, spec.constraints, collapse=collapse)

    def payoff_matrix(self) -> dict[tuple, tuple]:
        """Payoff vector for every full assignment of the active moves."""
        out = {}
        for leaf in leaves(self.space):
            a = dict(leaf)
            out[tuple(a.get(m.id) for m in self.moves)] = tuple(
                self.payoffs[p].evaluate({k: (v or 0) for k, v in a.items()}) for p in self.players)
        return out


def leaves(space: ProbabilitySpace):
    """Every full assignment reachable in the unconstrained tree (inactive moves are None)."""
    out: list[list[tuple[str, int | None]]] = []

    def walk(i, assignment):
        if i == len(space.variables):
            out.append(list(assignment.items()))
            return
        var = space.variables[i]
        if isinstance(var, DerivedVar):
            assignment[var.id] = space.derive(var, assignment)
            walk(i + 1, assignment)
        elif not space.is_active(var, assignment):
            assignment[var.id] = None
            walk(i + 1, assignment)
        else:
            for k, val in enumerate(var.domain):
                if var.chance is not None and var.chance[k] == 0:
                    continue
                assignment[var.id] = val
                walk(i + 1, assignment)
        assignment.pop(var.id, None)

    walk(0, {})
    return out


def expected_payoff_resolved(game: GameDefinition, resolved: ResolvedSpace) -> dict[str, Polynomial]:
    """Chain-rule path sum of every payoff over the resolved tree."""
    space = resolved.base
    fns = {p: game.payoffs[p].compile(none_as_zero=True) for p in game.players}

    def walk(i: int, assignment: dict) -> dict[str, Polynomial]:
        if i == len(space.variables):
            return {p: Polynomial.const(fns[p](assignment)) for p in game.players}
        var = space.variables[i]
        if isinstance(var, DerivedVar):
            assignment[var.id] = space.derive(var, assignment)
            out = walk(i + 1, assignment)
            assignment[var.id] = None
            return out
        if not space.is_active(var, assignment):
            assignment[var.id] = None
            return walk(i + 1, assignment)
        dist = resolved.node_distribution(var.id, space.key_of(var.id, assignment))
        total = {p: Polynomial() for p in game.players}
        for val in var.domain:
            prob = dist[val]
            if prob.is_zero():
                continue
            assignment[var.id] = val
            sub = walk(i + 1, assignment)
            for p in game.players:
                total[p] = total[p] + prob * sub[p]
        assignment[var.id] = None
        return total

    return walk(0, {})


def expected_payoff(game: GameDefinition, spec: SpaceSpec = IDENTITY) -> dict[str, Polynomial]:
    """Expected payoff of each player as an exact polynomial in the free parameters."""
    if any(isinstance(c, CorrelationFix) for c in spec.constraints):
        raise UnsupportedShape("a fixed correlation is a curved surface; use the solver")
    return expected_payoff_resolved(game, game.resolve(spec))


def payoff_at(poly: Polynomial, point, variables: Sequence[str] | None = None):
    """Evaluate ``poly`` at a mapping, or a sequence ordered like ``variables``
    (sorted variable names by default).  Exact for rational input."""
    if isinstance(point, Mapping):
        missing = poly.variables - set(point)
        if missing:
            raise UnknownParam(f"point lacks {sorted(missing)}")
        return poly.evaluate(point)
    names = list(variables) if variables is not None else sorted(poly.variables)
    values = list(point)
    if len(values) != len(names):
        raise ValueError(f"expected {len(names)} values for {names}, got {len(values)}")
    return poly.evaluate(dict(zip(names, values)))


def apply_space_spec(game: GameDefinition, spec: SpaceSpec) -> GameDefinition:
    """Delete functionally assigned moves and substitute them into the payoffs.

    Only history-independent assignments are supported; the remaining moves
    keep their order and observe whatever survives of their old information.
    """
    rules: dict[str, Polynomial] = {}
    for c in spec.constraints:
        if not isinstance(c, FunctionalAssignment) or c.when or c.expr is None:
            raise UnsupportedShape(f"cannot substitute {describe_constraint(c)} into the payoffs")
        if c.move not in {m.id for m in game.moves}:
            raise UnknownParam(f"no move named {c.move!r}")
        rules[c.move] = c.expr.substitute(rules)
    binary = [m.id for m in game.moves if m.is_binary]
    payoffs = {p: poly.substitute(rules).idempotent(binary) for p, poly in game.payoffs.items()}
    kept = []
    for v in game.space.variables:
        if v.id in rules:
            continue
        if isinstance(v, MoveVar):
            if any(src in rules for src, _ in v.active_if):
                raise UnsupportedShape(f"{v.id!r} is gated by a substituted move")
            obs = game.space.observed(v.id)
            v = replace(v, observes=tuple(o for o in obs if o not in rules), labels=())
        kept.append(v)
    space = ProbabilitySpace(kept, name=f"{game.space.name}|{spec.label}")
    return GameDefinition(f"{game.name}|{spec.label}", game.players, space, payoffs,
                          game.description, None, dict(game.params))


# ---------------------------------------------------------------------------
# spec mini-language
# ---------------------------------------------------------------------------


def parse_spec(game: GameDefinition, text: str) -> SpaceSpec:
    """Parse ``param=value``, ``move=copy:src|anti:src|const:v``, ``a=b`` ties
    and ``rho=value`` items separated by commas.  ``identity`` or an empty
    string means no constraints."""
    text = text.strip()
    if text in ("", "identity", "free"):
        return IDENTITY
    names = {p.name for p in game.space.params}
    moves = {m.id for m in game.moves}
    cons: list[Constraint] = []
    for item in (s.strip() for s in text.split(",")):
        if "=" not in item:
            raise ValueError(f"cannot parse spec item {item!r}")
        lhs, rhs = (s.strip() for s in item.split("=", 1))
        if lhs == "rho":
            if game.correlation_pair is None:
                raise ValueError(f"{game.name} has no default correlated pair")
            cons.append(CorrelationFix(*game.correlation_pair, float(Fraction(rhs))))
        elif lhs in moves and ":" in rhs:
            kind, arg = rhs.split(":", 1)
            if kind == "copy":
                cons.append(FunctionalAssignment.copy(lhs, arg))
            elif kind == "anti":
                cons.append(FunctionalAssignment.anti(lhs, arg))
            elif kind == "const":
                cons.append(FunctionalAssignment.const(lhs, int(arg)))
            else:
                raise ValueError(f"unknown assignment kind {kind!r}")
        elif lhs in moves:
            cons.append(FunctionalAssignment(lhs, Polynomial.parse(rhs)))
        elif lhs in names and rhs in names:
            cons.append(ParamTie(rhs, lhs))
        elif lhs in names:
            cons.append(ParamFix(lhs, Fraction(rhs)))
        else:
            raise UnknownParam(f"{lhs!r} is neither a parameter nor a move of {game.name}")
    return SpaceSpec(text, tuple(cons))
