"""Independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
from fractions import Fraction

from isospace.gamemodel import GameDefinition, leaves
from isospace.probspace import DerivedVar, ResolvedSpace


def path_sum(game: GameDefinition, resolved: ResolvedSpace) -> dict:
    """Expected payoffs by enumerating every leaf and multiplying node probabilities."""
    space = resolved.base
    totals = {p: 0 for p in game.players}
    for leaf in leaves(space):
        assignment = dict(leaf)
        prob = 1
        for var in space.variables:
            if isinstance(var, DerivedVar) or assignment.get(var.id) is None:
                continue
            key = space.key_of(var.id, assignment)
            param = next(p for p in space.group(var.id, key) if p.value == assignment[var.id])
            prob = resolved.substitution[param.name] * prob
        values = {k: (v or 0) for k, v in assignment.items()}
        for player in game.players:
            totals[player] = prob * game.payoffs[player].evaluate(values) + totals[player]
    return totals


def uniform_point(resolved: ResolvedSpace) -> dict[str, Fraction]:
    """Every raw parameter at 1/|domain|, expressed in the free coordinates."""
    space = resolved.base
    point = {}
    for name in resolved.free_params:
        parts = resolved.components.get(name, (name,))
        size = len(space[space.param(parts[0]).governs].domain)
        point[name] = Fraction(len(parts), size)
    return point


def is_valid(resolved: ResolvedSpace, point) -> bool:
    """Every raw parameter expressible from ``point`` lies in [0, 1]; unreached ones are skipped."""
    return all(0 <= poly.evaluate(point) <= 1 for poly in resolved.substitution.values()
               if poly.variables <= set(point))


def owner_of_param(resolved: ResolvedSpace, name: str) -> str | None:
    space = resolved.base
    return space[space.param(resolved.components.get(name, (name,))[0]).governs].owner


def pure_strategies(resolved: ResolvedSpace, player: str) -> list[dict[str, Fraction]]:
    """Every pure choice of ``player`` at its reached nodes, as free-parameter values."""
    space = resolved.base
    free = set(resolved.free_params)
    choices = []
    for (move_id, key), group in space.groups.items():
        if space[move_id].owner != player or not resolved.is_reached(move_id, key):
            continue
        names = [p.name for p in group if p.name in free]
        if not names:
            continue
        options = []
        for p in group:
            # picking value v sets its parameter to 1, or every free one to 0 for the eliminated value
            options.append({n: Fraction(int(n == p.name)) for n in names})
        choices.append(options)
    out = []
    for combo in itertools.product(*choices):
        point = {}
        for part in combo:
            point.update(part)
        out.append(point)
    return out
