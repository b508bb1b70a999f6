"""Equilibria over resolved spaces, comparison tables and numeric correlation sweeps."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import corrgeom
from .errors import NonSequentialFreeNodes, UnsupportedShape
from .gamemodel import (
    IDENTITY,
    GameDefinition,
    SpaceSpec,
    combine,
    expected_payoff_resolved,
)
from .numeric import numeric_box_maximize
from .polynomial import Polynomial
from .probspace import (
    CorrelationFix,
    DerivedVar,
    FunctionalAssignment,
    MoveVar,
    ParamTie,
    ResolvedSpace,
)

PURE, MIXED, INDIFFERENT = "pure", "mixed", "indifferent"
P_CLAMP = 1e-12
RHO_TOL = 1e-6


@dataclass
class EquilibriumResult:
    spec: SpaceSpec
    point: dict[str, object]
    payoffs: dict[str, object]
    kind: str = PURE
    pure_profile: dict[str, int] | None = None
    alternatives: tuple[dict[str, object], ...] = ()
    method: str = "backwards-induction"

    def payoff_tuple(self, players: Sequence[str]) -> tuple:
        return tuple(self.payoffs[p] for p in players)

    @property
    def options(self) -> list[dict[str, object]]:
        """Primary payoffs followed by any alternative equilibrium payoffs."""
        return [self.payoffs, *self.alternatives]


# ---------------------------------------------------------------------------
# correlation lowering
# ---------------------------------------------------------------------------


def lower_correlation(game: GameDefinition, spec: SpaceSpec) -> tuple[SpaceSpec, CorrelationFix | None]:
    """Replace a fixed correlation of -1, 0 or 1 by the equivalent coordinate constraints.

    Returns the rewritten spec and any correlation left for numeric treatment.
    """
    fixes = [c for c in spec.constraints if isinstance(c, CorrelationFix)]
    if not fixes:
        return spec, None
    if len(fixes) > 1:
        raise UnsupportedShape("at most one fixed correlation per space")
    fix = fixes[0]
    space = game.space
    for v in (fix.x, fix.y):
        if not isinstance(space[v], MoveVar) or not space[v].is_binary:
            raise UnsupportedShape("correlation constraints need two binary moves")
    if fix.x not in space.observed(fix.y):
        raise UnsupportedShape(f"{fix.y!r} does not observe {fix.x!r}")
    rest = tuple(c for c in spec.constraints if c is not fix)
    if fix.rho == 1:
        extra = (FunctionalAssignment.copy(fix.y, fix.x),)
    elif fix.rho == -1:
        extra = (FunctionalAssignment.anti(fix.y, fix.x),)
    elif fix.rho == 0:
        obs = space.observed(fix.y)
        pos = obs.index(fix.x)
        extra = []
        for key in space.node_keys(fix.y):
            if key[pos] != 0:
                continue
            twin = key[:pos] + (1,) + key[pos + 1:]
            if twin not in space.node_keys(fix.y):
                continue
            a = next(p.name for p in space.group(fix.y, key) if p.value == 1)
            b = next(p.name for p in space.group(fix.y, twin) if p.value == 1)
            extra.append(ParamTie(a, b))
        extra = tuple(extra)
    else:
        return SpaceSpec(spec.label, rest, spec.owner), fix
    return SpaceSpec(spec.label, rest + extra, spec.owner), None


# ---------------------------------------------------------------------------
# backwards induction
# ---------------------------------------------------------------------------


def _blocks(space) -> list[list]:
    """Group consecutive moves of one stage into simultaneous blocks."""
    blocks: list[list] = []
    for var in space.variables:
        if isinstance(var, DerivedVar):
            blocks.append([var])
            continue
        cur = blocks[-1] if blocks else None
        if (cur and isinstance(cur[0], MoveVar) and cur[0].stage == var.stage
                and not any(src in {m.id for m in cur} for src in space.observed(var.id))
                and not any(src in {m.id for m in cur} for src, _ in var.active_if)):
            cur.append(var)
        else:
            blocks.append([var])
    return blocks


def _param_nodes(resolved: ResolvedSpace) -> dict[str, set]:
    out: dict[str, set] = {}
    for (move_id, key), group in resolved.base.groups.items():
        if not resolved.is_reached(move_id, key):
            continue
        for p in group:
            for v in resolved.substitution[p.name].variables:
                out.setdefault(v, set()).add((move_id, key))
    return out


def _choosable(dist: Mapping[int, Polynomial], move_id: str) -> tuple[int, ...]:
    vals = tuple(v for v, poly in dist.items() if not poly.is_zero())
    if any(dist[v].is_constant() for v in vals):
        raise UnsupportedShape(f"{move_id} mixes fixed and free probabilities at one node")
    return tuple(sorted(vals))


class _Induction:
    def __init__(self, game: GameDefinition, resolved: ResolvedSpace):
        self.game = game
        self.resolved = resolved
        self.space = resolved.base
        self.blocks = _blocks(self.space)
        self.players = game.players
        self.fns = [game.payoffs[p].compile(none_as_zero=True) for p in self.players]
        self.choice: dict[tuple, dict[int, Fraction]] = {}
        self.tied: set[tuple] = set()
        self.visited: set[tuple] = set()
        self.alternatives: list[tuple] = []
        for name, nodes in _param_nodes(resolved).items():
            if len(nodes) > 1:
                raise NonSequentialFreeNodes(f"{name} spans {len(nodes)} decision nodes")

    def run(self) -> tuple:
        return self.solve(0, {}, True)

    def solve(self, b: int, a: dict, top: bool) -> tuple:
        if b == len(self.blocks):
            return tuple(Fraction(fn(a)) for fn in self.fns)
        block = self.blocks[b]
        if isinstance(block[0], DerivedVar):
            var = block[0]
            a[var.id] = self.space.derive(var, a)
            out = self.solve(b + 1, a, top)
            a[var.id] = None
            return out
        free, fixed = [], []
        for var in block:
            if not self.space.is_active(var, a):
                a[var.id] = None
                continue
            key = self.space.key_of(var.id, a)
            dist = self.resolved.node_distribution(var.id, key)
            if all(p.is_constant() for p in dist.values()):
                fixed.append((var, [(v, p.constant_value()) for v, p in dist.items() if not p.is_zero()]))
                continue
            node = (var.id, key)
            if node in self.visited:
                raise NonSequentialFreeNodes(f"{var.id} at {key} is reached from several histories")
            self.visited.add(node)
            free.append((var, key, _choosable(dist, var.id)))
        chance_branch = any(len(opts) > 1 for _, opts in fixed)

        owners: dict[str, list] = {}
        for node in free:
            owners.setdefault(node[0].owner, []).append(node)
        players = [p for p in self.players if p in owners]
        if len(players) > 2:
            raise UnsupportedShape("more than two simultaneous choosers")
        strategies = [list(itertools.product(*(n[2] for n in owners[p]))) for p in players]
        nxt_top = top and not players and not chance_branch

        def outcome(profile: Sequence[tuple]) -> tuple:
            for p, strat in zip(players, profile):
                for node, val in zip(owners[p], strat):
                    a[node[0].id] = val
            total = [Fraction(0)] * len(self.players)
            for combo in itertools.product(*(opts for _, opts in fixed)):
                prob = Fraction(1)
                for (var, _), (val, pr) in zip(fixed, combo):
                    a[var.id] = val
                    prob *= pr
                sub = self.solve(b + 1, a, nxt_top)
                for i, s in enumerate(sub):
                    total[i] += prob * s
            return tuple(total)

        try:
            if not players:
                return outcome(())
            table = {prof: outcome(prof) for prof in itertools.product(*strategies)}
            if len(players) == 1:
                idx = self.players.index(players[0])
                best = max(v[idx] for v in table.values())
                winners = [prof for prof, v in table.items() if v[idx] == best]
                return self._commit(owners, players, table, winners, top)
            i0, i1 = (self.players.index(p) for p in players)
            col_best = {s1: max(table[(s0, s1)][i0] for s0 in strategies[0]) for s1 in strategies[1]}
            row_best = {s0: max(table[(s0, s1)][i1] for s1 in strategies[1]) for s0 in strategies[0]}
            nash = [prof for prof, v in table.items()
                    if v[i0] == col_best[prof[1]] and v[i1] == row_best[prof[0]]]
            if nash:
                return self._commit(owners, players, table, nash, top)
            return self._mixed(owners, players, strategies, table, (i0, i1))
        finally:
            for var in block:
                a[var.id] = None

    def _commit(self, owners, players, table, winners, top) -> tuple:
        chosen = winners[0]
        for p, strat in zip(players, chosen):
            for node, val in zip(owners[p], strat):
                self.choice[(node[0].id, node[1])] = {val: Fraction(1)}
                if len(winners) > 1:
                    self.tied.add((node[0].id, node[1]))
        if top:
            seen = [table[chosen]]
            for w in winners[1:]:
                if table[w] not in seen:
                    seen.append(table[w])
            self.alternatives = seen[1:]
        return table[chosen]

    def _mixed(self, owners, players, strategies, table, idx) -> tuple:
        if any(len(owners[p]) != 1 or len(s) != 2 for p, s in zip(players, strategies)):
            raise UnsupportedShape("no pure equilibrium and the block is larger than 2x2")
        (a0, a1), (b0, b1) = strategies
        i0, i1 = idx
        u = lambda s0, s1, i: table[(s0, s1)][i]  # noqa: E731
        den_a = (u(a1, b0, i1) - u(a0, b0, i1)) - (u(a1, b1, i1) - u(a0, b1, i1))
        den_b = (u(a0, b1, i0) - u(a0, b0, i0)) - (u(a1, b1, i0) - u(a1, b0, i0))
        if den_a == 0 or den_b == 0:
            raise UnsupportedShape("degenerate 2x2 block")
        alpha = (u(a0, b1, i1) - u(a0, b0, i1)) / den_a  # weight on a1
        beta = (u(a1, b0, i0) - u(a0, b0, i0)) / den_b  # weight on b1
        if not (0 <= alpha <= 1 and 0 <= beta <= 1):
            raise UnsupportedShape("mixed solution outside the simplex")
        weights = {(a0, b0): (1 - alpha) * (1 - beta), (a0, b1): (1 - alpha) * beta,
                   (a1, b0): alpha * (1 - beta), (a1, b1): alpha * beta}
        value = tuple(sum(w * table[prof][i] for prof, w in weights.items())
                      for i in range(len(self.players)))
        for p, (s0, s1), w in zip(players, strategies, (alpha, beta)):
            node = owners[p][0]
            self.choice[(node[0].id, node[1])] = {s0[0]: 1 - w, s1[0]: w}
        return value


def _node_point(dist: Mapping[int, Polynomial], target: Mapping[int, Fraction]) -> dict[str, Fraction]:
    """Values of a node's parameters that realize the target distribution."""
    names = sorted(set().union(*(p.variables for p in dist.values())))
    want = {v: target.get(v, Fraction(0)) for v in dist}
    if all(t in (0, 1) for t in want.values()):
        for corner in itertools.product((Fraction(0), Fraction(1)), repeat=len(names)):
            pt = dict(zip(names, corner))
            if all(dist[v].evaluate(pt) == want[v] for v in dist):
                return pt
    if len(names) == 1:
        n = names[0]
        for v, poly in dist.items():
            slope = poly.partial(n).constant_value() if poly.partial(n).is_constant() else None
            if slope:
                pt = {n: (want[v] - poly.substitute({n: 0}).constant_value()) / slope}
                if all(dist[u].evaluate(pt) == want[u] for u in dist):
                    return pt
    raise UnsupportedShape(f"cannot realize {dict(want)} with parameters {names}")


def _walk_profile(resolved: ResolvedSpace, point: Mapping[str, object]):
    """Deterministic path under ``point`` or None if any node on it randomizes."""
    space = resolved.base
    a: dict[str, int | None] = {}
    for var in space.variables:
        if isinstance(var, DerivedVar):
            a[var.id] = space.derive(var, a)
            continue
        if not space.is_active(var, a):
            a[var.id] = None
            continue
        dist = resolved.node_distribution(var.id, space.key_of(var.id, a))
        probs = {v: p.evaluate(point) for v, p in dist.items()}
        sure = [v for v, pr in probs.items() if pr == 1]
        if not sure:
            return None
        a[var.id] = sure[0]
    return {m.id: a[m.id] for m in space.moves if a.get(m.id) is not None}


def _on_path_nodes(resolved: ResolvedSpace, point) -> list[tuple]:
    space = resolved.base
    nodes = []

    def walk(i, a):
        if i == len(space.variables):
            return
        var = space.variables[i]
        if isinstance(var, DerivedVar):
            a[var.id] = space.derive(var, a)
            walk(i + 1, a)
            return
        if not space.is_active(var, a):
            a[var.id] = None
            walk(i + 1, a)
            return
        key = space.key_of(var.id, a)
        nodes.append((var.id, key))
        for v, p in resolved.node_distribution(var.id, key).items():
            if p.evaluate(point) != 0:
                a[var.id] = v
                walk(i + 1, a)
        a[var.id] = None

    walk(0, {})
    return nodes


def backwards_induction(game: GameDefinition, spec: SpaceSpec = IDENTITY,
                        resolved: ResolvedSpace | None = None) -> EquilibriumResult:
    """Subgame-perfect solution over the free nodes of the resolved tree.

    Stages are solved last-first.  A lone chooser takes the argmax (ties go
    to the lowest move value); two simultaneous choosers play the
    lexicographically first pure Nash profile, or the mixed solution of a
    2x2 block without one.
    """
    if resolved is None:
        spec, rest = lower_correlation(game, spec)
        if rest is not None:
            raise UnsupportedShape("a non-trivial correlation needs the numeric solver")
        resolved = game.resolve(spec)
    ind = _Induction(game, resolved)
    values = ind.run()
    point: dict[str, object] = {}
    for (move_id, key), target in ind.choice.items():
        point.update(_node_point(resolved.node_distribution(move_id, key), target))
    for name in resolved.free_params:
        point.setdefault(name, Fraction(0))
    point = {n: point[n] for n in resolved.free_params}
    on_path = _on_path_nodes(resolved, point)
    if any(len(ind.choice.get(n, {})) > 1 for n in on_path):
        kind = MIXED
    elif any(n in ind.tied for n in on_path):
        kind = INDIFFERENT
    else:
        kind = PURE
    alts = tuple(dict(zip(game.players, v)) for v in ind.alternatives)
    return EquilibriumResult(spec, point, dict(zip(game.players, values)), kind,
                             _walk_profile(resolved, point), alts)


# ---------------------------------------------------------------------------
# best responses over pure corners
# ---------------------------------------------------------------------------

MAX_CORNER_PARAMS = 12


def _player_params(game: GameDefinition, resolved: ResolvedSpace) -> dict[str, list[str]]:
    owner: dict[str, str] = {}
    for name, nodes in _param_nodes(resolved).items():
        owners = {resolved.base[m].owner for m, _ in nodes}
        if len(owners) != 1 or None in owners:
            raise UnsupportedShape(f"{name} is shared by {sorted(map(str, owners))}")
        owner[name] = owners.pop()
    out = {p: [n for n in resolved.free_params if owner.get(n) == p] for p in game.players}
    return {p: names for p, names in out.items() if names}


def _corners(resolved: ResolvedSpace, names: list[str]) -> list[dict[str, Fraction]]:
    if len(names) > MAX_CORNER_PARAMS:
        raise UnsupportedShape(f"{len(names)} free parameters for one player is too many to enumerate")
    own = set(names)
    polys = [p for p in resolved.substitution.values() if p.variables and p.variables <= own]
    out = []
    for corner in itertools.product((Fraction(0), Fraction(1)), repeat=len(names)):
        pt = dict(zip(names, corner))
        if all(0 <= p.evaluate(pt) <= 1 for p in polys):
            out.append(pt)
    return out


def best_response_equilibria(game: GameDefinition, spec: SpaceSpec = IDENTITY,
                             resolved: ResolvedSpace | None = None) -> list[EquilibriumResult]:
    """Every pure Nash profile over parameter corners, plus the interior
    solution when each of two players controls a single parameter."""
    if resolved is None:
        spec, rest = lower_correlation(game, spec)
        if rest is not None:
            raise UnsupportedShape("a non-trivial correlation needs the numeric solver")
        resolved = game.resolve(spec)
    payoffs = expected_payoff_resolved(game, resolved)
    owned = _player_params(game, resolved)
    if len(owned) > 2:
        raise UnsupportedShape("best-response enumeration supports at most two free players")
    players = list(owned)
    fns = {p: payoffs[p].compile() for p in game.players}
    strategies = [_corners(resolved, owned[p]) for p in players]
    results: list[EquilibriumResult] = []

    def make(point, kind):
        point = {n: point.get(n, Fraction(0)) for n in resolved.free_params}
        pay = {p: payoffs[p].evaluate(point) for p in game.players}
        return EquilibriumResult(spec, point, pay, kind, _walk_profile(resolved, point),
                                 method="best-response")

    if not players:
        return [make({}, PURE)]
    profiles = list(itertools.product(*strategies))
    values = {}
    for prof in profiles:
        pt = {}
        for part in prof:
            pt.update(part)
        values[tuple(map(id, prof))] = (pt, {p: Fraction(fns[p](pt)) for p in players})
    for prof in profiles:
        pt, val = values[tuple(map(id, prof))]
        stable, indifferent = True, False
        for i, p in enumerate(players):
            for alt in strategies[i]:
                if alt is prof[i]:
                    continue
                dev = list(prof)
                dev[i] = alt
                dv = values[tuple(map(id, dev))][1][p]
                if dv > val[p]:
                    stable = False
                    break
                if dv == val[p]:
                    indifferent = True
            if not stable:
                break
        if stable:
            results.append(make(pt, INDIFFERENT if indifferent else PURE))
    if len(players) == 2 and all(len(owned[p]) == 1 for p in players):
        interior = _interior_2x2(payoffs, players, owned)
        if interior is not None:
            results.append(make(interior, MIXED))
    if not results:
        raise UnsupportedShape("no equilibrium found among corners or the 2x2 interior")
    return results


def _interior_2x2(payoffs, players, owned):
    (pa,), (pb,) = owned[players[0]], owned[players[1]]
    da = payoffs[players[0]].partial(pa)  # depends on pb only
    db = payoffs[players[1]].partial(pb)  # depends on pa only
    if da.variables - {pb} or db.variables - {pa} or da.is_constant() or db.is_constant():
        return None
    if da.degree() > 1 or db.degree() > 1:
        return None
    vb = -da.substitute({pb: 0}).constant_value() / da.partial(pb).constant_value()
    va = -db.substitute({pa: 0}).constant_value() / db.partial(pa).constant_value()
    if 0 < va < 1 and 0 < vb < 1:
        return {pa: va, pb: vb}
    return None


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def constrained_equilibrium(game: GameDefinition, spec: SpaceSpec = IDENTITY,
                            grid: int | None = None) -> EquilibriumResult:
    """Equilibrium of ``game`` inside the joint space ``spec``.

    Backwards induction is tried first; specs whose free parameters span
    several histories fall back to best-response enumeration, whose first
    equilibrium becomes the primary one.  A correlation other than -1, 0 or
    1 is handled numerically when a single player chooses.
    """
    lowered, rest = lower_correlation(game, spec)
    if rest is not None:
        return _numeric_correlated(game, lowered, rest, grid)
    resolved = game.resolve(lowered)
    try:
        return backwards_induction(game, lowered, resolved)
    except NonSequentialFreeNodes:
        found = best_response_equilibria(game, lowered, resolved)
    primary = found[0]
    alts = []
    for r in found[1:]:
        if r.payoffs != primary.payoffs and r.payoffs not in alts:
            alts.append(r.payoffs)
    primary.alternatives = tuple(alts)
    return primary


# ---------------------------------------------------------------------------
# correlation-constrained numerics
# ---------------------------------------------------------------------------


def _rho_vectorized(p, q, r):
    py = q + p * (r - q)
    den = np.sqrt(np.clip(py * (1 - py), 0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.sqrt(p * (1 - p)) * (r - q) / den
    return np.where(den > 0, rho, 0.0)


def correlation_surface(rho: float):
    """``(r_of, feasible)`` for the (p, q) box at fixed correlation ``rho``.

    p is clamped away from 0 and 1 before the surface is evaluated.
    """

    def r_of(X):
        p = np.clip(X[:, 0], P_CLAMP, 1 - P_CLAMP)
        return corrgeom.r_plus(p, X[:, 1], rho)

    def feasible(X):
        p = np.clip(X[:, 0], P_CLAMP, 1 - P_CLAMP)
        with np.errstate(invalid="ignore"):
            r = corrgeom.r_plus(p, X[:, 1], rho)
        ok = np.isfinite(r) & (r >= 0) & (r <= 1)
        r = np.where(ok, r, 0.0)
        return ok & (np.abs(_rho_vectorized(p, X[:, 1], r) - rho) <= RHO_TOL)

    return r_of, feasible


@dataclass(frozen=True)
class CorrelatedOptimum:
    rho: float
    point: tuple[float, float, float]
    value: float


def maximize_under_rho(objective3, rho: float, grid: int | None = None) -> CorrelatedOptimum:
    """Maximize ``objective3(p, q, r)`` (vectorized) on the surface r = r_plus(p, q, rho)."""
    r_of, feasible = correlation_surface(rho)

    def f(X):
        with np.errstate(invalid="ignore"):
            r = r_of(X)
        return objective3(X[:, 0], X[:, 1], r)

    (p, q), value = numeric_box_maximize(f, [(0.0, 1.0), (0.0, 1.0)], feasible, grid=grid)
    r = float(r_of(np.array([[p, q]]))[0])
    return CorrelatedOptimum(rho, (p, q, r), value)


def _pqr_params(game: GameDefinition, resolved: ResolvedSpace, fix: CorrelationFix):
    space = resolved.base
    xs = space.node_keys(fix.x)
    if len(xs) != 1:
        raise UnsupportedShape(f"{fix.x!r} must be a single decision node")
    p = next(q.name for q in space.group(fix.x, xs[0]) if q.value == 1)
    pos = space.observed(fix.y).index(fix.x)
    ys = space.node_keys(fix.y)
    if len(ys) != 2:
        raise UnsupportedShape(f"{fix.y!r} must have one node per value of {fix.x!r}")
    by_x = {k[pos]: next(q.name for q in space.group(fix.y, k) if q.value == 1) for k in ys}
    names = (p, by_x[0], by_x[1])
    if set(resolved.free_params) != set(names):
        raise UnsupportedShape("numeric correlation needs exactly the three conditional parameters free")
    return names


def _numeric_correlated(game, spec, fix, grid) -> EquilibriumResult:
    resolved = game.resolve(spec)
    names = _pqr_params(game, resolved, fix)
    owners = {p for p, ns in _player_params(game, resolved).items()}
    if len(owners) != 1:
        raise UnsupportedShape("a shared correlation between two optimizing players is not supported")
    chooser = owners.pop()
    pays = expected_payoff_resolved(game, resolved)
    vec = {p: pays[p].vectorized(names) for p in game.players}
    opt = maximize_under_rho(lambda p, q, r: vec[chooser](np.column_stack([p, q, r])), fix.rho, grid)
    point = dict(zip(names, opt.point))
    payoffs = {p: float(vec[p](np.array([opt.point]))[0]) for p in game.players}
    return EquilibriumResult(SpaceSpec(spec.label, spec.constraints + (fix,)), point, payoffs, MIXED,
                             method="numeric")


def rho_sweep(game: GameDefinition, rhos: Sequence[float], grid: int | None = None) -> list[CorrelatedOptimum]:
    """Best payoff of the single chooser of ``game`` at each fixed correlation."""
    if game.correlation_pair is None:
        raise UnsupportedShape(f"{game.name} has no correlated pair")
    x, y = game.correlation_pair
    resolved = game.resolve()
    names = _pqr_params(game, resolved, CorrelationFix(x, y, 0.0))
    owners = set(_player_params(game, resolved))
    if len(owners) != 1:
        raise UnsupportedShape("the sweep needs a single choosing player")
    vec = expected_payoff_resolved(game, resolved)[owners.pop()].vectorized(names)
    return [maximize_under_rho(lambda p, q, r: vec(np.column_stack([p, q, r])), float(rho), grid)
            for rho in rhos]


def _xlogx(v):
    v = np.clip(v, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)


def behavioural_joint_entropy(p, q, r):
    return -(_xlogx((1 - p) * (1 - q)) + _xlogx((1 - p) * q) + _xlogx(p * (1 - r)) + _xlogx(p * r))


def entropy_max_under_rho(rho: float, grid: int | None = None) -> float:
    """Largest joint entropy of two binary variables whose correlation is ``rho``."""
    return maximize_under_rho(behavioural_joint_entropy, rho, grid).value


def entropy_argmax_under_rho(rho: float, grid: int | None = None) -> CorrelatedOptimum:
    return maximize_under_rho(behavioural_joint_entropy, rho, grid)


# ---------------------------------------------------------------------------
# non-polylinear objective
# ---------------------------------------------------------------------------


def agreement_polynomial(game: GameDefinition, resolved: ResolvedSpace) -> Polynomial:
    """Probability that the two correlated moves agree."""
    if game.correlation_pair is None:
        raise UnsupportedShape(f"{game.name} has no correlated pair")
    x, y = game.correlation_pair
    return resolved.event_polynomial(lambda a: a[x] == a[y])


def nonpolylinear_function(game: GameDefinition, spec: SpaceSpec = IDENTITY):
    """``(free_params, F)`` with F = 1 - |grad P(agree)|^2 vectorized over rows."""
    resolved = game.resolve(spec)
    agree = agreement_polynomial(game, resolved)
    names = resolved.free_params
    parts = [agree.partial(n).vectorized(names) for n in names]

    def F(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.ones(X.shape[0])
        for g in parts:
            out -= g(X) ** 2
        return out

    return names, F


def nonpolylinear_objective(game: GameDefinition, spec: SpaceSpec, point) -> float:
    resolved = game.resolve(spec)
    values = resolved.point_map(point)
    agree = agreement_polynomial(game, resolved)
    return float(1 - sum(agree.partial(n).evaluate(values) ** 2 for n in resolved.free_params))


# ---------------------------------------------------------------------------
# comparison tables
# ---------------------------------------------------------------------------


@dataclass
class ComparisonTable:
    game: str
    players: tuple[str, ...]
    row_player: str
    col_player: str
    row_labels: list[str]
    col_labels: list[str]
    cells: list[list[EquilibriumResult]]
    meta: list[tuple[int, int]] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def payoffs(self, i: int, j: int) -> tuple:
        return self.cells[i][j].payoff_tuple(self.players)

    def options(self, i: int, j: int) -> list[tuple]:
        return [tuple(o[p] for p in self.players) for o in self.cells[i][j].options]

    def grid(self) -> list[list[tuple]]:
        return [[self.payoffs(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]


def _solve_cell(args):
    game, spec, grid = args
    return constrained_equilibrium(game, spec, grid)


def _workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("ISOSPACE_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


def comparison_table(game: GameDefinition, rows: Sequence[SpaceSpec], cols: Sequence[SpaceSpec],
                     row_player: str | None = None, workers: int | None = None,
                     grid: int | None = None) -> ComparisonTable:
    """Constrained equilibrium payoffs for every (row space, column space) pair."""
    row_player = row_player or game.players[0]
    col_player = next(p for p in game.players if p != row_player)
    jobs = [(game, combine(r, c), grid) for r in rows for c in cols]
    n = _workers(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            flat = list(pool.map(_solve_cell, jobs))
    else:
        flat = [_solve_cell(j) for j in jobs]
    cells = [flat[i * len(cols):(i + 1) * len(cols)] for i in range(len(rows))]
    table = ComparisonTable(game.name, game.players, row_player, col_player,
                            [r.label for r in rows], [c.label for c in cols], cells)
    table.meta = meta_equilibria(table)
    return table


def meta_equilibria(table: ComparisonTable) -> list[tuple[int, int]]:
    """Cells that are weak pure Nash equilibria of the table's payoff bimatrix.

    A cell qualifies when any of its equilibrium payoff options beats every
    unilateral switch to another row (for the row player) or column (for
    the column player), each judged by that cell's primary payoffs.
    """
    rp, cp = table.row_player, table.col_player
    nr, nc = table.shape
    prim = [[table.cells[i][j].payoffs for j in range(nc)] for i in range(nr)]
    out = []
    for i in range(nr):
        for j in range(nc):
            others_r = max((prim[k][j][rp] for k in range(nr) if k != i), default=-math.inf)
            others_c = max((prim[i][k][cp] for k in range(nc) if k != j), default=-math.inf)
            if any(o[rp] >= others_r and o[cp] >= others_c for o in table.cells[i][j].options):
                out.append((i, j))
    return out


def reduce_table(table: ComparisonTable, prefer: Sequence[str] = ()) -> ComparisonTable:
    """Drop rows and columns whose payoff options duplicate an earlier one.

    Each surviving row or column keeps the first label of its class unless a
    label listed in ``prefer`` belongs to the same class (a bare tag matches
    a ``player:tag`` label).
    """
    nr, nc = table.shape

    def classes(n, key):
        groups: dict = {}
        for i in range(n):
            groups.setdefault(key(i), []).append(i)
        return list(groups.values())

    rows = classes(nr, lambda i: tuple(tuple(table.options(i, j)) for j in range(nc)))
    cols = classes(nc, lambda j: tuple(tuple(table.options(i, j)) for i in range(nr)))

    def label(labels, members):
        for m in members:
            if labels[m] in prefer or labels[m].split(":", 1)[-1] in prefer:
                return labels[m]
        return labels[members[0]]

    cells = [[table.cells[r[0]][c[0]] for c in cols] for r in rows]
    out = ComparisonTable(table.game, table.players, table.row_player, table.col_player,
                          [label(table.row_labels, r) for r in rows],
                          [label(table.col_labels, c) for c in cols], cells)
    out.meta = meta_equilibria(out)
    return out


def enumerate_spaces(game: GameDefinition, family: str, player: str | None = None) -> list[SpaceSpec]:
    """Ordered specs of a catalog family for one player (the row player by default)."""
    from .catalog import get_space_family

    fam = get_space_family(family, game)
    return fam.specs_for(player or fam.row_player)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloStat:
    mean: float
    stderr: float
    analytic: Fraction | float

    @property
    def z(self) -> float:
        diff = self.mean - float(self.analytic)
        if self.stderr == 0:
            return 0.0 if abs(diff) < 1e-12 else math.inf
        return diff / self.stderr


def _leaf_distribution(game: GameDefinition, resolved: ResolvedSpace, point):
    space = resolved.base
    fns = [game.payoffs[p].compile(none_as_zero=True) for p in game.players]
    probs, pays = [], []

    def walk(i, a, prob):
        if i == len(space.variables):
            probs.append(prob)
            pays.append(tuple(fn(a) for fn in fns))
            return
        var = space.variables[i]
        if isinstance(var, DerivedVar):
            a[var.id] = space.derive(var, a)
            walk(i + 1, a, prob)
        elif not space.is_active(var, a):
            a[var.id] = None
            walk(i + 1, a, prob)
        else:
            for v, poly in resolved.node_distribution(var.id, space.key_of(var.id, a)).items():
                pv = poly.evaluate(point)
                if pv == 0:
                    continue
                a[var.id] = v
                walk(i + 1, a, prob * pv)
        a[var.id] = None

    walk(0, {}, Fraction(1))
    return probs, pays


def monte_carlo_verify(game: GameDefinition, spec: SpaceSpec = IDENTITY, point=None,
                       n: int = 100_000, seed: int = 42) -> dict[str, MonteCarloStat]:
    """Sample ``n`` plays at ``point`` (the equilibrium point by default) and
    compare mean realized payoffs with the exact expectation."""
    if n < 1:
        raise ValueError("need at least one sample")
    spec, rest = lower_correlation(game, spec)
    if rest is not None:
        raise UnsupportedShape("Monte Carlo needs a coordinate space; fix rho to -1, 0 or 1")
    resolved = game.resolve(spec)
    if point is None:
        point = constrained_equilibrium(game, spec).point
    point = resolved.point_map(point)
    probs, pays = _leaf_distribution(game, resolved, point)
    exact = [sum(pr * pay[i] for pr, pay in zip(probs, pays)) for i in range(len(game.players))]
    weights = np.array([float(pr) for pr in probs])
    weights /= weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(probs), size=n, p=weights)
    table = np.array([[float(v) for v in pay] for pay in pays])
    sample = table[draws]
    out = {}
    for i, p in enumerate(game.players):
        col = sample[:, i]
        se = float(col.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        out[p] = MonteCarloStat(float(col.mean()), se, exact[i])
    return out
