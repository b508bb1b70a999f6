"""Finite probability spaces, constraint resolution, distributions and gradients.

A space is an ordered list of variables.  *Moves* are random variables whose
conditional distribution, given the values of the variables they observe,
is described by one simplex group of parameters per observed history.
*Derived* variables are deterministic lookups on earlier variables (for
example the two coordinates of a four-faced die, or which pure plan in a
mixed strategy produces which move).

Resolution turns declarative constraints into a substitution map from every
raw parameter to a polynomial in the surviving free parameters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import ContradictoryConstraints, OutOfRangeParam, UnknownParam
from .polynomial import Polynomial

Key = tuple
Value = int


# ---------------------------------------------------------------------------
# variables and parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoveVar:
    """A random move.  ``owner=None`` marks a chance move with fixed odds."""

    id: str
    domain: tuple[int, ...] = (0, 1)
    owner: str | None = None
    stage: int = 1
    observes: tuple[str, ...] | None = None  # None: everything from earlier stages
    active_if: tuple[tuple[str, int], ...] = ()
    reference: int | None = None  # outcome whose probability is eliminated
    chance: tuple[Fraction, ...] | None = None
    labels: tuple[tuple[Key, str | tuple[str, ...]], ...] = ()

    def __post_init__(self):
        if not self.domain:
            raise ValueError(f"move {self.id!r} has an empty domain")
        if self.chance is not None and len(self.chance) != len(self.domain):
            raise ValueError(f"chance odds of {self.id!r} do not match its domain")

    @property
    def is_binary(self) -> bool:
        return tuple(self.domain) == (0, 1)

    @property
    def reference_value(self) -> int:
        if self.reference is not None:
            return self.reference
        return 0 if 0 in self.domain else self.domain[-1]


@dataclass(frozen=True)
class DerivedVar:
    """Deterministic function of earlier variables given as a lookup table."""

    id: str
    inputs: tuple[str, ...]
    table: tuple[tuple[tuple[int, ...], int], ...]
    stage: int = 0

    @cached_property
    def lookup(self) -> dict[tuple[int, ...], int]:
        return dict(self.table)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.lookup.values())))


@dataclass(frozen=True)
class ParamId:
    """Probability that ``governs`` takes ``value`` given ``history``."""

    name: str
    governs: str
    history: tuple[tuple[str, int | None], ...]
    value: int


Variable = Union[MoveVar, DerivedVar]


def _fmt_history(history) -> str:
    return ",".join(f"{v}={x}" for v, x in history if x is not None)


class ProbabilitySpace:
    """Ordered variables plus one simplex group per (move, observed history)."""

    def __init__(self, variables: Sequence[Variable], visible: Sequence[str] | None = None,
                 name: str = "space"):
        self.name = name
        self.variables: tuple[Variable, ...] = tuple(variables)
        self._by_id = {v.id: v for v in self.variables}
        if len(self._by_id) != len(self.variables):
            raise ValueError("duplicate variable ids")
        self.visible: tuple[str, ...] = tuple(
            visible if visible is not None else [v.id for v in self.variables if isinstance(v, MoveVar)]
        )
        self._observed: dict[str, tuple[str, ...]] = {}
        for i, v in enumerate(self.variables):
            if isinstance(v, DerivedVar):
                for src in v.inputs:
                    self._check_precedes(src, i, v.id)
                continue
            if v.observes is None:
                obs = tuple(u.id for u in self.variables[:i] if u.stage < v.stage)
            else:
                obs = tuple(v.observes)
                for src in obs:
                    self._check_precedes(src, i, v.id)
            for src, _ in v.active_if:
                self._check_precedes(src, i, v.id)
            self._observed[v.id] = obs
        self._build_groups()

    def _check_precedes(self, src: str, index: int, owner: str) -> None:
        if src not in self._by_id or [u.id for u in self.variables].index(src) >= index:
            raise ValueError(f"{owner!r} refers to {src!r}, which does not precede it")

    # structure ------------------------------------------------------------
    def __getitem__(self, var_id: str) -> Variable:
        return self._by_id[var_id]

    @property
    def moves(self) -> tuple[MoveVar, ...]:
        return tuple(v for v in self.variables if isinstance(v, MoveVar))

    def observed(self, move_id: str) -> tuple[str, ...]:
        return self._observed[move_id]

    def key_of(self, move_id: str, assignment: Mapping[str, int | None]) -> Key:
        return tuple(assignment.get(src) for src in self._observed[move_id])

    def is_active(self, move: MoveVar, assignment: Mapping[str, int | None]) -> bool:
        return all(assignment.get(src) == val for src, val in move.active_if)

    def derive(self, var: DerivedVar, assignment: Mapping[str, int | None]) -> int | None:
        args = tuple(assignment.get(src) for src in var.inputs)
        if any(a is None for a in args):
            return None
        return var.lookup[args]

    def _realizable_keys(self) -> dict[str, list[Key]]:
        """Observed histories that occur on at least one path, in first-seen order."""
        seen: dict[str, dict[Key, None]] = {m.id: {} for m in self.moves}

        def walk(i: int, assignment: dict):
            if i == len(self.variables):
                return
            var = self.variables[i]
            if isinstance(var, DerivedVar):
                assignment[var.id] = self.derive(var, assignment)
                walk(i + 1, assignment)
                return
            if not self.is_active(var, assignment):
                assignment[var.id] = None
                walk(i + 1, assignment)
                return
            seen[var.id].setdefault(self.key_of(var.id, assignment), None)
            for k, val in enumerate(var.domain):
                if var.chance is not None and var.chance[k] == 0:
                    continue
                assignment[var.id] = val
                walk(i + 1, assignment)
            assignment[var.id] = None

        walk(0, {})
        return {m: list(keys) for m, keys in seen.items()}

    def _build_groups(self) -> None:
        self._keys = self._realizable_keys()
        self._groups: dict[tuple[str, Key], tuple[ParamId, ...]] = {}
        self._params: dict[str, ParamId] = {}
        for move in self.moves:
            labels = dict(move.labels)
            obs = self._observed[move.id]
            for key in self._keys[move.id]:
                history = tuple(zip(obs, key))
                cond = _fmt_history(history)
                cond = f"|{cond}" if cond else ""
                custom = labels.get(key)
                names = {}
                for k, val in enumerate(move.domain):
                    if custom is None:
                        names[val] = f"P({move.id}={val}{cond})"
                    elif isinstance(custom, str):
                        if not move.is_binary:
                            raise ValueError(f"categorical move {move.id!r} needs one label per value")
                        names[val] = custom if val == 1 else f"{custom}[0]"
                    else:
                        names[val] = custom[k]
                ref = move.reference_value
                order = [v for v in move.domain if v != ref] + [ref]
                if move.is_binary and move.reference is None:
                    order = [1, 0]
                group = tuple(ParamId(names[v], move.id, history, v) for v in order)
                for p in group:
                    if p.name in self._params:
                        raise ValueError(f"duplicate parameter name {p.name!r}")
                    self._params[p.name] = p
                self._groups[(move.id, key)] = group

    def node_keys(self, move_id: str) -> list[Key]:
        return list(self._keys[move_id])

    def group(self, move_id: str, key: Key) -> tuple[ParamId, ...]:
        return self._groups[(move_id, key)]

    @property
    def groups(self) -> dict[tuple[str, Key], tuple[ParamId, ...]]:
        return dict(self._groups)

    @property
    def params(self) -> tuple[ParamId, ...]:
        return tuple(self._params.values())

    def param(self, name: str) -> ParamId:
        try:
            return self._params[name]
        except KeyError:
            raise UnknownParam(f"no parameter named {name!r} in {self.name}") from None

    def param_for(self, move_id: str, value: int, **history) -> ParamId:
        """Look up the parameter for ``move=value`` given observed values."""
        key = tuple(history.get(src) for src in self._observed[move_id])
        for p in self._groups[(move_id, key)]:
            if p.value == value:
                return p
        raise UnknownParam(f"{move_id}={value} at {history}")

    def __repr__(self) -> str:
        return f"ProbabilitySpace({self.name!r}, {len(self.variables)} variables, {len(self._params)} parameters)"


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParamFix:
    param: str
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if not 0 <= self.value <= 1:
            raise ValueError(f"fixed value {self.value} outside [0,1]")


@dataclass(frozen=True)
class ParamTie:
    """Force ``b`` to equal ``a``."""

    a: str
    b: str


@dataclass(frozen=True)
class FunctionalAssignment:
    """Make ``move`` a deterministic function of the moves it observes.

    The function is either a polynomial in earlier moves (``expr``) or a
    lookup ``table`` keyed by the values of ``sources``.  ``when`` restricts
    the assignment to histories matching the listed values.
    """

    move: str
    expr: Polynomial | None = None
    sources: tuple[str, ...] = ()
    table: tuple[tuple[tuple[int, ...], int], ...] = ()
    when: tuple[tuple[str, int], ...] = ()

    @classmethod
    def copy(cls, move: str, source: str, when=()) -> "FunctionalAssignment":
        return cls(move, Polynomial.var(source), when=tuple(when))

    @classmethod
    def anti(cls, move: str, source: str, when=()) -> "FunctionalAssignment":
        return cls(move, 1 - Polynomial.var(source), when=tuple(when))

    @classmethod
    def const(cls, move: str, value: int, when=()) -> "FunctionalAssignment":
        return cls(move, Polynomial.const(value), when=tuple(when))

    @property
    def inputs(self) -> frozenset[str]:
        if self.expr is not None:
            return self.expr.variables
        return frozenset(self.sources)

    def value_at(self, assignment: Mapping[str, int | None]) -> int:
        if self.expr is not None:
            val = self.expr.evaluate({v: assignment[v] for v in self.expr.variables})
        else:
            val = dict(self.table)[tuple(assignment[s] for s in self.sources)]
        if Fraction(val).denominator != 1:
            raise ContradictoryConstraints(f"assignment to {self.move!r} yields non-integer {val}")
        return int(val)

    def describe(self) -> str:
        if self.expr is not None:
            body = str(self.expr)
        else:
            body = f"table({','.join(self.sources)})"
        cond = f" when {_fmt_history(self.when)}" if self.when else ""
        return f"{self.move}={body}{cond}"


@dataclass(frozen=True)
class CorrelationFix:
    x: str
    y: str
    rho: float

    def __post_init__(self):
        if not -1 <= self.rho <= 1:
            raise ValueError(f"correlation {self.rho} outside [-1,1]")


Constraint = Union[ParamFix, ParamTie, FunctionalAssignment, CorrelationFix]


def describe_constraint(c: Constraint) -> str:
    if isinstance(c, ParamFix):
        return f"{c.param}={c.value}"
    if isinstance(c, ParamTie):
        return f"{c.b}={c.a}"
    if isinstance(c, FunctionalAssignment):
        return c.describe()
    return f"rho({c.x},{c.y})={c.rho:g}"


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------


@dataclass
class ResolvedSpace:
    base: ProbabilitySpace
    constraints: tuple[Constraint, ...]
    free_params: tuple[str, ...]
    substitution: dict[str, Polynomial]
    reached: dict[str, frozenset]
    components: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.free_params)

    @property
    def correlation_fixes(self) -> tuple[CorrelationFix, ...]:
        return tuple(c for c in self.constraints if isinstance(c, CorrelationFix))

    def node_distribution(self, move_id: str, key: Key) -> dict[int, Polynomial]:
        return {p.value: self.substitution[p.name] for p in self.base.group(move_id, key)}

    def is_reached(self, move_id: str, key: Key) -> bool:
        return key in self.reached.get(move_id, ())

    def point_map(self, point) -> dict[str, object]:
        """Normalize a point given as a mapping or a sequence in free-param order."""
        if isinstance(point, Mapping):
            missing = [n for n in self.free_params if n not in point]
            if missing:
                raise UnknownParam(f"point lacks values for {missing}")
            values = {n: point[n] for n in self.free_params}
        else:
            seq = list(point)
            if len(seq) != len(self.free_params):
                raise ValueError(f"expected {len(self.free_params)} values, got {len(seq)}")
            values = dict(zip(self.free_params, seq))
        for n, v in values.items():
            if not 0 <= v <= 1:
                raise OutOfRangeParam(f"{n}={v} outside [0,1]")
        return values

    def param_value(self, name: str, point):
        return self.substitution[name].evaluate(self.point_map(point))

    @cached_property
    def events(self) -> list[tuple[tuple, Polynomial]]:
        """Visible outcomes with their probability polynomials (zero ones omitted)."""
        acc: dict[tuple, Polynomial] = {}
        space = self.base

        def walk(i: int, assignment: dict, prob: Polynomial):
            if i == len(space.variables):
                key = tuple(assignment.get(v) for v in space.visible)
                acc[key] = acc.get(key, Polynomial()) + prob
                return
            var = space.variables[i]
            if isinstance(var, DerivedVar):
                assignment[var.id] = space.derive(var, assignment)
                walk(i + 1, assignment, prob)
                return
            if not space.is_active(var, assignment):
                assignment[var.id] = None
                walk(i + 1, assignment, prob)
                return
            dist = self.node_distribution(var.id, space.key_of(var.id, assignment))
            for val in var.domain:
                p = dist[val]
                if p.is_zero():
                    continue
                assignment[var.id] = val
                walk(i + 1, assignment, prob * p)
            assignment[var.id] = None

        walk(0, {}, Polynomial.const(1))
        return [(k, v) for k, v in acc.items() if not v.is_zero()]

    def event_polynomial(self, predicate: Callable[[Mapping[str, int]], bool]) -> Polynomial:
        total = Polynomial()
        for outcome, prob in self.events:
            if predicate(dict(zip(self.base.visible, outcome))):
                total = total + prob
        return total

    def describe(self) -> str:
        cons = ", ".join(describe_constraint(c) for c in self.constraints) or "none"
        return f"{self.base.name} | {cons} -> free {list(self.free_params)} (dim {self.dimension})"


def _lower_assignment(space: ProbabilitySpace, fa: FunctionalAssignment,
                      fixes: dict[str, Fraction], origin: dict[str, str]) -> None:
    if fa.move not in space._observed:
        raise UnknownParam(f"no move named {fa.move!r}")
    move = space[fa.move]
    obs = space.observed(fa.move)
    missing = [s for s in fa.inputs if s not in obs]
    missing += [s for s, _ in fa.when if s not in obs]
    if missing:
        raise ContradictoryConstraints(f"{fa.move!r} does not observe {sorted(set(missing))}")
    for key in space.node_keys(fa.move):
        assignment = dict(zip(obs, key))
        if any(assignment.get(s) != v for s, v in fa.when):
            continue
        if any(assignment.get(s) is None for s in fa.inputs):
            continue
        val = fa.value_at(assignment)
        if val not in move.domain:
            raise ContradictoryConstraints(f"{fa.describe()} gives {val}, outside the domain of {fa.move!r}")
        for p in space.group(fa.move, key):
            _set_fix(fixes, origin, p.name, Fraction(int(p.value == val)), fa.describe())


def _set_fix(fixes, origin, name, value, why) -> None:
    if name in fixes and fixes[name] != value:
        raise ContradictoryConstraints(
            f"{name} fixed to {fixes[name]} by {origin[name]} and to {value} by {why}")
    fixes[name] = value
    origin[name] = why


def resolve(space: ProbabilitySpace, constraints: Iterable[Constraint] = (),
            collapse: bool = True) -> ResolvedSpace:
    """Reduce ``space`` under ``constraints`` to its free parameters.

    Functional assignments become per-history point-mass fixes; the last
    unconstrained parameter of each simplex group is eliminated through
    normalization; histories that become unreachable are pruned.  With
    ``collapse`` set, free parameters of one group that move the visible
    distribution identically are merged into their sum.
    """
    constraints = tuple(constraints)
    fixes: dict[str, Fraction] = {}
    origin: dict[str, str] = {}
    for move in space.moves:
        if move.chance is not None:
            for key in space.node_keys(move.id):
                for p in space.group(move.id, key):
                    fixes[p.name] = Fraction(move.chance[move.domain.index(p.value)])
                    origin[p.name] = "chance"
    ties: list[ParamTie] = []
    for c in constraints:
        if isinstance(c, FunctionalAssignment):
            _lower_assignment(space, c, fixes, origin)
        elif isinstance(c, ParamFix):
            space.param(c.param)
            _set_fix(fixes, origin, c.param, c.value, describe_constraint(c))
        elif isinstance(c, ParamTie):
            space.param(c.a)
            space.param(c.b)
            ties.append(c)
        elif isinstance(c, CorrelationFix):
            for v in (c.x, c.y):
                if v not in space._by_id:
                    raise UnknownParam(f"no variable named {v!r}")
        else:
            raise TypeError(f"unknown constraint {c!r}")

    # union-find over ties; a fixed member fixes the whole class
    parent: dict[str, str] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for t in ties:
        ra, rb = find(t.a), find(t.b)
        if ra != rb:
            parent[rb] = ra
    classes: dict[str, list[str]] = {}
    for name in parent:
        classes.setdefault(find(name), []).append(name)
    for root, members in list(classes.items()):
        classes[root] = sorted(set(members + [root]), key=lambda n: list(space._params).index(n))
    # propagate fixes through ties and saturated groups until stable
    changed = True
    while changed:
        changed = False
        for members in classes.values():
            fixed = {fixes[m] for m in members if m in fixes}
            if len(fixed) > 1:
                raise ContradictoryConstraints(
                    f"tied parameters {members} carry different fixes {sorted(fixed)}")
            if fixed:
                val = next(iter(fixed))
                for m in members:
                    if m not in fixes:
                        _set_fix(fixes, origin, m, val, "tie")
                        changed = True
        for (move_id, key), group in space.groups.items():
            names = [p.name for p in group]
            if sum((fixes[n] for n in names if n in fixes), Fraction(0)) == 1:
                for n in names:
                    if n not in fixes:
                        _set_fix(fixes, origin, n, Fraction(0), "normalization")
                        changed = True
    tied = {m for members in classes.values() for m in members if len(members) > 1}
    rep = {m: members[0] for members in classes.values() for m in members}

    # normalization: eliminate the last unconstrained member of each group
    subst: dict[str, Polynomial] = {}
    eliminated: dict[str, list[str]] = {}
    for (move_id, key), group in space.groups.items():
        names = [p.name for p in group]
        open_names = [n for n in names if n not in fixes and n not in tied]
        fixed_sum = sum((fixes[n] for n in names if n in fixes), Fraction(0))
        if fixed_sum > 1:
            raise ContradictoryConstraints(f"fixed probabilities of {move_id} at {key} sum to {fixed_sum}")
        if not open_names:
            if all(n in fixes for n in names) and fixed_sum != 1:
                raise ContradictoryConstraints(
                    f"fixed probabilities of {move_id} at {key} sum to {fixed_sum}, not 1")
            if not all(n in fixes for n in names):
                raise ContradictoryConstraints(f"cannot normalize {move_id} at {key}: every open parameter is tied")
            continue
        eliminated[open_names[-1]] = [n for n in names if n != open_names[-1]]
    for name in space._params:
        if name in fixes:
            subst[name] = Polynomial.const(fixes[name])
        elif name in eliminated:
            continue
        else:
            subst[name] = Polynomial.var(rep.get(name, name))
    for name, others in eliminated.items():
        subst[name] = 1 - sum((subst[o] for o in others), Polynomial())

    reached = _prune(space, subst)
    position = {n: i for i, n in enumerate(space._params)}
    order: list[str] = []
    seen: set[str] = set()
    for move in space.moves:
        for key in space.node_keys(move.id):
            if key not in reached[move.id]:
                continue
            for p in space.group(move.id, key):
                for v in sorted(subst[p.name].variables, key=position.__getitem__):
                    if v not in seen:
                        seen.add(v)
                        order.append(v)
    resolved = ResolvedSpace(space, constraints, tuple(order), subst, reached,
                             {n: (n,) for n in order})
    if collapse and _support_size(space) <= 4096:
        resolved = _collapse_redundant(resolved)
    return resolved


def _support_size(space: ProbabilitySpace) -> int:
    return math.prod(len(m.domain) for m in space.moves)


def _prune(space: ProbabilitySpace, subst: Mapping[str, Polynomial]) -> dict[str, frozenset]:
    reached: dict[str, set] = {m.id: set() for m in space.moves}

    def walk(i: int, assignment: dict):
        if i == len(space.variables):
            return
        var = space.variables[i]
        if isinstance(var, DerivedVar):
            assignment[var.id] = space.derive(var, assignment)
            walk(i + 1, assignment)
            return
        if not space.is_active(var, assignment):
            assignment[var.id] = None
            walk(i + 1, assignment)
            return
        key = space.key_of(var.id, assignment)
        reached[var.id].add(key)
        for p in space.group(var.id, key):
            if subst[p.name].is_zero():
                continue
            assignment[var.id] = p.value
            walk(i + 1, assignment)
        assignment[var.id] = None

    walk(0, {})
    return {m: frozenset(keys) for m, keys in reached.items()}


def _collapse_redundant(resolved: ResolvedSpace) -> ResolvedSpace:
    """Merge free parameters whose tangent directions coincide on every event
    and pin to 0 those that move no event probability at all."""
    by_group: dict[tuple, list[str]] = {}
    for (move_id, key), group in resolved.base.groups.items():
        if not resolved.is_reached(move_id, key):
            continue
        for p in group:
            for v in resolved.substitution[p.name].variables:
                members = by_group.setdefault((move_id, key), [])
                if v not in members:
                    members.append(v)
    if all(len(m) < 2 for m in by_group.values()):
        return resolved
    events = resolved.events
    merges: list[list[str]] = []
    inert: list[str] = []  # directions that move no event probability
    for members in by_group.values():
        pending = [m for m in members if m in resolved.free_params]
        while pending:
            head = pending.pop(0)
            grads = [prob.partial(head) for _, prob in events]
            if all(g.is_zero() for g in grads):
                inert.append(head)
                continue
            same = [m for m in pending if all(prob.partial(m) == g for (_, prob), g in zip(events, grads))]
            if same:
                merges.append([head] + same)
                pending = [m for m in pending if m not in same]
    if not merges and not inert:
        return resolved
    zero = {n: Polynomial.const(0) for n in inert}
    subst = {k: v.substitute(zero) for k, v in resolved.substitution.items()}
    components = {k: v for k, v in resolved.components.items() if k not in zero}
    free = [f for f in resolved.free_params if f not in zero]
    for group in merges:
        new = "(" + "+".join(group) + ")"
        split = _valid_split(resolved, group, new)
        subst = {k: v.substitute(split) for k, v in subst.items()}
        idx = free.index(group[0])
        free = [f for f in free if f not in group]
        free.insert(idx, new)
        components[new] = tuple(group)
        for g in group:
            components.pop(g, None)
    return ResolvedSpace(resolved.base, resolved.constraints, tuple(free), subst,
                         resolved.reached, components)


def _valid_split(resolved: ResolvedSpace, group: list[str], new: str) -> dict[str, Polynomial]:
    """Put the whole merged mass on one member, choosing one that keeps the space valid.

    The probe holds the other free parameters at 0 so simplex-coupled
    coordinates leave the merged one its full [0, 1] range.
    """
    others = [f for f in resolved.free_params if f not in group]
    for target in reversed(group):
        split = {g: (Polynomial.var(new) if g == target else Polynomial.const(0)) for g in group}
        ok = True
        for total in (Fraction(0), Fraction(1)):
            point = {o: Fraction(0) for o in others}
            point[new] = total
            for poly in resolved.substitution.values():
                val = poly.substitute(split).evaluate(point)
                if not 0 <= val <= 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return split
    raise ContradictoryConstraints(f"no valid coordinate for merged parameters {group}")


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


class JointDistribution:
    """Probabilities over full assignments of named variables."""

    def __init__(self, variables: Sequence[str], table: Mapping[tuple, object]):
        self.variables = tuple(variables)
        self.table = {k: v for k, v in table.items()}
        if any(v < 0 for v in self.table.values()):
            raise ValueError("negative probability")
        total = sum(self.table.values())
        if abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")

    @property
    def support(self) -> list[tuple]:
        return [k for k, v in self.table.items() if v != 0]

    def probabilities(self) -> list:
        return list(self.table.values())

    def __getitem__(self, outcome: tuple):
        return self.table.get(tuple(outcome), 0)

    def marginal(self, variables: str | Sequence[str]) -> "JointDistribution":
        if isinstance(variables, str):
            variables = (variables,)
        idx = [self.variables.index(v) for v in variables]
        out: dict[tuple, object] = {}
        for k, p in self.table.items():
            sub = tuple(k[i] for i in idx)
            out[sub] = out.get(sub, 0) + p
        return JointDistribution(variables, out)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.table.items())
        return f"JointDistribution({list(self.variables)}, {{{body}}})"


def joint_distribution(resolved: ResolvedSpace, point) -> JointDistribution:
    values = resolved.point_map(point)
    for name, poly in resolved.substitution.items():
        v = poly.evaluate(values)
        if not -1e-12 <= v <= 1 + 1e-12:
            raise OutOfRangeParam(f"{name} = {v} at this point")
    table = {outcome: prob.evaluate(values) for outcome, prob in resolved.events}
    return JointDistribution(resolved.base.visible, table)


def simplex_volume(n: int) -> Fraction:
    """Volume of the resolved (n-1)-simplex of an n-outcome die: 1/(n-1)!."""
    if n < 2:
        raise ValueError("a simplex needs at least two outcomes")
    return Fraction(1, math.factorial(n - 1))


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------

FD_STEP = 1e-5


@dataclass(frozen=True)
class Gradient:
    values: tuple[float, ...]
    exact: bool
    one_sided: tuple[bool, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def flagged(self) -> bool:
        return any(self.one_sided)


def _gradient_at(objective, names: Sequence[str], values: Sequence, h: float = FD_STEP) -> Gradient:
    if isinstance(objective, Polynomial):
        point = dict(zip(names, values))
        return Gradient(tuple(objective.partial(n).evaluate(point) for n in names), True,
                        (False,) * len(names))
    x = np.asarray([float(v) for v in values], dtype=float)
    grads, flags = [], []
    for i in range(len(x)):
        up, down = x.copy(), x.copy()
        if x[i] - h < 0:
            up[i] += h
            grads.append((objective(up) - objective(x)) / h)
            flags.append(True)
        elif x[i] + h > 1:
            down[i] -= h
            grads.append((objective(x) - objective(down)) / h)
            flags.append(True)
        else:
            up[i] += h
            down[i] -= h
            grads.append((objective(up) - objective(down)) / (2 * h))
            flags.append(False)
    return Gradient(tuple(grads), False, tuple(flags))


def gradient(objective, resolved: ResolvedSpace, point, h: float = FD_STEP) -> Gradient:
    """Gradient over the free parameters of ``resolved``.

    A :class:`Polynomial` objective is differentiated exactly.  A callable
    receives a float vector in free-parameter order and is differenced with
    a central stencil, or a one-sided one at the boundary (flagged).
    """
    values = resolved.point_map(point)
    return _gradient_at(objective, resolved.free_params, [values[n] for n in resolved.free_params], h)


def directed_gradient(objective, point, direction: Sequence[float], scale: float = 1.0,
                      variables: Sequence[str] | None = None, h: float = FD_STEP) -> float:
    """``scale * (grad objective . direction)`` for a unit ``direction``."""
    d = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0:
        raise ValueError("direction vector is zero")
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"direction must be a unit vector (norm {norm})")
    if isinstance(point, Mapping):
        names = list(variables or point.keys())
        vals = [point[n] for n in names]
    else:
        vals = list(point)
        names = list(variables) if variables is not None else (
            sorted(objective.variables) if isinstance(objective, Polynomial) else [str(i) for i in range(len(vals))])
    g = _gradient_at(objective, names, vals, h)
    return float(scale * sum(float(gi) * di for gi, di in zip(g.values, d)))


def interior_points(dim: int, count: int, seed: int = 0, margin: float = 0.05) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(margin, 1 - margin, size=(count, dim))


def cartesian(domains: Iterable[Sequence[int]]):
    return itertools.product(*domains)
