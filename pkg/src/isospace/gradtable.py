"""Gradients of probability relations in the mixed and behavioural xy spaces.

Each relation is differentiated twice: over the unconstrained space and then
evaluated on the locus where the relation holds (the limit form), and over
the constrained space in which the relation holds identically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import sympy

from .probspace import ParamFix, ParamTie, ResolvedSpace, resolve

S = sympy.Symbol
a1, b1, b2, b3 = S("α1"), S("β1"), S("β2"), S("β3")
p, q, r = S("p"), S("q"), S("r")

REGIMES = ("corr", "indep")
SPACE_NAMES = ("mixed", "behavioural")


# quantities over a probability table P[(x, y)] ------------------------------

def _px(P, a):
    return P[(a, 0)] + P[(a, 1)]


def _py(P, b):
    return P[(0, b)] + P[(1, b)]


def _entropy(probs):
    return -sum(v * sympy.log(v) for v in probs if v != 0)


def _mean_x(P):
    return _px(P, 1)


def _mean_y(P):
    return _py(P, 1)


def _correlation(P):
    cov = P[(1, 1)] - _mean_x(P) * _mean_y(P)
    return cov / sympy.sqrt(_mean_x(P) * (1 - _mean_x(P)) * _mean_y(P) * (1 - _mean_y(P)))


def _variance_of_difference(P):
    ex, ey, exy = _mean_x(P), _mean_y(P), P[(1, 1)]
    return ex * (1 - ex) + ey * (1 - ey) - 2 * (exy - ex * ey)


Quantity = Callable[[dict], sympy.Expr]

CORR_QUANTITIES: list[tuple[str, Quantity]] = [
    ("P(0,0)+P(1,1)", lambda P: P[(0, 0)] + P[(1, 1)]),
    ("P(0,1)+P(1,0)", lambda P: P[(0, 1)] + P[(1, 0)]),
    ("P(x=0|y=0)", lambda P: P[(0, 0)] / _py(P, 0)),
    ("P(x=0|y=1)", lambda P: P[(0, 1)] / _py(P, 1)),
    ("<x>", _mean_x),
    ("<y>", _mean_y),
    ("<xy>", lambda P: P[(1, 1)]),
    ("V(x)+V(y)-2cov(x,y)", _variance_of_difference),
    ("E_xy-E_x", lambda P: _entropy(P.values()) - _entropy([_px(P, 0), _px(P, 1)])),
    ("rho_xy", _correlation),
]

INDEP_QUANTITIES: list[tuple[str, Quantity]] = [
    (f"P({a},{b})-P_x({a})P_y({b})", (lambda a, b: lambda P: P[(a, b)] - _px(P, a) * _py(P, b))(a, b))
    for a in (0, 1) for b in (0, 1)
] + [
    ("P(x=0|y=0)-P_x(0)", lambda P: P[(0, 0)] / _py(P, 0) - _px(P, 0)),
    ("P(x=0|y=1)-P_x(0)", lambda P: P[(0, 1)] / _py(P, 1) - _px(P, 0)),
    ("<xy>-<x><y>", lambda P: P[(1, 1)] - _mean_x(P) * _mean_y(P)),
    ("E_xy-E_x-E_y", lambda P: _entropy(P.values()) - _entropy([_px(P, 0), _px(P, 1)])
     - _entropy([_py(P, 0), _py(P, 1)])),
    ("rho_xy", _correlation),
]

# Printed limit forms as {parameter: coefficient of its unit vector}; None
# marks rows recorded only as nonzero.  Constrained forms default to 0.
Form = dict[sympy.Symbol, sympy.Expr]
_m = 1 - a1
_v = a1 * (1 - a1)
_w = p * (1 - p)

LIMIT_FORMS: dict[tuple[str, str], list[Form | None]] = {
    ("mixed", "corr"): [
        {b1: a1, b2: -_m, b3: 2 * a1 - 1},
        {b1: -a1, b2: _m, b3: -(2 * a1 - 1)},
        {b1: a1 / _m, b3: a1 / _m},
        {b2: _m / a1, b3: _m / a1},
        {a1: 1},
        {a1: 1, b1: a1, b2: _m, b3: 1},
        {a1: 1, b1: a1, b3: a1},
        {b1: -a1, b2: _m, b3: 1 - 2 * a1},
        None,
        None,
    ],
    ("behavioural", "corr"): [
        {q: -(1 - p), r: p},
        {q: 1 - p, r: -p},
        {r: p / (1 - p)},
        {q: (1 - p) / p},
        {p: 1},
        {p: 1, q: 1 - p, r: p},
        {p: 1, r: p},
        {q: 1 - p, r: -p},
        None,
        None,
    ],
    ("mixed", "indep"): [
        {b1: _v, b2: -_v},
        {b1: -_v, b2: _v},
        {b1: -_v, b2: _v},
        {b1: _v, b2: -_v},
        {b1: _v / (1 - b1 - b3), b2: -_v / (1 - b1 - b3)},
        {b1: -_v / (b1 + b3), b2: _v / (b1 + b3)},
        {b1: _v, b2: -_v},
        None,
        None,
    ],
    ("behavioural", "indep"): [
        {q: -_w, r: _w},
        {q: _w, r: -_w},
        {q: _w, r: -_w},
        {q: -_w, r: _w},
        {q: -_w / (1 - q), r: _w / (1 - q)},
        {q: _w / q, r: -_w / q},
        {q: -_w, r: _w},
        None,
        None,
    ],
}

# Constrained forms that are not zero, by row label.
CONSTRAINED_FORMS: dict[tuple[str, str], dict[str, Form]] = {
    ("mixed", "corr"): {"<x>": {a1: 1}, "<y>": {a1: 1}, "<xy>": {a1: 1}},
    ("behavioural", "corr"): {"<x>": {p: 1}, "<y>": {p: 1}, "<xy>": {p: 1}},
}


def _space_and_constraints(space: str, regime: str):
    from .catalog import behavioural_space, mixed_space

    if space == "mixed":
        base = mixed_space()
        cons = (ParamFix("β1", 1),) if regime == "corr" else (ParamTie("β1", "β2"),)
    elif space == "behavioural":
        base = behavioural_space()
        cons = (ParamFix("q", 0), ParamFix("r", 1)) if regime == "corr" else (ParamTie("q", "r"),)
    else:
        raise ValueError(f"unknown space {space!r}; expected one of {SPACE_NAMES}")
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    return base, cons


def _limit_sampler(space: str, regime: str) -> Callable[[random.Random], dict]:
    """Random points on the locus where the relation holds."""
    def sample(rng: random.Random) -> dict:
        u = rng.uniform(0.05, 0.95)
        if space == "mixed" and regime == "corr":
            return {a1: u, b1: 1.0, b2: 0.0, b3: 0.0}
        if space == "behavioural" and regime == "corr":
            return {p: u, q: 0.0, r: 1.0}
        if space == "mixed":
            beta = rng.uniform(0.05, 0.3)
            return {a1: u, b1: beta, b2: beta, b3: rng.uniform(0.05, 0.3)}
        qq = rng.uniform(0.05, 0.95)
        return {p: u, q: qq, r: qq}

    return sample


def _table(resolved: ResolvedSpace, symbols: dict[str, sympy.Symbol]) -> dict:
    P = {(x, y): sympy.Integer(0) for x in (0, 1) for y in (0, 1)}
    for key, prob in resolved.events:
        P[key] = prob.to_sympy(symbols)
    return P


def _positive_factors(expr, syms) -> sympy.Expr:
    """Factor with every factor positive inside the box, so logarithms of
    products split cleanly under ``expand_log``."""
    coeff, factors = sympy.factor_list(expr)
    inside = {s: sympy.Rational(1, 5) for s in syms}
    out = coeff
    for f, e in factors:
        if f.subs(inside) < 0:
            f, out = -f, out * (-1) ** e
        out = out * f**e
    return out


def _evaluate(expr, point: dict) -> float:
    with np.errstate(all="ignore"):
        try:
            val = complex(expr.subs(point).evalf())
        except (TypeError, ValueError, ZeroDivisionError):
            return float("inf")
    if abs(val.imag) > 1e-12 or not np.isfinite(val.real):
        return float("inf")
    return val.real


def _is_zero(expr, sampler, rng) -> tuple[bool, bool]:
    """(is zero, decided symbolically)."""
    simplified = sympy.simplify(sympy.expand_log(expr, force=True))
    if simplified == 0:
        return True, True
    return all(abs(_evaluate(expr, sampler(rng))) < 1e-12 for _ in range(20)), False


def _format(form: Form | None) -> str:
    if form is None:
        return "nonzero"
    if not form:
        return "0"
    return " + ".join(f"({sympy.simplify(c)})*hat({s})" for s, c in form.items())


@dataclass
class RelationRow:
    label: str
    limit_expected: str
    limit_status: str  # "match", "mismatch", "nonzero", "unbounded" or "zero"
    limit_error: float
    constrained_expected: str
    constrained_gradient: dict[str, str]
    constrained_ok: bool
    exact: bool  # constrained check decided symbolically

    @property
    def ok(self) -> bool:
        return self.constrained_ok and self.limit_status != "mismatch"


@dataclass
class RelationReport:
    space: str
    regime: str
    params: tuple[str, ...]
    constrained_params: tuple[str, ...]
    rows: list[RelationRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def lines(self) -> list[str]:
        out = [f"{self.space} {self.regime}: params {', '.join(self.params)} (dim {len(self.params)}); "
               f"constrained {', '.join(self.constrained_params)} (dim {len(self.constrained_params)})"]
        for row in self.rows:
            grad = ", ".join(f"{k}: {v}" for k, v in row.constrained_gradient.items())
            out.append(f"  {row.label}: limit {row.limit_status} [{row.limit_expected}]; "
                       f"constrained {{{grad}}} {'ok' if row.constrained_ok else 'FAIL'}")
        return out


def gradient_relation_suite(space: str, regime: str, points: int = 20, seed: int = 7) -> RelationReport:
    """Compare relation gradients in the unconstrained limit and the constrained space.

    Limit forms are checked against the recorded expressions at ``points``
    random points of the locus within 1e-9.  Constrained gradients are
    simplified symbolically, with a numeric fallback for expressions involving
    logarithms or square roots that sympy cannot reduce.
    """
    base, cons = _space_and_constraints(space, regime)
    free = resolve(base, ())
    constrained = resolve(base, cons)
    symbols = {n: S(n) for n in free.free_params + constrained.free_params}
    P_free = _table(free, symbols)
    free_syms = [symbols[n] for n in free.free_params]
    cons_syms = [symbols[n] for n in constrained.free_params]
    P_cons = {k: _positive_factors(v, cons_syms) for k, v in _table(constrained, symbols).items()}
    quantities = CORR_QUANTITIES if regime == "corr" else INDEP_QUANTITIES
    forms = LIMIT_FORMS[(space, regime)]
    cons_forms = CONSTRAINED_FORMS.get((space, regime), {})
    sample_limit = _limit_sampler(space, regime)
    rng = random.Random(seed)

    def sample_cons(rng):
        return {s: rng.uniform(0.05, 0.45) for s in cons_syms}

    report = RelationReport(space, regime, free.free_params, constrained.free_params)
    for (label, quantity), form in zip(quantities, forms):
        grad = [sympy.diff(quantity(P_free), s) for s in free_syms]
        if form is None:
            norms = []
            for _ in range(points):
                pt = sample_limit(rng)
                norms.append(max(abs(_evaluate(g, pt)) for g in grad))
            if any(not np.isfinite(n) for n in norms):
                status = "unbounded"
            elif max(norms) < 1e-9:
                status = "zero"
            else:
                status = "nonzero"
            error = 0.0
        else:
            error = 0.0
            for _ in range(points):
                pt = sample_limit(rng)
                for s, g in zip(free_syms, grad):
                    want = _evaluate(sympy.sympify(form.get(s, 0)), pt)
                    error = max(error, abs(_evaluate(g, pt) - want))
            status = "match" if error <= 1e-9 else "mismatch"
        expected_cons = cons_forms.get(label, {})
        cgrad = {}
        ok, exact = True, True
        value = quantity(P_cons)
        for s in cons_syms:
            d = sympy.diff(value, s)
            zero, symbolic = _is_zero(d - expected_cons.get(s, 0), sample_cons, rng)
            ok &= zero
            exact &= symbolic
            cgrad[s.name] = str(expected_cons.get(s, 0)) if zero else str(sympy.simplify(d))
        report.rows.append(RelationRow(label, _format(form), status, error,
                                       _format(expected_cons), cgrad, ok, exact))
    return report
