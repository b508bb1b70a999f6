"""Entropy, mutual information, correlation, Fisher information and likelihood."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import CountOnPrunedEvent, DegenerateMarginal, SingularFisher
from .probspace import JointDistribution, ResolvedSpace


def _xlogx(p) -> float:
    p = float(p)
    return 0.0 if p == 0 else p * math.log(p)


def entropy(dist) -> float:
    """Shannon entropy in nats; also the von Neumann entropy of an eigenvalue vector."""
    probs = dist.probabilities() if isinstance(dist, JointDistribution) else list(dist)
    if any(p < 0 for p in probs):
        raise ValueError("negative probability")
    return -sum(_xlogx(p) for p in probs)


def binary_entropy(p) -> float:
    return entropy((p, 1 - p))


def marginal(dist: JointDistribution, var: str | Sequence[str]) -> JointDistribution:
    return dist.marginal(var)


def conditional_entropy(dist: JointDistribution, x: str, y: str) -> float:
    """H(x|y); conditioning values of probability zero contribute nothing."""
    return entropy(dist.marginal((x, y))) - entropy(dist.marginal(y))


def mutual_information(dist: JointDistribution, x: str, y: str) -> float:
    return entropy(dist.marginal(x)) - conditional_entropy(dist, x, y)


def behavioural_mutual_information(p, q, r) -> float:
    """Closed form for x~Bernoulli(p), y|x=0~Bernoulli(q), y|x=1~Bernoulli(r)."""
    for v in (p, q, r):
        if not 0 <= v <= 1:
            raise ValueError(f"{v} outside [0,1]")
    py = q + p * (r - q)
    return binary_entropy(py) - (1 - p) * binary_entropy(q) - p * binary_entropy(r)


def correlation(dist: JointDistribution, x: str = "x", y: str = "y") -> float:
    """Pearson correlation of two binary variables."""
    j = dist.marginal((x, y))
    a, b, c, d = (float(j[(0, 0)]), float(j[(0, 1)]), float(j[(1, 0)]), float(j[(1, 1)]))
    px, py = c + d, b + d
    if px in (0.0, 1.0) or py in (0.0, 1.0):
        raise DegenerateMarginal(f"P({x}=1)={px}, P({y}=1)={py}")
    return (a * d - b * c) / math.sqrt((c + d) * (a + b) * (b + d) * (a + c))


# ---------------------------------------------------------------------------
# Fisher information and likelihood
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FisherMatrix:
    params: tuple[str, ...]
    entries: tuple[tuple, ...]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def fisher_information(resolved: ResolvedSpace, point) -> FisherMatrix:
    """Sum over surviving events of P * dlogP/di * dlogP/dj, exact at rational points."""
    values = resolved.point_map(point)
    names = resolved.free_params
    n = len(names)
    out = [[Fraction(0) for _ in range(n)] for _ in range(n)]
    for outcome, prob in resolved.events:
        pv = prob.evaluate(values)
        grads = [prob.partial(v).evaluate(values) for v in names]
        if pv == 0:
            if any(g != 0 for g in grads):
                raise SingularFisher(f"event {outcome} has zero probability at {values}")
            continue
        for i in range(n):
            for j in range(n):
                out[i][j] = out[i][j] + grads[i] * grads[j] / pv
    return FisherMatrix(names, tuple(tuple(row) for row in out))


CountVector = Mapping[tuple, int]


def _checked_counts(resolved: ResolvedSpace, counts: CountVector) -> dict[tuple, int]:
    surviving = {o for o, _ in resolved.events}
    clean = {}
    for outcome, n in counts.items():
        outcome = tuple(outcome)
        if n < 0:
            raise ValueError(f"negative count for {outcome}")
        if n and outcome not in surviving:
            raise CountOnPrunedEvent(f"{n} observations of {outcome}, which this space forbids")
        if n:
            clean[outcome] = n
    return clean


def log_likelihood(resolved: ResolvedSpace, counts: CountVector, point) -> float:
    values = resolved.point_map(point)
    counts = _checked_counts(resolved, counts)
    probs = dict(resolved.events)
    total = 0.0
    for outcome, n in counts.items():
        pv = float(probs[outcome].evaluate(values))
        if pv == 0:
            return -math.inf
        total += n * math.log(pv)
    return total


def log_likelihood_gradient(resolved: ResolvedSpace, counts: CountVector, point) -> tuple:
    """Gradient of sum n_e log P_e over the free parameters (prefactor dropped)."""
    values = resolved.point_map(point)
    counts = _checked_counts(resolved, counts)
    probs = dict(resolved.events)
    grad = []
    for v in resolved.free_params:
        g = Fraction(0)
        for outcome, n in counts.items():
            pv = probs[outcome].evaluate(values)
            if pv == 0:
                raise SingularFisher(f"observed event {outcome} has zero probability")
            g = g + n * probs[outcome].partial(v).evaluate(values) / pv
        grad.append(g)
    return tuple(grad)


def ml_estimate(resolved: ResolvedSpace, counts: CountVector) -> dict[str, object]:
    """Maximum-likelihood point.

    When the empirical frequencies lie inside the model the exact rational
    solution of P_e = n_e/n is returned; otherwise a bounded quasi-Newton
    search maximizes the log-likelihood.
    """
    counts = _checked_counts(resolved, counts)
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no observations")
    exact = _exact_frequency_match(resolved, counts, total)
    if exact is not None:
        return exact
    return _numeric_ml(resolved, counts)


def _exact_frequency_match(resolved, counts, total):
    import sympy

    names = resolved.free_params
    if not names:
        return {}
    symbols = {n: sympy.Symbol(f"_v{i}") for i, n in enumerate(names)}
    eqs = [prob.to_sympy(symbols) - sympy.Rational(counts.get(o, 0), total) for o, prob in resolved.events]
    try:
        sols = sympy.solve(eqs, list(symbols.values()), dict=True)
    except NotImplementedError:
        return None
    for sol in sols:
        point = {}
        for n, s in symbols.items():
            # unconstrained by the data: any value in range is optimal
            val = sol.get(s, sympy.Rational(1, 2))
            if val.free_symbols:
                val = val.subs({t: sympy.Rational(1, 2) for t in val.free_symbols})
            if not val.is_Rational or not 0 <= val <= 1:
                break
            point[n] = Fraction(int(val.p), int(val.q))
        else:
            if all(prob.evaluate(point) == Fraction(counts.get(o, 0), total) for o, prob in resolved.events):
                return point
    return None


def _numeric_ml(resolved, counts):
    from scipy.optimize import minimize

    names = resolved.free_params
    probs = dict(resolved.events)

    def nll(x):
        vals = dict(zip(names, x))
        s = 0.0
        for o, n in counts.items():
            pv = float(probs[o].evaluate(vals))
            s -= n * math.log(max(pv, 1e-300))
        return s

    best = None
    for start in (0.5, 0.25, 0.75):
        res = minimize(nll, np.full(len(names), start), method="L-BFGS-B",
                       bounds=[(0.0, 1.0)] * len(names))
        if best is None or res.fun < best.fun:
            best = res
    return {n: float(v) for n, v in zip(names, best.x)}


def joint_entropy_objective(resolved: ResolvedSpace):
    """Callable mapping a free-parameter vector to the entropy of the visible outcomes."""
    polys = [prob for _, prob in resolved.events]
    names = resolved.free_params

    def f(x) -> float:
        vals = dict(zip(names, (float(v) for v in x)))
        return -sum(_xlogx(max(float(p.evaluate(vals)), 0.0)) for p in polys)

    return f


@dataclass(frozen=True)
class EntropyMaximum:
    point: dict[str, float]  # every base parameter, eliminated ones included
    free: tuple[float, ...]
    value: float


def maximize_joint_entropy(resolved: ResolvedSpace, grid: int | None = None) -> EntropyMaximum:
    """Numerically maximize the entropy of the visible outcomes over the resolved space."""
    from .numeric import numeric_box_maximize

    names = resolved.free_params
    fns = [prob.vectorized(names) for _, prob in resolved.events]
    subs = [poly.vectorized(names) for poly in resolved.substitution.values()]

    def objective(X):
        total = np.zeros(np.atleast_2d(X).shape[0])
        for f in fns:
            p = np.clip(f(X), 0.0, None)
            with np.errstate(divide="ignore", invalid="ignore"):
                total -= np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        return total

    def feasible(X):
        ok = np.ones(np.atleast_2d(X).shape[0], dtype=bool)
        for s in subs:
            v = s(X)
            ok &= (v >= -1e-12) & (v <= 1 + 1e-12)
        return ok

    arg, val = numeric_box_maximize(objective, [(0.0, 1.0)] * len(names), feasible, grid=grid)
    values = dict(zip(names, arg))
    point = {n: float(p.evaluate(values)) for n, p in resolved.substitution.items()}
    return EntropyMaximum(point, arg, val)
