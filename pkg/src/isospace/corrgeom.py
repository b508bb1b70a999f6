"""Correlation formulas for behavioural and mixed binary spaces.

Behavioural coordinates: p = P(x=1), q = P(y=1|x=0), r = P(y=1|x=1).
Mixed coordinates: a1 = P(x=1); b1, b2, b3 are the weights of the plans
"copy x", "negate x" and "always 1" (the "always 0" weight is eliminated).
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import DegenerateMarginal


def rho_behavioural(p, q, r) -> float:
    py = q + p * (r - q)
    if not 0 < p < 1 or not 0 < py < 1:
        raise DegenerateMarginal(f"p={p}, P(y=1)={py}")
    return math.sqrt(p * (1 - p)) * (r - q) / math.sqrt(py * (1 - py))


def rho_mixed(a1, b1, b2, b3) -> float:
    if min(b1, b2, b3) < 0 or b1 + b2 + b3 > 1 + 1e-12:
        raise ValueError("plan weights are not a sub-probability vector")
    ey = b2 + b3 + a1 * (b1 - b2)
    if not 0 < a1 < 1 or not 0 < ey < 1:
        raise DegenerateMarginal(f"a1={a1}, <y>={ey}")
    return math.sqrt(a1 * (1 - a1)) * (b1 - b2) / math.sqrt(ey * (1 - ey))


def _r_branch(p, q, rho, sign: int):
    rho2 = rho * rho
    disc = rho2 + 4 * q * (1 - q) * (1 - p) / p
    num = rho2 - 2 * q * (1 - p) * (rho2 - 1) + sign * rho * np.sqrt(disc)
    return num / (2 * (1 + p * (rho2 - 1)))


def r_plus(p, q, rho):
    """Conditional r putting the behavioural correlation at ``rho`` (the solver's branch).

    Works elementwise on numpy arrays.  Out-of-range results are legal; test
    them with :func:`in_range`.
    """
    return _r_branch(p, q, rho, +1)


def r_minus(p, q, rho):
    return _r_branch(p, q, rho, -1)


def in_range(r) -> bool:
    return bool(0 <= r <= 1)


def permissible_q_bound(p, rho) -> float | None:
    """Edge of the q interval on which r_plus stays in [0,1].

    For positive ``rho`` this is an upper bound on q, for negative ``rho`` a
    lower bound.  At ``rho == 0`` every q is permissible and ``None`` is
    returned (with a warning).
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly inside (0,1)")
    if not -1 <= rho <= 1:
        raise ValueError("rho outside [-1,1]")
    if rho == 0:
        warnings.warn("rho=0: the whole (p,q) square is permissible", stacklevel=2)
        return None
    rho2 = rho * rho
    if rho > 0:
        if rho == 1:
            return 0.0
        return p / (p + rho2 / (1 - rho2))
    if rho == -1:
        return 1.0
    return 1 / (1 + p * (1 - rho2) / rho2)


def hotelling(u, v, rho):
    """Mix independent (u, v) into (x, y) with correlation ``rho``."""
    if not -1 <= rho <= 1:
        raise ValueError("rho outside [-1,1]")
    return u, rho * u + math.sqrt(1 - rho * rho) * v
