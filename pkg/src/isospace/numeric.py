"""Derivative-free maximization over a box: dense grid scan plus zoom refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyFeasibleSet

DEFAULT_GRID = 201
MAX_GRID_POINTS = 2_000_000
STENCIL = 21


@dataclass(frozen=True)
class BoxMaximum:
    argmax: tuple[float, ...]
    value: float

    def __iter__(self):
        return iter((self.argmax, self.value))


def _grid_size(dim: int, requested: int | None) -> int:
    if requested is not None:
        return requested
    n = DEFAULT_GRID
    while n ** dim > MAX_GRID_POINTS and n > 3:
        n = (n - 1) // 2 + 1
    return n


def _evaluate(objective, indicator, X: np.ndarray) -> np.ndarray:
    vals = np.asarray(objective(X), dtype=float).reshape(-1)
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    if indicator is not None:
        ok = np.asarray(indicator(X), dtype=bool).reshape(-1)
        vals = np.where(ok, vals, -np.inf)
    return vals


def numeric_box_maximize(objective: Callable[[np.ndarray], np.ndarray],
                         box: Sequence[tuple[float, float]],
                         indicator: Callable[[np.ndarray], np.ndarray] | None = None,
                         grid: int | None = None, tol: float = 1e-8,
                         starts: int = 5) -> BoxMaximum:
    """Maximize a vectorized ``objective`` over ``box``.

    ``objective`` and ``indicator`` receive an ``(n, d)`` array and return
    ``n`` values (the indicator returns booleans marking feasible points).
    The grid defaults to 201 points per axis, thinned for higher dimensions
    so the scan stays below two million points.  The best ``starts`` grid
    points are refined by repeatedly scanning a shrinking local stencil
    until its half-width drops below ``tol``.  Ties keep the earliest point
    in grid order.
    """
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    dim = len(box)
    if dim == 0:
        v = float(_evaluate(objective, indicator, np.zeros((1, 0)))[0])
        if not np.isfinite(v):
            raise EmptyFeasibleSet("the empty box is infeasible")
        return BoxMaximum((), v)
    n = _grid_size(dim, grid)
    axes = [np.linspace(lo[i], hi[i], n) for i in range(dim)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    vals = _evaluate(objective, indicator, mesh)
    if not np.isfinite(vals).any():
        raise EmptyFeasibleSet("no grid point satisfies the feasibility indicator")
    order = np.argsort(-vals, kind="stable")[:starts]
    order = [i for i in order if np.isfinite(vals[i])]
    best_x, best_v = mesh[order[0]].copy(), vals[order[0]]
    step = (hi - lo) / (n - 1)
    for idx in order:
        x, v = _refine(objective, indicator, mesh[idx].copy(), vals[idx], step.copy(), lo, hi, tol)
        if v > best_v + 1e-15:
            best_x, best_v = x, v
    return BoxMaximum(tuple(float(c) for c in best_x), float(best_v))


def _refine(objective, indicator, x, v, half, lo, hi, tol):
    dim = len(x)
    offsets_1d = np.linspace(-1.0, 1.0, STENCIL)
    full = dim <= 3
    while half.max() > tol:
        if full:
            grids = np.meshgrid(*([offsets_1d] * dim), indexing="ij")
            offsets = np.stack(grids, axis=-1).reshape(-1, dim)
        else:
            rows = [np.zeros(dim)]
            for i in range(dim):
                for o in offsets_1d:
                    if o:
                        r = np.zeros(dim)
                        r[i] = o
                        rows.append(r)
            offsets = np.array(rows)
        cand = np.clip(x + offsets * half, lo, hi)
        vals = _evaluate(objective, indicator, cand)
        i = int(np.argmax(vals))
        if vals[i] > v:
            x, v = cand[i], vals[i]
        half = half / 4
    return x, v
