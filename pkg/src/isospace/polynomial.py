"""Exact polynomials with rational coefficients.

Expected payoffs over behavioural parameters are multilinear, and payoffs
over binary moves can always be reduced to multilinear form because
x**2 == x when x is 0 or 1.  The class below keeps general exponents so
that categorical moves (offers 1..M, amounts 0..3) stay exact; call
:meth:`Polynomial.idempotent` to apply the binary reduction.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[str, int], ...]
Number = Union[int, Fraction, float]


def _as_coef(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12) if c == c else Fraction(0)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class Polynomial:
    """Sparse polynomial: a map from monomials to Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = _as_coef(c)
            if c:
                key = tuple(sorted((v, e) for v, e in mono if e))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    @classmethod
    def coerce(cls, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        return cls.const(x)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Parse an arithmetic expression such as ``'3-2*x-y+4*x*y'``."""
        import sympy

        expr = sympy.sympify(text)
        return cls.from_sympy(expr)

    @classmethod
    def from_sympy(cls, expr) -> "Polynomial":
        import sympy

        expr = sympy.expand(expr)
        symbols = sorted(expr.free_symbols, key=lambda s: s.name)
        if not symbols:
            return cls.const(Fraction(str(sympy.Rational(expr))))
        poly = sympy.Poly(expr, *symbols)
        terms = {}
        for exps, coef in poly.terms():
            if not coef.is_Rational:
                raise ValueError(f"non-rational coefficient {coef}")
            mono = tuple((s.name, int(e)) for s, e in zip(symbols, exps) if e)
            terms[mono] = Fraction(int(coef.p), int(coef.q))
        return cls(terms)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for mono in self._terms for v, _ in mono)

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def is_multilinear(self) -> bool:
        return all(e == 1 for mono in self._terms for _, e in mono)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mul_monomials(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and substitution -----------------------------------------
    def partial(self, var: str) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            exps = dict(mono)
            e = exps.get(var, 0)
            if not e:
                continue
            if e == 1:
                del exps[var]
            else:
                exps[var] = e - 1
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, Fraction(0)) + c * e
        return Polynomial(out)

    def gradient(self, variables: Iterable[str]) -> list["Polynomial"]:
        return [self.partial(v) for v in variables]

    def substitute(self, mapping: Mapping[str, "Polynomial | Number"]) -> "Polynomial":
        """Replace variables by polynomials or numbers; unmapped variables stay."""
        if not mapping:
            return self
        subs = {k: Polynomial.coerce(v) for k, v in mapping.items()}
        cache: dict[tuple[str, int], Polynomial] = {}
        out = Polynomial()
        for mono, c in self._terms.items():
            term = Polynomial.const(c)
            rest = []
            for v, e in mono:
                if v in subs:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = subs[v] ** e
                    term = term * cache[key]
                else:
                    rest.append((v, e))
            if rest:
                term = term * Polynomial({tuple(rest): 1})
            out = out + term
        return out

    def idempotent(self, variables: Iterable[str] | None = None) -> "Polynomial":
        """Apply v**k -> v for the given (binary) variables, or for all."""
        keep = None if variables is None else set(variables)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            m = tuple((v, 1 if (keep is None or v in keep) else e) for v, e in mono)
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(out)

    def evaluate(self, point: Mapping[str, Number]):
        """Evaluate at a point; exact when every value is int or Fraction."""
        total: Number = Fraction(0)
        for mono, c in self._terms.items():
            term: Number = c
            for v, e in mono:
                try:
                    x = point[v]
                except KeyError:
                    raise KeyError(f"no value supplied for {v!r}") from None
                term = term * (x**e if e != 1 else x)
            total = total + term
        if isinstance(total, float):
            return total
        return Fraction(total)

    def __call__(self, **point):
        return self.evaluate(point)

    def compile(self, none_as_zero: bool = False):
        """Return ``f(mapping)`` evaluating this polynomial without dict churn.

        With ``none_as_zero`` a ``None`` value (an inactive move) counts as 0.
        """
        consts: list[Fraction] = []
        parts = []
        for mono, c in self._terms.items():
            if c.denominator == 1:
                coef = str(c.numerator)
            else:
                consts.append(c)
                coef = f"C[{len(consts) - 1}]"
            factors = []
            for v, e in mono:
                ref = f"(a[{v!r}] or 0)" if none_as_zero else f"a[{v!r}]"
                factors.append(ref if e == 1 else f"{ref}**{e}")
            parts.append("*".join([f"({coef})"] + factors))
        body = " + ".join(parts) if parts else "0"
        return eval(f"lambda a: {body}", {"C": consts})

    def vectorized(self, names: Iterable[str]):
        """Return ``f(X)`` evaluating at the rows of a float array whose columns follow ``names``."""
        import numpy as np

        index = {n: i for i, n in enumerate(names)}
        missing = self.variables - set(index)
        if missing:
            raise KeyError(f"no column for {sorted(missing)}")
        terms = [(float(c), [(index[v], e) for v, e in mono]) for mono, c in self._terms.items()]

        def f(X):
            X = np.atleast_2d(np.asarray(X, dtype=float))
            out = np.zeros(X.shape[0])
            for c, mono in terms:
                t = np.full(X.shape[0], c)
                for i, e in mono:
                    t = t * (X[:, i] if e == 1 else X[:, i] ** e)
                out += t
            return out

        return f

    def to_sympy(self, symbols: Mapping[str, object] | None = None):
        import sympy

        symbols = dict(symbols or {})
        expr = sympy.Integer(0)
        for mono, c in self._terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for v, e in mono:
                if v not in symbols:
                    symbols[v] = sympy.Symbol(v)
                term *= symbols[v] ** e
            expr += term
        return expr

    # display ------------------------------------------------------------
    def _sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (sum(e for _, e in t[0]), t[0]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self._sorted_terms()):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            mag = abs(c)
            coef = "" if (mag == 1 and factors) else str(mag)
            body = "*".join(([coef] if coef else []) + factors)
            sign = "-" if c < 0 else "+"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"
