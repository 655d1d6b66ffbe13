"""Exact scalars, sparse multivariate polynomials and reduced rational functions.

Polynomials live in a ring determined by their chart (the ordered tuple of
variable names). Coefficients are arbitrary-precision rationals. The monomial
order is graded lexicographic over the declared variable order.

The sparse representation is sympy's ``PolyElement`` (a dict from exponent
tuples to gmpy2 rationals); this module only adds the chart discipline,
canonical rational functions and (de)serialization on top.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

Rational = Fraction
_SCALARS = (int, Fraction, str)

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class ChartMismatch(ValueError):
    """Two operands live on different variable charts."""


class UnknownVariable(KeyError):
    pass


class _Defer(Exception):
    """Operand type is not ours; let Python try the reflected operation."""


def _deferring(method):
    def wrapper(self, other):
        try:
            return method(self, other)
        except _Defer:
            return NotImplemented

    wrapper.__name__ = method.__name__
    return wrapper


def rat(x) -> Fraction:
    """Coerce ints, Fractions, gmpy2/sympy rationals and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise ValueError(f"not a rational literal: {x!r}")
        num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; use 'p/q'")
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None:
        num = num() if callable(num) else num
        den = den() if callable(den) else den
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def fmt_rat(q) -> str:
    q = rat(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _qq(x):
    q = rat(x)
    return QQ(q.numerator, q.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


@lru_cache(maxsize=None)
def poly_ring(chart: tuple[str, ...]) -> PolyRing:
    if not chart:
        raise ValueError("a chart needs at least one variable")
    if len(set(chart)) != len(chart):
        raise ValueError(f"duplicate variable names in chart {chart}")
    return PolyRing(chart, QQ, grlex)


def _chart_of_ring(R: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in R.symbols)


def _compose(p: PolyElement, images: Sequence[PolyElement], target: PolyRing) -> PolyElement:
    """Substitute variable i of ``p`` by ``images[i]`` (elements of ``target``)."""
    out = target.zero
    cache: dict[tuple[int, int], PolyElement] = {}
    for exps, c in p.items():
        term = target.ground_new(c)
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                pw = cache.get(key)
                if pw is None:
                    pw = images[i] ** e
                    cache[key] = pw
                term = term * pw
        out += term
    return out


class MultiPoly:
    """Sparse polynomial with rational coefficients over a named chart."""

    __slots__ = ("p",)

    def __init__(self, p: PolyElement):
        self.p = p

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, chart: Sequence[str]) -> "MultiPoly":
        return cls(poly_ring(tuple(chart)).zero)

    @classmethod
    def const(cls, chart: Sequence[str], c) -> "MultiPoly":
        return cls(poly_ring(tuple(chart)).ground_new(_qq(c)))

    @classmethod
    def var(cls, chart: Sequence[str], name: str) -> "MultiPoly":
        chart = tuple(chart)
        if name not in chart:
            raise UnknownVariable(name)
        return cls(poly_ring(chart).gens[chart.index(name)])

    @classmethod
    def vars(cls, chart: Sequence[str]) -> tuple["MultiPoly", ...]:
        return tuple(cls(g) for g in poly_ring(tuple(chart)).gens)

    @classmethod
    def from_terms(cls, chart: Sequence[str], terms: Mapping[Sequence[int], object]) -> "MultiPoly":
        R = poly_ring(tuple(chart))
        n = len(chart)
        d = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for chart {tuple(chart)}")
            q = _qq(c)
            if q:
                d[exp] = d.get(exp, QQ.zero) + q
        return cls(R.from_dict({k: v for k, v in d.items() if v}))

    # structure ----------------------------------------------------------
    @property
    def ring(self) -> PolyRing:
        return self.p.ring

    @property
    def chart(self) -> tuple[str, ...]:
        return _chart_of_ring(self.p.ring)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: _frac(c) for e, c in self.p.items()}

    def is_zero(self) -> bool:
        return not self.p

    def is_constant(self) -> bool:
        return self.p.is_ground

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.p:
            return -1
        return max(sum(e) for e in self.p.keys())

    def weighted_degree(self, weights: Sequence[int]) -> int:
        if not self.p:
            return -1
        return max(sum(w * e for w, e in zip(weights, exps)) for exps in self.p.keys())

    def leading_coeff(self) -> Fraction:
        return _frac(self.p.LC)

    def constant_value(self) -> Fraction:
        if not self.p.is_ground:
            raise ValueError("polynomial is not constant")
        return _frac(self.p.coeff(1)) if self.p else Fraction(0)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> PolyElement:
        if isinstance(other, MultiPoly):
            if other.p.ring is not self.p.ring:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return other.p
        if not isinstance(other, _SCALARS):
            raise _Defer
        return self.p.ring.ground_new(_qq(other))

    @_deferring
    def __add__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc.from_poly(self) + other
        return MultiPoly(self.p + self._coerce(other))

    __radd__ = __add__

    @_deferring
    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc.from_poly(self) - other
        return MultiPoly(self.p - self._coerce(other))

    @_deferring
    def __rsub__(self, other):
        return MultiPoly(self._coerce(other) - self.p)

    @_deferring
    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc.from_poly(self) * other
        return MultiPoly(self.p * self._coerce(other))

    __rmul__ = __mul__

    @_deferring
    def __truediv__(self, other):
        if isinstance(other, (MultiPoly, RatFunc)):
            return RatFunc.from_poly(self) / other
        q = _qq(other)
        if not q:
            raise ZeroDivisionError("division of a polynomial by zero")
        return MultiPoly(self.p.quo_ground(q))

    @_deferring
    def __rtruediv__(self, other):
        return RatFunc(self._coerce(other), self.p.ring.one) / self

    def __neg__(self):
        return MultiPoly(-self.p)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        return MultiPoly(self.p**n)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.p.ring is other.p.ring and self.p == other.p
        if isinstance(other, RatFunc):
            return other == self
        if isinstance(other, (int, Fraction)):
            return self.p == self.p.ring.ground_new(_qq(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self.p.items())))

    # calculus / evaluation ----------------------------------------------
    def partial(self, var: str) -> "MultiPoly":
        chart = self.chart
        if var not in chart:
            raise UnknownVariable(var)
        return MultiPoly(self.p.diff(self.p.ring.gens[chart.index(var)]))

    def partial_index(self, i: int, k: int = 1) -> "MultiPoly":
        p = self.p
        g = p.ring.gens[i]
        for _ in range(k):
            if not p:
                break
            p = p.diff(g)
        return MultiPoly(p)

    def eval(self, point: Sequence) -> Fraction:
        chart = self.chart
        if len(point) != len(chart):
            raise ValueError(f"point of length {len(point)} for chart of size {len(chart)}")
        vals = [rat(v) for v in point]
        total = Fraction(0)
        for exps, c in self.p.items():
            t = _frac(c)
            for v, e in zip(vals, exps):
                if e:
                    t *= v**e
            total += t
        return total

    def eval_float(self, point: Sequence, ctx=None):
        """Evaluate at (mp)float arguments; ``ctx`` is an mpmath context or None."""
        total = 0 if ctx is None else ctx.mpf(0)
        for exps, c in self.p.items():
            t = (float(_frac(c)) if ctx is None else ctx.mpf(int(c.numerator)) / int(c.denominator))
            for v, e in zip(point, exps):
                if e:
                    t = t * v**e
            total = total + t
        return total

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute each chart variable by the corresponding image polynomial."""
        if len(images) != len(self.chart):
            raise ValueError("one image polynomial per variable is required")
        target = images[0].ring
        for im in images:
            if im.ring is not target:
                raise ChartMismatch("image polynomials must share a chart")
        return MultiPoly(_compose(self.p, [im.p for im in images], target))

    def rename(self, chart: Sequence[str]) -> "MultiPoly":
        """Same coefficients, reinterpreted on another chart of equal size."""
        R = poly_ring(tuple(chart))
        if R.ngens != self.p.ring.ngens:
            raise ChartMismatch("rename needs a chart of the same size")
        return MultiPoly(R.from_dict(dict(self.p.items())))

    # presentation -------------------------------------------------------
    def __str__(self):
        return str(self.p.as_expr()) if self.p else "0"

    def __repr__(self):
        return f"MultiPoly({self}; {','.join(self.chart)})"

    def to_json(self) -> dict:
        return {
            "chart": list(self.chart),
            "terms": [{"exp": list(e), "coeff": fmt_rat(_frac(c))} for e, c in self.p.terms()],
        }

    @classmethod
    def from_json(cls, obj) -> "MultiPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_terms(obj["chart"], {tuple(t["exp"]): rat(t["coeff"]) for t in obj["terms"]})


def poly_arith(p: MultiPoly, q: MultiPoly, kind: str) -> MultiPoly:
    if p.ring is not q.ring:
        raise ChartMismatch(f"{p.chart} vs {q.chart}")
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown polynomial operation {kind!r}")


def poly_partial(p: MultiPoly, var: str) -> MultiPoly:
    return p.partial(var)


def poly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    return p.eval(point)


class RatFunc:
    """Reduced quotient of two polynomials on one chart.

    Canonical form: gcd(num, den) = 1 and den is monic under graded-lex order,
    so structurally equal objects represent equal functions.
    """

    __slots__ = ("n", "d")

    def __init__(self, n: PolyElement, d: PolyElement, _reduced: bool = False):
        if n.ring is not d.ring:
            raise ChartMismatch("numerator and denominator on different charts")
        if not d:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            n, d = _reduce(n, d)
        self.n = n
        self.d = d

    @classmethod
    def from_poly(cls, p: MultiPoly | PolyElement) -> "RatFunc":
        p = p.p if isinstance(p, MultiPoly) else p
        return cls(p, p.ring.one, _reduced=True)

    @classmethod
    def const(cls, chart: Sequence[str], c) -> "RatFunc":
        R = poly_ring(tuple(chart))
        return cls(R.ground_new(_qq(c)), R.one, _reduced=True)

    @classmethod
    def zero(cls, chart: Sequence[str]) -> "RatFunc":
        R = poly_ring(tuple(chart))
        return cls(R.zero, R.one, _reduced=True)

    @property
    def num(self) -> MultiPoly:
        return MultiPoly(self.n)

    @property
    def den(self) -> MultiPoly:
        return MultiPoly(self.d)

    @property
    def ring(self) -> PolyRing:
        return self.n.ring

    @property
    def chart(self) -> tuple[str, ...]:
        return _chart_of_ring(self.n.ring)

    def is_zero(self) -> bool:
        return not self.n

    def is_poly(self) -> bool:
        return self.d == self.d.ring.one

    def as_poly(self) -> MultiPoly:
        if not self.is_poly():
            raise ValueError("rational function has a nontrivial denominator")
        return MultiPoly(self.n)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.n.ring is not self.n.ring:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return other
        if isinstance(other, MultiPoly):
            if other.p.ring is not self.n.ring:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return RatFunc.from_poly(other)
        if not isinstance(other, _SCALARS):
            raise _Defer
        R = self.n.ring
        return RatFunc(R.ground_new(_qq(other)), R.one, _reduced=True)

    @_deferring
    def __add__(self, other):
        o = self._coerce(other)
        if not o.n:
            return self
        if not self.n:
            return o
        if self.d == o.d:
            return RatFunc(self.n + o.n, self.d)
        if self.d.is_ground and o.d.is_ground:
            return RatFunc(self.n * o.d + o.n * self.d, self.d * o.d)
        g, a, b = self.d.cofactors(o.d)
        # self.n/(g a) + o.n/(g b) = (self.n b + o.n a) / (g a b)
        return RatFunc(self.n * b + o.n * a, g * a * b)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.n, self.d, _reduced=True)

    @_deferring
    def __sub__(self, other):
        return self + (-self._coerce(other))

    @_deferring
    def __rsub__(self, other):
        return self._coerce(other) - self

    @_deferring
    def __mul__(self, other):
        o = self._coerce(other)
        if not self.n or not o.n:
            return RatFunc(self.n.ring.zero, self.n.ring.one, _reduced=True)
        if self.d.is_ground and o.d.is_ground:
            return RatFunc(self.n * o.n, self.d * o.d, _reduced=True)._monic()
        # cross-cancel; inputs are reduced so the product is too
        n1, d2 = self.n, o.d
        if not d2.is_ground and not n1.is_ground:
            _, n1, d2 = n1.cofactors(d2)
        n2, d1 = o.n, self.d
        if not d1.is_ground and not n2.is_ground:
            _, n2, d1 = n2.cofactors(d1)
        return RatFunc(n1 * n2, d1 * d2, _reduced=True)._monic()

    __rmul__ = __mul__

    def _monic(self) -> "RatFunc":
        lc = self.d.LC
        if lc == QQ.one:
            return self
        return RatFunc(self.n.quo_ground(lc), self.d.quo_ground(lc), _reduced=True)

    def inv(self) -> "RatFunc":
        if not self.n:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.d, self.n, _reduced=True)._monic()

    @_deferring
    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    @_deferring
    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("integer powers only")
        if k < 0:
            return self.inv() ** (-k)
        return RatFunc(self.n**k, self.d**k, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, (RatFunc, MultiPoly, int, Fraction)):
            try:
                o = self._coerce(other)
            except ChartMismatch:
                return False
            return self.n == o.n and self.d == o.d
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self.n.items()), frozenset(self.d.items())))

    def partial_index(self, i: int) -> "RatFunc":
        g = self.n.ring.gens[i]
        if self.d.is_ground:
            return RatFunc(self.n.diff(g).quo_ground(self.d.LC), self.n.ring.one, _reduced=True)
        dn = self.n.diff(g)
        dd = self.d.diff(g)
        if not dd:
            return RatFunc(dn, self.d)
        # (n/d)' = (n' d - n d') / d^2, reduced
        return RatFunc(dn * self.d - self.n * dd, self.d * self.d)

    def partial(self, var: str) -> "RatFunc":
        chart = self.chart
        if var not in chart:
            raise UnknownVariable(var)
        return self.partial_index(chart.index(var))

    def eval(self, point: Sequence) -> Fraction:
        den = MultiPoly(self.d).eval(point)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at {list(point)}")
        return MultiPoly(self.n).eval(point) / den

    def eval_float(self, point: Sequence, ctx=None):
        return MultiPoly(self.n).eval_float(point, ctx) / MultiPoly(self.d).eval_float(point, ctx)

    def compose(self, images: Sequence[MultiPoly]) -> "RatFunc":
        target = images[0].ring
        num = _compose(self.n, [im.p for im in images], target)
        den = _compose(self.d, [im.p for im in images], target)
        return RatFunc(num, den)

    def __str__(self):
        if self.is_poly():
            return str(MultiPoly(self.n))
        return f"({MultiPoly(self.n)})/({MultiPoly(self.d)})"

    def __repr__(self):
        return f"RatFunc({self}; {','.join(self.chart)})"

    def to_json(self) -> dict:
        return {"num": MultiPoly(self.n).to_json(), "den": MultiPoly(self.d).to_json()}


def _reduce(n: PolyElement, d: PolyElement) -> tuple[PolyElement, PolyElement]:
    if not n:
        return n.ring.zero, n.ring.one
    if not d.is_ground and not n.is_ground:
        _, n, d = n.cofactors(d)
    lc = d.LC
    if lc != QQ.one:
        n = n.quo_ground(lc)
        d = d.quo_ground(lc)
    return n, d


def ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    if num.ring is not den.ring:
        raise ChartMismatch(f"{num.chart} vs {den.chart}")
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    return RatFunc(num.p, den.p)


def as_ratfunc(x, chart: Sequence[str]) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc.from_poly(x)
    return RatFunc.const(chart, x)


def monomials(nvars: int, max_degree: int, weights: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """Exponent vectors with weighted degree <= max_degree, ordered by weight then lex."""
    w = tuple(weights) if weights is not None else (1,) * nvars
    out: list[tuple[int, ...]] = []

    def rec(i, remaining, prefix):
        if i == nvars:
            out.append(tuple(prefix))
            return
        for e in range(remaining // w[i] + 1):
            prefix.append(e)
            rec(i + 1, remaining - e * w[i], prefix)
            prefix.pop()

    rec(0, max_degree, [])
    out.sort(key=lambda e: (sum(a * b for a, b in zip(w, e)), tuple(-x for x in e)))
    return out
