"""Linear differential operators with rational-function coefficients.

An operator is stored in normal form: a map from a derivative multi-index
``alpha`` to the coefficient multiplying ``d^alpha`` (coefficients on the left,
derivatives on the right). Mixed second derivatives appear once, so a metric
entry g^{mu nu} with mu != nu shows up as the coefficient 2 g^{mu nu}.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import comb
from typing import Iterable, Mapping, Sequence

from .exactmath import (
    ChartMismatch,
    MultiPoly,
    RatFunc,
    UnknownVariable,
    _SCALARS,
    as_ratfunc,
    poly_ring,
    rat,
)

Index = tuple[int, ...]


def _add_index(a: Index, b: Index) -> Index:
    return tuple(x + y for x, y in zip(a, b))


def _sub_index(a: Index, b: Index) -> Index:
    return tuple(x - y for x, y in zip(a, b))


def _sub_indices(alpha: Index) -> Iterable[Index]:
    """All gamma <= alpha componentwise."""
    def rec(i, prefix):
        if i == len(alpha):
            yield tuple(prefix)
            return
        for g in range(alpha[i] + 1):
            prefix.append(g)
            yield from rec(i + 1, prefix)
            prefix.pop()

    yield from rec(0, [])


def _multi_binom(alpha: Index, gamma: Index) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= comb(a, g)
    return out


def _derive(f: RatFunc, alpha: Index, cache: dict) -> RatFunc:
    """d^alpha f with memoization over intermediate multi-indices."""
    if alpha in cache:
        return cache[alpha]
    i = next(k for k, a in enumerate(alpha) if a)
    prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
    out = _derive(f, prev, cache).partial_index(i)
    cache[alpha] = out
    return out


class DiffOp:
    """sum_alpha c_alpha(x) d^alpha on a fixed chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Sequence[str], terms: Mapping[Index, object] | None = None):
        self.chart = tuple(chart)
        poly_ring(self.chart)
        n = len(self.chart)
        clean: dict[Index, RatFunc] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha} for chart {self.chart}")
            c = as_ratfunc(c, self.chart)
            if c.chart != self.chart:
                raise ChartMismatch(f"coefficient on {c.chart}, operator on {self.chart}")
            if alpha in clean:
                c = clean[alpha] + c
            if c.is_zero():
                clean.pop(alpha, None)
            else:
                clean[alpha] = c
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, chart: Sequence[str]) -> "DiffOp":
        return cls(chart)

    @classmethod
    def identity(cls, chart: Sequence[str]) -> "DiffOp":
        return cls(chart, {(0,) * len(chart): 1})

    @classmethod
    def d(cls, chart: Sequence[str], *names: str | int) -> "DiffOp":
        """The pure derivative d_{names[0]} d_{names[1]} ...; no names gives the identity."""
        chart = tuple(chart)
        alpha = [0] * len(chart)
        for nm in names:
            i = nm if isinstance(nm, int) else _index_of(chart, nm)
            alpha[i] += 1
        return cls(chart, {tuple(alpha): 1})

    # structure ----------------------------------------------------------
    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def coeff(self, alpha: Index) -> RatFunc:
        return self.terms.get(tuple(alpha), RatFunc.zero(self.chart))

    def coeff_of(self, *names: str) -> RatFunc:
        alpha = [0] * len(self.chart)
        for nm in names:
            alpha[_index_of(self.chart, nm)] += 1
        return self.coeff(tuple(alpha))

    def part(self, order: int) -> "DiffOp":
        return DiffOp(self.chart, {a: c for a, c in self.terms.items() if sum(a) == order})

    def is_zero(self) -> bool:
        return not self.terms

    def has_poly_coeffs(self) -> bool:
        return all(c.is_poly() for c in self.terms.values())

    def _check(self, other: "DiffOp"):
        if not isinstance(other, DiffOp):
            raise TypeError(f"expected DiffOp, got {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart} vs {other.chart}")

    # linear structure ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp(self.chart, {(0,) * len(self.chart): other})
        self._check(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms[a] + c if a in terms else c
        return DiffOp(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.chart, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp(self.chart, {(0,) * len(self.chart): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """op * f is the operator composed with multiplication by f."""
        if isinstance(other, DiffOp):
            return compose(self, other)
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return compose(self, DiffOp(self.chart, {(0,) * len(self.chart): other}))

    def __rmul__(self, other):
        """f * op multiplies every coefficient by f."""
        return self.scale(other)

    def __matmul__(self, other):
        return compose(self, other)

    def scale(self, f) -> "DiffOp":
        f = as_ratfunc(f, self.chart)
        if f.chart != self.chart:
            raise ChartMismatch(f"{f.chart} vs {self.chart}")
        return DiffOp(self.chart, {a: f * c for a, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms)))

    # application --------------------------------------------------------
    def __call__(self, f):
        return apply(self, f)

    # presentation -------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (-sum(a), tuple(-x for x in a))):
            d = "*".join(
                f"D[{v}]" if k == 1 else f"D[{v}]^{k}" for v, k in zip(self.chart, alpha) if k
            )
            c = str(self.terms[alpha])
            parts.append(f"({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp[{','.join(self.chart)}]({self})"

    def to_json(self) -> dict:
        return {
            "chart": list(self.chart),
            "terms": [
                {"alpha": list(a), "coeff": c.to_json()}
                for a, c in sorted(self.terms.items())
            ],
        }

    # convenience --------------------------------------------------------
    def substitute_chart(self, chart: Sequence[str]) -> "DiffOp":
        """Reinterpret the operator on a renamed chart of the same size."""
        chart = tuple(chart)
        if len(chart) != len(self.chart):
            raise ChartMismatch("rename needs a chart of the same size")
        return DiffOp(
            chart,
            {a: RatFunc(c.num.rename(chart).p, c.den.rename(chart).p)
             for a, c in self.terms.items()},
        )


def _index_of(chart: tuple[str, ...], name: str) -> int:
    try:
        return chart.index(name)
    except ValueError:
        raise UnknownVariable(name) from None


def apply(op: DiffOp, f) -> RatFunc:
    """Apply ``op`` to a polynomial or rational function on the same chart."""
    f = as_ratfunc(f, op.chart)
    if f.chart != op.chart:
        raise ChartMismatch(f"function on {f.chart}, operator on {op.chart}")
    cache = {(0,) * len(op.chart): f}
    out = RatFunc.zero(op.chart)
    for alpha, c in op.terms.items():
        df = _derive(f, alpha, cache)
        if not df.is_zero():
            out = out + c * df
    return out


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """Normal form of A o B via the Leibniz rule."""
    A._check(B)
    terms: dict[Index, RatFunc] = {}
    for alpha, a in A.terms.items():
        for beta, b in B.terms.items():
            cache = {(0,) * len(A.chart): b}
            for gamma in _sub_indices(alpha):
                db = _derive(b, gamma, cache)
                if db.is_zero():
                    continue
                k = _multi_binom(alpha, gamma)
                idx = _add_index(_sub_index(alpha, gamma), beta)
                term = a * db * k
                terms[idx] = terms[idx] + term if idx in terms else term
    return DiffOp(A.chart, terms)


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B) - compose(B, A)


def extract_scalar(op: DiffOp) -> RatFunc:
    """Zeroth-order coefficient, i.e. op applied to the constant 1."""
    return op.coeff((0,) * len(op.chart))


class GaugeFactor:
    """Gamma = prod_i f_i^{a_i} * exp(g) with polynomial f_i, g and rational a_i.

    Only the logarithmic gradient enters conjugation, so the (possibly
    irrational) powers never have to be formed.
    """

    def __init__(self, chart: Sequence[str], bases: Sequence[tuple[MultiPoly, object]] = (),
                 exp_arg: MultiPoly | None = None):
        self.chart = tuple(chart)
        clean = []
        for f, a in bases:
            if not isinstance(f, MultiPoly):
                f = MultiPoly.const(self.chart, f)
            if f.chart != self.chart:
                raise ChartMismatch(f"gauge base on {f.chart}, expected {self.chart}")
            if f.is_zero():
                raise ValueError("gauge base polynomial must be nonzero")
            if isinstance(a, float):
                raise TypeError("gauge exponents must be rational")
            a = rat(a)
            if a:
                clean.append((f, a))
        self.bases = clean
        self.exp_arg = exp_arg if exp_arg is not None else MultiPoly.zero(self.chart)
        if self.exp_arg.chart != self.chart:
            raise ChartMismatch("exponent argument on a different chart")

    def log_gradient(self) -> list[RatFunc]:
        out = []
        for i in range(len(self.chart)):
            L = RatFunc.from_poly(self.exp_arg.partial_index(i))
            for f, a in self.bases:
                df = f.partial_index(i)
                if not df.is_zero():
                    L = L + RatFunc.from_poly(df * a) / f
            out.append(L)
        return out

    def eval_float(self, point, ctx):
        """Numeric value; bases enter through their absolute values."""
        val = ctx.exp(self.exp_arg.eval_float(point, ctx))
        for f, a in self.bases:
            val *= abs(f.eval_float(point, ctx)) ** (ctx.mpf(a.numerator) / a.denominator)
        return val

    def __repr__(self):
        bs = ", ".join(f"({f})^({a})" for f, a in self.bases)
        return f"GaugeFactor[{bs}; exp({self.exp_arg})]"


def gauge_conjugate(op: DiffOp, gamma: GaugeFactor) -> DiffOp:
    """Gamma^{-1} o op o Gamma, by the substitution d_mu -> d_mu + L_mu."""
    if gamma.chart != op.chart:
        raise ChartMismatch(f"gauge on {gamma.chart}, operator on {op.chart}")
    n = len(op.chart)
    L = gamma.log_gradient()
    shifted = [DiffOp.d(op.chart, i) + DiffOp(op.chart, {(0,) * n: L[i]}) for i in range(n)]
    products: dict[Index, DiffOp] = {(0,) * n: DiffOp.identity(op.chart)}

    def product(alpha: Index) -> DiffOp:
        if alpha in products:
            return products[alpha]
        i = next(k for k, a in enumerate(alpha) if a)
        prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        out = compose(shifted[i], product(prev))
        products[alpha] = out
        return out

    result = DiffOp.zero(op.chart)
    for alpha, c in op.terms.items():
        result = result + product(alpha).scale(c)
    return result


class PhaseFunction:
    """Polynomial function on phase space (positions plus conjugate momenta)."""

    def __init__(self, positions: Sequence[str], momenta: Sequence[str], value: MultiPoly):
        self.positions = tuple(positions)
        self.momenta = tuple(momenta)
        if len(self.positions) != len(self.momenta):
            raise ValueError("one momentum per position variable")
        if set(self.positions) & set(self.momenta):
            raise ValueError("momentum names must differ from position names")
        if value.chart != self.chart:
            raise ChartMismatch(f"value on {value.chart}, expected {self.chart}")
        self.value = value

    @property
    def chart(self) -> tuple[str, ...]:
        return self.positions + self.momenta

    def __eq__(self, other):
        return isinstance(other, PhaseFunction) and self.chart == other.chart and self.value == other.value

    def __repr__(self):
        return f"PhaseFunction({self.value})"


def poisson_bracket(H: PhaseFunction, K: PhaseFunction) -> PhaseFunction:
    if H.chart != K.chart or H.positions != K.positions:
        raise ChartMismatch(f"{H.chart} vs {K.chart}")
    n = len(H.positions)
    out = MultiPoly.zero(H.chart)
    for mu in range(n):
        q, p = mu, n + mu
        out = out + H.value.partial_index(q) * K.value.partial_index(p) \
            - H.value.partial_index(p) * K.value.partial_index(q)
    return PhaseFunction(H.positions, H.momenta, out)


def principal_symbol(op: DiffOp, momenta: Sequence[str] | None = None,
                     order: int | None = None) -> PhaseFunction:
    """Replace d_mu by the momentum P_mu in the terms of the given order (default: top order).

    With the normal-form convention a mixed term 2 g^{mu nu} d_mu d_nu yields
    2 g^{mu nu} P_mu P_nu, i.e. g^{mu nu} P_mu P_nu summed over ordered pairs.
    """
    if not op.has_poly_coeffs():
        raise ValueError("phase-space functions need polynomial coefficients")
    momenta = tuple(momenta) if momenta is not None else tuple(f"P_{v}" for v in op.chart)
    chart = op.chart + momenta
    n = len(op.chart)
    order = op.order() if order is None else order
    mom = MultiPoly.vars(chart)[n:]
    out = MultiPoly.zero(chart)
    for alpha, c in op.terms.items():
        if sum(alpha) != order:
            continue
        coeff = MultiPoly.from_terms(chart, {e + (0,) * n: v for e, v in c.as_poly().terms.items()})
        mono = reduce(lambda acc, ip: acc * mom[ip[0]] ** ip[1], enumerate(alpha), MultiPoly.const(chart, 1))
        out = out + coeff * mono
    return PhaseFunction(op.chart, momenta, out)

