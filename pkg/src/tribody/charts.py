"""Coordinate changes: polynomial maps, exact pushforward, and numeric charts.

The chain rule is the ground truth here. For a map u = m(x), an operator
opX on the x-chart induces an operator on the u-chart whose coefficients are
recovered from the action of opX on products of the components of m.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .diffop import DiffOp, GaugeFactor, apply, _sub_indices
from .exactmath import ChartMismatch, MultiPoly, RatFunc, monomials
from .report import CheckReport


class PolyMap:
    """u_j = images[j](x): a polynomial coordinate change from ``source`` to ``target``."""

    def __init__(self, source: Sequence[str], target: Sequence[str], images: Sequence[MultiPoly], name: str = ""):
        self.source = tuple(source)
        self.target = tuple(target)
        self.images = tuple(images)
        self.name = name
        if len(self.images) != len(self.target):
            raise ChartMismatch(f"{len(self.images)} images for {len(self.target)} target variables")
        for im in self.images:
            if im.chart != self.source:
                raise ChartMismatch(f"image on {im.chart}, expected {self.source}")

    @classmethod
    def identity(cls, chart: Sequence[str]) -> "PolyMap":
        return cls(chart, chart, MultiPoly.vars(chart), "identity")

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(im.eval(point) for im in self.images)

    def pull(self, f) -> RatFunc:
        """f o m for f on the target chart."""
        if isinstance(f, MultiPoly):
            return RatFunc.from_poly(f.compose(self.images))
        return f.compose(self.images)

    def then(self, other: "PolyMap") -> "PolyMap":
        """The map x -> other(self(x))."""
        if other.source != self.target:
            raise ChartMismatch(f"{self.target} vs {other.source}")
        return PolyMap(self.source, other.target, [im.compose(self.images) for im in other.images],
                       f"{other.name}.{self.name}")

    def __repr__(self):
        return f"PolyMap({self.name}: {self.source} -> {self.target})"


def pushforward_coefficients(opX: DiffOp, pmap: PolyMap, order: int | None = None) -> dict:
    """Coefficients c_alpha of the induced u-operator, as functions of x.

    Uses c_alpha(m(x)) = (1/alpha!) sum_{gamma <= alpha} C(alpha, gamma) (-m)^(alpha-gamma) opX(m^gamma).
    """
    if opX.chart != pmap.source:
        raise ChartMismatch(f"operator on {opX.chart}, map from {pmap.source}")
    n = len(pmap.target)
    order = opX.order() if order is None else order
    one = MultiPoly.const(pmap.source, 1)

    def power(e):
        out = one
        for im, k in zip(pmap.images, e):
            if k:
                out = out * im ** k
        return out

    action = {}
    out = {}
    for alpha in monomials(n, max(order, 0)):
        if not any(alpha):
            c = apply(opX, one)
        else:
            c = RatFunc.zero(pmap.source)
            for gamma in _sub_indices(alpha):
                if gamma not in action:
                    action[gamma] = apply(opX, power(gamma))
                if action[gamma].is_zero():
                    continue
                k = 1
                for a, g in zip(alpha, gamma):
                    k *= comb(a, g)
                rest = tuple(a - g for a, g in zip(alpha, gamma))
                sign = -1 if sum(rest) % 2 else 1
                c = c + action[gamma] * RatFunc.from_poly(power(rest) * (sign * k))
            fac = 1
            for a in alpha:
                fac *= factorial(a)
            c = c * Fraction(1, fac)
        if not c.is_zero():
            out[alpha] = c
    return out


def express_in(f: RatFunc, pmap: PolyMap, extra: int = 4) -> MultiPoly | None:
    """Find a polynomial p on the target chart with p o m = f, or None.

    Undetermined coefficients over target monomials graded by the x-degree of
    each component of the map.
    """
    num, den = f.num, f.den
    if num.is_zero():
        return MultiPoly.zero(pmap.target)
    weights = [max(im.degree(), 1) for im in pmap.images]
    base = max(num.degree() - den.degree(), 0)
    for bound in range(base, base + extra + 1):
        monos = monomials(len(pmap.target), bound, weights)
        cols = []
        for e in monos:
            img = MultiPoly.const(pmap.source, 1)
            for im, k in zip(pmap.images, e):
                if k:
                    img = img * im ** k
            cols.append((img * den).terms)
        rows = sorted(set().union(num.terms, *[c.keys() for c in cols]))
        index = {r: i for i, r in enumerate(rows)}
        M = [[QQ(0)] * (len(cols) + 1) for _ in rows]
        for j, col in enumerate(cols):
            for r, v in col.items():
                M[index[r]][j] = QQ(v.numerator, v.denominator)
        for r, v in num.terms.items():
            M[index[r]][-1] = QQ(v.numerator, v.denominator)
        dm = DomainMatrix(M, (len(rows), len(cols) + 1), QQ)
        rref, pivots = dm.rref()
        if len(cols) in pivots:
            continue
        sol = {}
        dense = rref.to_Matrix()
        for i, p in enumerate(pivots):
            val = dense[i, len(cols)]
            if val != 0:
                sol[monos[p]] = Fraction(int(val.p), int(val.q))
        return MultiPoly.from_terms(pmap.target, sol)
    return None


def derive_pushforward(opX: DiffOp, pmap: PolyMap) -> DiffOp:
    """The operator on the target chart induced by ``opX``; polynomial coefficients only."""
    terms = {}
    for alpha, c in pushforward_coefficients(opX, pmap).items():
        p = express_in(c, pmap)
        if p is None:
            raise ValueError(f"coefficient of {alpha} is not polynomial in {pmap.target}")
        terms[alpha] = p
    return DiffOp(pmap.target, terms)


def chart_check_exact(opX: DiffOp, pmap: PolyMap, opU: DiffOp, degree: int,
                      lift: PolyMap | None = None, coords: int | None = None,
                      check_id: str = "chart", params: dict | None = None) -> CheckReport:
    """opX(F o m) == (opU F) o m for every target monomial F up to ``degree``.

    ``lift`` expresses every variable of opU's chart in x; it defaults to the
    map itself and is needed when opU carries dependent variables beyond the
    first ``coords`` coordinates.
    """
    if not isinstance(pmap, PolyMap):
        raise TypeError(f"{getattr(pmap, 'name', pmap)} is a numeric chart; use chart_check_numeric")
    if opX.chart != pmap.source:
        raise ChartMismatch(f"operator on {opX.chart}, map from {pmap.source}")
    lift = lift or pmap
    if opU.chart != lift.target:
        raise ChartMismatch(f"operator on {opU.chart}, lift to {lift.target}")
    coords = len(pmap.target) if coords is None else coords
    if tuple(opU.chart[:coords]) != pmap.target[:coords]:
        raise ChartMismatch("coordinate names of map and target operator differ")
    rep = CheckReport(check_id, dict(params or {}, degree=degree))
    for e in monomials(coords, degree):
        full = tuple(e) + (0,) * (len(opU.chart) - coords)
        F = MultiPoly.from_terms(opU.chart, {full: 1})
        Fx = MultiPoly.from_terms(pmap.target, {tuple(e) + (0,) * (len(pmap.target) - coords): 1})
        lhs = apply(opX, pmap.pull(Fx))
        rhs = lift.pull(apply(opU, F))
        res = lhs - rhs
        label = "*".join(f"{v}^{k}" for v, k in zip(opU.chart, full) if k) or "1"
        rep.add("basis", label, "0" if res.is_zero() else str(res), res.is_zero())
    return rep


def operator_diff(A: DiffOp, B: DiffOp) -> dict:
    """Per-term difference, keyed by readable derivative labels."""
    out = {}
    for alpha, c in (A - B).terms.items():
        label = "*".join(f"d{v}" if k == 1 else f"d{v}^{k}" for v, k in zip(A.chart, alpha) if k) or "1"
        out[label] = str(c)
    return out


# numeric charts ------------------------------------------------------------

class NumericChart:
    """Point-evaluable map x -> u with a region predicate (no exact form)."""

    def __init__(self, source: Sequence[str], target: Sequence[str], fn: Callable, region: Callable,
                 name: str = ""):
        self.source = tuple(source)
        self.target = tuple(target)
        self.fn = fn
        self.region = region
        self.name = name

    def __call__(self, point, ctx=mpmath.mp):
        if not self.region(point):
            raise ValueError(f"point {tuple(point)} outside the region of chart {self.name}")
        return self.fn([_to_mpf(p, ctx) for p in point], ctx)


def _to_mpf(x, ctx):
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


FD_STEP = mpmath.mpf("1e-4")
_STENCIL1 = ((-2, 1), (-1, -8), (1, 8), (2, -1))      # /12h
_STENCIL2 = ((-2, -1), (-1, 16), (0, -30), (1, 16), (2, -1))  # /12h^2


def fd_apply(op: DiffOp, F: Callable, point, ctx, h=FD_STEP):
    """Apply an operator of order <= 2 to a callable with 4th-order central differences."""
    h = ctx.mpf(h)
    if h <= 0 or h * h < ctx.eps * 10 ** 4:
        raise ValueError(f"finite-difference step {h} underflows the working precision")
    n = len(point)
    x = [_to_mpf(p, ctx) for p in point]
    total = ctx.mpf(0)

    def at(shifts):
        y = list(x)
        for i, s in shifts:
            y[i] += s * h
        return F(y)

    for alpha, c in op.terms.items():
        cv = c.eval_float(x, ctx)
        k = sum(alpha)
        idx = [i for i, a in enumerate(alpha) for _ in range(a)]
        if k == 0:
            val = F(x)
        elif k == 1:
            i = idx[0]
            val = sum(w * at([(i, s)]) for s, w in _STENCIL1) / (12 * h)
        elif k == 2 and idx[0] == idx[1]:
            i = idx[0]
            val = sum(w * at([(i, s)]) for s, w in _STENCIL2) / (12 * h * h)
        elif k == 2:
            i, j = idx
            val = sum(wi * wj * at([(i, si), (j, sj)])
                      for si, wi in _STENCIL1 for sj, wj in _STENCIL1) / (144 * h * h)
        else:
            raise ValueError("finite differences implemented up to order 2")
        total += cv * val
    return total


def chart_check_numeric(opX: DiffOp, chart: NumericChart, opU: DiffOp, points, tol: float = 1e-6,
                        tests: Sequence[Callable] | None = None, check_id: str = "chart_numeric",
                        params: dict | None = None, dps: int = 40) -> CheckReport:
    """Compare opX(F o chart) with (opU F) o chart at points, by finite differences.

    The u-side is applied exactly when opU has rational coefficients and F is
    given as a MultiPoly; callables are differenced on both sides.
    """
    if opX.chart != chart.source or opU.chart != chart.target:
        raise ChartMismatch("operator charts do not match the numeric chart")
    rep = CheckReport(check_id, dict(params or {}, tol=tol))
    with mpmath.workdps(dps):
        ctx = mpmath.mp
        if tests is None:
            tests = [MultiPoly.from_terms(chart.target, {e: 1})
                     for e in monomials(len(chart.target), 2) if any(e)]
        for pt in points:
            if not chart.region(pt):
                raise ValueError(f"point {tuple(pt)} outside the region of chart {chart.name}")
            u = chart(pt, ctx)
            worst = ctx.mpf(0)
            for F in tests:
                if isinstance(F, MultiPoly):
                    lhs = fd_apply(opX, lambda y, F=F: F.eval_float(chart(y, ctx), ctx), pt, ctx)
                    rhs = apply(opU, F).eval_float(u, ctx)
                else:
                    lhs = fd_apply(opX, lambda y, F=F: F(chart(y, ctx), ctx), pt, ctx)
                    rhs = fd_apply(opU, lambda v, F=F: F(v, ctx), u, ctx)
                dev = abs(lhs - rhs) / max(ctx.mpf(1), abs(rhs))
                worst = max(worst, dev)
            label = [str(p) for p in pt]
            rep.add("point", label, float(worst), float(worst) < tol)
    return rep


def pull_gauge(gamma: GaugeFactor, pmap: PolyMap) -> GaugeFactor:
    """The gauge factor gamma o m on the source chart of ``pmap``."""
    if gamma.chart != pmap.target:
        raise ChartMismatch(f"gauge on {gamma.chart}, map to {pmap.target}")
    bases = [(f.compose(pmap.images), a) for f, a in gamma.bases]
    return GaugeFactor(pmap.source, bases, gamma.exp_arg.compose(pmap.images))


def restrict_to(op: DiffOp, chart: Sequence[str]) -> DiffOp:
    """The action of ``op`` on functions of a subset of its variables.

    Terms differentiating a dropped variable vanish on such functions; the
    remaining coefficients must not depend on the dropped variables.
    """
    chart = tuple(chart)
    keep = [op.chart.index(v) for v in chart]
    dropped = [i for i in range(len(op.chart)) if i not in keep]
    images = []
    for i, v in enumerate(op.chart):
        images.append(MultiPoly.var(chart, v) if v in chart else MultiPoly.zero(chart))
    terms = {}
    for alpha, c in op.terms.items():
        if any(alpha[i] for i in dropped):
            continue
        for part in (c.num, c.den):
            if any(e[i] for e in part.terms for i in dropped):
                raise ValueError(f"coefficient {c} depends on a dropped variable")
        terms[tuple(alpha[i] for i in keep)] = c.compose(images)
    return DiffOp(chart, terms)
