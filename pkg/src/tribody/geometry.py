"""Metrics read off second-order operators, and their curvature.

All work is exact over RatFunc. Square roots of the determinant never appear:
the divergence form of the Laplace-Beltrami operator only needs the
logarithmic derivative of D, which is rational.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .diffop import DiffOp
from .exactmath import ChartMismatch, MultiPoly, RatFunc, as_ratfunc
from .report import CheckReport


class SingularMetric(ValueError):
    pass


def _mat(rows, chart) -> list[list[RatFunc]]:
    return [[as_ratfunc(x, chart) for x in row] for row in rows]


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(m: list[list[RatFunc]]) -> RatFunc:
    """Leibniz expansion; fine for the 2x2 and 3x3 metrics used here."""
    n = len(m)
    chart = m[0][0].chart
    total = RatFunc.zero(chart)
    for p in permutations(range(n)):
        term = RatFunc.const(chart, _perm_sign(p))
        for i in range(n):
            term = term * m[i][p[i]]
            if term.is_zero():
                break
        total = total + term
    return total


def inverse(m: list[list[RatFunc]]) -> list[list[RatFunc]]:
    n = len(m)
    D = det(m)
    if D.is_zero():
        raise SingularMetric("determinant vanishes identically")
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = det(minor) if minor else RatFunc.const(D.chart, 1)
            inv[i][j] = cof / D if (i + j) % 2 == 0 else -cof / D
    return inv


class MetricTensor:
    """Contravariant metric g^{mu nu} together with its inverse and determinant."""

    def __init__(self, chart, contravariant):
        self.chart = tuple(chart)
        self.contravariant = _mat(contravariant, self.chart)
        n = len(self.chart)
        if len(self.contravariant) != n or any(len(r) != n for r in self.contravariant):
            raise ValueError("metric must be square with one row per chart variable")
        for i in range(n):
            for j in range(i):
                if self.contravariant[i][j] != self.contravariant[j][i]:
                    raise ValueError("metric must be symmetric")
        self.det = det(self.contravariant)
        self.singular = self.det.is_zero()
        self.covariant = None if self.singular else inverse(self.contravariant)

    @property
    def dim(self) -> int:
        return len(self.chart)

    def require_inverse(self):
        if self.singular:
            raise SingularMetric(f"metric on {self.chart} is degenerate")
        return self.covariant

    def trace(self) -> RatFunc:
        return sum((self.contravariant[i][i] for i in range(self.dim)), RatFunc.zero(self.chart))

    def to_json(self) -> dict:
        return {"chart": list(self.chart),
                "contravariant": [[str(x) for x in row] for row in self.contravariant],
                "det": str(self.det)}


def metric_from(op: DiffOp) -> MetricTensor:
    """Diagonal from d_mu^2 coefficients, off-diagonal as half the mixed ones."""
    if op.order() > 2:
        raise ValueError("metric_from needs an operator of order at most 2")
    n = len(op.chart)
    g = [[RatFunc.zero(op.chart) for _ in range(n)] for _ in range(n)]
    for alpha, c in op.terms.items():
        if sum(alpha) != 2:
            continue
        idx = [i for i, a in enumerate(alpha) for _ in range(a)]
        i, j = idx
        if i == j:
            g[i][i] = c
        else:
            g[i][j] = g[j][i] = c / 2
    return MetricTensor(op.chart, g)


def det_factor_check(metric: MetricTensor, factored, check_id="det_factor", params=None) -> CheckReport:
    rep = CheckReport(check_id, dict(params or {}))
    f = as_ratfunc(factored, metric.chart)
    if f.chart != metric.chart:
        raise ChartMismatch(f"{f.chart} vs {metric.chart}")
    res = metric.det - f
    rep.add("identity", "det g - factorization", "0" if res.is_zero() else str(res), res.is_zero())
    return rep


def laplace_beltrami(metric: MetricTensor) -> DiffOp:
    """D^(1/2) d_mu D^(-1/2) g^{mu nu} d_nu with D = det g^{mu nu}, written rationally."""
    chart, n, g = metric.chart, metric.dim, metric.contravariant
    if metric.singular:
        raise SingularMetric("Laplace-Beltrami operator needs a nondegenerate metric")
    dlog = [metric.det.partial_index(m) / metric.det for m in range(n)]
    terms = {}

    def add(alpha, c):
        terms[alpha] = terms[alpha] + c if alpha in terms else c

    for mu in range(n):
        for nu in range(n):
            a = [0] * n
            a[mu] += 1
            a[nu] += 1
            add(tuple(a), g[mu][nu])
    for nu in range(n):
        c = RatFunc.zero(chart)
        for mu in range(n):
            c = c + g[mu][nu].partial_index(mu) - g[mu][nu] * dlog[mu] / 2
        a = [0] * n
        a[nu] = 1
        add(tuple(a), c)
    return DiffOp(chart, terms)


# curvature -----------------------------------------------------------------

def christoffel(metric: MetricTensor):
    """Gamma[c][a][b] = 1/2 g^{cd} (d_a g_bd + d_b g_ad - d_d g_ab)."""
    gl = metric.require_inverse()
    gu = metric.contravariant
    n = metric.dim
    dg = [[[gl[a][b].partial_index(k) for k in range(n)] for b in range(n)] for a in range(n)]
    first = [[[(dg[b][d][a] + dg[a][d][b] - dg[a][b][d]) / 2 for d in range(n)] for b in range(n)]
             for a in range(n)]
    G = [[[sum((gu[c][d] * first[a][b][d] for d in range(n)), RatFunc.zero(metric.chart))
           for b in range(n)] for a in range(n)] for c in range(n)]
    return G


def riemann(metric: MetricTensor, G=None):
    """R[a][b][c][d] = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb."""
    n = metric.dim
    G = G or christoffel(metric)
    z = RatFunc.zero(metric.chart)
    R = [[[[z] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(c + 1, n):
                    v = G[a][d][b].partial_index(c) - G[a][c][b].partial_index(d)
                    for e in range(n):
                        v = v + G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b]
                    R[a][b][c][d] = v
                    R[a][b][d][c] = -v
    return R


def ricci_tensor(metric: MetricTensor, R=None):
    n = metric.dim
    R = R or riemann(metric)
    return [[sum((R[a][b][a][d] for a in range(n)), RatFunc.zero(metric.chart)) for d in range(n)]
            for b in range(n)]


def ricci_scalar(metric: MetricTensor, Ric=None) -> RatFunc:
    n = metric.dim
    Ric = Ric or ricci_tensor(metric)
    gu = metric.contravariant
    return sum((gu[b][d] * Ric[b][d] for b in range(n) for d in range(n)), RatFunc.zero(metric.chart))


def flatness_check(metric: MetricTensor, check_id="flatness", params=None) -> CheckReport:
    """Pass iff every Riemann component vanishes identically."""
    rep = CheckReport(check_id, dict(params or {}))
    R = riemann(metric)
    n = metric.dim
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(c + 1, n):
                    v = R[a][b][c][d]
                    label = f"R^{metric.chart[a]}_{metric.chart[b]}{metric.chart[c]}{metric.chart[d]}"
                    rep.add("component", label, "0" if v.is_zero() else str(v), v.is_zero())
    return rep


def cotton_at(metric: MetricTensor, point) -> tuple[list, Fraction]:
    """Cotton tensor C_abc = nabla_c R_ab - nabla_b R_ac + (nabla_b R g_ac - nabla_c R g_ab)/4 at a point.

    Returns the 3x3x3 component array and its maximal absolute entry.
    """
    if metric.dim != 3:
        raise ValueError("the Cotton tensor is defined here for three-dimensional metrics only")
    point = [Fraction(x) for x in point]
    if metric.det.eval(point) == 0:
        raise SingularMetric(f"metric degenerates at {point}")
    n = 3
    G = christoffel(metric)
    Ric = ricci_tensor(metric, riemann(metric, G))
    Rs = ricci_scalar(metric, Ric)
    gl = metric.covariant
    ev = lambda f: f.eval(point)
    Gp = [[[ev(G[c][a][b]) for b in range(n)] for a in range(n)] for c in range(n)]
    Rp = [[ev(Ric[a][b]) for b in range(n)] for a in range(n)]
    dR = [[[ev(Ric[a][b].partial_index(c)) for c in range(n)] for b in range(n)] for a in range(n)]

    def nabla(a, b, c):
        # (nabla_c Ric)_ab
        v = dR[a][b][c]
        for e in range(n):
            v -= Gp[e][c][a] * Rp[e][b] + Gp[e][c][b] * Rp[a][e]
        return v

    dRs = [ev(Rs.partial_index(c)) for c in range(n)]
    glp = [[ev(gl[a][b]) for b in range(n)] for a in range(n)]
    C = [[[nabla(a, b, c) - nabla(a, c, b) + (dRs[b] * glp[a][c] - dRs[c] * glp[a][b]) / 4
           for c in range(n)] for b in range(n)] for a in range(n)]
    worst = max(abs(x) for plane in C for row in plane for x in row)
    return C, worst


def curvature_report(metric_id: str, metric: MetricTensor, points=()) -> dict:
    flat = flatness_check(metric, metric_id).ok
    out = {"metric_id": metric_id, "flat": flat, "ricci_scalar": str(ricci_scalar(metric)),
           "cotton_max_abs_at": []}
    if metric.dim == 3:
        for pt in points:
            _, worst = cotton_at(metric, pt)
            out["cotton_max_abs_at"].append({"point": [str(Fraction(x)) for x in pt], "value": str(worst)})
    return out
