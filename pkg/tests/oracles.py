"""Reference computations in plain sympy expressions.

These deliberately avoid the package's own polynomial and operator algebra:
objects are converted to sympy once, then everything (derivatives, products,
inverses, curvature) happens in sympy's expression layer.
"""
from __future__ import annotations

from fractions import Fraction

import sympy as sp


def symbols(chart):
    return [sp.Symbol(name) for name in chart]


def rational(q) -> sp.Rational:
    q = Fraction(q)
    return sp.Rational(q.numerator, q.denominator)


def poly_expr(p, syms=None):
    syms = syms or symbols(p.chart)
    out = sp.Integer(0)
    for exp, c in p.terms.items():
        term = rational(c)
        for s, e in zip(syms, exp):
            term *= s ** e
        out += term
    return out


def expr(f, syms=None):
    """MultiPoly or RatFunc to a sympy expression."""
    if hasattr(f, "num"):
        syms = syms or symbols(f.chart)
        return poly_expr(f.num, syms) / poly_expr(f.den, syms)
    return poly_expr(f, syms)


def apply_op(op, f, syms=None):
    """Apply a DiffOp to a sympy expression term by term."""
    syms = syms or symbols(op.chart)
    out = sp.Integer(0)
    for alpha, c in op.terms.items():
        g = f
        for s, k in zip(syms, alpha):
            if k:
                g = sp.diff(g, s, k)
        out += expr(c, syms) * g
    return out


def is_zero(e) -> bool:
    return sp.simplify(sp.together(sp.expand(e))) == 0


def metric_matrix(op, syms=None):
    """g^{mu nu} read from second-order coefficients; mixed terms carry a factor 2."""
    syms = syms or symbols(op.chart)
    n = len(syms)
    g = sp.zeros(n, n)
    for alpha, c in op.terms.items():
        if sum(alpha) != 2:
            continue
        idx = [i for i, k in enumerate(alpha) for _ in range(k)]
        i, j = idx
        if i == j:
            g[i, i] = expr(c, syms)
        else:
            g[i, j] = g[j, i] = expr(c, syms) / 2
    return g


def christoffel(g, x):
    """Gamma^c_{ab} of a covariant metric g."""
    gu = sp.simplify(g.inv())
    n = len(x)
    return [[[sp.simplify(sum(gu[c, d] * (sp.diff(g[b, d], x[a]) + sp.diff(g[a, d], x[b]) - sp.diff(g[a, b], x[d]))
                              for d in range(n)) / 2) for b in range(n)] for a in range(n)] for c in range(n)]


def ricci_scalar(g, x):
    """Scalar curvature of the covariant metric g, via Christoffels."""
    n = len(x)
    G = christoffel(g, x)
    gu = sp.simplify(g.inv())

    def riem(a, b, c, d):
        return (sp.diff(G[a][d][b], x[c]) - sp.diff(G[a][c][b], x[d])
                + sum(G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b] for e in range(n)))

    ric = sp.Matrix(n, n, lambda b, d: sp.simplify(sum(riem(a, b, a, d) for a in range(n))))
    return sp.factor(sp.simplify(sum(gu[b, d] * ric[b, d] for b in range(n) for d in range(n))))


def eigenvalues(rows) -> list:
    """Exact eigenvalue multiset of a small rational matrix, sorted."""
    m = sp.Matrix([[rational(x) for x in row] for row in rows])
    out = []
    for lam, mult in m.eigenvals().items():
        out += [lam] * mult
    return sorted(out, key=lambda z: complex(z).real)


def cotton_max_abs(g, x, point):
    """max |C_abc| of the covariant 3-metric g at a point, C_abc = grad_c Ric_ab - grad_b Ric_ac + (dR g)/4 terms."""
    n = len(x)
    G = christoffel(g, x)
    gu = sp.simplify(g.inv())

    def riem(a, b, c, d):
        return (sp.diff(G[a][d][b], x[c]) - sp.diff(G[a][c][b], x[d])
                + sum(G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b] for e in range(n)))

    ric = sp.Matrix(n, n, lambda b, d: sp.together(sum(riem(a, b, a, d) for a in range(n))))
    R = sp.together(sum(gu[b, d] * ric[b, d] for b in range(n) for d in range(n)))
    sub = dict(zip(x, [rational(v) for v in point]))

    def nabla(a, b, c):
        return sp.diff(ric[a, b], x[c]) - sum(G[e][c][a] * ric[e, b] + G[e][c][b] * ric[a, e] for e in range(n))

    vals = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                C = nabla(a, b, c) - nabla(a, c, b) + (sp.diff(R, x[b]) * g[a, c] - sp.diff(R, x[c]) * g[a, b]) / 4
                vals.append(abs(sp.nsimplify(C.subs(sub))))
    return max(vals)
