from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import CHART, points, polys
from oracles import expr, rational
from tribody.exactmath import (
    ChartMismatch,
    MultiPoly,
    RatFunc,
    UnknownVariable,
    fmt_rat,
    poly_arith,
    poly_eval,
    poly_partial,
    ratfunc_normalize,
)
from tribody.models import RHO, TAU

r12, r13, r23 = MultiPoly.vars(RHO)
t1 = r12 + r13 + r23
t2 = r12 * r13 + r12 * r23 + r13 * r23
t3 = r12 * r13 * r23


def test_sum_of_rhos_is_tau1():
    assert poly_arith(r12 + r13, r23, "add") == t1


def test_product_with_zero():
    assert poly_arith(r12, MultiPoly.zero(RHO), "mul").is_zero()


def test_discriminant_at_equilateral_point():
    p = t1 ** 2 - 4 * t2
    assert poly_eval(p, [1, 1, 1]) == -3


def test_chart_mismatch_rejected():
    with pytest.raises(ChartMismatch):
        poly_arith(r12, MultiPoly.var(TAU, "tau1"), "add")


def test_partials_of_symmetric_functions():
    assert poly_partial(t2, "rho12") == r13 + r23
    assert poly_partial(t3, "rho12") == r13 * r23
    assert poly_partial(MultiPoly.const(RHO, 7), "rho12").is_zero()


def test_partial_unknown_variable():
    with pytest.raises(UnknownVariable):
        poly_partial(t1, "tau1")


def test_eval_examples():
    assert poly_eval(t1, [1, 1, 1]) == 3
    assert poly_eval(4 * t2 - t1 ** 2, [1, 1, 1]) == 3
    D = 6 * t1 * (4 * t2 - t1 ** 2)
    assert poly_eval(D, [1, 1, 1]) == 54


def test_eval_length_mismatch():
    with pytest.raises(ValueError):
        poly_eval(t1, [1, 2])


def test_normalize_examples():
    assert ratfunc_normalize(r12 ** 2, r12) == RatFunc.from_poly(r12)
    tau1 = MultiPoly.var(TAU, "tau1")
    f = ratfunc_normalize(2 * tau1, MultiPoly.const(TAU, 4))
    assert f.is_poly() and f.as_poly() == tau1 / 2
    disc = t1 ** 2 - 4 * t2
    assert ratfunc_normalize(disc, disc) == RatFunc.const(RHO, 1)


def test_normalize_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        ratfunc_normalize(r12, MultiPoly.zero(RHO))


def test_fmt_rat():
    assert fmt_rat(Fraction(3)) == "3"
    assert fmt_rat(Fraction(-2, 6)) == "-1/3"


def test_json_round_trip():
    p = t1 ** 2 - Fraction(3, 4) * t3
    obj = p.to_json()
    assert obj["chart"] == list(RHO)
    assert all(isinstance(t["coeff"], str) for t in obj["terms"])
    assert MultiPoly.from_json(obj) == p


def test_compose_matches_oracle():
    import sympy as sp
    a, b, c = sp.symbols(RHO)
    tau = [MultiPoly.var(TAU, n) for n in TAU]
    images = [t1, t2, t3]
    q = tau[0] ** 2 * tau[2] - 3 * tau[1]
    got = expr(q.compose(images))
    s1, s2, s3 = a + b + c, a * b + a * c + b * c, a * b * c
    assert sp.expand(got - (s1 ** 2 * s3 - 3 * s2)) == 0


@settings(max_examples=200)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p


@given(polys(), polys(), points(3))
def test_eval_is_homomorphism(p, q, pt):
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


@given(polys(), polys(), points(3))
def test_eval_against_sympy(p, q, pt):
    import sympy as sp
    sub = dict(zip(sp.symbols(CHART), [rational(x) for x in pt]))
    assert rational((p * q).eval(pt)) == expr(p * q).subs(sub)


@given(polys(), polys())
def test_leibniz(p, q):
    for v in CHART:
        assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)


@given(polys(), polys().filter(lambda p: not p.is_zero()), polys().filter(lambda p: not p.is_zero()))
def test_normalize_cancels_common_factor(a, b, c):
    f = ratfunc_normalize(a, b)
    assert ratfunc_normalize(a * c, b * c) == f
    assert ratfunc_normalize(f.num, f.den) == f


@given(polys(), polys().filter(lambda p: not p.is_zero()))
def test_ratfunc_quotient_rule(a, b):
    f = ratfunc_normalize(a, b)
    for v in CHART:
        lhs = f.partial(v)
        rhs = (a.partial(v) * b - a * b.partial(v)) / (b * b)
        assert lhs == rhs


@given(points(3))
def test_tau_relation_at_points(pt):
    # sum of squares identity tau1^2 - 2 tau2 = rho12^2 + rho13^2 + rho23^2
    lhs = (t1 ** 2 - 2 * t2).eval(pt)
    assert lhs == sum(x * x for x in pt)
