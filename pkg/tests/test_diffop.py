from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHART, polys, rationals
from oracles import apply_op, expr, is_zero, rational, symbols
from tribody.charts import PolyMap, chart_check_exact, derive_pushforward, pull_gauge
from tribody.diffop import (
    DiffOp,
    GaugeFactor,
    PhaseFunction,
    apply,
    commutator,
    compose,
    extract_scalar,
    gauge_conjugate,
    poisson_bracket,
)
from tribody.exactmath import ChartMismatch, MultiPoly, RatFunc
from tribody.models import RHO, TAU, ModelParams, chart_of, gauge_of, ground_energy_of, operator_of, potential_of

r12, r13, r23 = MultiPoly.vars(RHO)
t1 = r12 + r13 + r23
t2 = r12 * r13 + r12 * r23 + r13 * r23


@st.composite
def first_order_ops(draw, chart=CHART):
    n = len(chart)
    terms = {}
    for i in range(n):
        alpha = tuple(int(j == i) for j in range(n))
        terms[alpha] = draw(polys(chart, max_terms=3, max_deg=2))
    terms[(0,) * n] = draw(polys(chart, max_terms=2, max_deg=2))
    return DiffOp(chart, terms)


@st.composite
def second_order_ops(draw, chart=CHART):
    op = draw(first_order_ops(chart))
    n = len(chart)
    i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
    return op + draw(polys(chart, max_terms=2, max_deg=2)) * DiffOp.d(chart, i, j)


# apply ---------------------------------------------------------------------

def test_radial_operator_on_constants_and_rho12():
    p = ModelParams(d=Fraction(7, 3))
    D = operator_of("DeltaR_rho", p)
    assert apply(D, 1).is_zero()
    assert apply(D, r12) == RatFunc.const(RHO, 2 * p.d)


def test_L1_annihilates_tau2():
    assert apply(operator_of("L1_rho"), t2).is_zero()


def test_apply_chart_mismatch():
    with pytest.raises(ChartMismatch):
        apply(operator_of("L1_rho"), MultiPoly.var(TAU, "tau1"))


@given(second_order_ops(), polys())
def test_apply_matches_sympy(op, f):
    assert is_zero(expr(apply(op, f)) - apply_op(op, expr(f)))


# compose / commutator --------------------------------------------------------

def test_leibniz_example():
    x = MultiPoly.var(("x",), "x")
    dx = DiffOp.d(("x",), "x")
    got = compose(dx, DiffOp(("x",), {(0,): x}))
    assert got == DiffOp(("x",), {(1,): x, (0,): 1})


def test_identity_is_neutral():
    A = operator_of("DeltaR_rho", ModelParams(d=3))
    assert compose(DiffOp.identity(RHO), A) == A
    assert compose(A, DiffOp.identity(RHO)) == A


def test_L1_squared_pushes_forward_to_tau3_operator():
    # L1 tau1 = L1 tau2 = 0, so only tau3 derivatives survive
    L1 = operator_of("L1_rho")
    pushed = derive_pushforward(compose(L1, L1), chart_of("tau_of_rho"))
    assert pushed == -1 * operator_of("L1sq_tau")


@pytest.mark.parametrize("d", [Fraction(3), Fraction(5, 2), Fraction(-7, 3)])
def test_radial_operator_commutes_with_L1(d):
    assert commutator(operator_of("DeltaR_rho", ModelParams(d=d)), operator_of("L1_rho")).is_zero()


def test_commutator_radial_L1_oracle():
    # independent route: apply both orderings in sympy to a generic cubic
    D = operator_of("DeltaR_rho", ModelParams(d=Fraction(5, 3)))
    L1 = operator_of("L1_rho")
    x = symbols(RHO)
    f = x[0] ** 3 * x[1] + 2 * x[1] ** 2 * x[2] - x[0] * x[2] ** 3 + x[1] ** 4
    lhs = apply_op(D, apply_op(L1, f)) - apply_op(L1, apply_op(D, f))
    assert sp.expand(lhs) == 0


def test_unequal_mass_commutator():
    m = (Fraction(1), Fraction(2), Fraction(3))
    p = ModelParams(d=Fraction(5, 2), masses=m)
    assert commutator(operator_of("DeltaR_m", p), operator_of("L1_m", masses=m)).is_zero()


@given(second_order_ops(), second_order_ops(), polys())
def test_compose_matches_sympy(A, B, f):
    assert is_zero(expr(apply(compose(A, B), f)) - apply_op(A, apply_op(B, expr(f))))


@given(second_order_ops(), second_order_ops())
def test_commutator_antisymmetric(A, B):
    assert commutator(A, A).is_zero()
    assert commutator(A, B) == -1 * commutator(B, A)


@settings(max_examples=40)
@given(first_order_ops(), first_order_ops(), first_order_ops())
def test_jacobi_identity(A, B, C):
    total = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B))
    assert total.is_zero()


# gauge ------------------------------------------------------------------------

def test_trivial_gauge():
    A = operator_of("DeltaR_rho", ModelParams(d=3))
    assert gauge_conjugate(A, GaugeFactor(RHO)) == A


def test_zero_gauge_base_rejected():
    with pytest.raises(ValueError):
        GaugeFactor(RHO, [(MultiPoly.zero(RHO), Fraction(1, 2))])


@pytest.mark.parametrize("d", [Fraction(3), Fraction(2), Fraction(7, 5)])
def test_determinant_gauge_gives_effective_potential(d):
    p = ModelParams(d=d)
    K = gauge_conjugate(operator_of("DeltaR_rho", p), gauge_of("Gamma_gauge", p))
    assert extract_scalar(K) == -1 * potential_of("Veff", p)


def test_ground_state_scalar_part():
    p = ModelParams(omega=1, gamma=Fraction(1, 2), A=Fraction(2, 5), N=1)
    assert ground_energy_of("E0_qes", p) == 18
    taumap = chart_of("tau_of_rho")
    K = gauge_conjugate(operator_of("DeltaLB_rho", p), pull_gauge(gauge_of("Psi0_qes", p), taumap))
    V = potential_of("V0_qes", p).compose(list(taumap.images))
    assert extract_scalar(K) == V - 18


def test_gauge_conjugate_matches_sympy():
    # (1/Gamma) op (Gamma h) with the actual fractional powers in sympy
    d = Fraction(5, 2)
    p = ModelParams(d=d)
    op = operator_of("DeltaR_rho", p)
    K = gauge_conjugate(op, gauge_of("Gamma_gauge", p))
    x = symbols(RHO)
    s1 = x[0] + x[1] + x[2]
    s2 = x[0] * x[1] + x[0] * x[2] + x[1] * x[2]
    gamma = s1 ** sp.Rational(-1, 4) * (4 * s2 - s1 ** 2) ** ((2 - rational(d)) / 4)
    for h in (sp.Integer(1), x[0], x[0] * x[2] ** 2 + x[1]):
        lhs = apply_op(op, gamma * h) / gamma
        rhs = apply_op(K, h)
        assert sp.simplify(lhs - rhs) == 0


@settings(max_examples=30)
@given(second_order_ops(), second_order_ops(), st.lists(rationals, min_size=2, max_size=2))
def test_gauge_conjugation_is_homomorphism(A, B, ex):
    x, y, z = MultiPoly.vars(CHART)
    g = GaugeFactor(CHART, [(x * x + y * y + 1, ex[0])], ex[1] * x * z)
    lhs = gauge_conjugate(compose(A, B), g)
    rhs = compose(gauge_conjugate(A, g), gauge_conjugate(B, g))
    assert lhs == rhs


# scalar part ---------------------------------------------------------------------

def test_extract_scalar_examples():
    assert extract_scalar(operator_of("DeltaR_rho", ModelParams(d=3))).is_zero()
    x = MultiPoly.var(("x",), "x")
    assert extract_scalar(DiffOp(("x",), {(1,): x}) + 5) == RatFunc.const(("x",), 5)


def test_qes_operator_scalar_term():
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    assert extract_scalar(operator_of("hQES_rho", p)) == RatFunc.from_poly(12 * p.A * p.N * t1)


# charts -----------------------------------------------------------------------------

def test_identity_chart_passes():
    op = operator_of("DeltaR_rho", ModelParams(d=Fraction(4, 3)))
    rep = chart_check_exact(op, PolyMap.identity(RHO), op, 4)
    assert rep.ok and len(rep.items) > 0


def test_chart_check_reports_witness():
    op = operator_of("DeltaR_rho", ModelParams(d=3))
    wrong = operator_of("DeltaR_tau", ModelParams(d=2))
    rep = chart_check_exact(op, chart_of("tau_of_rho"), wrong, 2)
    assert not rep.ok
    assert rep.failures()[0]["residual"] != "0"


def test_d1_xi_chart():
    rep = chart_check_exact(operator_of("DeltaLB_d1"), chart_of("xi_of_r"), operator_of("DeltaLB_xi"), 6)
    assert rep.ok


@settings(max_examples=20)
@given(second_order_ops(("x", "y")))
def test_composed_charts(op):
    # checking u <- x then v <- u equals checking the composed map v <- x
    x, y = MultiPoly.vars(("x", "y"))
    first = PolyMap(("x", "y"), ("u1", "u2"), [x + y, x - 2 * y])
    u1, u2 = MultiPoly.vars(("u1", "u2"))
    second = PolyMap(("u1", "u2"), ("v1", "v2"), [u1, u2 + u1 * u1])
    mid = derive_pushforward(op, first)
    end = derive_pushforward(mid, second)
    assert end == derive_pushforward(op, first.then(second))


# Poisson brackets ------------------------------------------------------------------

def test_canonical_bracket():
    q, p = MultiPoly.vars(("q1", "p1"))
    out = poisson_bracket(PhaseFunction(("q1",), ("p1",), q * p), PhaseFunction(("q1",), ("p1",), p))
    assert out.value == p


def test_kinetic_energy_poisson_commutes_with_L1():
    from tribody.models import object_of
    T, L = object_of("Classical_T"), object_of("Classical_L1")
    assert poisson_bracket(T, L).value.is_zero()
    assert poisson_bracket(T, T).value.is_zero()


PH = ("q1", "q2", "p1", "p2")


@given(polys(PH), polys(PH), polys(PH))
def test_poisson_antisymmetry_and_leibniz(a, b, c):
    F = lambda v: PhaseFunction(("q1", "q2"), ("p1", "p2"), v)
    pb = lambda u, v: poisson_bracket(F(u), F(v)).value
    assert pb(a, b) == -1 * pb(b, a)
    assert pb(a, b * c) == pb(a, b) * c + b * pb(a, c)


def test_momenta_must_differ():
    with pytest.raises(ValueError):
        PhaseFunction(("q",), ("q",), MultiPoly.zero(("q", "p")))
