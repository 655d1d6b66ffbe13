from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import positive_rationals
from oracles import apply_op, symbols
from tribody.diffop import DiffOp, commutator, extract_scalar
from tribody.exactmath import MultiPoly, RatFunc
from tribody.liealg import (
    UnknownExpression,
    UnknownGenerator,
    expand,
    expression,
    generator,
    generators,
    h3_classes,
    h3_flag_check,
    load_expressions,
    qpt_check,
    sl4_flag_check,
    verify_realization,
)
from tribody.models import RHO, TAU, TAU1, ModelParams, operator_of
from tribody.report import ERRATUM, FAIL, PASS
from tribody.spectra import PolySpace, invariance_check

D = lambda ch, *v: DiffOp.d(ch, *v)


# generators -----------------------------------------------------------------------

def test_sl4_euler_generator():
    u = MultiPoly.vars(RHO)
    want = sum((u[i] * D(RHO, i) for i in range(3)), DiffOp.zero(RHO)) - 2
    assert generator("sl4_b4", "J⁰(N)", 2) == want


def test_h3_euler_cartan():
    t = MultiPoly.vars(TAU)
    want = t[0] * D(TAU, 0) + 2 * t[1] * D(TAU, 1) + 3 * t[2] * D(TAU, 2)
    assert generator("h3", "T0", 0) == want


def test_sl2_raising():
    t = MultiPoly.var(TAU1, "tau1")
    assert generator("sl2", "J⁺(N)", 1) == t * t * D(TAU1, 0) - t


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        generator("sl2", "K+", 1)


def test_h3_generator_counts():
    first, second = h3_classes(2)
    assert len(first) == 22 and len(second) == 8
    orders = sorted(op.order() for name, op in first.items() if name != "T0")
    assert orders.count(1) == 13 and orders.count(2) == 6 and orders.count(3) == 2


@given(st.integers(0, 5))
def test_sl2_commutation_relations(N):
    # checked in sympy on a generic polynomial, independent of operator composition
    Jp, J0, Jm = (generator("sl2", n, N) for n in ("J+", "J0", "J-"))
    (x,) = symbols(TAU1)
    f = 3 * x ** 4 - x ** 2 + 5 * x - 1
    br = lambda A, B, g: apply_op(A, apply_op(B, g)) - apply_op(B, apply_op(A, g))
    assert sp.expand(br(Jm, Jp, f) - apply_op(J0, f)) == 0
    assert sp.expand(br(J0, Jp, f) - 2 * apply_op(Jp, f)) == 0
    assert sp.expand(br(J0, Jm, f) + 2 * apply_op(Jm, f)) == 0


def test_sl4_raising_is_u_times_euler():
    for N in (0, 1, 3):
        gens = generators("sl4_b4", N)
        u = MultiPoly.vars(RHO)
        for i in range(3):
            assert gens[f"J+_{i + 1}"] == u[i] * gens["J0"]


# expansions --------------------------------------------------------------------------

def test_empty_expression_is_zero():
    assert expand([], "sl4_b4", 2).is_zero()


def test_unknown_expression():
    with pytest.raises(UnknownExpression):
        expression("nothing_here")


def test_radial_operator_from_generators():
    assert verify_realization("DeltaR_sl4", ModelParams(d=3)).status == PASS
    ex = expression("DeltaR_sl4")
    assert expand(ex, N=0, values={"d": 3}) == ex.scale * operator_of("DeltaR_rho", d=3)


def test_symmetry_from_generators():
    assert verify_realization("L1_sl4").status == PASS


def test_es_operator_from_generators():
    assert verify_realization("hES_sl4", ModelParams(gamma=Fraction(1, 2), omega=1, d=3)).status == PASS


def test_integral_in_h3():
    assert verify_realization("L1sq_h3").status == PASS


def test_qes_lie_form_sign_of_A():
    # the literal sl(4) expansion agrees with the gauge-derived operator, not the printed one
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    rep = verify_realization("hQES_sl4", p)
    assert rep.status == ERRATUM
    assert verify_realization("hQES_sl4", p.with_(A=0)).status == PASS
    h = 2 * expand(expression("hQES_sl4"), N=2, values=p.to_dict())
    t1 = sum(MultiPoly.vars(RHO), MultiPoly.zero(RHO))
    assert extract_scalar(h) == RatFunc.from_poly(-12 * p.A * p.N * t1)


@pytest.mark.parametrize("eid", ["hQES_g2", "hQES_h3", "hES_h3"])
def test_literal_forms_report_both_targets(eid):
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    rep = verify_realization(eid, p)
    assert rep.status == FAIL
    keys = [next(k for k in it if k not in ("residual", "pass")) for it in rep.items]
    assert keys == ["target", "derived_target"]


@pytest.mark.parametrize("eid", ["hQES_g2_rebuilt", "hQES_h3_rebuilt", "hQES_sl2", "hES_sl2"])
def test_assembled_forms_are_marked(eid):
    assert expression(eid).derived_expression


@settings(max_examples=12)
@given(st.sampled_from(["DeltaR_sl4", "hES_sl4", "hQES_sl2", "hES_sl2", "hQES_h3_rebuilt", "hQES_g2_rebuilt"]),
       positive_rationals, positive_rationals, positive_rationals, st.integers(0, 4))
def test_expansion_identities_at_random_parameters(eid, d, gamma, omega, N):
    p = ModelParams(d=d, gamma=gamma, omega=omega, A=Fraction(1, 3), N=N)
    assert verify_realization(eid, p).status == PASS


def test_every_expression_names_a_catalog_target():
    from tribody.models import CATALOG
    for eid, ex in load_expressions().items():
        assert ex.target in CATALOG, eid
        assert ex.anchor, eid


# flags and invariance -------------------------------------------------------------------

def test_sl4_flag():
    assert sl4_flag_check(4).ok


def test_sl3_flag():
    assert sl4_flag_check(4, "sl3_b2").ok


def test_h3_flag():
    rep = h3_flag_check(6)
    assert rep.ok
    escapes = [it for it in rep.items if "escape" in str(it)]
    assert escapes


def test_second_class_escapes_with_witness():
    N = 3
    _, second = h3_classes(N)
    larger = PolySpace(TAU, (1, 2, 3), N + 1)
    own = PolySpace(TAU, (1, 2, 3), N)
    for name, op in second.items():
        assert invariance_check(op, own).ok, name
        rep = invariance_check(op, larger)
        assert not rep.ok, name


def test_quasi_projective_invariance():
    assert qpt_check(5, 3, seed=11).ok


def test_g2_generators_close_on_flag():
    for N in range(4):
        space = PolySpace(("tau1", "tau2"), (1, 2), N)
        for name, op in generators("g2", N).items():
            assert invariance_check(op, space).ok, (name, N)


def test_g2_euler_pair():
    # each of t2, t3 carries a -N/3 shift; their sum is the weighted Euler operator minus 2N/3
    N = 2
    g = generators("g2", N)
    t = MultiPoly.vars(("tau1", "tau2"))
    euler = t[0] * D(("tau1", "tau2"), 0) + 2 * t[1] * D(("tau1", "tau2"), 1)
    assert g["t2"] + g["t3"] == euler - Fraction(2 * N, 3)
    assert commutator(g["t2"], g["t3"]).is_zero()
