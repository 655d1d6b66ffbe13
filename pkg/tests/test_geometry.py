from fractions import Fraction

import pytest
import sympy as sp

from oracles import cotton_max_abs, expr, metric_matrix, ricci_scalar as ricci_oracle, symbols
from tribody.diffop import DiffOp
from tribody.exactmath import MultiPoly, RatFunc
from tribody.geometry import (
    MetricTensor,
    SingularMetric,
    cotton_at,
    curvature_report,
    det_factor_check,
    flatness_check,
    laplace_beltrami,
    metric_from,
    ricci_scalar,
)
from tribody.models import PT, RHO, chart_of, determinant_of, metric_of, object_of, operator_of

r12, r13, r23 = MultiPoly.vars(RHO)
t1 = r12 + r13 + r23
t2 = r12 * r13 + r12 * r23 + r13 * r23


def rho_metric():
    return metric_from(operator_of("DeltaR_rho", d=3))


# extraction ----------------------------------------------------------------------

def test_rho_metric_matches_table():
    g = rho_metric()
    table = metric_of("Metric_rho")
    for i in range(3):
        for j in range(3):
            assert g.contravariant[i][j] == RatFunc.from_poly(table[i][j])


def test_rho_metric_against_sympy_reading():
    g = rho_metric()
    want = metric_matrix(operator_of("DeltaR_rho", d=3))
    x = symbols(RHO)
    for i in range(3):
        for j in range(3):
            assert sp.expand(expr(g.contravariant[i][j], x) - want[i, j]) == 0


def test_d1_geometric_metric():
    g = metric_from(operator_of("DeltaR_pst_d1"))
    P, T = MultiPoly.vars(PT)
    want = [[6 * P, 18 * T], [18 * T, T * P * P]]
    assert g.chart == PT
    for i in range(2):
        for j in range(2):
            assert g.contravariant[i][j] == RatFunc.from_poly(want[i][j])


def test_first_order_operator_has_zero_metric():
    g = metric_from(operator_of("L1_rho"))
    assert all(x.is_zero() for row in g.contravariant for x in row)
    assert g.det.is_zero() and g.singular
    with pytest.raises(SingularMetric):
        ricci_scalar(g)


def test_third_order_refused():
    with pytest.raises(ValueError):
        metric_from(DiffOp.d(RHO, "rho12", "rho12", "rho13"))


def test_inverse_is_inverse():
    g = rho_metric()
    for i in range(3):
        for j in range(3):
            s = sum((g.contravariant[i][k] * g.covariant[k][j] for k in range(3)), RatFunc.zero(RHO))
            assert s == RatFunc.const(RHO, int(i == j))


# determinants ------------------------------------------------------------------------

def test_det_factor_check_passes():
    assert det_factor_check(rho_metric(), determinant_of("Det_rho")).ok


def test_det_at_equilateral_point_two_ways():
    g = rho_metric()
    assert g.det.eval((1, 1, 1)) == 54
    P, S, _ = [x.eval((1, 1, 1)) for x in chart_of("pst_of_rho").images]
    assert 96 * P * S == 54


def test_det_factor_check_reports_mismatch():
    rep = det_factor_check(rho_metric(), 6 * t1 * (4 * t2 + t1 * t1))
    assert not rep.ok


def test_det_vanishes_at_d1_surface():
    g = rho_metric()
    assert g.det.eval((1, 4, 9)) == 0


# curvature ----------------------------------------------------------------------------------

def test_printed_ricci_at_equilateral_point():
    printed = object_of("RicciScalar_rho")
    assert printed.eval((1, 1, 1)) == Fraction(13, 12)


def test_computed_ricci_scalar():
    # frozen from the sympy Christoffel oracle on the inverse of g^{mu nu}(rho)
    assert ricci_scalar(rho_metric()) == 9 / RatFunc.from_poly(t1)


@pytest.mark.slow
def test_ricci_and_cotton_against_sympy():
    x = symbols(RHO)
    M = metric_matrix(operator_of("DeltaR_rho", d=3), x)
    assert sp.simplify(ricci_oracle(M.inv(), x) - 9 / sum(x)) == 0
    assert cotton_max_abs(M.inv(), x, (1, 2, 2)) == 0
    assert cotton_max_abs(M, x, (1, 2, 2)) == sp.Rational(88, 343)


def test_d1_metrics_are_flat():
    for mid in ("DeltaR_pst_d1", "DeltaLB_d1", "DeltaLB_xi", "DeltaLB_si", "DeltaLB_la"):
        g = metric_from(operator_of(mid))
        assert flatness_check(g).ok, mid
        assert ricci_scalar(g).is_zero(), mid


def test_rho_metric_not_flat():
    rep = flatness_check(rho_metric())
    assert not rep.ok and rep.failures()


def test_cotton_of_rho_metric():
    # frozen from the sympy oracle: the inverse-metric reading is conformally flat
    C, worst = cotton_at(rho_metric(), (1, 2, 2))
    assert worst == 0


def test_cotton_when_table_is_read_as_covariant():
    g = rho_metric()
    swapped = MetricTensor(RHO, g.covariant)
    _, worst = cotton_at(swapped, (1, 2, 2))
    assert worst == Fraction(88, 343)


def test_cotton_identity_metric():
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    _, worst = cotton_at(MetricTensor(("x", "y", "z"), eye), (1, 2, 3))
    assert worst == 0


def test_cotton_rejects_two_dimensions():
    with pytest.raises(ValueError):
        cotton_at(metric_from(operator_of("DeltaR_pst_d1")), (1, 1))


def test_cotton_rejects_boundary_point():
    # (1, 1, 4) has 4 tau2 = tau1^2
    with pytest.raises(ValueError):
        cotton_at(rho_metric(), (1, 1, 4))


# Laplace-Beltrami and trace -------------------------------------------------------------------

def test_laplace_beltrami_reconstruction():
    assert laplace_beltrami(rho_metric()) == operator_of("DeltaLB_rho", d=3)


def test_trace_is_four_P():
    assert rho_metric().trace() == RatFunc.from_poly(4 * t1)


def test_curvature_report_shape():
    rep = curvature_report("Metric_pst_d1", metric_from(operator_of("DeltaR_pst_d1")))
    assert rep["metric_id"] == "Metric_pst_d1"
    assert rep["flat"] is True
    assert rep["ricci_scalar"] == "0"
