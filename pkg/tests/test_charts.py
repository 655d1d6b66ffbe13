import random
from fractions import Fraction

import mpmath
import pytest

from tribody.charts import NumericChart, PolyMap, chart_check_exact, chart_check_numeric, fd_apply
from tribody.checks import region_a_points
from tribody.diffop import DiffOp
from tribody.exactmath import ChartMismatch, MultiPoly
from tribody.models import RHO, TU, W, ModelParams, chart_of, operator_of

P3 = [(Fraction(1), Fraction(2), Fraction(4)), (Fraction(3, 2), Fraction(2), Fraction(3))]


def identity_chart(names):
    return NumericChart(names, names, lambda x, ctx: list(x), lambda x: True, "identity")


def test_identity_numeric_chart_has_no_deviation():
    op = operator_of("DeltaR_rho", d=3)
    rep = chart_check_numeric(op, identity_chart(RHO), op, P3)
    assert rep.ok
    # polynomial tests of degree <= 2 are exact under the 4th-order stencil
    assert max(it["residual"] for it in rep.items) < 1e-30


def test_radial_operator_in_w_coordinates():
    p = ModelParams(d=3)
    pts = region_a_points(random.Random(0), 5)
    rep = chart_check_numeric(Fraction(1, 6) * operator_of("DeltaR_rho", p), chart_of("w_of_rho"),
                              operator_of("DeltaR_w", p), pts, 1e-6)
    assert rep.ok


def test_point_outside_region():
    w = chart_of("w_of_rho")
    with pytest.raises(ValueError):
        chart_check_numeric(operator_of("L1_rho"), w, operator_of("L1_w"), [(3, 2, 1)])


def test_step_underflow():
    f = lambda y: y[0] ** 2
    with mpmath.workdps(15):
        with pytest.raises(ValueError):
            fd_apply(DiffOp.d(("x",), "x", "x"), f, (1,), mpmath.mp, h=mpmath.mpf("1e-12"))


def test_fd_second_derivative_of_sine():
    with mpmath.workdps(40):
        got = fd_apply(DiffOp.d(("x",), "x", "x"), lambda y: mpmath.sin(y[0]), (Fraction(1, 2),), mpmath.mp)
        assert abs(got + mpmath.sin(mpmath.mpf(1) / 2)) < 1e-12


def test_region_a_points_are_inside():
    w = chart_of("w_of_rho")
    for pt in region_a_points(random.Random(5), 7):
        assert w.region(pt)
        assert pt[0] < pt[1] < pt[2]


def test_numeric_chart_mismatch():
    with pytest.raises(ChartMismatch):
        chart_check_numeric(operator_of("L1_rho"), identity_chart(W), operator_of("L1_w"), P3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ttw_chart_against_derived(k):
    q = ("q1", "q2")
    lap = DiffOp.d(q, "q1", "q1") + DiffOp.d(q, "q2", "q2")
    rep = chart_check_exact(lap, chart_of("tu_of_q", k=k), operator_of("DeltaLB_tu_derived", k=k), 6)
    assert rep.ok


def test_polymap_then():
    x, y = MultiPoly.vars(("x", "y"))
    a = PolyMap(("x", "y"), ("u", "v"), [x * y, x + y])
    u, v = MultiPoly.vars(("u", "v"))
    b = PolyMap(("u", "v"), TU, [v * v - 2 * u, u])
    c = a.then(b)
    assert c.images[0] == x * x + y * y
    assert c.images[1] == x * y
