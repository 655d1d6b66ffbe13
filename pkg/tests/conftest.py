from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tribody.exactmath import MultiPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CHART = ("x", "y", "z")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
positive_rationals = st.fractions(min_value=Fraction(1, 7), max_value=5, max_denominator=7)


@st.composite
def polys(draw, chart=CHART, max_terms=4, max_deg=3):
    """Small sparse polynomials with rational coefficients."""
    n = len(chart)
    exps = draw(st.lists(st.tuples(*[st.integers(0, max_deg)] * n), max_size=max_terms))
    coeffs = draw(st.lists(rationals, min_size=len(exps), max_size=len(exps)))
    return MultiPoly.from_terms(chart, dict(zip(exps, coeffs)))


def points(n, lo=-4, hi=4):
    return st.tuples(*[st.fractions(min_value=lo, max_value=hi, max_denominator=5)] * n)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
