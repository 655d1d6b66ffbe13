from collections import Counter
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import positive_rationals
from oracles import eigenvalues
from tribody.diffop import DiffOp
from tribody.exactmath import MultiPoly
from tribody.models import ModelParams, operator_of
from tribody.spectra import (
    NotInvariant,
    OperatorMatrix,
    PolySpace,
    basis,
    closed_form_spectrum,
    eigen_exact,
    eigen_numeric,
    flag_dimension,
    invariance_check,
    is_submultiset,
    matrix_of,
    multiset,
    physical_levels,
    reducibility_check,
    spectrum_table,
    table_to_csv,
)


def space_for(op, charvec, N):
    return PolySpace(op.chart, charvec, N)


# bases ------------------------------------------------------------------------

@pytest.mark.parametrize("charvec,N,dim", [((1, 2, 3), 3, 7), ((1, 1, 1), 2, 10), ((1,), 4, 5)])
def test_dimensions(charvec, N, dim):
    chart = ("a", "b", "c")[: len(charvec)]
    assert len(basis(chart, charvec, N)) == dim


def test_basis_order_is_by_weight():
    sp = basis(("a", "b", "c"), (1, 2, 3), 4)
    weights = [sp.weight(e) for e in sp.basis]
    assert weights == sorted(weights)
    assert sp.basis[0] == (0, 0, 0)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 9))
def test_flag_dimension_matches_enumeration(charvec, N):
    chart = tuple(f"v{i}" for i in range(len(charvec)))
    assert flag_dimension(tuple(charvec), N) == len(PolySpace(chart, tuple(charvec), N))


@given(st.integers(0, 8))
def test_unit_weights_give_binomials(N):
    assert flag_dimension((1, 1, 1), N) == comb(N + 3, 3)


# invariance -----------------------------------------------------------------------

def test_qes_rho_keeps_its_space():
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    op = operator_of("hQES_rho", p)
    assert invariance_check(op, space_for(op, (1, 1, 1), 2)).ok


def test_qes_rho_leaves_larger_space():
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    op = operator_of("hQES_rho", p)
    rep = invariance_check(op, space_for(op, (1, 1, 1), 3))
    assert not rep.ok
    assert rep.failures()[0]["residual"] != "0"


def test_primitive_b_only_keeps_constants():
    p = ModelParams(d=3, gamma=Fraction(1, 2), omega=1)
    op = operator_of("DeltaPrime_b", p)
    assert invariance_check(op, space_for(op, (1,) * len(op.chart), 0)).ok
    assert not invariance_check(op, space_for(op, (1,) * len(op.chart), 1)).ok


def test_matrix_of_requires_invariance():
    p = ModelParams(gamma=Fraction(1, 2), omega=1, A=Fraction(1, 3), N=2)
    op = operator_of("hQES_rho", p)
    with pytest.raises(NotInvariant):
        matrix_of(op, space_for(op, (1, 1, 1), 3))


@pytest.mark.parametrize("sub", [(1, 2, None), (1, None, None)])
def test_tau_qes_reducible(sub):
    op = operator_of("hQES_tau", gamma=Fraction(1, 3), omega=1, A=Fraction(1, 2), N=3)
    assert reducibility_check(op, sub, 3).ok


def test_d1_laguerre_reduction():
    op = operator_of("hExact_pst_d1", omega=1)
    assert reducibility_check(op, (1, None), 3).ok


# exact spectra -------------------------------------------------------------------------

def test_laguerre_matrix():
    op = operator_of("hES_tau1", gamma=0, omega=1)
    m = matrix_of(op, space_for(op, (1,), 3))
    assert m.gradedTriangular
    assert m.diagonal() == [0, 12, 24, 36]
    assert all(m.entries[i][j] == 0 for i in range(4) for j in range(i))


def test_laguerre_against_sympy_eigenvalues():
    op = operator_of("hES_tau1", gamma=Fraction(2, 3), omega=Fraction(3, 2))
    m = matrix_of(op, space_for(op, (1,), 4))
    assert [Fraction(str(x)) for x in eigenvalues(m.entries)] == sorted(eigen_exact(m))


def test_geometric_exact_matrix():
    op = operator_of("hExact_pst", d=3, gammaTilde=0, omega=1)
    m = matrix_of(op, space_for(op, (1, 2, 3), 2))
    assert m.gradedTriangular
    assert sorted(-x for x in m.diagonal()) == [0, 12, 24, 24]
    p = ModelParams(d=3, gammaTilde=0, omega=1)
    assert sorted(physical_levels("hExact_pst", p, eigen_exact(m))) == [18, 30, 42, 42]


def test_es_rho_levels():
    p = ModelParams(gamma=0, omega=1)
    op = operator_of("hES_rho", p)
    m = matrix_of(op, space_for(op, (1, 1, 1), 1))
    assert sorted(physical_levels("hES_rho", p, eigen_exact(m))) == [12, 24, 24, 24]


def test_zero_operator_and_scalar():
    sp = PolySpace(("x",), (1,), 2)
    m = matrix_of(DiffOp.zero(("x",)), sp)
    assert all(v == 0 for row in m.entries for v in row)
    one = OperatorMatrix(PolySpace(("x",), (1,), 0), [[Fraction(7, 3)]], True)
    assert eigen_exact(one) == [Fraction(7, 3)]


def test_eigen_exact_refuses_non_triangular():
    m = OperatorMatrix(PolySpace(("x", "y"), (1, 1), 1), [[0, 1, 0], [0, 0, 1], [0, 1, 0]], False)
    with pytest.raises(ValueError):
        eigen_exact(m)


def test_matrix_columns_are_images():
    # column j holds op(basis_j); check one column by hand for d/dx on x^2
    sp = PolySpace(("x",), (1,), 2)
    m = matrix_of(DiffOp.d(("x",), "x"), sp)
    j = sp.index((2,))
    i = sp.index((1,))
    assert m.entries[i][j] == 2


# numeric spectra --------------------------------------------------------------------------

def test_swap_matrix():
    m = OperatorMatrix(PolySpace(("x",), (1,), 1), [[0, 1], [1, 0]], False)
    vals = sorted(z.real for z, _ in eigen_numeric(m))
    assert vals == pytest.approx([-1.0, 1.0], abs=1e-14)


def test_diagonal_matrix_numeric():
    d = [Fraction(1, 3), Fraction(-5, 2), Fraction(7)]
    rows = [[d[i] if i == j else 0 for j in range(3)] for i in range(3)]
    m = OperatorMatrix(PolySpace(("x",), (1,), 2), rows, True)
    got = sorted(z.real for z, _ in eigen_numeric(m))
    assert got == pytest.approx(sorted(float(x) for x in d), abs=1e-14)


def test_qes_geometric_roots_are_real():
    p = ModelParams(d=3, gammaTilde=0, omega=1, A=Fraction(1, 10), N=2)
    op = operator_of("hQES_pst", p)
    ev = eigen_numeric(matrix_of(op, space_for(op, (1, 2, 3), 2)))
    assert len(ev) == 4
    assert max(abs(z.imag) for z, _ in ev) < 1e-10
    assert max(r for _, r in ev) < 1e-10


def test_qes_numeric_against_sympy():
    p = ModelParams(gamma=Fraction(1, 3), omega=1, A=Fraction(1, 4), N=2)
    op = operator_of("hQES_tau", p)
    m = matrix_of(op, space_for(op, (1, 2, 3), 2))
    want = sorted(complex(z).real for z in eigenvalues(m.entries))
    got = sorted(z.real for z, _ in eigen_numeric(m))
    assert got == pytest.approx(want, abs=1e-9)


@settings(max_examples=15)
@given(positive_rationals, positive_rationals, st.integers(1, 3))
def test_restriction_chain(omega, A, N):
    op = operator_of("hQES_tau", gamma=Fraction(1, 2), omega=omega, A=A, N=N)
    spectra = [[z for z, _ in eigen_numeric(matrix_of(op, space_for(op, cv, N)))]
               for cv in ((1, None, None), (1, 2, None), (1, 2, 3))]
    assert is_submultiset(spectra[0], spectra[1], 1e-9)
    assert is_submultiset(spectra[1], spectra[2], 1e-9)


def test_submultiset_respects_multiplicity():
    assert is_submultiset([1.0, 2.0], [2.0, 1.0, 3.0], 1e-12)
    assert not is_submultiset([1.0, 1.0], [1.0, 2.0], 1e-12)


# closed forms -------------------------------------------------------------------------------

def test_closed_form_es_rho():
    assert closed_form_spectrum("hES_rho", ModelParams(omega=1, gamma=0), 1) == [(12, 1), (24, 3)]


def test_closed_form_d1_enumeration():
    # p1 + 3 p3 <= 3 gives (0,0),(1,0),(2,0),(3,0),(0,1)
    got = closed_form_spectrum("hExact_pst_d1", ModelParams(omega=1), 3)
    assert multiset(got) == [6, 18, 30, 42, 42]


def test_d1_exact_matrix_matches_enumeration():
    p = ModelParams(omega=1)
    op = operator_of("hExact_pst_d1", p)
    m = matrix_of(op, space_for(op, (1, 3), 3))
    assert sorted(physical_levels("hExact_pst_d1", p, eigen_exact(m))) == [6, 18, 30, 42, 42]


def test_closed_form_laguerre():
    assert multiset(closed_form_spectrum("hES_tau1", ModelParams(omega=1), 2)) == [0, 12, 24]


def test_closed_form_missing():
    with pytest.raises(ValueError):
        closed_form_spectrum("hQES_pst", ModelParams(), 2)


@settings(max_examples=10)
@given(st.sampled_from(["hES_rho", "hES_tau", "hExact_pst"]), positive_rationals, positive_rationals,
       st.integers(0, 4))
def test_es_exact_equals_closed_form(mid, omega, g, N):
    p = ModelParams(omega=omega, gamma=g, gammaTilde=g, d=Fraction(5, 2))
    op = operator_of(mid, p)
    from tribody.spectra import spectral_model
    m = matrix_of(op, space_for(op, spectral_model(mid).charvec, N))
    assert m.gradedTriangular
    assert sorted(physical_levels(mid, p, eigen_exact(m))) == multiset(closed_form_spectrum(mid, p, N))


def test_tau_degeneracy_counts_partitions():
    # multiplicity at level n is the number of partitions of n into parts 1, 2, 3
    p = ModelParams(omega=1, gamma=0)
    counts = Counter(multiset(closed_form_spectrum("hES_tau", p, 6)))
    parts = [1, 1, 2, 3, 4, 5, 7]
    assert [counts[12 * (n + 1)] for n in range(7)] == parts


# tables ------------------------------------------------------------------------------------

def test_table_csv_header():
    t = spectrum_table("hES_tau1", ModelParams(omega=1), 3)
    csv = table_to_csv(t)
    assert csv.splitlines()[0] == "level,eigenvalue,multiplicity,residual,source"
    assert t["convention"]


def test_table_marks_closed_form_match():
    t = spectrum_table("hExact_pst", ModelParams(d=3, omega=1), 2)
    assert t["closed_form_match"] is True
    assert [(r["eigenvalue"], r["multiplicity"]) for r in t["rows"]] == [("18", 1), ("30", 1), ("42", 2)]
