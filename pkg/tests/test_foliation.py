from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from invcurves.curves import cofactor
from invcurves.foliation import (
    HomOneForm, ProjectiveConditionError, VectorField, chart_form, chart_forms,
    check_curve_invariant, form_from_lmn, is_line_at_infinity_invariant, lmn_from_form,
    projectivize, restrict_to_chart, strip_line_factor,
)
from invcurves.gallery import KolmogorovParams, kolmogorov
from invcurves.polycore import AffinePoly, HomPoly, homogenize, monomials, parse_poly

X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def H(text, d=None):
    return parse_poly(text, "homogeneous", degree=d)


def fields(n):
    basis = monomials(2, n)
    vecs = st.lists(small, min_size=len(basis), max_size=len(basis))
    return st.tuples(vecs, vecs).map(
        lambda pq: VectorField(AffinePoly(dict(zip(basis, pq[0]))),
                               AffinePoly(dict(zip(basis, pq[1]))), n))


def test_projectivize_saddle():
    om = projectivize(VectorField.parse("x", "-y"))
    assert om.P == H("Z*Y") and om.Q == H("Z*X") and om.R == H("-2*X*Y")


def test_projectivize_constant_field():
    om = projectivize(VectorField.parse("1", "0", n=0))
    assert om.P.is_zero() and om.Q == H("Z") and om.R == H("-Y")


def test_chart_forms_saddle():
    wx, wy = chart_forms(VectorField.parse("x", "-y"))
    assert wx.dy == parse_poly("-2*x") and wx.dx == parse_poly("y")
    assert wy.dx == parse_poly("y") and wy.dy == parse_poly("-2*x")


def test_chart_forms_constant_and_zero():
    wx, _ = chart_forms(VectorField.parse("1", "0", n=0))
    assert wx.dy == parse_poly("-x") and wx.dx == parse_poly("y")
    wx, wy = chart_forms(VectorField.parse("0", "0", n=2))
    assert all(p.is_zero() for p in (wx.dx, wx.dy, wy.dx, wy.dy))


@given(st.integers(1, 3).flatmap(fields))
def test_chart_forms_are_pullbacks(v):
    om = projectivize(v)
    wx, wy = chart_forms(v)
    assert chart_form(om, "X") == wx
    assert chart_form(om, "Y") == wy


def test_restrict_saddle():
    om = HomOneForm(H("Z*Y"), H("Z*X"), H("-2*X*Y"))
    v = restrict_to_chart(om, "Z")
    assert (v.P, v.Q, v.n) == (parse_poly("x"), parse_poly("-y"), 1)


def test_restrict_euler_multiple_is_zero():
    Hh = H("X + 2*Y - Z")
    om = form_from_lmn(X * Hh, Y * Hh, Z * Hh)
    assert om.is_zero()
    assert restrict_to_chart(om).is_zero()
    # as a coefficient triple the Euler multiple is not projective
    with pytest.raises(ProjectiveConditionError):
        HomOneForm(X * Hh, Y * Hh, Z * Hh)


def test_restrict_degree_bound_without_invariant_infinity():
    om = form_from_lmn(HomPoly.zero(2), HomPoly.zero(2), H("X^2"))
    assert not is_line_at_infinity_invariant(om)
    assert restrict_to_chart(om).n == 3


@given(st.integers(1, 3).flatmap(fields))
def test_round_trip_identity(v):
    w = restrict_to_chart(projectivize(v), "Z")
    assert w.P == v.P and w.Q == v.Q and w.n == v.n


@given(st.integers(1, 3).flatmap(fields))
def test_projective_round_trip(v):
    om, _ = strip_line_factor(projectivize(v))
    if not is_line_at_infinity_invariant(om):
        return
    back = projectivize(restrict_to_chart(om, "Z"))
    assert back.equivalent(om) or strip_line_factor(back)[0].equivalent(om)


def test_kolmogorov_round_trip():
    om = kolmogorov(KolmogorovParams(n=2, a0=Fraction(-3, 2), b=Fraction(1, 100)))
    assert projectivize(restrict_to_chart(om, "Z")).equivalent(om)


def test_lmn_from_projectivize():
    v = VectorField.parse("x^2 - y", "x*y + 1")
    rep = lmn_from_form(projectivize(v))
    assert rep.N.is_zero()
    assert rep.L == homogenize(v.P, 2) and rep.M == homogenize(v.Q, 2)


def test_lmn_zero_form():
    rep = lmn_from_form(HomOneForm(HomPoly.zero(2), HomPoly.zero(2), HomPoly.zero(2)))
    assert rep.L.is_zero() and rep.M.is_zero() and rep.N.is_zero()


@given(st.lists(small, min_size=18, max_size=18), st.lists(small, min_size=3, max_size=3))
def test_lmn_gauge_shift(cs, hs):
    basis = monomials(3, 2, homogeneous=True)
    L, M, N = (HomPoly(dict(zip(basis, cs[6 * i:6 * i + 6])), 2) for i in range(3))
    Hh = HomPoly(dict(zip(monomials(3, 1, homogeneous=True), hs)), 1)
    a = form_from_lmn(L, M, N)
    b = form_from_lmn(L + X * Hh, M + Y * Hh, N + Z * Hh)
    assert a == b
    assert lmn_from_form(a) == lmn_from_form(b)
    rep = lmn_from_form(a)
    assert form_from_lmn(rep.L, rep.M, rep.N) == a


def test_line_at_infinity_examples():
    assert is_line_at_infinity_invariant(VectorField.parse("x^2+y", "3*x*y"))
    assert not is_line_at_infinity_invariant(form_from_lmn(HomPoly.zero(3), HomPoly.zero(3), H("X^3")))
    assert is_line_at_infinity_invariant(HomOneForm(HomPoly.zero(2), HomPoly.zero(2), HomPoly.zero(2)))


@given(st.integers(1, 3).flatmap(fields))
def test_projectivize_keeps_infinity_invariant(v):
    assert is_line_at_infinity_invariant(v)


def test_curve_invariance_examples():
    om = projectivize(VectorField.parse("x", "-y"))
    assert check_curve_invariant(om, Z) is not None
    assert check_curve_invariant(om, X) is not None
    assert check_curve_invariant(om, X + Y) is None


def test_strip_radial_top():
    v = VectorField.parse("x^2 + x", "x*y - y")
    om, k = strip_line_factor(projectivize(v))
    assert k == 1 and om.degree == 1


def test_json_round_trip():
    om = kolmogorov(KolmogorovParams(n=3, b=0.01))
    back = HomOneForm.from_json(om.to_json())
    assert back == om
    ex = projectivize(VectorField.parse("x + 1/3", "(2+i)*y"))
    assert HomOneForm.from_json(ex.to_json()) == ex


def planted(f: AffinePoly, a, b, c):
    # Hamiltonian field of f plus f times a linear field: f stays invariant
    lin1 = AffinePoly({(1, 0): a, (0, 0): c})
    lin2 = AffinePoly({(0, 1): b, (0, 0): a})
    return VectorField.of(-f.diff(1) + f * lin1, f.diff(0) + f * lin2)


polys2 = st.lists(small, min_size=6, max_size=6).map(
    lambda cs: AffinePoly(dict(zip(monomials(2, 2), cs)))).filter(lambda f: f.degree >= 1)


@given(polys2, small, small, small, st.booleans())
def test_affine_and_projective_invariance_agree(f, a, b, c, plant):
    if plant:
        v = planted(f, a, b, c)
    else:
        v = VectorField.of(AffinePoly({(2, 0): a, (0, 1): 1}), AffinePoly({(1, 1): b, (0, 0): c}))
    affine = cofactor(v, f) is not None
    proj = check_curve_invariant(projectivize(v), homogenize(f, f.degree)) is not None
    assert affine == proj
    if plant:
        assert affine
