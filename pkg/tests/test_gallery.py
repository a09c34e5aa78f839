import cmath
import math
import warnings
from fractions import Fraction

import pytest

from invcurves.curves import parse_curve
from invcurves.foliation import check_curve_invariant, restrict_to_chart
from invcurves.gallery import (
    KolmogorovParams, jouanolou, kolmogorov, kolmogorov_b0_numeric, kolmogorov_b0_relations,
    kolmogorov_fixture, logarithmic,
)
from invcurves.polycore import HomPoly, parse_poly
from invcurves.singularities import census, find_singularities

from fixture_check import fixture_errors

X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("b", [0.0, 0.01])
def test_kolmogorov_matches_fixture(n, b):
    worst, fails = fixture_errors(KolmogorovParams(n=n, b=b))
    assert not fails
    assert worst < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kolmogorov_count(n):
    om = kolmogorov(KolmogorovParams(n=n, b=0.01))
    assert sum(s.multiplicity for s in find_singularities(om)) == n * n + n + 1


@pytest.mark.parametrize("n", [2, 3])
def test_kolmogorov_coordinate_lines_invariant(n):
    om = kolmogorov(KolmogorovParams(n=n, b=0.25))
    for L in (X, Y, Z):
        assert check_curve_invariant(om, L) is not None


def test_kolmogorov_params_validation():
    with pytest.raises(ValueError):
        KolmogorovParams(n=1)
    with pytest.raises(ValueError):
        KolmogorovParams(a0=0)
    with pytest.raises(ValueError):
        KolmogorovParams(a0=1)
    with pytest.raises(ValueError):
        KolmogorovParams(a0=-1)  # a0 = 1/a0


def test_kolmogorov_exact_coefficients():
    om = kolmogorov(KolmogorovParams(n=2, a0=Fraction(-3, 2), b=Fraction(1, 3)))
    assert om.exact
    v = restrict_to_chart(om)
    assert v.P.coeff((2, 0)) != 0


def test_fixture_provenance_and_json():
    fx = kolmogorov_fixture(KolmogorovParams(n=3, b=0.0))
    assert {e.provenance for e in fx.entries} == {"paper"}
    names = [e["name"] for e in fx.to_json()["entries"]]
    assert "type_III_points" in names and len(fx.get("type_III_points")) == 4


def test_logarithmic_three_lines():
    om = logarithmic([X, Y, Z], [Fraction(1), Fraction(-3), Fraction(2)])
    assert om.exact and om.degree == 1
    for L in (X, Y, Z):
        assert check_curve_invariant(om, L) is not None


def test_logarithmic_four_lines_binary_weights():
    lines = [X, Y, Z, X + Y + Z]
    om = logarithmic(lines, [0.5, 0.25, -1.0, 0.25])
    assert om.degree == 2
    c = census(om, parse_curve("X*Y*Z*(X + Y + Z)"))
    assert c.total_multiplicity == 7


def test_logarithmic_rejects_bad_weights():
    with pytest.raises(ValueError):
        logarithmic([X, Y, Z], [1, 1, 1])
    with pytest.raises(ValueError):
        logarithmic([X, Y], [1])
    with pytest.raises(ValueError):
        logarithmic([X, X.scale(2), Z], [1, -2, 1])


def test_logarithmic_two_lines_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        om = logarithmic([X, Y], [1, -1])
    assert w and om.degree == 0


def test_jouanolou_seven_points():
    sings = find_singularities(jouanolou(2))
    assert len(sings) == 7 and all(s.multiplicity == 1 for s in sings)


def test_jouanolou_cyclic_symmetry():
    pts = [s.point for s in find_singularities(jouanolou(2))]
    from invcurves.points import ProjectivePoint
    for p in pts:
        c = p.coords
        q = ProjectivePoint.from_coords((c[1], c[2], c[0]))
        assert any(q.close_to(r, 1e-9) for r in pts)


def test_jouanolou_chart_field():
    v = restrict_to_chart(jouanolou(2))
    assert v.P == parse_poly("y^2 - x^3") and v.Q == parse_poly("1 - x^2*y")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_b0_relations_only_trivial(n):
    assert kolmogorov_b0_relations(n) == [(0, 0, 0, 0)]
    hits, best = kolmogorov_b0_numeric(n)
    assert hits == [(0, 0, 0, 0)]
    assert best > 1e-3


def test_type_ii_index_closed_form_b0():
    # with b = 0 the transverse indices are -(n-1)/a0, -(n-1)a0 and -(n-1)
    n, a0 = 3, -(2 ** 0.25)
    idx = kolmogorov_fixture(KolmogorovParams(n=n)).get("type_II_indices")
    assert cmath.isclose(idx["x"][1], -(n - 1) / a0)
    assert cmath.isclose(idx["y"][1], -(n - 1) * a0)
    assert math.isclose(idx["z"][1].real, -(n - 1))
