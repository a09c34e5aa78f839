import math
import random

import pytest

from invcurves.curves import AlgebraicCurve, parse_curve
from invcurves.foliation import VectorField, form_from_lmn, projectivize
from invcurves.gallery import KolmogorovParams, kolmogorov
from invcurves.numkernel import jacobian_eigen
from invcurves.points import ProjectivePoint
from invcurves.polycore import AffinePoly, HomPoly, monomials, parse_poly
from invcurves.singularities import (
    NonIsolatedSingularities, census, chart_field, classify_singularity, find_singularities,
)

XYZ = parse_curve("X*Y*Z")


def classified(om):
    return [classify_singularity(s, om) for s in find_singularities(om)]


def test_saddle_has_three_points():
    om = projectivize(VectorField.parse("x", "-y"))
    pts = find_singularities(om)
    want = [ProjectivePoint.from_coords(c) for c in ((0, 0, 1), (1, 0, 0), (0, 1, 0))]
    assert len(pts) == 3
    for w in want:
        assert any(s.point.close_to(w, 1e-12) for s in pts)


def test_kolmogorov_seven_points():
    om = kolmogorov(KolmogorovParams(n=2, b=0.01))
    assert sum(s.multiplicity for s in find_singularities(om)) == 7


def test_zero_form_is_non_isolated():
    Hh = parse_poly("X - Y", "homogeneous")
    om = form_from_lmn(HomPoly.var(0) * Hh, HomPoly.var(1) * Hh, HomPoly.var(2) * Hh)
    with pytest.raises(NonIsolatedSingularities):
        find_singularities(om)


def test_common_factor_is_non_isolated():
    v = VectorField.parse("x*(x+y)", "x*(x-y+1)")
    with pytest.raises(NonIsolatedSingularities):
        find_singularities(projectivize(v))


def origin_class(v):
    om = projectivize(v)
    s = next(s for s in classified(om) if s.point.close_to(ProjectivePoint.from_coords((0, 0, 1)), 1e-9))
    return s


def test_classify_examples():
    s = origin_class(VectorField.parse("x", "-y"))
    assert s.classification == "poincare" and s.quotient == -1
    s = origin_class(VectorField.parse("x", "2*y"))
    assert s.classification == "nondegenerate"
    assert {s.quotient, 1 / s.quotient} == {2, 0.5}
    s = origin_class(VectorField.parse("x", f"{math.sqrt(2)!r}*y", exact=False))
    assert s.classification == "simple"
    s = origin_class(VectorField.parse("x^2", "y"))
    assert s.classification == "degenerate"


@pytest.mark.parametrize("b,cls", [(0.0, "nondegenerate"), (0.5, "nondegenerate"),
                                   (math.sqrt(2) / 10, "simple")])
def test_kolmogorov_side_corners(b, cls):
    om = kolmogorov(KolmogorovParams(n=2, b=b))
    sings = classified(om)
    for c in ((1, 0, 0), (0, 1, 0)):
        p = ProjectivePoint.from_coords(c)
        s = next(s for s in sings if s.point.close_to(p, 1e-9))
        assert s.classification == cls
        assert min(abs(s.quotient - 1 - b), abs(1 / s.quotient - 1 - b)) < 1e-9


def test_census_kolmogorov_n2():
    c = census(kolmogorov(KolmogorovParams(n=2, b=0.01)), XYZ)
    assert (c.n_I, c.n_II, c.n_III) == (3, (1, 1, 1), 1)
    assert c.n_I + sum(c.n_II) + c.n_III == c.total == 7


@pytest.mark.parametrize("n", [2, 3, 4])
def test_type_two_count_per_line(n):
    c = census(kolmogorov(KolmogorovParams(n=n, b=0.01)), XYZ)
    assert c.n_II == (n - 1,) * 3
    assert c.total_multiplicity == n * n + n + 1
    assert not c.ambiguous


def test_census_with_line_at_infinity():
    v = VectorField.parse("x + y^2 - 1", "2*y + x*y")
    om = projectivize(v)
    c = census(om, parse_curve("Z"))
    sings = c.singularities
    at_inf = sum(1 for s in sings if abs(s.point.coords[2]) < 1e-12)
    assert c.n_I == 0 and c.n_II == (at_inf,) and c.n_III == len(sings) - at_inf


def test_trivial_curve_all_type_three():
    om = projectivize(VectorField.parse("x + y^2", "x*y - 1"))
    c = census(om, AlgebraicCurve.from_factors([]))
    assert all(s.kind == "III" for s in c.singularities) and c.n_III == c.total


def test_census_rejects_non_invariant_curve():
    from invcurves.singularities import CensusError
    om = projectivize(VectorField.parse("x", "-y"))
    with pytest.raises(CensusError):
        census(om, parse_curve("X + Y"))


def random_field(rng, n):
    return VectorField(AffinePoly({e: rng.randint(-9, 9) for e in monomials(2, n)}),
                       AffinePoly({e: rng.randint(-9, 9) for e in monomials(2, n)}), n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_singularity_count_random_fields(n):
    rng = random.Random(100 + n)
    for _ in range(50):
        om = projectivize(random_field(rng, n))
        assert sum(s.multiplicity for s in find_singularities(om)) == n * n + n + 1


def test_quotient_chart_independent():
    rng = random.Random(5)
    checked = 0
    for _ in range(10):
        om = projectivize(random_field(rng, 2))
        for s in classified(om):
            if s.is_degenerate:
                continue
            for k in range(3):
                if k == s.chart or abs(s.point.coords[k]) < 0.1:
                    continue
                ed = jacobian_eigen(chart_field(om, k), s.point.local(k))
                lam = ed.lam2 / ed.lam1
                assert min(abs(lam - s.quotient), abs(1 / lam - s.quotient)) <= 10 * 1e-8 * max(1, abs(lam))
                checked += 1
    assert checked > 20


def test_classification_is_monotone():
    rng = random.Random(11)
    for _ in range(10):
        for s in classified(projectivize(random_field(rng, 2))):
            if s.classification == "poincare":
                assert s.quotient_kind == "not_positive_real"
            if s.classification in ("poincare", "simple"):
                assert s.quotient_kind != "positive_rational"
