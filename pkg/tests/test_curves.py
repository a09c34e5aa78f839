import random

import pytest
from hypothesis import given, strategies as st

from invcurves.curves import (
    AlgebraicCurve, cofactor, curve_singular_points, is_nodal, is_nodal_with_infinity,
    parse_curve, topology_of_nodal,
)
from invcurves.foliation import VectorField
from invcurves.points import ProjectivePoint
from invcurves.polycore import AffinePoly, parse_poly

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def H(text):
    return parse_poly(text, "homogeneous")


def test_cofactor_examples():
    v = VectorField.parse("x", "-y")
    assert cofactor(v, parse_poly("x*y")).K.is_zero()
    assert cofactor(v, parse_poly("x")).K == parse_poly("1")
    assert cofactor(v, parse_poly("x+y")) is None
    with pytest.raises(ValueError):
        cofactor(v, parse_poly("3"))


@given(st.integers(0, 4), st.integers(0, 4), small, small)
def test_monomial_cofactors(i, j, a, b):
    # under (a x, b y) the monomial x^i y^j has cofactor i a + j b
    if i + j == 0:
        return
    v = VectorField.of(AffinePoly({(1, 0): a}), AffinePoly({(0, 1): b}), 1)
    K = cofactor(v, AffinePoly({(i, j): 1}))
    assert K is not None and K.K == AffinePoly({(0, 0): i * a + j * b})


def planted(f, g, h):
    # Hamiltonian of f plus f times (g, h): f is invariant with cofactor g f_x + h f_y
    return VectorField.of(-f.diff(1) + f * g, f.diff(0) + f * h)


lin = st.tuples(small, small, small).map(lambda c: AffinePoly({(0, 0): c[0], (1, 0): c[1], (0, 1): c[2]}))
quad = st.lists(small, min_size=6, max_size=6).map(
    lambda c: AffinePoly(dict(zip([(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)], c))))


@given(lin.filter(lambda f: f.degree == 1), lin.filter(lambda f: f.degree == 1), lin, lin)
def test_cofactor_multiplicative(f, g, h1, h2):
    # f g is invariant for the planted field of (f g)
    fg = f * g
    v = planted(fg, h1, h2)
    Kfg = cofactor(v, fg)
    Kf, Kg = cofactor(v, f), cofactor(v, g)
    assert Kfg is not None and Kf is not None and Kg is not None
    assert Kf.K + Kg.K == Kfg.K
    assert Kfg.K.degree <= v.n - 1


@given(quad, quad, quad)
def test_cofactor_product_iff_factors(f, g, h):
    if f.degree < 1 or g.degree < 1:
        return
    v = planted(f, h, g)
    both = cofactor(v, f) is not None and cofactor(v, g) is not None
    assert (cofactor(v, f * g) is not None) == both
    K = cofactor(v, f)
    assert K is not None and K.K.degree <= v.n - 1


def test_singular_points_examples():
    pts = curve_singular_points(H("X*Y*Z"))
    want = [ProjectivePoint.from_coords(c) for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert len(pts) == 3 and all(any(p.close_to(w, 1e-10) for p in pts) for w in want)
    assert curve_singular_points(H("X*Z - Y^2")) == []
    pts = curve_singular_points(H("Y^2*Z - X^3"))
    assert len(pts) == 1 and pts[0].close_to(ProjectivePoint.from_coords((0, 0, 1)), 1e-10)


def test_nodality_examples():
    r = is_nodal(H("X*Y*Z"))
    assert r.nodal and r.node_count == 3
    assert not is_nodal(H("Y^2*Z - X^3")).nodal
    r = is_nodal(H("X^2*Y"))
    assert not r.nodal and not r.reduced


def test_nodality_with_infinity():
    assert is_nodal_with_infinity(H("X*Y")).nodal
    # the parabola is tangent to the line at infinity
    assert not is_nodal_with_infinity(H("Y*Z - X^2")).nodal
    assert is_nodal_with_infinity(H("X*Y*Z")).nodal


def random_change(rng):
    while True:
        A = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        det = (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
               - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
               + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))
        if det != 0:
            return A


@pytest.mark.parametrize("text,nodal", [("X*Y*Z", True), ("Y^2*Z - X^3", False),
                                        ("X^2*Y", False)])
def test_nodality_coordinate_invariant(text, nodal):
    rng = random.Random(text)
    F = H(text)
    for _ in range(10):
        assert is_nodal(F.compose_linear(random_change(rng))).nodal == nodal


@pytest.mark.parametrize("factors,chi,cs", [
    (["X + 2*Y - Z"], 2, 1),
    (["X*Z - Y^2"], 2, 4),
    (["X", "Y", "Z"], 3, 9),
    (["Y^2*Z - X^2*(X+Z)"], 1, 9),
    (["X*Z - Y^2", "X + Y - 3*Z"], 2, 9),
])
def test_topology(factors, chi, cs):
    curve = AlgebraicCurve.from_factors([H(f) for f in factors])
    t = topology_of_nodal(curve)
    assert t.euler_characteristic == chi
    assert t.expected_cs == cs == curve.degree ** 2


def test_topology_xyz_counts():
    t = topology_of_nodal(parse_curve("X*Y*Z"))
    assert (t.delta, t.milnor_sum, t.genera) == (3, 3, (0, 0, 0))


def test_topology_random_nodal_cubic():
    rng = random.Random(9)
    base = H("Y^2*Z - X^2*(X+Z)")
    for _ in range(5):
        F = base.compose_linear(random_change(rng))
        t = topology_of_nodal(AlgebraicCurve.single(F))
        assert t.delta == 1 and t.expected_cs == 9


def test_topology_rejects_cusp():
    with pytest.raises(ValueError):
        topology_of_nodal(AlgebraicCurve.single(H("Y^2*Z - X^3")))


def test_parse_curve():
    c = parse_curve("F = x*y*(x + y - z)")
    assert c.degrees == (1, 1, 1) and c.degree == 3
    assert parse_curve("X^2 + Y^2 - Z^2").degrees == (2,)
    with pytest.raises(ValueError):
        parse_curve("G = X")
