import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invcurves.curves import cofactor
from invcurves.darboux import (
    CurveSearchSpec, SampleSpec, extactic_vanishes, find_invariant_curves, find_invariant_lines,
    sample_experiment, sample_field,
)
from invcurves.foliation import VectorField, restrict_to_chart
from invcurves.gallery import jouanolou
from invcurves.polycore import AffinePoly, monomials, parse_poly

x, y = AffinePoly.x(), AffinePoly.y()


def line_set(res):
    # monic affine lines as frozen coefficient dicts
    out = set()
    for c in res.affine_curves:
        G = c.affine
        lead = G.coeff((0, 1)) or G.coeff((1, 0))
        out.add(tuple(sorted((e, complex(v / lead)) for e, v in G.terms.items())))
    return out


def as_key(text):
    G = parse_poly(text)
    lead = G.coeff((0, 1)) or G.coeff((1, 0))
    return tuple(sorted((e, complex(v / lead)) for e, v in G.terms.items()))


def test_saddle_lines():
    res = find_invariant_lines(VectorField.parse("x", "-y"))
    assert line_set(res) == {as_key("x"), as_key("y")}
    assert any(c.affine is None for c in res.curves)  # Z = 0
    assert res.complete and not res.pencils


def test_lotka_volterra_lines():
    res = find_invariant_lines(VectorField.parse("x*(2 - y)", "y*(x - 3)"))
    assert line_set(res) == {as_key("x"), as_key("y")}


def test_radial_pencil():
    res = find_invariant_lines(VectorField.parse("x", "y"))
    assert [p.kind for p in res.pencils] == ["slope"]
    assert res.pencils[0].condition == "b = 0 for lines y = a x + b"
    # the only vertical line through the origin
    assert line_set(res) == {as_key("x")}


def test_jouanolou_has_no_lines():
    v = restrict_to_chart(jouanolou(2))
    res = find_invariant_lines(v)
    assert res.curves == [] and res.pencils == []


def planted_line_field(rng):
    a, b = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    G = y - x.scale(a) - AffinePoly.constant(b)
    P = AffinePoly({e: rng.randint(-4, 4) for e in monomials(2, 2)})
    h = AffinePoly({e: rng.randint(-4, 4) for e in monomials(2, 1)})
    # X(G) = Q - a P = G h
    return VectorField.of(P, P.scale(a) + G * h, 2), G


def test_planted_lines_recovered():
    rng = random.Random(2024)
    for _ in range(100):
        v, G = planted_line_field(rng)
        res = find_invariant_lines(v)
        lead = G.coeff((0, 1))
        want = tuple(sorted((e, complex(c / lead)) for e, c in G.terms.items()))
        got = line_set(res)
        assert any(all(abs(dict(g).get(e, 0) - c) < 1e-9 for e, c in want) and len(g) == len(want)
                   for g in got)


def planted_conic_field(rng):
    while True:
        G = AffinePoly({e: rng.randint(-3, 3) for e in monomials(2, 2)})
        if G.degree == 2:
            break
    # g = h = 0 would leave a linear Hamiltonian field, for which every level set of G
    # is invariant and no single conic can be singled out
    while True:
        g, h = rng.randint(-2, 2), rng.randint(-2, 2)
        if g or h:
            break
    v = VectorField.of(-G.diff(1) + G.scale(g), G.diff(0) + G.scale(h))
    return v, G


def test_planted_conics_recovered():
    rng = random.Random(77)
    for _ in range(10):
        v, G = planted_conic_field(rng)
        res = find_invariant_curves(v, CurveSearchSpec(max_degree=2, seed=1))
        conics = [c.affine for c in res.curves if c.degree == 2]
        assert any(_proportional(c, G) for c in conics), str(G)


def _proportional(A, B):
    e = max(B.terms, key=lambda k: abs(complex(B.terms[k])))
    r = complex(A.coeff(e)) / complex(B.terms[e])
    keys = set(A.terms) | set(B.terms)
    return all(abs(complex(A.coeff(k)) - r * complex(B.coeff(k))) < 1e-7 for k in keys)


def test_saddle_degree_two_family():
    v = VectorField.parse("x", "-y")
    res = find_invariant_curves(v, CurveSearchSpec(max_degree=2))
    # x y = c is a whole pencil of invariant conics
    assert any("extactic vanishes" in n for n in res.notes)
    assert extactic_vanishes(v, 2)
    for c in res.curves:
        assert cofactor(v, c.affine) is not None


def test_exact_lines_method():
    res = find_invariant_curves(VectorField.parse("x", "-y"), CurveSearchSpec(method="exact_lines"))
    assert res.method == "exact_lines" and len(res.affine_curves) == 2


def test_search_spec_validation():
    with pytest.raises(ValueError):
        CurveSearchSpec(max_degree=0)
    with pytest.raises(ValueError):
        CurveSearchSpec(method="groebner")


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_reported_curves_are_invariant(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2])
    v = VectorField(AffinePoly({e: rng.randint(-2, 2) for e in monomials(2, n)}),
                    AffinePoly({e: rng.randint(-2, 2) for e in monomials(2, n)}), n)
    if v.P.is_zero() and v.Q.is_zero():
        return
    for res in (find_invariant_lines(v), find_invariant_curves(v, CurveSearchSpec(max_degree=2, starts=3))):
        for c in res.affine_curves:
            K = cofactor(v, c.affine)
            assert K is not None
            assert K.K.degree <= max(v.n - 1, 0)


def test_sample_field_reproducible():
    a = sample_field(SampleSpec(n=2), np.random.default_rng(5))
    b = sample_field(SampleSpec(n=2), np.random.default_rng(5))
    assert str(a) == str(b) and a.n == 2


def test_sample_experiment_deterministic():
    spec = SampleSpec(n=2, count=4, seed=11)
    r1 = sample_experiment(spec, ("lines", "certificate"))
    r2 = sample_experiment(spec, ("lines", "certificate"))
    assert r1.dumps() == r2.dumps()
    assert r1.aggregate["samples"] == 4
    assert not any(r["violation"] for r in r1.records)


def test_sample_spec_validation():
    with pytest.raises(ValueError):
        SampleSpec(distribution="gaussian")
    with pytest.raises(ValueError):
        sample_experiment(SampleSpec(count=1), ("everything",))
