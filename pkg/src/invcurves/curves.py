"""Algebraic curve services: cofactors, singular points, nodality, topology."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .foliation import VectorField
from .numkernel import DEFAULT_TOL, InfiniteSolutionSet, ToleranceProfile
from .points import ProjectivePoint, relative_value, solve_projective
from .polycore import AffinePoly, HomPoly, dehomogenize, divide_exact, parse_poly, remainder_is_zero

__all__ = [
    "AlgebraicCurve", "Cofactor", "NodalPoint", "NodalReport", "CurveTopology",
    "NonReducedCurve", "cofactor", "curve_singular_points", "is_nodal",
    "is_nodal_with_infinity", "topology_of_nodal", "parse_curve", "branch_tangents",
]


class NonReducedCurve(ValueError):
    """The curve has a repeated factor, so its singular locus is a curve."""


@dataclass(frozen=True)
class AlgebraicCurve:
    """F = F_1 * ... * F_k with the factors as supplied."""

    F: HomPoly
    components: tuple[HomPoly, ...]

    @classmethod
    def from_factors(cls, factors) -> "AlgebraicCurve":
        factors = tuple(f for f in factors)
        if not factors:
            return cls(HomPoly.constant(1), ())
        F = factors[0]
        for f in factors[1:]:
            F = F * f
        comps = tuple(f for f in factors if f.degree > 0)
        return cls(F, comps)

    @classmethod
    def single(cls, F: HomPoly) -> "AlgebraicCurve":
        return cls(F, (F,) if F.degree > 0 else ())

    @property
    def degree(self) -> int:
        return self.F.degree

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.components)

    def is_trivial(self) -> bool:
        return self.F.degree == 0

    def contains_line_at_infinity(self) -> bool:
        return any(_is_z_multiple(f) for f in self.components) or _is_z_multiple(self.F)

    def with_infinity(self) -> "AlgebraicCurve":
        if self.contains_line_at_infinity():
            return self
        return AlgebraicCurve.from_factors(self.components + (HomPoly.var(2),))

    def __str__(self):
        if not self.components:
            return "1"
        return " * ".join(f"({c})" for c in self.components)


def _is_z_multiple(F: HomPoly) -> bool:
    return F.degree > 0 and not F.is_zero() and all(e[2] >= 1 for e in F.terms)


def parse_curve(text: str, exact: bool = True) -> AlgebraicCurve:
    """Read "F = f1 * f2 * ... * fk" (or a bare polynomial) into components.

    Top-level ``*`` separates factors; a bare polynomial is one component.
    """
    s = text.strip()
    if "=" in s:
        lhs, s = s.split("=", 1)
        if lhs.strip() not in ("F", "f"):
            raise ValueError(f"expected 'F = ...', got {lhs.strip()!r} on the left")
    parts, depth, cur, i = [], 0, "", 0
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and s[i:i + 2] == "**":
            cur += "**"
            i += 2
            continue
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
        i += 1
    parts.append(cur)
    if _has_top_level_sum(s):
        return AlgebraicCurve.single(parse_poly(s, "homogeneous", exact=exact))
    factors = [parse_poly(p, "homogeneous", exact=exact) for p in parts]
    consts = [f for f in factors if f.degree == 0]
    comps = [f for f in factors if f.degree > 0]
    if consts and comps:
        c = consts[0]
        for k in consts[1:]:
            c = c * k
        comps[0] = comps[0] * c
    if not comps:
        return AlgebraicCurve(factors[0] if factors else HomPoly.constant(1), ())
    return AlgebraicCurve.from_factors(comps)


def _has_top_level_sum(s: str) -> bool:
    t = s.strip()
    depth = 0
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            prev = t[:i].rstrip()
            # exponent sign inside a decimal literal such as 1e-5
            if prev[-1:] in "eE" and prev[-2:-1].isdigit():
                continue
            if prev[-1:] in "*/^":
                continue
            return True
    return False


@dataclass(frozen=True)
class Cofactor:
    K: AffinePoly
    degree_bound: int


def cofactor(v: VectorField, G: AffinePoly, tol: ToleranceProfile = DEFAULT_TOL) -> Cofactor | None:
    """K with P G_x + Q G_y = K G, or None when G = 0 is not invariant."""
    if G.degree <= 0:
        raise ValueError("cofactor needs a non-constant curve")
    num = v.P * G.diff(0) + v.Q * G.diff(1)
    if num.is_zero():
        return Cofactor(AffinePoly(), v.n - 1)
    q, r = divide_exact(num, G)
    scale = max(1.0, G.max_abs())
    if not remainder_is_zero(r, num, None, tol.eps_eq * scale):
        return None
    return Cofactor(AffinePoly(q.terms), v.n - 1)


# -- singular points ----------------------------------------------------------------

# generic combinations of the three partials; two members of the net
_COMBOS = (
    ((Fraction(1), Fraction(3, 7), Fraction(-5, 11)), (Fraction(-2, 13), Fraction(1), Fraction(7, 17))),
    ((Fraction(5, 19), Fraction(-1, 3), Fraction(1)), (Fraction(1), Fraction(11, 23), Fraction(2, 29))),
)


def _combine(parts, coeffs) -> HomPoly:
    out = HomPoly.zero(parts[0].degree)
    for c, p in zip(coeffs, parts):
        out = out + p.scale(c)
    return out


def curve_singular_points(F: HomPoly, tol: ToleranceProfile = DEFAULT_TOL) -> list[ProjectivePoint]:
    """Common zeros of F_X, F_Y, F_Z (hence of F by Euler's relation).

    Two generic members of the net spanned by the partials are solved in each
    chart and the candidates filtered by all three partials. At a node the
    gradient map is a local isomorphism, so nodes are simple solutions.
    """
    if F.degree <= 0 or F.is_zero():
        raise ValueError("curve must be non-constant")
    if F.degree == 1:
        return []
    parts = [F.diff(0), F.diff(1), F.diff(2)]
    # the zero polynomial of a partial does not constrain anything
    last: Exception | None = None
    for c1, c2 in _COMBOS:
        g1, g2 = _combine(parts, c1), _combine(parts, c2)
        systems = {k: (dehomogenize(g1, k), dehomogenize(g2, k)) for k in (2, 0, 1)}

        def accept(pt):
            return all(relative_value(p, pt.coords) <= 1e3 * tol.eps_eq for p in parts if not p.is_zero())

        try:
            sols = solve_projective(systems, tol, accept)
        except InfiniteSolutionSet as exc:
            last = exc
            continue
        return [pt for pt, _ in sols]
    raise NonReducedCurve(f"singular locus of {F} is not finite ({last})")


def _quadratic_jet(F: HomPoly, pt: ProjectivePoint):
    """Hessian of the home-chart dehomogenization at the point."""
    k = pt.chart
    f = dehomogenize(F, k).to_float()
    x0 = pt.local(k)
    fxx = f.diff(0).diff(0)(x0)
    fxy = f.diff(0).diff(1)(x0)
    fyy = f.diff(1).diff(1)(x0)
    return complex(fxx), complex(fxy), complex(fyy)


def branch_tangents(a: complex, b: complex, c: complex):
    """Directions (u, v) with a u^2 + 2 b u v + c v^2 = 0, unit norm."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0:
        return []
    if abs(a) <= 1e-12 * scale and abs(c) <= 1e-12 * scale:
        return [(1 + 0j, 0j), (0j, 1 + 0j)]
    disc = cmath.sqrt(b * b - a * c)
    dirs = []
    if abs(c) >= abs(a):
        # c r^2 + 2 b r + a = 0 with r = v/u
        r1 = (-b + disc) / c
        r2 = (-b - disc) / c
        dirs = [(1 + 0j, r1), (1 + 0j, r2)]
    else:
        s1 = (-b + disc) / a
        s2 = (-b - disc) / a
        dirs = [(s1, 1 + 0j), (s2, 1 + 0j)]
    out = []
    for u, v in dirs:
        n = math.sqrt(abs(u) ** 2 + abs(v) ** 2)
        out.append((u / n, v / n))
    return out


@dataclass(frozen=True)
class NodalPoint:
    point: ProjectivePoint
    chart: int
    is_node: bool
    tangents: tuple
    hessian_margin: float


@dataclass(frozen=True)
class NodalReport:
    curve: HomPoly
    points: tuple[NodalPoint, ...]
    reduced: bool
    nodal: bool
    reason: str = ""

    @property
    def node_count(self) -> int:
        return sum(1 for p in self.points if p.is_node)


def is_nodal(F: HomPoly, tol: ToleranceProfile = DEFAULT_TOL) -> NodalReport:
    """Every singular point is a node (distinct tangents) and F is reduced."""
    if F.degree <= 0:
        raise ValueError("curve must be non-constant")
    try:
        sing = curve_singular_points(F, tol)
    except NonReducedCurve as exc:
        return NodalReport(F, (), False, False, str(exc))
    pts = []
    for pt in sing:
        a, b, c = _quadratic_jet(F, pt)
        scale = max(abs(a), abs(b), abs(c))
        det = a * c - b * b
        margin = abs(det) / scale ** 2 if scale > 0 else 0.0
        node = scale > 0 and margin > tol.eps_eq * 1e2
        tangents = tuple(branch_tangents(a, b, c)) if node else ()
        pts.append(NodalPoint(pt, pt.chart, node, tangents, margin))
    nodal = all(p.is_node for p in pts)
    reason = "" if nodal else "singular point with a degenerate quadratic jet"
    return NodalReport(F, tuple(pts), True, nodal, reason)


def is_nodal_with_infinity(F: HomPoly, tol: ToleranceProfile = DEFAULT_TOL) -> NodalReport:
    """Nodality of F * Z, or of F itself when the line at infinity already divides F."""
    G = F if _is_z_multiple(F) else F * HomPoly.var(2)
    return is_nodal(G, tol)


@dataclass(frozen=True)
class CurveTopology:
    delta: int
    genera: tuple[int, ...]
    own_nodes: tuple[int, ...]
    euler_characteristic: int
    milnor_sum: int
    expected_cs: int
    degree: int
    degrees: tuple[int, ...] = field(default=())


def topology_of_nodal(curve: AlgebraicCurve, tol: ToleranceProfile = DEFAULT_TOL) -> CurveTopology:
    """Euler characteristic and the global Camacho-Sad value 3 deg - chi + sum(mu).

    mu counts 1 per node (the Milnor number of the nodal germ), which makes
    the global value equal to deg^2.
    """
    if curve.is_trivial():
        return CurveTopology(0, (), (), 0, 0, 0, 0, ())
    report = is_nodal(curve.F, tol)
    if not report.nodal:
        raise ValueError(f"curve is not nodal: {report.reason}")
    delta = len(report.points)
    own = []
    genera = []
    for comp in curve.components:
        m = comp.degree
        d_i = len(curve_singular_points(comp, tol)) if m >= 2 else 0
        own.append(d_i)
        genera.append((m - 1) * (m - 2) // 2 - d_i)
    chi = sum(2 - 2 * g for g in genera) - delta
    mu = delta
    d = curve.degree
    return CurveTopology(delta, tuple(genera), tuple(own), chi, mu, 3 * d - chi + mu, d,
                         curve.degrees)
