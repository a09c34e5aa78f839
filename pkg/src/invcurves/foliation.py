"""Vector fields, affine and homogeneous 1-forms, and the passages between them.

A planar field (P, Q) corresponds to the affine form P dy - Q dx. Its
extension to the projective plane is a homogeneous form
Omega = A dX + B dY + C dZ satisfying X*A + Y*B + Z*C = 0. Restricting Omega
to a chart (two remaining coordinates (a, b) in order) gives the form
Omega_a da + Omega_b db, whose associated field is (Omega_b, -Omega_a).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .numkernel import DEFAULT_TOL, ToleranceProfile
from .polycore import (
    AffinePoly,
    HomPoly,
    chart_index,
    dehomogenize,
    divide_exact,
    homogenize,
    parse_poly,
    remainder_is_zero,
)
from .polycore.coeffs import cabs

__all__ = [
    "VectorField", "AffineOneForm", "HomOneForm", "LMNRep", "CurveWitness",
    "ProjectiveConditionError", "projectivize", "chart_forms", "restrict_to_chart",
    "lmn_from_form", "form_from_lmn", "is_line_at_infinity_invariant",
    "check_curve_invariant", "set_form_observer", "strip_line_factor", "chart_form",
]

FLOAT_PROJECTIVE_EPS = 1e-9


class ProjectiveConditionError(ValueError):
    pass


@dataclass(frozen=True)
class VectorField:
    """P d/dx + Q d/dy with ambient degree bound n >= max(deg P, deg Q)."""

    P: AffinePoly
    Q: AffinePoly
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("degree bound must be non-negative")
        if self.P.degree > self.n or self.Q.degree > self.n:
            raise ValueError(
                f"field degree {max(self.P.degree, self.Q.degree)} exceeds bound n={self.n}")

    @classmethod
    def of(cls, P: AffinePoly, Q: AffinePoly, n: int | None = None) -> "VectorField":
        if n is None:
            n = max(P.degree, Q.degree, 0)
        return cls(P, Q, n)

    @classmethod
    def parse(cls, p_text: str, q_text: str, n: int | None = None, exact: bool = True,
              bindings=None) -> "VectorField":
        return cls.of(parse_poly(p_text, "affine", bindings, exact),
                      parse_poly(q_text, "affine", bindings, exact), n)

    @property
    def exact(self) -> bool:
        return self.P.exact and self.Q.exact

    def to_form(self) -> "AffineOneForm":
        return AffineOneForm(dx=-self.Q, dy=self.P)

    def scale(self, c) -> "VectorField":
        return VectorField(self.P.scale(c), self.Q.scale(c), self.n)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero()

    def __str__(self):
        return f"P={self.P}, Q={self.Q}, n={self.n}"


@dataclass(frozen=True)
class AffineOneForm:
    """dx * (coefficient) + dy * (coefficient)."""

    dx: AffinePoly
    dy: AffinePoly

    def vector_field(self, n: int | None = None) -> VectorField:
        return VectorField.of(self.dy, -self.dx, n)


_observer: Callable[["HomOneForm"], None] | None = None


def set_form_observer(fn: Callable[["HomOneForm"], None] | None):
    """Install a callback invoked on every constructed HomOneForm (used for audits)."""
    global _observer
    _observer = fn


def _euler_contraction(P: HomPoly, Q: HomPoly, R: HomPoly) -> HomPoly:
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    return X * P + Y * Q + Z * R


class HomOneForm:
    """Omega = P dX + Q dY + R dZ, coefficients homogeneous of degree n+1.

    The projective condition is verified on construction: exactly for exact
    coefficients, relative to the coefficient size otherwise.
    """

    __slots__ = ("P", "Q", "R", "coeff_degree")

    def __init__(self, P: HomPoly, Q: HomPoly, R: HomPoly):
        degs = {P.degree, Q.degree, R.degree}
        if len(degs) != 1:
            raise ValueError(f"coefficients must share a declared degree, got {sorted(degs)}")
        d = degs.pop()
        if d < 1:
            raise ValueError("coefficient degree must be at least 1")
        self.P, self.Q, self.R = P, Q, R
        self.coeff_degree = d
        e = _euler_contraction(P, Q, R)
        if not e.is_zero():
            if self.exact:
                raise ProjectiveConditionError(f"X*P + Y*Q + Z*R = {e} is not zero")
            if e.max_abs() > FLOAT_PROJECTIVE_EPS * max(self.max_abs(), 1e-300):
                raise ProjectiveConditionError(
                    f"projective condition violated (residual {e.max_abs():.3e})")
        if _observer is not None:
            _observer(self)

    @property
    def degree(self) -> int:
        """Foliation degree n."""
        return self.coeff_degree - 1

    @property
    def exact(self) -> bool:
        return self.P.exact and self.Q.exact and self.R.exact

    @property
    def backend(self) -> str:
        return "exact" if self.exact else "float"

    def components(self) -> tuple[HomPoly, HomPoly, HomPoly]:
        return (self.P, self.Q, self.R)

    def max_abs(self) -> float:
        return max(p.max_abs() for p in self.components())

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components())

    def scale(self, c) -> "HomOneForm":
        return HomOneForm(*(p.scale(c) for p in self.components()))

    def to_float(self) -> "HomOneForm":
        return HomOneForm(*(p.to_float() for p in self.components()))

    def compose_linear(self, A, A_inv_T=None) -> "HomOneForm":
        """Pull back by the linear map v -> A v.

        The pulled-back coefficients are A^T (Omega o A).
        """
        comps = [p.compose_linear(A) for p in self.components()]
        out = []
        for j in range(3):
            acc = HomPoly.zero(self.coeff_degree)
            for i in range(3):
                if A[i][j] != 0:
                    acc = acc + comps[i].scale(A[i][j])
            out.append(acc)
        return HomOneForm(*out)

    def evaluate(self, point):
        return tuple(p.to_float()(point) for p in self.components())

    def equivalent(self, other: "HomOneForm", tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        """Same foliation: other = c * self for a nonzero scalar c."""
        if self.coeff_degree != other.coeff_degree:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        mine = [(k, e, c) for k, p in enumerate(self.components()) for e, c in p.sorted_terms()]
        theirs = {(k, e): c for k, p in enumerate(other.components()) for e, c in p.terms.items()}
        if self.exact and other.exact:
            k0, e0, c0 = mine[0]
            if (k0, e0) not in theirs:
                return False
            ratio = theirs[(k0, e0)] / c0
            mine_d = {(k, e): c * ratio for k, e, c in mine}
            return mine_d == theirs
        # float: align on the largest coefficient of self
        k0, e0, c0 = max(mine, key=lambda t: cabs(t[2]))
        if (k0, e0) not in theirs:
            return False
        ratio = complex(theirs[(k0, e0)]) / complex(c0)
        scale = max(cabs(c) for c in theirs.values())
        keys = {(k, e) for k, e, _ in mine} | set(theirs)
        mine_d = {(k, e): complex(c) * ratio for k, e, c in mine}
        return all(abs(mine_d.get(key, 0) - complex(theirs.get(key, 0))) <= tol.eps_eq * scale
                   for key in keys)

    def __eq__(self, other):
        if not isinstance(other, HomOneForm):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def to_json(self) -> dict:
        return {"P": str(self.P), "Q": str(self.Q), "R": str(self.R),
                "degree": self.coeff_degree, "backend": self.backend}

    @classmethod
    def from_json(cls, data: dict) -> "HomOneForm":
        d = int(data["degree"])
        exact = data.get("backend", "exact") != "float"
        parts = [parse_poly(data[k], "homogeneous", exact=exact, degree=d) for k in ("P", "Q", "R")]
        return cls(*parts)

    def __repr__(self):
        return f"HomOneForm(P={self.P}, Q={self.Q}, R={self.R})"


@dataclass(frozen=True)
class LMNRep:
    L: HomPoly
    M: HomPoly
    N: HomPoly


@dataclass(frozen=True)
class CurveWitness:
    """Quotients (dF ^ Omega)/F in the basis dY^dZ, dZ^dX, dX^dY."""

    alpha: tuple[HomPoly, HomPoly, HomPoly]
    residual: float


# -- constructors ----------------------------------------------------------------


def form_from_lmn(L: HomPoly, M: HomPoly, N: HomPoly) -> HomOneForm:
    """Omega = (YN - ZM) dX + (ZL - XN) dY + (XM - YL) dZ."""
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    return HomOneForm(Y * N - Z * M, Z * L - X * N, X * M - Y * L)


def projectivize(v: VectorField) -> HomOneForm:
    """Homogeneous form of the extension: L = Z^n P(X/Z, Y/Z), M = Z^n Q(X/Z, Y/Z)."""
    L = homogenize(v.P, v.n)
    M = homogenize(v.Q, v.n)
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    return HomOneForm(-(Z * M), Z * L, X * M - Y * L)


def chart_forms(v: VectorField) -> tuple[AffineOneForm, AffineOneForm]:
    """The extension's forms on U_X (coords (Y/X, Z/X)) and U_Y (coords (X/Y, Z/Y)).

    omega_X = (M1 - x1 L1) dy1 + y1 L1 dx1 and
    omega_Y = (x2 M2 - L2) dy2 - y2 M2 dx2; both equal the plain pullback of
    projectivize(v) to the chart (monomial factor 1).
    """
    L = homogenize(v.P, v.n)
    M = homogenize(v.Q, v.n)
    x, y = AffinePoly.x(), AffinePoly.y()
    # L1(x1, y1) = L(1, x1, y1); L2(x2, y2) = L(x2, 1, y2)
    L1, M1 = dehomogenize(L, "X"), dehomogenize(M, "X")
    L2, M2 = dehomogenize(L, "Y"), dehomogenize(M, "Y")
    omega_x = AffineOneForm(dx=y * L1, dy=M1 - x * L1)
    omega_y = AffineOneForm(dx=-(y * M2), dy=x * M2 - L2)
    return omega_x, omega_y


# -- chart restriction and LMN ------------------------------------------------------


def chart_form(omega: HomOneForm, chart) -> AffineOneForm:
    """Pullback of Omega to the chart: Omega_a da + Omega_b db at the chart point."""
    k = chart_index(chart)
    a, b = [i for i in range(3) if i != k]
    comps = omega.components()
    return AffineOneForm(dx=dehomogenize(comps[a], k), dy=dehomogenize(comps[b], k))


def restrict_to_chart(omega: HomOneForm, chart="Z", tol: ToleranceProfile = DEFAULT_TOL) -> VectorField:
    """Planar field of Omega in a chart.

    In chart Z this is (P - xR, Q - yR) with (P, Q, R) = (L, M, N)(x, y, 1);
    the same field is read off directly as (Omega_Y, -Omega_X)(x, y, 1), which
    does not depend on the gauge. The degree bound is n when the removed line
    is invariant and n+1 otherwise.
    """
    _check_projective(omega)
    k = chart_index(chart)
    f = chart_form(omega, k)
    n = omega.degree
    field_P, field_Q = f.dy, -f.dx
    bound = n if _line_invariant(omega, k, tol) else n + 1
    deg = max(field_P.degree, field_Q.degree)
    return VectorField(field_P, field_Q, max(bound, deg, 0))


def _check_projective(omega: HomOneForm):
    e = _euler_contraction(*omega.components())
    if e.is_zero():
        return
    if omega.exact or e.max_abs() > FLOAT_PROJECTIVE_EPS * max(omega.max_abs(), 1e-300):
        raise ProjectiveConditionError("projective condition violated")


def _shift_down(p: HomPoly, var: int, tol_abs: float, exact: bool):
    """(p / var, leftover terms not divisible by var)."""
    q, rest = {}, {}
    for e, c in p.terms.items():
        if e[var] > 0:
            ne = list(e)
            ne[var] -= 1
            q[tuple(ne)] = c
        else:
            rest[e] = c
    return HomPoly(q, max(p.degree - 1, 0)), HomPoly(rest, p.degree)


def lmn_from_form(omega: HomOneForm, tol: ToleranceProfile = DEFAULT_TOL) -> LMNRep:
    """A triple (L, M, N) with P = YN - ZM, Q = ZL - XN, R = XM - YL.

    Solutions differ by (X, Y, Z)*H; N is fixed modulo Z by N(X, Y, 0) =
    P(X, Y, 0)/Y, and taking N free of Z-monomials selects the unique
    solution. That N is also the minimum-norm one, since Z*H is orthogonal to
    Z-free monomials in coefficient space, so exact and float runs agree.
    """
    P, Q, R = omega.components()
    n = omega.degree
    if omega.is_zero():
        z = HomPoly.zero(n)
        return LMNRep(z, z, z)
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    exact = omega.exact
    scale = omega.max_abs()
    at_inf = HomPoly({e: c for e, c in P.terms.items() if e[2] == 0}, P.degree)
    N, rest = _shift_down(at_inf, 1, 0.0, exact)
    bad = [rest]
    Lz, rL = _shift_down(Q + X * N, 2, 0.0, exact)
    Mz, rM = _shift_down(Y * N - P, 2, 0.0, exact)
    bad += [rL, rM]
    recon = X * Mz - Y * Lz - R
    bad.append(recon)
    for r in bad:
        if r.is_zero():
            continue
        if exact or r.max_abs() > 10 * FLOAT_PROJECTIVE_EPS * max(scale, 1e-300):
            raise ProjectiveConditionError("no (L, M, N) representation: the form is not projective")
    return LMNRep(Lz, Mz, N)


def _line_invariant(omega: HomOneForm, var: int, tol: ToleranceProfile) -> bool:
    # the coordinate line {var = 0} is invariant iff var divides the other two coefficients
    others = [i for i in range(3) if i != var]
    comps = omega.components()
    scale = max(omega.max_abs(), 1e-300)
    for i in others:
        rest = [c for e, c in comps[i].terms.items() if e[var] == 0]
        if not rest:
            continue
        if omega.exact or max(cabs(c) for c in rest) > tol.eps_eq * scale:
            return False
    return True


def strip_line_factor(omega: HomOneForm, var: int = 2,
                      tol: ToleranceProfile = DEFAULT_TOL) -> tuple[HomOneForm, int]:
    """Divide out the largest power of the coordinate ``var`` common to P, Q, R.

    A field whose top-degree part is radial (x Q_n = y P_n) projectivizes to a
    form divisible by Z; the quotient is the saturated representative.
    """
    k = 0
    while omega.degree > 0 and not omega.is_zero():
        scale = max(omega.max_abs(), 1e-300)
        parts = [_shift_down(c, var, 0.0, omega.exact) for c in omega.components()]
        if any(not rest.is_zero() and (omega.exact or rest.max_abs() > tol.eps_eq * scale)
               for _, rest in parts):
            break
        omega = HomOneForm(*(q for q, _ in parts))
        k += 1
    return omega, k


def is_line_at_infinity_invariant(obj, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True iff Z = 0 is invariant for the saturated foliation."""
    omega = projectivize(obj) if isinstance(obj, VectorField) else obj
    omega, _ = strip_line_factor(omega, 2, tol)
    return _line_invariant(omega, 2, tol)


def wedge_with_curve(omega: HomOneForm, F: HomPoly):
    """Components of dF ^ Omega in the basis dY^dZ, dZ^dX, dX^dY."""
    P, Q, R = omega.components()
    Fx, Fy, Fz = F.diff(0), F.diff(1), F.diff(2)
    return (Fy * R - Fz * Q, Fz * P - Fx * R, Fx * Q - Fy * P)


def check_curve_invariant(omega: HomOneForm, F: HomPoly,
                          tol: ToleranceProfile = DEFAULT_TOL) -> CurveWitness | None:
    """The 2-form alpha with dF ^ Omega = F alpha when F = 0 is invariant, else None."""
    if F.degree <= 0:
        raise ValueError("curve must have positive degree")
    if F.is_zero():
        raise ValueError("zero polynomial does not define a curve")
    quots = []
    worst = 0.0
    fn = F.max_abs()
    for w in wedge_with_curve(omega, F):
        if w.is_zero():
            quots.append(HomPoly.zero(max(w.degree - F.degree, 0)))
            continue
        q, r = divide_exact(w, F)
        if not remainder_is_zero(r, w, None, tol.eps_eq * max(1.0, fn)):
            # relative to the size of the wedge coefficients
            return None
        worst = max(worst, r.max_abs())
        quots.append(q)
    return CurveWitness(tuple(quots), worst)
