"""Explicit foliation families with expected-value fixtures.

Fixture entries carry a provenance tag: ``paper`` for closed forms known in
advance, ``derived`` for values obtained through this package's own pipeline.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .foliation import HomOneForm, form_from_lmn
from .points import ProjectivePoint
from .polycore import HomPoly
from .polycore.coeffs import is_exact

__all__ = [
    "KolmogorovParams", "Fixture", "FixtureEntry", "kolmogorov", "kolmogorov_fixture",
    "logarithmic", "jouanolou", "DEFAULT_A0", "GALLERY",
    "kolmogorov_b0_relations", "kolmogorov_b0_numeric",
]

DEFAULT_A0 = -(2 ** 0.25)


@dataclass(frozen=True)
class KolmogorovParams:
    n: int = 2
    a0: complex = DEFAULT_A0
    b: complex = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Kolmogorov family needs n >= 2")
        a0 = complex(self.a0)
        if a0 == 0:
            raise ValueError("a0 must be nonzero")
        vals = [1, a0, 1 / a0]
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(vals[i] - vals[j]) < 1e-12:
                    raise ValueError("1, a0 and 1/a0 must be pairwise distinct")


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    value: object
    provenance: str  # "paper" or "derived"


@dataclass
class Fixture:
    entries: list[FixtureEntry] = field(default_factory=list)
    tolerance: float = 1e-9

    def add(self, name, value, provenance):
        self.entries.append(FixtureEntry(name, value, provenance))

    def get(self, name):
        for e in self.entries:
            if e.name == name:
                return e.value
        raise KeyError(name)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, ProjectivePoint):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v
        return {"tolerance": self.tolerance,
                "entries": [{"name": e.name, "value": enc(e.value), "provenance": e.provenance}
                            for e in self.entries]}


def _coef(v):
    """Keep exact inputs exact; complex with zero imaginary part becomes float."""
    if is_exact(v):
        return Fraction(v) if not hasattr(v, "im") else v
    v = complex(v)
    return v.real if v.imag == 0 else v


def _shifted_exactly(v, shift):
    """(v', v' + shift) with the sum exact in binary; v' differs from v by an ulp at most."""
    if is_exact(v):
        return v, v + shift
    if isinstance(v, complex):
        re, s_re = _shifted_exactly(v.real, shift)
        return complex(re, v.imag), complex(s_re, v.imag)
    t = v + shift
    v2 = t - shift
    if Fraction(v2) + shift == Fraction(t):
        return v2, t
    return v, t


def kolmogorov(params: KolmogorovParams = KolmogorovParams()) -> HomOneForm:
    """The family
    yz(b x^{n-1} - y^{n-1} + z^{n-1}) dX + xz(x^{n-1} - b y^{n-1} - a0 z^{n-1}) dY
    + xy(-(b+1) x^{n-1} + (b+1) y^{n-1} + (a0-1) z^{n-1}) dZ.
    """
    n = params.n
    a0 = _coef(params.a0)
    b = _coef(params.b)
    m = n - 1
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    Xm, Ym, Zm = X ** m, Y ** m, Z ** m
    # a0 and b are nudged by at most an ulp so that a0-1 and b+1 are exact and the
    # Euler contraction cancels exactly in floats
    b, bp1 = _shifted_exactly(b, 1)
    a0, a0m1 = _shifted_exactly(a0, -1)
    P = Y * Z * (Xm.scale(b) - Ym + Zm)
    Q = X * Z * (Xm - Ym.scale(b) - Zm.scale(a0))
    R = X * Y * (Xm.scale(-bp1) + Ym.scale(bp1) + Zm.scale(a0m1))
    return HomOneForm(P, Q, R)


def _roots_of_unity(m: int):
    return [cmath.exp(2j * math.pi * k / m) for k in range(m)]


def _principal_root(a: complex, m: int) -> complex:
    # principal branch, argument in (-pi, pi]
    return cmath.exp(cmath.log(complex(a)) / m)


def kolmogorov_fixture(params: KolmogorovParams = KolmogorovParams()) -> Fixture:
    n, a0, b = params.n, complex(params.a0), complex(params.b)
    m = n - 1
    fx = Fixture()
    fx.add("count", n * n + n + 1, "paper")
    fx.add("corner_points", [ProjectivePoint.from_coords(c) for c in
                             ((0, 0, 1), (0, 1, 0), (1, 0, 0))], "paper")
    fx.add("corner_quotients", {
        "[0:0:1]": (a0, 1 / a0),
        "[0:1:0]": (1 + b, 1 / (1 + b)),
        "[1:0:0]": (1 + b, 1 / (1 + b)),
    }, "paper")
    zeta = _roots_of_unity(m)
    t = _principal_root(a0, m)
    fx.add("type_II_points", {
        "x": [ProjectivePoint.from_coords((0, 1, z)) for z in zeta],
        "y": [ProjectivePoint.from_coords((t * z, 0, 1)) for z in zeta],
        "z": [ProjectivePoint.from_coords((1, z, 0)) for z in zeta],
    }, "paper")
    # (index along the line, index transverse to it)
    fx.add("type_II_indices", {
        "x": (-(a0 + b) / m, -m / (a0 + b)),
        "y": (-(1 + a0 * b) / (m * a0), -m * a0 / (1 + a0 * b)),
        "z": (-(1 - b) / (m * (1 + b)), -m * (1 + b) / (1 - b)),
    }, "paper")
    if b == 0:
        fx.add("type_III_points", [ProjectivePoint.from_coords((t * zi, zj, 1))
                                   for zi in zeta for zj in zeta], "paper")
        fx.add("type_III_quotients", (a0, 1 / a0), "paper")
    return fx


def kolmogorov_b0_relations(n: int):
    """Non-negative integer (alpha1, alpha2, beta, k) solving the b = 0 relations.

    With b = 0 the transverse type-II indices are -(n-1)/a0, -(n-1)a0 and
    -(n-1), and the type-III slots are a0 and 1/a0. When 1, a0, 1/a0 are
    linearly independent over Z the equality sigma_A = k^2 - beta splits into
        k^2 - beta = -k(n-1),  alpha1 + beta = k(n-1),  alpha2 + beta = k(n-1).
    Enumerates every admissible count (k <= n-1, alpha1 + alpha2 + beta <= (n-1)^2).
    """
    m = n - 1
    n3 = m * m
    out = []
    for k in range(m + 1):
        for beta in range(n3 + 1):
            for a1 in range(n3 - beta + 1):
                for a2 in range(n3 - beta - a1 + 1):
                    if (k * k - beta == -k * m and a1 + beta == k * m and a2 + beta == k * m):
                        out.append((a1, a2, beta, k))
    return out


def kolmogorov_b0_numeric(n: int, a0: complex = DEFAULT_A0, eps: float = 1e-9):
    """Count tuples whose closed-form sigma equals k^2 - beta within eps (numerically)."""
    m = n - 1
    n3 = m * m
    a0 = complex(a0)
    hits = []
    best = math.inf
    for k in range(m + 1):
        for beta in range(n3 + 1):
            for a1 in range(n3 - beta + 1):
                for a2 in range(n3 - beta - a1 + 1):
                    s = (a1 * a0 + a2 / a0 + beta * (a0 + 1 / a0)
                         + k * (-m * a0 - m / a0 - m))
                    d = abs(s - (k * k - beta))
                    if (a1, a2, beta, k) != (0, 0, 0, 0):
                        best = min(best, d)
                    if d <= eps:
                        hits.append((a1, a2, beta, k))
    return hits, best


def logarithmic(lines, weights, check_invariance: bool = True) -> HomOneForm:
    """(prod L_i) * sum(lambda_i dL_i / L_i), expanded.

    The weights must sum to zero, otherwise the Euler contraction equals
    (prod L_i) * sum(lambda_i) and the form is not projective.
    """
    lines = list(lines)
    weights = list(weights)
    if len(lines) != len(weights):
        raise ValueError("one weight per line")
    k = len(lines)
    if k < 2:
        raise ValueError("at least two lines are needed")
    for L in lines:
        if L.degree != 1 or L.is_zero():
            raise ValueError("every L_i must be a nonzero linear form")
    vecs = [[L.coeff(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for L in lines]
    for i in range(k):
        for j in range(i + 1, k):
            u, v = vecs[i], vecs[j]
            cross = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if all(abs(complex(c)) == 0 for c in cross):
                raise ValueError(f"lines {i} and {j} are proportional")
    total = sum(weights[1:], weights[0])
    if (total != 0) if all(is_exact(w) for w in weights) else abs(complex(total)) > 1e-12:
        raise ValueError(f"weights must sum to zero (sum is {total})")
    if k == 2:
        warnings.warn("two lines give a degenerate pencil (degree-0 foliation)", stacklevel=2)
    comps = []
    for axis in range(3):
        acc = HomPoly.zero(k - 1)
        for i in range(k):
            c = vecs[i][axis]
            if c == 0 or weights[i] == 0:
                continue
            prod = HomPoly.constant(1)
            for j in range(k):
                if j != i:
                    prod = prod * lines[j]
            acc = acc + prod.scale(weights[i] * c)
        comps.append(acc)
    omega = HomOneForm(*comps)
    if check_invariance:
        from .foliation import check_curve_invariant
        for L in lines:
            if check_curve_invariant(omega, L) is None:
                raise ArithmeticError(f"line {L} is not invariant: construction error")
    return omega


def jouanolou(n: int = 2) -> HomOneForm:
    """Jouanolou's degree-n foliation, given by (L, M, N) = (Y^n, Z^n, X^n).

    Its chart Z restriction is x' = y^n - x^(n+1), y' = 1 - x^n y, the classical
    affine representative (J.-P. Jouanolou, Equations de Pfaff algebriques,
    Lecture Notes in Math. 708, 1979).
    """
    if n < 2:
        raise ValueError("Jouanolou family needs n >= 2")
    X, Y, Z = HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)
    return form_from_lmn(Y ** n, Z ** n, X ** n)


GALLERY = {
    "kolmogorov": kolmogorov,
    "jouanolou": jouanolou,
    "logarithmic": logarithmic,
}
