"""Invariant-curve search through the cofactor equation P G_x + Q G_y = K G, and
a seeded sampling experiment that cross-checks the obstruction certificates.

Lines are found exhaustively (a polynomial system in the line parameters).
Curves of higher degree come from a multi-start Gauss-Newton solve of the
bilinear coefficient system; that search is heuristic and says so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from .curves import AlgebraicCurve, cofactor
from .foliation import (
    VectorField, is_line_at_infinity_invariant, projectivize, strip_line_factor,
)
from .numkernel import DEFAULT_TOL, InfiniteSolutionSet, ToleranceProfile, solve_bivariate, univariate_roots
from .points import relative_value
from .polycore import AffinePoly, GaussQ, HomPoly, Poly, format_poly, gcd_exact, homogenize, monomials

__all__ = [
    "CurveSearchSpec", "FoundCurve", "Pencil", "SearchResult", "SampleSpec", "ExperimentReport",
    "find_invariant_lines", "find_invariant_curves", "extactic_value", "extactic_residual",
    "extactic_vanishes",
    "sample_field", "sample_experiment",
]


@dataclass(frozen=True)
class CurveSearchSpec:
    max_degree: int = 2
    method: str = "bilinear_numeric"
    excluded: tuple = ()
    tol: ToleranceProfile = DEFAULT_TOL
    starts: int = 8
    top_restarts: int = 3
    seed: int = 0
    extactic_filter: bool = True

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be >= 1")
        if self.method not in ("exact_lines", "bilinear_numeric"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class FoundCurve:
    G: HomPoly
    affine: AffinePoly | None
    K: AffinePoly | None
    residual: float

    @property
    def degree(self) -> int:
        return self.G.degree

    def to_json(self) -> dict:
        return {"G": str(self.G), "affine": None if self.affine is None else str(self.affine),
                "cofactor": None if self.K is None else str(self.K), "residual": self.residual}


@dataclass(frozen=True)
class Pencil:
    """A one-parameter family of invariant lines, zero set of ``condition`` in the line parameters."""

    kind: str        # "vertical" or "slope" (y = a x + b)
    condition: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "condition": self.condition}


@dataclass
class SearchResult:
    curves: list[FoundCurve] = field(default_factory=list)
    complete: bool = False
    method: str = ""
    pencils: list[Pencil] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def affine_curves(self) -> list[FoundCurve]:
        return [c for c in self.curves if c.affine is not None]

    def to_json(self) -> dict:
        return {"method": self.method, "complete": self.complete,
                "curves": [c.to_json() for c in self.curves],
                "pencils": [p.to_json() for p in self.pencils], "notes": list(self.notes)}


# -- lines ---------------------------------------------------------------------------


def _rationalize(z: complex, den: int = 1000):
    re = Fraction(z.real).limit_denominator(den)
    im = Fraction(z.imag).limit_denominator(den)
    return re if im == 0 else GaussQ(re, im)


def _verify_line(v: VectorField, G_float: AffinePoly, G_exact: AffinePoly | None, tol):
    """Prefer an exactly verified rationalized line; fall back to the float one."""
    if G_exact is not None:
        k = cofactor(v, G_exact, tol)
        if k is not None:
            return G_exact, k
    vf = VectorField(v.P.to_float(), v.Q.to_float(), v.n)
    k = cofactor(vf, G_float, tol)
    if k is not None:
        return G_float, k
    return None, None


def _in_ab(p) -> str:
    return format_poly(Poly(dict(p.terms), 2, ("a", "b")))


def _x_coeffs_in_ab(v: VectorField):
    """Coefficients in x of Q(x, a x + b) - a P(x, a x + b), as polynomials in (a, b)."""
    names = ("x", "a", "b")
    x, a, b = (Poly.variable(i, 3, names) for i in range(3))
    target = Poly.constant(0, 3, names)
    sub = [x, a * x + b]
    E = v.Q.substitute(sub, target) - a * v.P.substitute(sub, target)
    by_k: dict[int, dict] = {}
    for e, c in E.terms.items():
        by_k.setdefault(e[0], {})[(e[1], e[2])] = c
    return [AffinePoly(t) for _, t in sorted(by_k.items())]


def _common_zeros(polys: list[AffinePoly], tol, rng_seed: int = 7):
    """Isolated common zeros of a polynomial list; returns (points, gcd factor or None)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return [], "all"
    factor = None
    exact = all(p.exact for p in polys)
    if exact:
        g = polys[0]
        for p in polys[1:]:
            g = gcd_exact(g, p)
            if g.is_constant():
                break
        if not g.is_constant():
            factor = g
            from .polycore import divide_exact
            polys = [divide_exact(p, g)[0] for p in polys]
    nonconst = [p for p in polys if not p.is_constant()]
    if len(nonconst) < len(polys):
        return [], factor  # a nonzero constant in the system
    if len(polys) == 1:
        # a single non-constant polynomial: its zero set is a curve
        return [], polys[0] if factor is None else factor
    rng = np.random.default_rng(rng_seed)
    last = None
    for _ in range(4):
        if exact:
            c1 = [Fraction(int(t), 97) for t in rng.integers(-60, 61, len(polys))]
            c2 = [Fraction(int(t), 89) for t in rng.integers(-60, 61, len(polys))]
        else:
            c1 = list(rng.normal(size=len(polys)))
            c2 = list(rng.normal(size=len(polys)))
        g1 = AffinePoly()
        g2 = AffinePoly()
        for c, p in zip(c1, polys):
            g1 = g1 + p.scale(c)
        for c, p in zip(c2, polys):
            g2 = g2 + p.scale(c)
        if len(polys) == 2:
            g1, g2 = polys
        try:
            sols = solve_bivariate(g1, g2, tol)
        except InfiniteSolutionSet as exc:
            last = exc
            if len(polys) == 2:
                break
            continue
        pts = []
        for pt, _m in sols:
            if all(relative_value(p, pt) <= 1e3 * tol.eps_eq for p in polys):
                pts.append(pt)
        return pts, factor
    # every combination shares a factor: the solution set is not finite
    return [], (last.factor if last is not None and last.factor is not None else "curve")


def find_invariant_lines(v: VectorField, tol: ToleranceProfile = DEFAULT_TOL,
                         include_infinity: bool = True) -> SearchResult:
    """All invariant lines: x = c, y = a x + b, and Z = 0 in the projective closure."""
    res = SearchResult(method="exact_lines", complete=True)
    seen: list[AffinePoly] = []

    def add(G_float, G_exact):
        G, K = _verify_line(v, G_float, G_exact, tol)
        if G is None:
            res.notes.append(f"candidate {G_float} failed cofactor re-verification")
            return
        for H in seen:
            if _proportional(H, G):
                return
        seen.append(G)
        res.curves.append(FoundCurve(homogenize(G, 1), G, K.K, 0.0))

    # vertical lines: P(c, y) = 0 for all y
    if v.P.is_zero():
        res.pencils.append(Pencil("vertical", "every vertical line x = c"))
    else:
        cols: dict[int, dict] = {}
        for e, c in v.P.terms.items():
            cols.setdefault(e[1], {})[(e[0], 0)] = c
        polys = [AffinePoly(t) for _, t in sorted(cols.items())]
        for c in _vertical_roots(polys, tol):
            x = AffinePoly.x()
            G_exact = x - _rationalize(c) if v.exact else None
            add(x - AffinePoly.constant(c), G_exact)
    # non-vertical lines
    coeffs = _x_coeffs_in_ab(v)
    pts, factor = _common_zeros(coeffs, tol)
    if factor == "all":
        res.pencils.append(Pencil("slope", "every line y = a x + b"))
    elif factor is not None:
        res.pencils.append(Pencil("slope", f"{_in_ab(factor)} = 0 for lines y = a x + b"))
        res.complete = not isinstance(factor, str)
    for a, b in pts:
        x, y = AffinePoly.x(), AffinePoly.y()
        G_float = y - x.scale(complex(a)) - AffinePoly.constant(complex(b))
        G_exact = None
        if v.exact:
            G_exact = y - x.scale(_rationalize(a)) - AffinePoly.constant(_rationalize(b))
        add(G_float, G_exact)
    if include_infinity and is_line_at_infinity_invariant(v, tol):
        res.curves.append(FoundCurve(HomPoly.var(2), None, None, 0.0))
    return res


def _vertical_roots(polys: list[AffinePoly], tol) -> list[complex]:
    if any(p.is_constant() and not p.is_zero() for p in polys):
        return []
    if all(p.exact for p in polys):
        g = polys[0]
        for p in polys[1:]:
            g = gcd_exact(g, p)
        cand = g
        check = [cand]
    else:
        cand = min(polys, key=lambda p: p.degree)
        check = polys
    if cand.is_constant():
        return []
    cs = cand.univariate_coeffs(0, 0)
    out = []
    for r in univariate_roots(cs, tol):
        if all(relative_value(p, (r.value, 0)) <= 1e3 * tol.eps_eq for p in check):
            out.append(r.value)
    return out


def _proportional(A: Poly, B: Poly, eps: float = 1e-9) -> bool:
    if set(A.terms) != set(B.terms):
        # tiny float coefficients may differ in support
        keys = set(A.terms) | set(B.terms)
    else:
        keys = set(A.terms)
    keys = sorted(keys)
    a = np.array([complex(A.coeff(k)) for k in keys])
    b = np.array([complex(B.coeff(k)) for k in keys])
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return na == nb
    ov = abs(np.vdot(a, b)) / (na * nb)
    return 1 - ov <= eps


# -- bilinear curve search ---------------------------------------------------------------


class _Bilinear:
    """Residual r(g, k) = (A - sum_j k_j S_j) g of the cofactor equation on monomial bases."""

    def __init__(self, v: VectorField, d: int):
        self.gb = monomials(2, d)
        self.kb = monomials(2, max(v.n - 1, 0))
        self.rb = monomials(2, d + max(v.n - 1, 0))
        pos = {e: i for i, e in enumerate(self.rb)}
        P, Q = v.P.to_float(), v.Q.to_float()
        A = np.zeros((len(self.rb), len(self.gb)), dtype=complex)
        for j, e in enumerate(self.gb):
            m = AffinePoly({e: 1})
            t = P * m.diff(0) + Q * m.diff(1)
            for ee, c in t.terms.items():
                A[pos[ee], j] += complex(c)
        S = np.zeros((len(self.kb), len(self.rb), len(self.gb)))
        for i, ek in enumerate(self.kb):
            for j, eg in enumerate(self.gb):
                S[i, pos[(ek[0] + eg[0], ek[1] + eg[1])], j] = 1.0
        self.A, self.S = A, S
        self._S2 = S.reshape(len(self.kb), -1)
        self.scale = max(1.0, float(np.abs(A).max()))

    def M(self, k):
        return self.A - (k @ self._S2).reshape(self.A.shape)

    def dk(self, g):
        """Jacobian of the residual with respect to k."""
        return -(self.S @ g).T

    def residual(self, g, k):
        return self.M(k) @ g


def _gauss_newton(bl: _Bilinear, g, k, c=None, free=None, iters: int = 60):
    """Damped Gauss-Newton on r(g, k) = 0, plus the row c.g = 1 when c is given.

    ``free`` masks the unknowns (g then k) that may move; the rest stay fixed.
    """
    nG = len(g)
    mask = np.ones(nG + len(k), dtype=bool) if free is None else np.asarray(free)
    lam = 1e-3

    def full(gg, kk):
        r = bl.residual(gg, kk)
        return r if c is None else np.concatenate([r, [c @ gg - 1]])

    r = full(g, k)
    cost = np.linalg.norm(r)
    slow = 0
    for _ in range(iters):
        if not np.isfinite(cost) or cost > 1e100:
            break  # diverged start
        before = cost
        J = np.zeros((len(r), nG + len(k)), dtype=complex)
        nr = len(bl.rb)
        J[:nr, :nG] = bl.M(k)
        J[:nr, nG:] = bl.dk(g)
        if c is not None:
            J[-1, :nG] = c
        J = J[:, mask]
        H = J.conj().T @ J
        grad = J.conj().T @ r
        while True:
            try:
                sub = np.linalg.solve(H + lam * np.diag(np.diag(H).real + 1e-12), -grad)
            except np.linalg.LinAlgError:
                return g, k, cost
            step = np.zeros(nG + len(k), dtype=complex)
            step[mask] = sub
            g2, k2 = g + step[:nG], k + step[nG:]
            with np.errstate(over="ignore", invalid="ignore"):
                r2 = full(g2, k2)
                c2 = np.linalg.norm(r2)
            if c2 < cost:
                g, k, r, cost = g2, k2, r2, c2
                lam = max(lam / 10, 1e-12)
                break
            lam *= 10
            if lam > 1e10:
                return g, k, cost
        if cost <= 1e-14 * bl.scale:
            break
        # give up on starts that stall far from a solution
        slow = slow + 1 if cost > 0.9 * before and cost > 1e-6 * bl.scale else 0
        if slow >= 4:
            break
    return g, k, cost


def _poly_from(basis, vec, chop: float) -> AffinePoly:
    vec = np.asarray(vec, dtype=complex)
    top = vec[np.argmax(np.abs(vec))]
    vec = vec / top
    terms = {}
    for e, c in zip(basis, vec):
        if abs(c) <= chop:
            continue
        c = complex(c)
        terms[e] = c.real if abs(c.imag) <= chop else c
    return AffinePoly(terms)


def _extactic_matrix(v: VectorField, d: int, point) -> np.ndarray:
    """Rows: iterated derivatives along v of the monomials of degree <= d, at a point."""
    basis = [AffinePoly({e: 1}) for e in monomials(2, d)]
    P, Q = v.P.to_float(), v.Q.to_float()
    rows = []
    cur = basis
    for _ in range(len(basis)):
        rows.append([complex(m(point)) for m in cur])
        cur = [P * m.diff(0) + Q * m.diff(1) for m in cur]
    return np.array(rows)


def extactic_value(v: VectorField, d: int, point) -> float:
    """Normalized extactic determinant over the monomials of degree <= d at a point.

    An invariant curve of degree <= d divides this determinant. The value is
    |det| over the product of row norms, so it lies in [0, 1].
    """
    M = _extactic_matrix(v, d, point)
    norms = np.linalg.norm(M, axis=1)
    if np.any(norms == 0):
        return 0.0
    return float(abs(np.linalg.det(M)) / np.prod(norms))


def extactic_residual(v: VectorField, G: AffinePoly, point) -> float:
    """|M g| / (sum of |row| * |g|) at a point of G = 0, M the extactic matrix.

    If G is invariant, every derivative of G along v vanishes on G = 0, so
    the coefficient vector g lies in the kernel of M there.
    """
    d = G.degree
    M = _extactic_matrix(v, d, point)
    g = np.array([complex(G.coeff(e)) for e in monomials(2, d)])
    den = float(np.linalg.norm(M, axis=1).sum() * np.linalg.norm(g))
    return float(np.linalg.norm(M @ g) / den) if den else 0.0


def extactic_vanishes(v: VectorField, d: int, samples: int = 4, seed: int = 0,
                      eps: float = 1e-9) -> bool:
    """True when the degree-d extactic is numerically zero at random points.

    Identical vanishing signals infinitely many invariant curves of degree <= d.
    """
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(samples, 2)) + 1j * rng.normal(size=(samples, 2))
    return all(extactic_value(v, d, tuple(p)) <= eps for p in pts)


def _homogeneous_part(p: AffinePoly, t: int) -> AffinePoly:
    return AffinePoly({e: c for e, c in p.terms.items() if sum(e) == t})


def _top_candidates(vf: VectorField, d: int):
    """Possible top-degree parts G_d with their top cofactor part.

    If the line at infinity is invariant, G_d is invariant for the
    top-degree homogeneous field, hence a product of linear factors of
    x Q_m - y P_m. Yields every product of d such factors.
    """
    import itertools

    m = max(vf.P.degree, vf.Q.degree)
    Pm, Qm = _homogeneous_part(vf.P, m), _homogeneous_part(vf.Q, m)
    x, y = AffinePoly.x(), AffinePoly.y()
    B = x * Qm - y * Pm
    if B.is_zero() or B.max_abs() <= 1e-12 * max(vf.P.max_abs(), vf.Q.max_abs(), 1e-300):
        return
    # B(t, 1) in ascending powers of t; a drop in degree means y divides B
    deg = m + 1
    cs = [complex(B.coeff((i, deg - i))) for i in range(deg + 1)]
    top = max(abs(c) for c in cs)
    factors = []
    k = deg
    while k > 0 and abs(cs[k]) <= 1e-12 * top:
        k -= 1
    if k < deg:
        factors.append(y)
    if k > 0:
        for r in univariate_roots(cs[:k + 1]):
            factors.append(x - y.scale(r.value))
    for combo in itertools.combinations_with_replacement(range(len(factors)), d):
        G = AffinePoly.constant(1.0)
        for i in combo:
            G = G * factors[i]
        num = Pm * G.diff(0) + Qm * G.diff(1)
        from .polycore import divide_exact
        K, r = divide_exact(num, G)
        if not r.is_zero() and r.max_abs() > 1e-8 * max(1.0, num.max_abs()):
            continue
        yield G, K


def _graded_solve(vf: VectorField, d: int, Gd: AffinePoly, Km1: AffinePoly):
    """Solve the cofactor equation degree by degree below the fixed top parts."""
    m = max(vf.P.degree, vf.Q.degree)
    P, Q = vf.P, vf.Q
    G, K = Gd, Km1
    for j in range(1, max(d, m - 1) + 1):
        t = m + d - 1 - j
        R = _homogeneous_part(P * G.diff(0) + Q * G.diff(1) - K * G, t)
        cols = []
        gm = monomials(2, d - j, homogeneous=True) if d - j >= 0 else []
        km = monomials(2, m - 1 - j, homogeneous=True) if m - 1 - j >= 0 else []
        out = monomials(2, t, homogeneous=True)
        for e in gm:
            mono = AffinePoly({e: 1.0})
            cols.append(_homogeneous_part(P * mono.diff(0) + Q * mono.diff(1) - K * mono, t))
        for e in km:
            cols.append(_homogeneous_part(-(AffinePoly({e: 1.0}) * G), t))
        if not cols:
            break
        A = np.array([[complex(c.coeff(o)) for c in cols] for o in out])
        rhs = -np.array([complex(R.coeff(o)) for o in out])
        u = np.linalg.lstsq(A, rhs, rcond=None)[0]
        G = G + AffinePoly({e: complex(c) for e, c in zip(gm, u[:len(gm)])})
        K = K + AffinePoly({e: complex(c) for e, c in zip(km, u[len(gm):])})
    return G, K


def _pencil_starts(bl: _Bilinear, g_top, k_top, free, rng):
    """Exact starts when the top parts leave a single free cofactor coefficient.

    Then M(k) g = 0 is a rectangular linear pencil (C0 + t C1) w = 0 in that
    coefficient t, with w = (lower part of g, 1). A random left projection makes
    it square; the eigenvalues that leave the full pencil rank deficient are kept.
    """
    nG = len(g_top)
    gfree, kfree = free[:nG], free[nG:]
    if kfree.sum() != 1 or not gfree.any():
        return []
    i = int(np.flatnonzero(kfree)[0])
    M0 = bl.M(k_top)
    M1 = -bl.S[i]
    C0 = np.c_[M0[:, gfree], M0 @ g_top]
    C1 = np.c_[M1[:, gfree], M1 @ g_top]
    if C0.shape[0] < C0.shape[1]:
        return []
    W = rng.normal(size=(C0.shape[1], C0.shape[0])) + 1j * rng.normal(size=(C0.shape[1], C0.shape[0]))
    try:
        ts = scipy.linalg.eigvals(W @ C0, -(W @ C1))
    except (ValueError, np.linalg.LinAlgError):
        return []
    out = []
    for t in ts:
        if not np.isfinite(t) or abs(t) > 1e8:
            continue
        _, sv, vh = np.linalg.svd(C0 + t * C1)
        w = vh[-1].conj()
        if sv[-1] > 1e-6 * bl.scale * max(1.0, abs(t)) or abs(w[-1]) < 1e-12:
            continue
        g = g_top.copy()
        g[gfree] = w[:-1] / w[-1]
        k = k_top.copy()
        k[i] = t
        out.append((g, k))
    return out


def _points_on(G: AffinePoly, rng, count: int = 3):
    out = []
    for _ in range(count * 2):
        x0 = complex(rng.normal(), rng.normal())
        cs = G.univariate_coeffs(1, x0)
        if all(abs(complex(c)) == 0 for c in cs[1:]):
            continue
        roots = univariate_roots([complex(c) for c in cs])
        if roots:
            out.append((x0, roots[0].value))
        if len(out) >= count:
            break
    return out


def find_invariant_curves(v: VectorField, spec: CurveSearchSpec = CurveSearchSpec()) -> SearchResult:
    """Heuristic search for invariant curves of degree <= spec.max_degree.

    Every reported curve passes the cofactor identity; absence of results is
    not a proof that no such curve exists.
    """
    if spec.method == "exact_lines":
        return find_invariant_lines(v, spec.tol)
    res = SearchResult(method="bilinear_numeric", complete=False)
    tol = spec.tol
    vf = VectorField(v.P.to_float(), v.Q.to_float(), v.n)
    rng = np.random.default_rng(spec.seed)
    real = v.P.is_real() and v.Q.is_real()
    excluded = [_affine_of(e) for e in spec.excluded]
    found: list[AffinePoly] = []
    for d in range(1, spec.max_degree + 1):
        if extactic_vanishes(vf, d, seed=spec.seed):
            res.notes.append(f"degree-{d} extactic vanishes identically: infinitely many invariant curves")
        bl = _Bilinear(vf, d)
        nG = len(bl.gb)
        starts = []
        m = max(vf.P.degree, vf.Q.degree)
        free = np.array([sum(e) < d for e in bl.gb] + [sum(e) < m - 1 for e in bl.kb])
        for Gd, Km in _top_candidates(vf, d):
            G0, K0 = _graded_solve(vf, d, Gd, Km)
            g0 = np.array([complex(G0.coeff(e)) for e in bl.gb])
            k0 = np.array([complex(K0.coeff(e)) for e in bl.kb])
            gt = np.array([complex(Gd.coeff(e)) for e in bl.gb])
            kt = np.array([complex(Km.coeff(e)) for e in bl.kb])
            starts.extend(_pencil_starts(bl, gt, kt, free, rng))
            # polish the lower parts with the top parts held fixed
            for trial in range(1 + spec.top_restarts):
                gs, ks = g0.copy(), k0.copy()
                if trial:
                    gs[free[:nG]] = rng.normal(size=int(free[:nG].sum()))
                    ks[free[nG:]] = rng.normal(size=int(free[nG:].sum()))
                gs, ks, cost = _gauss_newton(bl, gs, ks, None, free)
                starts.append((gs, ks))
                if cost <= 1e-10 * bl.scale:
                    break
        for _ in range(spec.starts):
            if real:
                k = rng.normal(size=len(bl.kb)).astype(complex)
            else:
                k = (rng.normal(size=len(bl.kb)) + 1j * rng.normal(size=len(bl.kb)))
            # kernel vector of M(k) as the starting curve
            _, _, vh = np.linalg.svd(bl.M(k))
            starts.append((vh[-1].conj(), k))
        for g, k in starts:
            if not real:
                c = np.r_[0.0, rng.normal(size=nG - 1) + 1j * rng.normal(size=nG - 1)]
            else:
                c = np.r_[0.0, rng.normal(size=nG - 1)]
            if abs(c @ g) < 1e-8:
                continue
            g = g / (c @ g)
            g, k, cost = _gauss_newton(bl, g, k, c)
            if not np.all(np.isfinite(g)) or cost > 1e-9 * bl.scale:
                continue
            G = _poly_from(bl.gb, g, 1e-10)
            if G.degree < 1 or G.degree < d:
                continue  # lower-degree solutions are found at their own degree
            if any(_proportional(G, H) for H in found + excluded):
                continue
            if spec.extactic_filter:
                pts = _points_on(G, rng)
                if pts and any(extactic_residual(vf, G, p) > 1e-6 for p in pts):
                    continue
            K = cofactor(vf, G, tol)
            if K is None:
                res.notes.append(f"candidate {G} failed cofactor re-verification")
                continue
            found.append(G)
            worst = float(np.linalg.norm(bl.residual(np.array([complex(G.coeff(e)) for e in bl.gb]),
                                                     np.array([complex(K.K.coeff(e)) for e in bl.kb]))))
            res.curves.append(FoundCurve(homogenize(G, G.degree), G, K.K, worst))
    return res


def _affine_of(F) -> AffinePoly:
    if isinstance(F, HomPoly):
        from .polycore import dehomogenize
        return dehomogenize(F, 2)
    return F


# -- sampling experiment ---------------------------------------------------------------


@dataclass(frozen=True)
class SampleSpec:
    n: int = 2
    count: int = 200
    seed: int = 0
    distribution: str = "uniform"  # or "lattice"
    box: float = 1.0
    lattice_bound: int = 3

    def __post_init__(self):
        if self.distribution not in ("uniform", "lattice"):
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.n < 1 or self.count < 0:
            raise ValueError("need n >= 1 and count >= 0")


def sample_field(spec: SampleSpec, rng: np.random.Generator) -> VectorField:
    """Random P, Q with every coefficient of degree <= n drawn independently."""
    basis = monomials(2, spec.n)
    if spec.distribution == "uniform":
        p = rng.uniform(-spec.box, spec.box, len(basis))
        q = rng.uniform(-spec.box, spec.box, len(basis))
        P = AffinePoly({e: float(c) for e, c in zip(basis, p)})
        Q = AffinePoly({e: float(c) for e, c in zip(basis, q)})
    else:
        L = spec.lattice_bound
        p = rng.integers(-L, L + 1, len(basis))
        q = rng.integers(-L, L + 1, len(basis))
        P = AffinePoly({e: int(c) for e, c in zip(basis, p)})
        Q = AffinePoly({e: int(c) for e, c in zip(basis, q)})
    return VectorField(P, Q, spec.n)


@dataclass
class ExperimentReport:
    spec: SampleSpec
    checks: tuple[str, ...]
    records: list[dict]
    aggregate: dict

    def to_json(self) -> dict:
        return {"spec": {"n": self.spec.n, "count": self.spec.count, "seed": self.spec.seed,
                         "distribution": self.spec.distribution, "box": self.spec.box,
                         "lattice_bound": self.spec.lattice_bound},
                "checks": list(self.checks), "aggregate": self.aggregate, "records": self.records}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def _certify_sample(v: VectorField, tol, budget):
    from .obstruction import index_table, nodal_obstruction_check
    from .singularities import census

    omega, k = strip_line_factor(projectivize(v), 2, tol)
    curve = AlgebraicCurve.single(HomPoly.var(2)) if is_line_at_infinity_invariant(omega, tol) \
        else AlgebraicCurve.from_factors([])
    c = census(omega, curve, tol)
    if c.total_multiplicity != c.expected:
        return "Inconclusive", None, "singularity count differs from n^2+n+1"
    cert = nodal_obstruction_check(index_table(c), c, curve, tol, budget)
    return cert.verdict, cert.delta_min, cert.reason


def sample_experiment(spec: SampleSpec, checks: Sequence[str] = ("lines", "curves", "certificate"),
                      curve_degree: int = 2, tol: ToleranceProfile = DEFAULT_TOL,
                      budget: int = 10_000_000, starts: int = 8) -> ExperimentReport:
    """Run the selected checks on ``spec.count`` seeded random fields.

    Each sample gets its own generator spawned from the master seed, so the
    report does not depend on evaluation order.
    """
    checks = tuple(checks)
    for c in checks:
        if c not in ("lines", "curves", "certificate"):
            raise ValueError(f"unknown check {c!r}")
    children = np.random.SeedSequence(spec.seed).spawn(spec.count)
    records = []
    for i, ss in enumerate(children):
        rng = np.random.default_rng(ss)
        v = sample_field(spec, rng)
        rec: dict = {"index": i, "field": str(v)}
        found = 0
        if "lines" in checks:
            lr = find_invariant_lines(v, tol)
            rec["lines"] = [str(c.affine) for c in lr.affine_curves]
            rec["line_at_infinity"] = any(c.affine is None for c in lr.curves)
            rec["pencils"] = len(lr.pencils)
            found += len(lr.affine_curves) + len(lr.pencils)
        if "curves" in checks:
            cs = CurveSearchSpec(max_degree=curve_degree, tol=tol, starts=starts,
                                 seed=int(rng.integers(0, 2**31)))
            cr = find_invariant_curves(v, cs)
            rec["curves"] = [str(c.affine) for c in cr.curves]
            found += len(cr.curves)
        if "certificate" in checks:
            try:
                verdict, delta, reason = _certify_sample(v, tol, budget)
            except ValueError as exc:
                verdict, delta, reason = "Inconclusive", None, f"{type(exc).__name__}: {exc}"
            rec["verdict"] = verdict
            rec["delta_min"] = delta
            rec["reason"] = reason
        rec["violation"] = bool(rec.get("verdict") == "Certified" and found > 0)
        records.append(rec)
    return ExperimentReport(spec, checks, records, _aggregate(records, checks))


def _aggregate(records: list[dict], checks) -> dict:
    n = len(records)
    agg: dict = {"samples": n}
    if not n:
        return agg
    if "lines" in checks:
        agg["fraction_with_affine_line"] = sum(1 for r in records if r["lines"] or r["pencils"]) / n
        agg["fraction_line_at_infinity"] = sum(1 for r in records if r["line_at_infinity"]) / n
    if "curves" in checks:
        agg["fraction_with_curve"] = sum(1 for r in records if r["curves"]) / n
    if "certificate" in checks:
        tally = {"Certified": 0, "Obstructed": 0, "Inconclusive": 0}
        hist: dict[str, int] = {}
        for r in records:
            tally[r["verdict"]] += 1
            d = r["delta_min"]
            if d is not None and d > 0:
                b = int(np.floor(np.log10(d)))
                hist[f"1e{b}"] = hist.get(f"1e{b}", 0) + 1
        agg["verdicts"] = tally
        agg["inconclusive_rate"] = tally["Inconclusive"] / n
        agg["delta_min_histogram"] = dict(sorted(hist.items(), key=lambda kv: int(kv[0][2:])))
    agg["violations"] = sum(1 for r in records if r["violation"])
    return agg
