"""Numerical primitives: roots, bivariate systems, 2x2 eigen data, rationality."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polycore import AffinePoly, Poly, gcd_exact
from .polycore.coeffs import GaussQ

__all__ = [
    "ToleranceProfile", "RootCluster", "EigenData", "QuotientClass", "InfiniteSolutionSet",
    "univariate_roots", "solve_bivariate", "jacobian_eigen", "eigen_of_matrix",
    "classify_quotient", "sort_key",
]


@dataclass(frozen=True)
class ToleranceProfile:
    eps_root: float = 1e-10
    eps_eq: float = 1e-8
    eps_cluster: float = 1e-7
    eps_obstruction: float = 1e-6
    q_max: int = 50

    def __post_init__(self):
        for name in ("eps_root", "eps_eq", "eps_cluster", "eps_obstruction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.q_max < 1:
            raise ValueError("q_max must be a positive integer")
        if self.eps_cluster < self.eps_root:
            raise ValueError("eps_cluster must be >= eps_root")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOL = ToleranceProfile()


@dataclass(frozen=True)
class RootCluster:
    value: complex
    multiplicity: int
    radius: float


@dataclass(frozen=True)
class EigenData:
    lam1: complex
    lam2: complex
    v1: tuple[complex, complex]
    v2: tuple[complex, complex]
    defective: bool
    jacobian: tuple[tuple[complex, complex], tuple[complex, complex]]


@dataclass(frozen=True)
class QuotientClass:
    kind: str  # positive_rational | positive_real_irrational | not_positive_real
    margin: float
    rational: tuple[int, int] | None = None


class InfiniteSolutionSet(ArithmeticError):
    """The system has a common factor; ``factor`` is the exact gcd when available."""

    def __init__(self, message: str, factor: AffinePoly | None = None):
        self.factor = factor
        super().__init__(message if factor is None else f"{message}: common factor {factor}")


# -- univariate roots -------------------------------------------------------------


def _horner(c: np.ndarray, z):
    # c ascending
    v = np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
    for a in c[::-1]:
        v = v * z + a
    return v


def _aberth(c: np.ndarray, maxiter: int = 400) -> np.ndarray | None:
    n = len(c) - 1
    dc = c[1:] * np.arange(1, n + 1)
    # starting circle from the Fujiwara bound
    a = np.abs(c[:-1] / c[-1])
    r = 2 * max(a[n - k] ** (1.0 / k) for k in range(1, n + 1)) if n else 1.0
    r = r * 0.5 if r > 0 else 1.0
    z = r * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(maxiter):
        pz = _horner(c, z)
        dz = _horner(dc, z)
        with np.errstate(all="ignore"):
            ratio = pz / dz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            s = (1.0 / diff)
            np.fill_diagonal(s, 0.0)
            w = ratio / (1 - ratio * s.sum(axis=1))
        if not np.all(np.isfinite(w)):
            return None
        z = z - w
        if np.all(np.abs(w) <= 4e-16 * np.maximum(1.0, np.abs(z))):
            return z
    return z


def _cluster(z: np.ndarray, eps: float) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= eps * max(1.0, abs(z[i]), abs(z[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(c: np.ndarray, z0: complex, m: int, iters: int = 8) -> complex:
    # Newton on the (m-1)-th derivative, where a root of multiplicity m is simple
    d = c.copy()
    for _ in range(m - 1):
        d = d[1:] * np.arange(1, len(d))
    dd = d[1:] * np.arange(1, len(d))
    z = complex(z0)
    best, best_val = z, abs(_horner(d, z))
    for _ in range(iters):
        fz = _horner(d, z)
        gz = _horner(dd, z)
        if gz == 0:
            break
        z = z - fz / gz
        v = abs(_horner(d, z))
        if v < best_val:
            best, best_val = z, v
        if v == 0:
            break
    if abs(best - z0) > 1e-3 * max(1.0, abs(z0)):
        return complex(z0)
    return best


def univariate_roots(coeffs: Sequence, tol: ToleranceProfile = DEFAULT_TOL) -> list[RootCluster]:
    """All complex roots with multiplicity; ``coeffs`` are ascending.

    Aberth iteration from a circle, falling back to companion eigenvalues,
    then single-linkage clustering at eps_cluster and Newton polishing.
    """
    c = np.array([complex(v) for v in coeffs], dtype=complex)
    while len(c) and c[-1] == 0:
        c = c[:-1]
    if len(c) == 0:
        raise ValueError("zero polynomial has no finite root set")
    nzero = 0
    while nzero < len(c) - 1 and c[nzero] == 0:
        nzero += 1
    c = c[nzero:]
    c = c / np.max(np.abs(c))
    roots: list[complex] = [0j] * nzero
    if len(c) > 1:
        z = _aberth(c)
        if z is None or not np.all(np.isfinite(z)):
            z = np.roots(c[::-1])
        roots.extend(complex(v) for v in z)
    if not roots:
        return []
    zs = np.array(roots)
    out = []
    for grp in _cluster(zs, tol.eps_cluster):
        centre = complex(np.mean(zs[grp]))
        m = len(grp)
        if not (nzero and all(abs(zs[i]) == 0 for i in grp)):
            full = np.concatenate([np.zeros(nzero, dtype=complex), c])
            centre = _polish(full, centre, m)
        radius = float(max(abs(zs[i] - centre) for i in grp))
        out.append(RootCluster(complex(centre), m, radius))
    out.sort(key=lambda r: sort_key(r.value))
    return out


def sort_key(z: complex, scale: float = 1.0):
    """Lexicographic (real, imaginary) with tiny real-part noise ignored."""
    q = 1e-9 * max(1.0, scale)
    return (round(z.real / q) * q, z.imag)


# -- bivariate systems -----------------------------------------------------------

_SHEARS = (Fraction(37, 101), Fraction(-59, 113), Fraction(71, 97), Fraction(-23, 89),
           Fraction(113, 61), Fraction(-131, 67), Fraction(17, 29), Fraction(-149, 43))


def _shear(p: Poly, c) -> AffinePoly:
    """p(u - c*y, y) as a polynomial in (u, y)."""
    u = AffinePoly.x()
    y = AffinePoly.y()
    return AffinePoly(p.substitute([u - y.scale(c), y], AffinePoly()).terms)


def _ycoeffs(p: AffinePoly):
    """Coefficient list in y (ascending), each entry a dict u-exponent -> coeff."""
    deg = max((e[1] for e in p.terms), default=0)
    out = [dict() for _ in range(deg + 1)]
    for (i, j), c in p.terms.items():
        out[j][i] = c
    return out


def _eval_ycoeffs(cols, u):
    out = []
    for d in cols:
        s = 0
        for i, c in d.items():
            s = s + c * u ** i
        out.append(s)
    return out


def _sylvester(a: Sequence, b: Sequence):
    """Sylvester matrix from ascending coefficient lists (both with nonzero leading)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = 0
    rows = []
    ad = list(a)[::-1]
    bd = list(b)[::-1]
    for i in range(n):
        rows.append([zero] * i + ad + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + bd + [zero] * (size - n - 1 - i))
    return rows


def _det_exact(rows) -> object:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det = det * pv
        for r in range(col + 1, n):
            f = a[r][col]
            if f != 0:
                f = f / pv
                row_c = a[col]
                row_r = a[r]
                for k in range(col + 1, n):
                    if row_c[k] != 0:
                        row_r[k] = row_r[k] - f * row_c[k]
    return det


def _newton_interpolate(xs, ys):
    """Exact Newton interpolation; returns ascending monomial coefficients."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    # Horner on the Newton basis
    for k in range(n - 1, -1, -1):
        # poly = poly*(x - xs[k]) + coef[k]
        new = [Fraction(0)] * n
        for i in range(n - 1):
            new[i + 1] = new[i + 1] + poly[i]
        for i in range(n):
            new[i] = new[i] - xs[k] * poly[i]
        new[0] = new[0] + coef[k]
        poly = new
    return poly


def _resultant_exact(pt: AffinePoly, qt: AffinePoly, bound: int):
    cp, cq = _ycoeffs(pt), _ycoeffs(qt)
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [_det_exact(_sylvester(_eval_ycoeffs(cp, u), _eval_ycoeffs(cq, u))) for u in xs]
    return _newton_interpolate(xs, ys)


def _resultant_float(pt: AffinePoly, qt: AffinePoly, bound: int):
    cp, cq = _ycoeffs(pt), _ycoeffs(qt)
    n = bound + 1
    w = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.empty(n, dtype=complex)
    for k, u in enumerate(w):
        a = [complex(v) for v in _eval_ycoeffs(cp, u)]
        b = [complex(v) for v in _eval_ycoeffs(cq, u)]
        vals[k] = np.linalg.det(np.array(_sylvester(a, b), dtype=complex))
    return list(np.fft.fft(vals) / n)


def _leading_y_constant(p: AffinePoly) -> bool:
    deg = max(e[1] for e in p.terms)
    top = [e for e in p.terms if e[1] == deg]
    return deg == p.total_degree and top == [(0, deg)]


def _pair_scale(p: Poly, pt) -> float:
    a, b = max(1.0, abs(pt[0])), max(1.0, abs(pt[1]))
    return sum(abs(complex(c)) * a ** e[0] * b ** e[1] for e, c in p.terms.items()) or 1.0


def _newton2(p: Poly, q: Poly, pt, iters: int = 12):
    px, py = p.diff(0), p.diff(1)
    qx, qy = q.diff(0), q.diff(1)
    fp = p.to_float(), q.to_float(), px.to_float(), py.to_float(), qx.to_float(), qy.to_float()
    x, y = complex(pt[0]), complex(pt[1])

    def resid(x, y):
        return abs(fp[0]((x, y))) / _pair_scale(p, (x, y)) + abs(fp[1]((x, y))) / _pair_scale(q, (x, y))

    best = (x, y)
    best_r = resid(x, y)
    for _ in range(iters):
        f, g = fp[0]((x, y)), fp[1]((x, y))
        a, b, c, d = fp[2]((x, y)), fp[3]((x, y)), fp[4]((x, y)), fp[5]((x, y))
        det = a * d - b * c
        if det == 0:
            break
        dx = (d * f - b * g) / det
        dy = (a * g - c * f) / det
        x, y = x - dx, y - dy
        r = resid(x, y)
        if r < best_r:
            best, best_r = (x, y), r
        if abs(dx) + abs(dy) <= 1e-16 * max(1.0, abs(x) + abs(y)):
            break
    if abs(best[0] - pt[0]) + abs(best[1] - pt[1]) > 1e-4 * max(1.0, abs(pt[0]) + abs(pt[1])):
        return (complex(pt[0]), complex(pt[1]))
    return best


class _Collision(Exception):
    pass


def _solve_with_shear(p: AffinePoly, q: AffinePoly, c, tol: ToleranceProfile, exact_mode: bool):
    pt, qt = _shear(p, c), _shear(q, c)
    if not (_leading_y_constant(pt) and _leading_y_constant(qt)):
        raise _Collision("leading coefficient in y not constant")
    bound = p.total_degree * q.total_degree
    if exact_mode:
        res = _resultant_exact(pt, qt, bound)
        if all(v == 0 for v in res):
            raise InfiniteSolutionSet("resultant vanishes identically", gcd_exact(p, q))
        # scale exactly before rounding so huge rationals do not overflow
        big = max((abs(v) if not isinstance(v, GaussQ) else abs(v.re) + abs(v.im)) for v in res)
        res_c = [complex(v / big) for v in res]
    else:
        res_c = _resultant_float(pt, qt, bound)
        hada = _hadamard(pt, qt)
        mx = max(abs(v) for v in res_c)
        if mx <= 1e-11 * hada:
            raise InfiniteSolutionSet("resultant vanishes numerically")
        res_c = [v if abs(v) > 1e-12 * mx else 0j for v in res_c]
        # trailing noise above the true degree
        while len(res_c) > 1 and abs(res_c[-1]) <= 1e-10 * mx:
            res_c.pop()
    while len(res_c) > 1 and res_c[-1] == 0:
        res_c.pop()
    if len(res_c) <= 1:
        return []
    clusters = univariate_roots(res_c, tol)
    ptf, qtf = pt.to_float(), qt.to_float()
    out = []
    for cl in clusters:
        u0 = cl.value
        ycoef = ptf.univariate_coeffs(1, u0)
        cands = [r.value for r in univariate_roots(ycoef, tol)] if len(ycoef) > 1 else []
        scored = []
        for yv in cands:
            val = abs(qtf((u0, yv))) / _pair_scale(qt, (u0, yv))
            scored.append((val, yv))
        scored.sort(key=lambda t: t[0])
        if not scored:
            continue
        thresh = max(1e-6, 1e3 * cl.radius)
        good = [yv for val, yv in scored if val <= thresh]
        if len(good) > 1:
            distinct = [good[0]]
            for yv in good[1:]:
                if all(abs(yv - d) > math.sqrt(tol.eps_cluster) * max(1.0, abs(d)) for d in distinct):
                    distinct.append(yv)
            if len(distinct) > 1:
                raise _Collision("two solutions share a sheared coordinate")
        yv = scored[0][1] if not good else good[0]
        if not good and cl.multiplicity == 1:
            # no consistent back-substitution: the root is spurious
            continue
        cf = float(c)
        pt_xy = (u0 - cf * yv, yv)
        pt_xy = _newton2(p, q, pt_xy)
        r = (abs(complex(p.to_float()(pt_xy))) / _pair_scale(p, pt_xy)
             + abs(complex(q.to_float()(pt_xy))) / _pair_scale(q, pt_xy))
        if r > 1e-5:
            continue
        out.append((pt_xy, cl.multiplicity))
    return out


def _hadamard(pt, qt) -> float:
    a = sum(abs(complex(c)) for c in pt.terms.values())
    b = sum(abs(complex(c)) for c in qt.terms.values())
    m = max(e[1] for e in pt.terms)
    n = max(e[1] for e in qt.terms)
    return max(a ** n * b ** m, 1e-300)


def solve_bivariate(p: Poly, q: Poly, tol: ToleranceProfile = DEFAULT_TOL):
    """Common zeros of two bivariate polynomials as [((x, y), multiplicity)].

    Raises InfiniteSolutionSet when p and q share a non-constant factor.
    """
    p = AffinePoly(p.terms)
    q = AffinePoly(q.terms)
    if p.is_zero() or q.is_zero():
        raise InfiniteSolutionSet("zero equation", gcd_exact(p, q) if p.exact and q.exact else None)
    if p.total_degree == 0 or q.total_degree == 0:
        return []
    exact_mode = p.exact and q.exact
    last: Exception | None = None
    for c in _SHEARS:
        try:
            sols = _solve_with_shear(p, q, c, tol, exact_mode)
        except _Collision as e:
            last = e
            continue
        return _merge_points(sols, tol)
    raise ArithmeticError(f"no admissible shear found ({last})")


def _merge_points(sols, tol):
    merged: list[list] = []
    for pt, m in sols:
        for item in merged:
            q = item[0]
            if abs(pt[0] - q[0]) + abs(pt[1] - q[1]) <= tol.eps_cluster * max(1.0, abs(q[0]) + abs(q[1])):
                item[1] += m
                break
        else:
            merged.append([pt, m])
    return [(tuple(pt), m) for pt, m in merged]


# -- eigen data -------------------------------------------------------------------


def _unit(v):
    n = math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
    return (v[0] / n, v[1] / n)


def _eigvec(j, lam):
    a, b = j[0][0] - lam, j[0][1]
    c, d = j[1][0], j[1][1] - lam
    c1 = (b, -a)
    c2 = (d, -c)
    n1 = abs(c1[0]) + abs(c1[1])
    n2 = abs(c2[0]) + abs(c2[1])
    v = c1 if n1 >= n2 else c2
    return v, max(n1, n2)


def eigen_of_matrix(j, tol: ToleranceProfile = DEFAULT_TOL) -> EigenData:
    j = ((complex(j[0][0]), complex(j[0][1])), (complex(j[1][0]), complex(j[1][1])))
    tr = j[0][0] + j[1][1]
    det = j[0][0] * j[1][1] - j[0][1] * j[1][0]
    s = np.sqrt(complex(tr * tr - 4 * det))
    l_a = (tr + s) / 2
    l_b = (tr - s) / 2
    # the larger-modulus root is accurate; recover the other from the determinant
    if abs(l_a) < abs(l_b):
        l_a, l_b = l_b, l_a
    if l_a != 0:
        l_b = det / l_a
    jn = max(abs(x) for row in j for x in row) or 1.0
    lams = sorted([complex(l_a), complex(l_b)], key=lambda z: sort_key(z, jn))
    vecs = []
    for lam in lams:
        v, n = _eigvec(j, lam)
        vecs.append((v, n))
    close = abs(lams[0] - lams[1]) <= tol.eps_eq * jn
    defective = False
    if close:
        if all(n <= tol.eps_eq * jn for _, n in vecs):
            # scalar matrix: every direction is an eigendirection
            vecs = [((1, 0), 1.0), ((0, 1), 1.0)]
        else:
            defective = True
    v1 = _unit(vecs[0][0]) if vecs[0][1] > 0 else (1 + 0j, 0j)
    v2 = _unit(vecs[1][0]) if vecs[1][1] > 0 else (0j, 1 + 0j)
    return EigenData(lams[0], lams[1], v1, v2, defective, j)


def jacobian_eigen(field, point, tol: ToleranceProfile = DEFAULT_TOL) -> EigenData:
    """Eigen data of the Jacobian of (P, Q) at ``point``; ``field`` is any object
    with ``P`` and ``Q`` attributes or a (P, Q) pair."""
    P, Q = (field.P, field.Q) if hasattr(field, "P") else field
    x, y = complex(point[0]), complex(point[1])
    j = [[P.diff(0).to_float()((x, y)), P.diff(1).to_float()((x, y))],
         [Q.diff(0).to_float()((x, y)), Q.diff(1).to_float()((x, y))]]
    return eigen_of_matrix(j, tol)


# -- rationality decisions ---------------------------------------------------------


def nearest_rational(x: float, q_max: int) -> tuple[float, tuple[int, int]]:
    best = (math.inf, (1, 1))
    for q in range(1, q_max + 1):
        p = min(max(round(x * q), 1), q_max)
        d = abs(x - p / q)
        if d < best[0]:
            g = math.gcd(p, q)
            best = (d, (p // g, q // g))
    return best


def classify_quotient(lam: complex, tol: ToleranceProfile = DEFAULT_TOL) -> QuotientClass:
    """Decide lam in Q_{>0}, R_{>0} minus Q, or outside R_{>0}.

    Rationals p/q with 1 <= p, q <= q_max are tested; the margin is the
    distance to the rejected region (zero for a positive rational decision).
    """
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ValueError("quotient must be finite")
    eps = tol.eps_eq * max(1.0, abs(lam))
    if lam.real <= 0:
        return QuotientClass("not_positive_real", abs(lam))
    # relative test on the argument, so lam and 1/lam always agree
    if abs(lam.imag) > tol.eps_eq * abs(lam):
        return QuotientClass("not_positive_real", abs(lam.imag))
    d, pq = nearest_rational(lam.real, tol.q_max)
    if d <= eps:
        return QuotientClass("positive_rational", 0.0, pq)
    return QuotientClass("positive_real_irrational", d)
