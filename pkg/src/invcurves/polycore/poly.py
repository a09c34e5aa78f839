"""Sparse polynomials in 2 (affine) or 3 (homogeneous) variables.

Terms are stored as ``{exponent tuple: coefficient}`` with no zero
coefficients. Every value is immutable after construction. Monomials are
ordered graded-lexicographically (total degree first, then lexicographic with
the first variable largest); this order drives printing and division.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .coeffs import GaussQ, cabs, exact, is_exact

ZERO_DEGREE = -1  # degree sentinel of the zero polynomial

AFFINE_NAMES = ("x", "y")
HOMOGENEOUS_NAMES = ("X", "Y", "Z")


def glex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


def _clean(terms: Mapping) -> dict:
    out = {}
    for e, c in terms.items():
        if isinstance(c, GaussQ):
            c = c.simplify()
        elif isinstance(c, int):
            c = Fraction(c)
        if c != 0:
            out[tuple(e)] = c
    return out


def _add_into(acc: dict, exps, c):
    v = acc.get(exps)
    v = c if v is None else v + c
    if v == 0:
        acc.pop(exps, None)
    else:
        acc[exps] = v


class Poly:
    """Generic sparse polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "nvars", "names")

    def __init__(self, terms: Mapping | None = None, nvars: int = 2,
                 names: Sequence[str] | None = None):
        t = _clean(terms or {})
        for e in t:
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
        self._terms = MappingProxyType(t)
        self.nvars = nvars
        self.names = tuple(names) if names is not None else tuple(
            f"v{i}" for i in range(nvars))

    # -- construction helpers -------------------------------------------------

    def _new(self, terms: Mapping, degree: int | None = None):
        return Poly(terms, self.nvars, self.names)

    @classmethod
    def constant(cls, c, nvars=2, names=None):
        return Poly({(0,) * nvars: c}, nvars, names)

    @classmethod
    def variable(cls, i, nvars=2, names=None):
        e = [0] * nvars
        e[i] = 1
        return Poly({tuple(e): 1}, nvars, names)

    # -- basic properties ------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self._terms)

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self._terms.values())

    def sorted_terms(self):
        """Terms in graded-lex descending order."""
        return sorted(self._terms.items(), key=lambda kv: glex_key(kv[0]), reverse=True)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=glex_key)
        return e, self._terms[e]

    def coeff(self, exps) -> object:
        return self._terms.get(tuple(exps), 0)

    def norm1(self) -> float:
        return sum(cabs(c) for c in self._terms.values())

    def max_abs(self) -> float:
        return max((cabs(c) for c in self._terms.values()), default=0.0)

    def coeff_vector(self, basis: Sequence[tuple[int, ...]]) -> list:
        return [self._terms.get(e, 0) for e in basis]

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def is_real(self) -> bool:
        return all(complex(c).imag == 0 for c in self._terms.values())

    # -- ring operations --------------------------------------------------------

    def _check_compatible(self, other: "Poly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            return other
        return self._new({(0,) * self.nvars: other}, degree=0)

    def __add__(self, other):
        o = self._coerce(other)
        acc = dict(self._terms)
        for e, c in o._terms.items():
            _add_into(acc, e, c)
        return self._new(acc, degree=self._sum_degree(o))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self._new({e: -c for e, c in self._terms.items()}, degree=self._own_degree())

    def __sub__(self, other):
        o = self._coerce(other)
        acc = dict(self._terms)
        for e, c in o._terms.items():
            _add_into(acc, e, -c)
        return self._new(acc, degree=self._sum_degree(o))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check_compatible(other)
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                _add_into(acc, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return self._new(acc, degree=self._prod_degree(other))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if c == 0:
            return self._new({}, degree=self._own_degree())
        return self._new({e: c * v for e, v in self._terms.items()}, degree=self._own_degree())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self._new({(0,) * self.nvars: 1}, degree=0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (self.nvars == other.nvars and dict(self._terms) == dict(other._terms)
                    and self._degree_identity() == other._degree_identity())
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items()), self._degree_identity()))

    def _degree_identity(self):
        return None

    # degree bookkeeping hooks used by HomPoly
    def _own_degree(self):
        return None

    def _sum_degree(self, other):
        return None

    def _prod_degree(self, other):
        return None

    # -- calculus / evaluation ----------------------------------------------------

    def diff(self, var: int):
        acc = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                ne = list(e)
                ne[var] = k - 1
                acc[tuple(ne)] = c * k
        d = self._own_degree()
        return self._new(acc, degree=None if d is None else max(d - 1, 0))

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * v ** k
            total = total + t
        return total

    __call__ = evaluate

    def to_float(self):
        return self._new({e: complex(c) for e, c in self._terms.items()},
                         degree=self._own_degree())

    def to_exact(self):
        return self._new({e: exact(c) for e, c in self._terms.items()},
                         degree=self._own_degree())

    def conj(self):
        return self._new({e: c.conjugate() for e, c in self._terms.items()},
                         degree=self._own_degree())

    def chop(self, tol: float):
        """Drop coefficients with modulus <= ``tol``."""
        return self._new({e: c for e, c in self._terms.items() if cabs(c) > tol},
                         degree=self._own_degree())

    def map_coeffs(self, fn):
        return self._new({e: fn(c) for e, c in self._terms.items()}, degree=self._own_degree())

    def substitute(self, values: Sequence["Poly"], target: "Poly"):
        """Replace variable i by ``values[i]`` (polynomials in ``target``'s ring)."""
        result = target.scale(0)
        powers: list[dict[int, Poly]] = [{0: target.scale(0) + 1} for _ in values]
        for e, c in self._terms.items():
            t = None
            for i, k in enumerate(e):
                if k == 0:
                    continue
                cache = powers[i]
                if k not in cache:
                    cache[k] = values[i] ** k
                t = cache[k] if t is None else t * cache[k]
            result = result + (t.scale(c) if t is not None else c)
        return result

    # -- printing --------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_poly(self)!r})"


class AffinePoly(Poly):
    """Polynomial in the affine coordinates (x, y)."""

    __slots__ = ()

    def __init__(self, terms: Mapping | None = None):
        super().__init__(terms, 2, AFFINE_NAMES)

    def _new(self, terms, degree=None):
        return AffinePoly(terms)

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @property
    def degree(self) -> int:
        return self.total_degree

    def decompose_homogeneous(self) -> list["AffinePoly"]:
        """Return [P_0, ..., P_n] with P_k homogeneous of degree k and sum P."""
        n = self.total_degree
        parts: list[dict] = [{} for _ in range(max(n + 1, 0))]
        for e, c in self._terms.items():
            parts[sum(e)][e] = c
        return [AffinePoly(p) for p in parts]

    def univariate_coeffs(self, var: int, value) -> list:
        """Coefficients (ascending) of the univariate polynomial obtained by
        fixing the other variable to ``value``; ``var`` is the free one."""
        other = 1 - var
        deg = max((e[var] for e in self._terms), default=0)
        out = [0] * (deg + 1)
        for e, c in self._terms.items():
            out[e[var]] = out[e[var]] + c * value ** e[other]
        return out


class HomPoly(Poly):
    """Homogeneous polynomial in (X, Y, Z) with a declared degree.

    The declared degree is part of the identity, so the zero form of degree 3
    differs from the zero form of degree 2.
    """

    __slots__ = ("degree",)

    def __init__(self, terms: Mapping | None = None, degree: int | None = None):
        super().__init__(terms, 3, HOMOGENEOUS_NAMES)
        degs = {sum(e) for e in self._terms}
        if degree is None:
            if not degs:
                raise ValueError("declared degree required for the zero HomPoly")
            if len(degs) > 1:
                top = max(degs)
                bad = sorted((e for e in self._terms if sum(e) != top), key=glex_key, reverse=True)
                raise InhomogeneousError(bad, None)
            degree = degs.pop()
        elif degs - {degree}:
            bad = [e for e in self._terms if sum(e) != degree]
            raise InhomogeneousError(bad, degree)
        if degree < 0:
            raise ValueError("negative declared degree")
        self.degree = degree

    def _new(self, terms, degree=None):
        if degree is None:
            degree = self.degree
        return HomPoly(terms, degree)

    def _own_degree(self):
        return self.degree

    def _degree_identity(self):
        return self.degree

    def _sum_degree(self, other):
        if isinstance(other, HomPoly):
            if other.degree != self.degree and not (other.is_zero() or self.is_zero()):
                raise ValueError(
                    f"cannot add HomPoly of degrees {self.degree} and {other.degree}")
            if other.degree != self.degree:
                return self.degree if not self.is_zero() else other.degree
            return self.degree
        if other.is_zero():
            return self.degree
        raise ValueError("cannot add a non-homogeneous polynomial to a HomPoly")

    def _prod_degree(self, other):
        return self.degree + getattr(other, "degree", other.total_degree)

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check_compatible(other)
            return other
        if other == 0:
            return HomPoly({}, self.degree)
        return HomPoly({(0, 0, 0): other}, 0)

    def __mul__(self, other):
        if isinstance(other, Poly) and not isinstance(other, HomPoly):
            other = HomPoly(other.terms, None if not other.is_zero() else 0)
        return super().__mul__(other)

    @classmethod
    def var(cls, i: int) -> "HomPoly":
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1}, 1)

    @classmethod
    def constant(cls, c) -> "HomPoly":
        return cls({(0, 0, 0): c}, 0)

    @classmethod
    def zero(cls, degree: int) -> "HomPoly":
        return cls({}, degree)

    def compose_linear(self, matrix) -> "HomPoly":
        """Substitute (X, Y, Z) -> matrix @ (X, Y, Z)."""
        xs = [HomPoly.var(0), HomPoly.var(1), HomPoly.var(2)]
        forms = []
        for row in matrix:
            f = HomPoly.zero(1)
            for a, v in zip(row, xs):
                if a != 0:
                    f = f + v.scale(a)
            forms.append(f)
        return self.substitute(forms, HomPoly.zero(self.degree)) if not self.is_zero() \
            else HomPoly.zero(self.degree)

    def substitute(self, values, target):
        result = HomPoly.zero(self.degree)
        for e, c in self._terms.items():
            t = HomPoly.constant(c)
            for v, k in zip(values, e):
                if k:
                    t = t * v ** k
            result = result + t
        return result


class InhomogeneousError(ValueError):
    def __init__(self, offending, degree):
        self.offending = list(offending)
        self.degree = degree
        names = [format_monomial(e, HOMOGENEOUS_NAMES) for e in self.offending]
        msg = "inhomogeneous terms: " + ", ".join(names)
        if degree is not None:
            msg += f" (declared degree {degree})"
        super().__init__(msg)


# -- printing -------------------------------------------------------------------


def format_monomial(exps, names) -> str:
    parts = []
    for n, k in zip(names, exps):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_imag(q: Fraction) -> str:
    # "3i/4" so that re-parsing does not read 3/(4i)
    if q.denominator == 1:
        return f"{q.numerator}i"
    return f"{q.numerator}i/{q.denominator}"


def _fmt_float(v: float) -> str:
    r = repr(float(v))
    if r in ("inf", "-inf", "nan"):
        raise ValueError("non-finite coefficient cannot be printed")
    return r


def format_coeff(c) -> tuple[str, str]:
    """Return (sign, magnitude text); sign is '' or '-'."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        c = Fraction(c)
    if isinstance(c, Fraction):
        return ("-" if c < 0 else ""), _fmt_fraction(abs(c))
    if isinstance(c, GaussQ):
        if c.re == 0:
            s = "-" if c.im < 0 else ""
            return s, "(" + _fmt_imag(abs(c.im)) + ")"
        sign = "+" if c.im > 0 else "-"
        return "", f"({_fmt_fraction(c.re)}{sign}{_fmt_imag(abs(c.im))})"
    z = complex(c)
    if z.imag == 0:
        return ("-" if z.real < 0 or (z.real == 0 and str(z.real).startswith("-")) else ""), \
            _fmt_float(abs(z.real))
    if z.real == 0:
        return ("-" if z.imag < 0 else ""), "(" + _fmt_float(abs(z.imag)) + "i)"
    sign = "+" if z.imag >= 0 else "-"
    return "", f"({_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}i)"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        sign, mag = format_coeff(c)
        mono = format_monomial(e, p.names)
        if mono:
            body = mono if mag == "1" else f"{mag}*{mono}"
        else:
            body = mag
        if i == 0:
            out.append(("-" if sign else "") + body)
        else:
            out.append((" - " if sign else " + ") + body)
    return "".join(out)


# -- homogenization ----------------------------------------------------------------

CHARTS = ("X", "Y", "Z")


def chart_index(chart) -> int:
    if isinstance(chart, int):
        if chart not in (0, 1, 2):
            raise ValueError(f"bad chart {chart}")
        return chart
    try:
        return CHARTS.index(str(chart).upper())
    except ValueError:
        raise ValueError(f"bad chart {chart!r}") from None


def homogenize(p: AffinePoly, m: int | None = None) -> HomPoly:
    """F(X, Y, Z) = Z^m p(X/Z, Y/Z)."""
    if m is None:
        m = max(p.degree, 0)
    if m < p.degree:
        raise ValueError(f"homogenization degree {m} below polynomial degree {p.degree}")
    return HomPoly({(i, j, m - i - j): c for (i, j), c in p.terms.items()}, m)


def dehomogenize(F: HomPoly, chart="Z") -> AffinePoly:
    """Set the chart variable to 1; the remaining two become (x, y) in order.

    Chart Z: (X, Y) -> (x, y); chart X: (Y, Z) -> (x1, y1); chart Y: (X, Z) -> (x2, y2).
    """
    k = chart_index(chart)
    keep = [i for i in range(3) if i != k]
    acc: dict = {}
    for e, c in F.terms.items():
        _add_into(acc, (e[keep[0]], e[keep[1]]), c)
    return AffinePoly(acc)


def chart_coordinates(point: Sequence, chart) -> tuple:
    """Affine coordinates of a projective point in the given chart."""
    k = chart_index(chart)
    keep = [i for i in range(3) if i != k]
    w = point[k]
    return (point[keep[0]] / w, point[keep[1]] / w)


def chart_lift(local: Sequence, chart) -> tuple:
    """Homogeneous representative of a chart point (chart coordinate set to 1)."""
    k = chart_index(chart)
    keep = [i for i in range(3) if i != k]
    out = [None, None, None]
    out[k] = 1
    out[keep[0]], out[keep[1]] = local[0], local[1]
    return tuple(out)


def monomials(nvars: int, degree: int, homogeneous: bool = False) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree == degree (homogeneous) or <= degree, glex ascending."""
    out = []
    degs = [degree] if homogeneous else range(degree + 1)

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    for d in degs:
        chunk_start = len(out)
        rec([], d, nvars)
        out[chunk_start:] = sorted(out[chunk_start:])
    return out


def from_coeffs(basis: Iterable[tuple[int, ...]], values: Iterable, cls=AffinePoly):
    return cls(dict(zip(basis, values)))
