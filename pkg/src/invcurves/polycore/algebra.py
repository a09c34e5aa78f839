"""Division with remainder and exact gcd for bivariate polynomials."""

from __future__ import annotations

from fractions import Fraction

from .coeffs import is_exact
from .poly import AffinePoly, HomPoly, Poly, glex_key

__all__ = ["divide_exact", "remainder_is_zero", "gcd_exact", "make_monic"]


def divide_exact(num: Poly, den: Poly):
    """Graded-lex division: returns (quotient, remainder) with
    num = quotient*den + remainder and no remainder term divisible by LT(den)."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.nvars != den.nvars:
        raise ValueError("polynomials live in different rings")
    exact_mode = num.exact and den.exact
    lead_e, lead_c = den.leading_term()
    den_terms = list(den.terms.items())
    work = dict(num.terms)
    quot: dict = {}
    rem: dict = {}
    while work:
        e = max(work, key=glex_key)
        c = work[e]
        if all(a >= b for a, b in zip(e, lead_e)):
            qe = tuple(a - b for a, b in zip(e, lead_e))
            qc = c / lead_c
            quot[qe] = quot.get(qe, 0) + qc
            for de, dc in den_terms:
                te = tuple(a + b for a, b in zip(qe, de))
                v = work.get(te, 0) - qc * dc
                if exact_mode and v == 0:
                    work.pop(te, None)
                else:
                    work[te] = v
            # in float mode the leading term cancels only approximately
            work.pop(e, None)
            # drop exact zeros that float subtraction may produce
            if not exact_mode:
                for k in [k for k, v in work.items() if v == 0]:
                    del work[k]
        else:
            rem[e] = c
            del work[e]

    if isinstance(num, HomPoly):
        qdeg = max(num.degree - den_degree(den), 0)
        return HomPoly(quot, qdeg) if quot else HomPoly({}, qdeg), HomPoly(rem, num.degree)
    return num._new(quot), num._new(rem)


def den_degree(den: Poly) -> int:
    return den.degree if isinstance(den, HomPoly) else den.total_degree


def remainder_is_zero(rem: Poly, num: Poly, den: Poly | None = None, eps: float = 1e-8) -> bool:
    """Exact: rem == 0. Float: every coefficient below eps relative to the input norms."""
    if rem.is_zero():
        return True
    if rem.exact and num.exact and (den is None or den.exact):
        return False
    scale = max(num.max_abs(), 1.0)
    if den is not None:
        scale = max(scale, den.max_abs() * max(1.0, num.max_abs()))
    return rem.max_abs() <= eps * scale


def make_monic(p: Poly) -> Poly:
    if p.is_zero():
        return p
    _, c = p.leading_term()
    return p.scale(Fraction(1) / c if is_exact(c) else 1 / c)


# -- univariate helpers over Q(i); lists of coefficients, ascending --------------


def _u_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _u_divmod(a, b):
    a = _u_trim(a)
    b = _u_trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lb
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] = a[i + k] - c * bc
        a.pop()
        a = _u_trim(a)
    return _u_trim(q), a


def _u_monic(a):
    a = _u_trim(a)
    if not a:
        return a
    lc = a[-1]
    return [c / lc for c in a]


def _u_gcd(a, b):
    a, b = _u_trim(a), _u_trim(b)
    while b:
        _, r = _u_divmod(a, b)
        a, b = b, r
    return _u_monic(a)


def _u_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _u_trim(out)


def _u_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _u_trim([x - y for x, y in zip(a, b)])


def _u_exact_div(a, b):
    q, r = _u_divmod(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


# -- bivariate as polynomial in y with coefficients in Q(i)[x] --------------------


def _to_rec(p: Poly, main: int):
    other = 1 - main
    deg = max((e[main] for e in p.terms), default=-1)
    rec = [[] for _ in range(deg + 1)]
    for e, c in p.terms.items():
        row = rec[e[main]]
        k = e[other]
        if len(row) <= k:
            row.extend([0] * (k + 1 - len(row)))
        row[k] = row[k] + c
    return [_u_trim(r) for r in rec]


def _from_rec(rec, main: int) -> AffinePoly:
    terms = {}
    for j, row in enumerate(rec):
        for k, c in enumerate(row):
            if c != 0:
                e = [0, 0]
                e[main] = j
                e[1 - main] = k
                terms[tuple(e)] = c
    return AffinePoly(terms)


def _rec_trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _content(rec):
    g = []
    for row in rec:
        if row:
            g = _u_gcd(g, row)
            if len(g) == 1:
                break
    return g


def _primitive(rec):
    c = _content(rec)
    if not c:
        return rec
    return [_u_exact_div(row, c) if row else [] for row in rec]


def _prem(a, b):
    a = _rec_trim(a)
    b = _rec_trim(b)
    lb = b[-1]
    while len(a) >= len(b) and a:
        la = a[-1]
        k = len(a) - len(b)
        na = [_u_mul(lb, row) for row in a]
        for i, row in enumerate(b):
            na[i + k] = _u_sub(na[i + k], _u_mul(la, row))
        a = _rec_trim(na)
    return a


def gcd_exact(p: AffinePoly, q: AffinePoly) -> AffinePoly:
    """Greatest common divisor over Q(i), monic in the graded-lex leading term."""
    if not (p.exact and q.exact):
        raise TypeError("gcd_exact requires exact coefficients")
    if p.is_zero():
        return make_monic(AffinePoly(q.terms))
    if q.is_zero():
        return make_monic(AffinePoly(p.terms))
    a = _rec_trim(_to_rec(p, 1))
    b = _rec_trim(_to_rec(q, 1))
    cont = _u_gcd(_content(a), _content(b))
    a = _primitive(a)
    b = _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a = b
        b = _primitive(r) if r else []
    g = _primitive(a) if len(a) > 1 else [[Fraction(1)]]
    g = [_u_mul(cont, row) if row else [] for row in g]
    return make_monic(_from_rec(g, 1))

