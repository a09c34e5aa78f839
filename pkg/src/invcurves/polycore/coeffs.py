"""Coefficient backends: exact Gaussian rationals and complex doubles.

Exact coefficients are ``int``, ``Fraction`` or :class:`GaussQ`; anything else
(``float``/``complex``) is float mode. Mixed arithmetic falls back to
``complex``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number

__all__ = ["GaussQ", "is_exact", "to_complex", "exact", "cabs"]


class GaussQ:
    """An element a + b*i of Q(i) with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussQ(other, 0)
        return None

    def simplify(self):
        """Collapse to a ``Fraction`` when the imaginary part vanishes."""
        return self.re if self.im == 0 else self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other if isinstance(other, Number) else NotImplemented
        return GaussQ(self.re + o.re, self.im + o.im).simplify()

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other if isinstance(other, Number) else NotImplemented
        return GaussQ(self.re - o.re, self.im - o.im).simplify()

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self) if isinstance(other, Number) else NotImplemented
        return GaussQ(o.re - self.re, o.im - self.im).simplify()

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other if isinstance(other, Number) else NotImplemented
        return GaussQ(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re).simplify()

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other if isinstance(other, Number) else NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        return GaussQ((self.re * o.re + self.im * o.im) / d,
                      (self.im * o.re - self.re * o.im) / d).simplify()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self) if isinstance(other, Number) else NotImplemented
        return o / self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return complex(self) ** k
        if k < 0:
            return (1 / self) ** (-k)
        result, base = GaussQ(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"


def is_exact(c) -> bool:
    return isinstance(c, (int, Fraction, GaussQ)) and not isinstance(c, bool)


def exact(c):
    """Convert an int/Fraction/GaussQ (or a Python complex with integral parts) to exact form."""
    if isinstance(c, GaussQ):
        return c.simplify()
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, complex):
        return GaussQ(Fraction(c.real), Fraction(c.imag)).simplify()
    raise TypeError(f"cannot convert {c!r} to an exact coefficient")


def to_complex(c) -> complex:
    return complex(c)


def cabs(c) -> float:
    return abs(complex(c))
