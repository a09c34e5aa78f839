"""Text parser for polynomial expressions.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | <juxtaposition>) unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') INT)?
    atom   := NUMBER | NUMBER 'i' | IDENT | '(' expr ')'

Numbers are integers or decimals with an optional exponent. ``i``/``I`` is the
imaginary unit, so Gaussian coefficients read ``(a+bi)``. Identifiers are
variables, names bound by the caller, or runs of variable letters that stand
for a product (``xyz`` is ``x*y*z``). Division is only allowed by constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coeffs import GaussQ, exact as to_exact
from .poly import AffinePoly, HomPoly, InhomogeneousError, Poly

__all__ = ["ParseError", "UnknownVariable", "parse_poly", "parse_expr", "InhomogeneousError"]


class ParseError(ValueError):
    """Syntax error; ``offset`` is a byte offset into the UTF-8 encoded text."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at byte {offset}")


class UnknownVariable(ParseError):
    def __init__(self, name: str, offset: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown variable {name!r}", offset, text)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<pow>\*\*|\^)
  | (?P<op>[-+*/()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


_AFFINE = {"x": 0, "y": 1, "X": 0, "Y": 1}
_HOMOG = {"x": 0, "y": 1, "z": 2, "X": 0, "Y": 1, "Z": 2}


class _Parser:
    def __init__(self, text: str, variables: Mapping[str, int], bindings: Mapping,
                 exact: bool):
        self.text = text
        self.vars = variables
        self.nvars = max(variables.values()) + 1
        self.bindings = dict(bindings or {})
        self.exact = exact
        self.toks = self._tokenize(text)
        self.i = 0

    # -- lexing ----------------------------------------------------------------

    def _byte(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def _tokenize(self, text):
        toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", self._byte(pos), text)
            kind = m.lastgroup
            val = m.group()
            if kind == "num":
                # a trailing 'i' not followed by an identifier character is imaginary
                end = m.end()
                if end < len(text) and text[end] in "iI" and not (
                        end + 1 < len(text) and (text[end + 1].isalnum() or text[end + 1] == "_")):
                    toks.append(_Tok("imag", val, pos))
                    pos = end + 1
                    continue
            if kind != "ws":
                toks.append(_Tok(kind, val, pos))
            pos = m.end()
        toks.append(_Tok("end", "", len(text)))
        return toks

    # -- helpers ---------------------------------------------------------------

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, self._byte(tok.pos), self.text)

    def _const(self, c) -> Poly:
        return Poly({(0,) * self.nvars: c}, self.nvars)

    def _number(self, s: str):
        if self.exact:
            return Fraction(s)
        v = float(s)
        return v

    # -- grammar ---------------------------------------------------------------

    def parse(self) -> Poly:
        if self.tok.kind == "end":
            raise self._error("empty expression")
        p = self.expr()
        if self.tok.kind != "end":
            raise self._error(f"unexpected {self.tok.value!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.tok.kind == "op" and self.tok.value in "+-":
            op = self._advance().value
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("num", "imag", "ident") or (t.kind == "op" and t.value == "(")

    def term(self) -> Poly:
        p = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.value == "*":
                self._advance()
                p = p * self.unary()
            elif t.kind == "op" and t.value == "/":
                self._advance()
                q = self.unary()
                if q.is_zero():
                    raise self._error("division by zero", t)
                if not q.is_constant():
                    raise self._error("division by a non-constant expression", t)
                c = q.coeff((0,) * self.nvars)
                p = p.scale(1 / c if not self.exact else to_exact(1) / c)
            elif self._starts_atom():
                p = p * self.unary()
            else:
                return p

    def unary(self) -> Poly:
        t = self.tok
        if t.kind == "op" and t.value in "+-":
            self._advance()
            p = self.unary()
            return -p if t.value == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.tok.kind == "pow":
            self._advance()
            t = self.tok
            if t.kind != "num" or not t.value.isdigit():
                raise self._error("exponent must be a non-negative integer")
            self._advance()
            return base ** int(t.value)
        return base

    def atom(self) -> Poly:
        t = self.tok
        if t.kind == "num":
            self._advance()
            return self._const(self._number(t.value))
        if t.kind == "imag":
            self._advance()
            v = self._number(t.value)
            return self._const(GaussQ(0, v) if self.exact else complex(0, v))
        if t.kind == "op" and t.value == "(":
            self._advance()
            p = self.expr()
            if not (self.tok.kind == "op" and self.tok.value == ")"):
                raise self._error("expected ')'")
            self._advance()
            return p
        if t.kind == "ident":
            self._advance()
            return self._ident(t)
        if t.kind == "end":
            raise self._error("unexpected end of input")
        raise self._error(f"unexpected {t.value!r}")

    def _ident(self, t: _Tok) -> Poly:
        name = t.value
        if name in self.bindings:
            v = self.bindings[name]
            if isinstance(v, Poly):
                return v
            return self._const(to_exact(v) if self.exact else complex(v))
        if name in self.vars:
            return Poly.variable(self.vars[name], self.nvars)
        if name in ("i", "I"):
            return self._const(GaussQ(0, 1) if self.exact else 1j)
        if all(ch in self.vars for ch in name):
            p = self._const(1)
            for ch in name:
                p = p * Poly.variable(self.vars[ch], self.nvars)
            return p
        raise UnknownVariable(name, self._byte(t.pos), self.text)


def parse_expr(text: str, variable_set: str = "affine", bindings: Mapping | None = None,
               exact: bool = True) -> Poly:
    """Parse to a generic Poly in 2 (affine) or 3 (homogeneous) variables."""
    if variable_set not in ("affine", "homogeneous"):
        raise ValueError(f"variable_set must be 'affine' or 'homogeneous', got {variable_set!r}")
    variables = _AFFINE if variable_set == "affine" else _HOMOG
    return _Parser(text, variables, bindings or {}, exact).parse()


def parse_poly(text: str, variable_set: str = "affine", bindings: Mapping | None = None,
               exact: bool = True, degree: int | None = None):
    """Parse ``text`` into an AffinePoly or a HomPoly.

    In homogeneous mode every term must share one total degree; ``degree``
    fixes the declared degree (needed to type the zero polynomial, default 0).
    """
    p = parse_expr(text, variable_set, bindings, exact)
    if variable_set == "affine":
        return AffinePoly(p.terms)
    if p.is_zero():
        return HomPoly({}, degree if degree is not None else 0)
    return HomPoly(p.terms, degree)
