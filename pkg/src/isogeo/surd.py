"""Exact arithmetic in the biquadratic field Q(sqrt2, sqrt3).

An element is ``a + b*sqrt2 + c*sqrt3 + d*sqrt6`` with rational coefficients.
Everything the g=6 tables need (the alpha values, cotangents and sines of
multiples of pi/12, the e/f frame scalings) lives in this field, and the phases
``exp(i k pi/6)`` live in its complexification.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

_SQRT = {1: 1.0, 2: math.sqrt(2.0), 3: math.sqrt(3.0), 6: math.sqrt(6.0)}
_RADICANDS = (1, 2, 3, 6)
# product of basis radicals: (i, j) -> (rational factor, resulting radicand)
_MUL = {
    (1, 1): (1, 1), (1, 2): (1, 2), (1, 3): (1, 3), (1, 6): (1, 6),
    (2, 2): (2, 1), (2, 3): (1, 6), (2, 6): (2, 3),
    (3, 3): (3, 1), (3, 6): (3, 2),
    (6, 6): (6, 1),
}


def _coerce(x) -> "Surd":
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Surd(x)
    return NotImplemented


@total_ordering
class Surd:
    __slots__ = ("c",)

    def __init__(self, a=0, b=0, c=0, d=0):
        self.c = (Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def sqrt(cls, q) -> "Surd":
        """Square root of a non-negative rational, when it lies in the field."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        if q == 0:
            return cls()
        # sqrt(p/r) = sqrt(p*r)/r ; pull square factors out of p*r
        n = q.numerator * q.denominator
        out, rad = 1, 1
        k = 2
        while k * k <= n:
            while n % (k * k) == 0:
                n //= k * k
                out *= k
            k += 1
        rad = n
        if rad not in _RADICANDS:
            raise ValueError(f"sqrt({q}) is not in Q(sqrt2, sqrt3)")
        coeff = Fraction(out, q.denominator)
        parts = [0, 0, 0, 0]
        parts[_RADICANDS.index(rad)] = coeff
        return cls(*parts)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Surd(*(x + y for x, y in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return Surd(*(-x for x in self.c))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict.fromkeys(_RADICANDS, Fraction(0))
        for r1, x in zip(_RADICANDS, self.c):
            if not x:
                continue
            for r2, y in zip(_RADICANDS, other.c):
                if not y:
                    continue
                key = (r1, r2) if r1 <= r2 else (r2, r1)
                fac, rad = _MUL[key]
                out[rad] += fac * x * y
        return Surd(*(out[r] for r in _RADICANDS))

    __rmul__ = __mul__

    def conj3(self) -> "Surd":
        """Galois conjugate sqrt3 -> -sqrt3."""
        a, b, c, d = self.c
        return Surd(a, b, -c, -d)

    def conj2(self) -> "Surd":
        a, b, c, d = self.c
        return Surd(a, -b, c, -d)

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero surd")
        # x * conj3(x) lies in Q(sqrt2); then multiply by the sqrt2-conjugate
        y = self * self.conj3()
        z = y * y.conj2()
        (r, _, _, _) = z.c
        return self.conj3() * y.conj2() * Surd(1 / r)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = Surd(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- comparisons ------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.c == other.c

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        diff = self - other
        if diff.is_zero():
            return False
        return float(diff) < 0

    def __hash__(self):
        return hash(self.c)

    def __float__(self):
        return sum(float(x) * _SQRT[r] for r, x in zip(_RADICANDS, self.c))

    def __abs__(self):
        return -self if self < 0 else self

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        out = ""
        for r, x in zip(_RADICANDS, self.c):
            if not x:
                continue
            sign = "-" if x < 0 else "+"
            x = abs(x)
            if r == 1:
                body = str(x)
            elif x == 1:
                body = f"sqrt({r})"
            elif x.denominator == 1:
                body = f"{x.numerator}*sqrt({r})"
            else:
                body = f"{x.numerator}*sqrt({r})/{x.denominator}"
            if not out:
                out = body if sign == "+" else "-" + body
            else:
                out += f" {sign} {body}"
        return out or "0"


class CSurd:
    """Complex number with real and imaginary parts in Q(sqrt2, sqrt3)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _coerce(re) if not isinstance(re, Surd) else re
        self.im = _coerce(im) if not isinstance(im, Surd) else im

    @staticmethod
    def _c(x):
        if isinstance(x, CSurd):
            return x
        s = _coerce(x)
        if s is NotImplemented:
            return s
        return CSurd(s, Surd())

    def __add__(self, o):
        o = self._c(o)
        return CSurd(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CSurd(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._c(o)
        return CSurd(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return CSurd(self.re, -self.im)

    def norm2(self) -> Surd:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm2()
        return CSurd(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * self._c(o).inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = CSurd(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def __eq__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CSurd({self.re}, {self.im})"


# -- exact trigonometry at multiples of pi/12 ------------------------------

_COS12 = {
    0: Surd(1),
    1: Surd(0, Fraction(1, 4), 0, Fraction(1, 4)),
    2: Surd(0, 0, Fraction(1, 2)),
    3: Surd(0, Fraction(1, 2)),
    4: Surd(Fraction(1, 2)),
    5: Surd(0, Fraction(-1, 4), 0, Fraction(1, 4)),
    6: Surd(0),
}


def cos12(k: int) -> Surd:
    """cos(k*pi/12), exactly."""
    k %= 24
    if k > 12:
        k = 24 - k
    if k > 6:
        return -_COS12[12 - k]
    return _COS12[k]


def sin12(k: int) -> Surd:
    return cos12(6 - k)


def cot12(k: int) -> Surd:
    s = sin12(k)
    if s.is_zero():
        raise ZeroDivisionError(f"cot({k}*pi/12) is undefined")
    return cos12(k) / s


def expi12(k: int) -> CSurd:
    """exp(i*k*pi/12)."""
    return CSurd(cos12(k), sin12(k))


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(sqrt|\d+|[()+\-*/,])")


def parse(expr: str) -> Surd:
    """Parse expressions such as ``"-2*sqrt(3/2)"`` or ``"3*sqrt(3)/2"``."""
    tokens = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise ValueError(f"cannot parse surd expression {expr!r} at {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    p = _Parser(tokens, expr)
    val = p.expr()
    if p.i != len(tokens):
        raise ValueError(f"trailing tokens in {expr!r}")
    return val


class _Parser:
    def __init__(self, tokens, src):
        self.t, self.i, self.src = tokens, 0, src

    def peek(self):
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self, tok=None):
        cur = self.peek()
        if cur is None or (tok is not None and cur != tok):
            raise ValueError(f"malformed surd expression {self.src!r}")
        self.i += 1
        return cur

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take("(")
            val = self.expr()
            self.take(")")
            return val
        if tok == "sqrt":
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            a, b, c, d = inner.c
            if b or c or d:
                raise ValueError(f"sqrt of irrational argument in {self.src!r}")
            return Surd.sqrt(a)
        if tok is not None and tok.isdigit():
            self.take()
            return Surd(int(tok))
        raise ValueError(f"unexpected token {tok!r} in {self.src!r}")
