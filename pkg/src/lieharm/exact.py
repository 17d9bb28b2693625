"""Exact scalar arithmetic: rationals extended by sqrt(2), and their complexification.

All arithmetic here is exact; these scalars back the eigenvalue constants,
the generator matrices and every identity check that must have residual
*identically* zero rather than merely small.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

_RatLike = Union[int, Fraction]


class QSqrt2:
    """A number a + b*sqrt(2) with exact rational a, b.

    Closed under +, -, *, / (the field Q(sqrt 2)); Fraction keeps all
    denominators gcd-reduced and positive.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: _RatLike = 0, b: _RatLike = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, (int, Fraction)):
            return QSqrt2(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return QSqrt2(self.a * o.a)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def inverse(self) -> "QSqrt2":
        # 1/(a + b s2) = (a - b s2) / (a^2 - 2 b^2); the norm is nonzero
        # for nonzero arguments because sqrt(2) is irrational.
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return QSqrt2(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_fraction(self) -> Fraction:
        """The value as a plain rational; raises if a sqrt(2) part is present."""
        if self.b != 0:
            raise ValueError(f"{self} has an irrational sqrt(2) part")
        return self.a

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 1.4142135623730951

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a}+{self.b}*sqrt2"


SQRT2 = QSqrt2(0, 1)
INV_SQRT2 = QSqrt2(0, Fraction(1, 2))  # 1/sqrt(2) == sqrt(2)/2


class RationalComplex:
    """Exact complex scalar re + im*i with re, im in Q(sqrt 2).

    (a + b) - b == a holds for all values; there is no rounding anywhere.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, QSqrt2) else QSqrt2(re)
        self.im = im if isinstance(im, QSqrt2) else QSqrt2(im)

    @staticmethod
    def _coerce(x) -> "RationalComplex":
        if isinstance(x, RationalComplex):
            return x
        if isinstance(x, (int, Fraction, QSqrt2)):
            return RationalComplex(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.im.is_zero() and o.im.is_zero():
            return RationalComplex(self.re * o.re)
        return RationalComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def inverse(self) -> "RationalComplex":
        n = self.re * self.re + self.im * self.im
        if n.is_zero():
            raise ZeroDivisionError("division by zero RationalComplex")
        ninv = n.inverse()
        return RationalComplex(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def as_fraction(self) -> Fraction:
        """The value as a plain rational; raises if imaginary or sqrt(2) parts exist."""
        if not self.im.is_zero():
            raise ValueError(f"{self} is not real")
        return self.re.as_fraction()

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im.is_zero():
            return repr(self.re)
        if self.re.is_zero():
            return f"({self.im})i"
        return f"({self.re}+({self.im})i)"


RC_ZERO = RationalComplex(0)
RC_ONE = RationalComplex(1)
RC_I = RationalComplex(0, 1)


def rc(re=0, im=0) -> RationalComplex:
    """Shorthand constructor accepting ints, Fractions or QSqrt2 parts."""
    return RationalComplex(re, im)
