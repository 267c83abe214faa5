"""Exact Gaussian-rational scalars.

All pointwise identities checked by this package are polynomial in the
input data, so exact rational arithmetic lets a check conclude with a
literal zero instead of a tolerance.  ``GaussQ`` is a minimal immutable
number type ``a + b i`` with ``a, b`` arbitrary-precision rationals
(``gmpy2.mpq``).  Mixing with ``float``/``complex`` silently drops to
floating point, which is how the float mode of the Clifford layer works.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["GaussQ", "I", "ZERO", "ONE", "Q", "gauss", "is_exact", "to_complex"]

_MPQ = type(mpq(0))


def Q(x, den=None):
    """Coerce an int / Fraction / mpq (or numerator, denominator) to mpq."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, Rational)):
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _is_rat(x) -> bool:
    return isinstance(x, (_MPQ, int, Fraction)) and not isinstance(x, bool)


class GaussQ:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(re))
        object.__setattr__(self, "im", Q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._raw(self.re + other.re, self.im + other.im)
        if _is_rat(other):
            return GaussQ._raw(self.re + Q(other), self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussQ._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._raw(self.re - other.re, self.im - other.im)
        if _is_rat(other):
            return GaussQ._raw(self.re - Q(other), self.im)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussQ._raw(a * c - b * d, a * d + b * c)
        if _is_rat(other):
            q = Q(other)
            return GaussQ._raw(self.re * q, self.im * q)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussQ):
            n = other.re * other.re + other.im * other.im
            if n == 0:
                raise ZeroDivisionError("GaussQ division by zero")
            return self * GaussQ._raw(other.re / n, -other.im / n)
        if _is_rat(other):
            q = Q(other)
            if q == 0:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ._raw(self.re / q, self.im / q)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussQ(other) / self if _is_rat(other) else other / complex(self)

    def conjugate(self):
        return GaussQ._raw(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def abs2(self):
        return self.re * self.re + self.im * self.im

    # -- comparison / conversion -------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if _is_rat(other):
            return self.im == 0 and self.re == Q(other)
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


ZERO = GaussQ(0, 0)
ONE = GaussQ(1, 0)
I = GaussQ(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, GaussQ) or _is_rat(x)


def gauss(re, im):
    """``re + i*im``: exact when both parts are rational, else complex."""
    if _is_rat(re) and _is_rat(im):
        return GaussQ._raw(Q(re), Q(im))
    return complex(float(re), float(im))


def to_complex(x) -> complex:
    return complex(x)
