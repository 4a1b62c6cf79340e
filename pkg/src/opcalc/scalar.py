"""Scalar field: exact complex rationals and double-precision complex floats.

Exact values are ``int``/``Fraction`` when real and :class:`QQi` when they
carry a nonzero imaginary part. Anything else (``float``/``complex``) is a
float-mode scalar. Arithmetic between an exact and a float scalar yields a
float scalar; exact arithmetic never leaves the exact types.
"""
from __future__ import annotations

import math
import numbers
from fractions import Fraction

DEFAULT_EPS = 1e-12


class QQi:
    """A Gaussian rational ``re + im*i`` with ``Fraction`` parts.

    Operations return a plain ``Fraction`` whenever the imaginary part
    cancels, so real exact values never linger as ``QQi``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im):
        if im == 0:
            return Fraction(re)
        return QQi(re, im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def conjugate(self):
        return QQi.make(self.re, -self.im)

    def _parts(other):
        if isinstance(other, QQi):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = QQi._parts(other)
        if p is None:
            return complex(self) + other if isinstance(other, numbers.Number) else NotImplemented
        return QQi.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = QQi._parts(other)
        if p is None:
            return complex(self) - other if isinstance(other, numbers.Number) else NotImplemented
        return QQi.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = QQi._parts(other)
        if p is None:
            return other - complex(self) if isinstance(other, numbers.Number) else NotImplemented
        return QQi.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = QQi._parts(other)
        if p is None:
            return complex(self) * other if isinstance(other, numbers.Number) else NotImplemented
        a, b = self.re, self.im
        c, d = p
        return QQi.make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = QQi._parts(other)
        if p is None:
            return complex(self) / other if isinstance(other, numbers.Number) else NotImplemented
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("QQi division by zero")
        a, b = self.re, self.im
        return QQi.make((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = QQi._parts(other)
        if p is None:
            return other / complex(self) if isinstance(other, numbers.Number) else NotImplemented
        return QQi(*p) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return 1 / (self ** -n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        p = QQi._parts(other)
        if p is None:
            if isinstance(other, numbers.Number):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"

    def __str__(self):
        return format_scalar_str(self)


numbers.Complex.register(QQi)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QQi)) and not isinstance(x, bool)


def all_exact(values) -> bool:
    return all(is_exact(v) for v in values)


def to_exact(x):
    """Convert a number to an exact scalar; floats are read through their
    shortest decimal repr so that ``0.1`` becomes ``1/10``."""
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QQi):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot make {x!r} exact")
        return Fraction(repr(x))
    if isinstance(x, complex):
        return QQi.make(to_exact(x.real), to_exact(x.imag))
    if isinstance(x, numbers.Complex):
        return to_exact(complex(x))
    raise TypeError(f"not a scalar: {x!r}")


def to_float(x) -> complex:
    return complex(x)


def simplify_float(x):
    """Return a float scalar as ``float`` when it has no imaginary part."""
    z = complex(x)
    return z.real if z.imag == 0 else z


def is_zero(x, eps: float = 0.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= eps


def real_part(x):
    if isinstance(x, QQi):
        return x.re
    if is_exact(x):
        return Fraction(x)
    return complex(x).real


def imag_part(x):
    if isinstance(x, QQi):
        return x.im
    if is_exact(x):
        return Fraction(0)
    return complex(x).imag


def parse_scalar(value, exact: bool = True):
    """Parse a document number: ``3``, ``0.5``, ``"p/q"``, or a ``[re, im]`` pair.

    Strings and ints are always exact; floats become exact only when
    ``exact`` is set.
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex scalar must be a [re, im] pair, got {value!r}")
        re = parse_scalar(value[0], exact)
        im = parse_scalar(value[1], exact)
        if is_exact(re) and is_exact(im):
            return QQi.make(re, im)
        return complex(re) + 1j * complex(im)
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return to_exact(value) if exact else value
    raise ValueError(f"unrecognised scalar {value!r}")


def _fraction_json(q: Fraction):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_to_json(x):
    """JSON form: exact reals as ``"p/q"`` strings, complex values as pairs."""
    if isinstance(x, QQi):
        return [_fraction_json(x.re), _fraction_json(x.im)]
    if is_exact(x):
        return _fraction_json(Fraction(x))
    z = complex(x)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def format_scalar_str(x) -> str:
    if isinstance(x, QQi):
        re, im = x.re, x.im
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"({re}{sign}{abs(im)}i)"
    if is_exact(x):
        return str(Fraction(x))
    z = complex(x)
    if z.imag == 0:
        return repr(z.real)
    return repr(z)


def close(a, b, rel: float = 1e-10, abs_tol: float = 1e-12) -> bool:
    """Exact comparison when both sides are exact, tolerance otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    a, b = complex(a), complex(b)
    return abs(a - b) <= max(abs_tol, rel * max(abs(a), abs(b)))
