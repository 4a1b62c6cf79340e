"""Truncated coefficient sequences under the Cauchy product.

A :class:`Sequence` holds ``a_0 .. a_{N-1}`` of a formal series
``a_0 + a_1 s + a_2 s^2 + ...``. Products are convolutions cut at ``N``;
no convergence is ever implied.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable

from .errors import NotInvertible, TruncationMismatch
from .scalar import DEFAULT_EPS, all_exact, close, is_exact, simplify_float, to_exact

DEFAULT_TRUNCATION = 64


def default_truncation() -> int:
    env = os.environ.get("OPCALC_TRUNCATION")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("OPCALC_TRUNCATION must be a positive integer")
        return n
    return DEFAULT_TRUNCATION


def _normalize(values):
    values = list(values)
    if all_exact(values):
        return tuple(Fraction(v) if isinstance(v, int) else v for v in values)
    return tuple(simplify_float(v) for v in values)


class Sequence:
    """Immutable truncated sequence.

    ``degraded`` counts trailing slots whose values are zero padding rather
    than genuine coefficients (set by :func:`shift_left`).
    """

    __slots__ = ("coeffs", "degraded")

    def __init__(self, coeffs: Iterable, degraded: int = 0):
        coeffs = _normalize(coeffs)
        if not coeffs:
            raise ValueError("a Sequence needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "degraded", min(max(degraded, 0), len(coeffs)))

    def __setattr__(self, key, value):
        raise AttributeError("Sequence is immutable")

    @classmethod
    def from_values(cls, values, N: int | None = None) -> "Sequence":
        """Pad ``values`` with zeros (or cut) to length ``N``."""
        values = list(values)
        if N is None:
            N = len(values) if values else default_truncation()
        zero = 0 if all_exact(values) else 0.0
        values = values[:N] + [zero] * (N - len(values))
        return cls(values)

    @classmethod
    def zeros(cls, N: int | None = None, exact: bool = True) -> "Sequence":
        N = N or default_truncation()
        return cls([Fraction(0) if exact else 0.0] * N)

    @classmethod
    def constant(cls, c, N: int | None = None) -> "Sequence":
        """The constant ``c`` read as the sequence ``{c, 0, 0, ...}``."""
        return cls.from_values([c], N or default_truncation())

    @classmethod
    def one(cls, N: int | None = None) -> "Sequence":
        return cls.constant(Fraction(1), N)

    @classmethod
    def s_power(cls, m: int, N: int | None = None) -> "Sequence":
        """``s^m``: a single one at index ``m``."""
        N = N or default_truncation()
        return cls([Fraction(int(i == m)) for i in range(N)])

    @classmethod
    def geometric(cls, r, N: int | None = None) -> "Sequence":
        """``{r^n}``, i.e. ``1/(1 - r s)``."""
        N = N or default_truncation()
        vals, p = [], Fraction(1) if is_exact(r) else 1.0
        for _ in range(N):
            vals.append(p)
            p = p * r
        return cls(vals)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)

    def to_float(self) -> "Sequence":
        return Sequence([complex(c) for c in self.coeffs], self.degraded)

    def to_exact(self) -> "Sequence":
        return Sequence([to_exact(c) for c in self.coeffs], self.degraded)

    def truncate(self, N: int) -> "Sequence":
        return Sequence.from_values(self.coeffs, N)

    def first_nonzero_index(self, eps: float = DEFAULT_EPS) -> int | None:
        """Witness for invertibility: the sequence is invertible iff this is 0."""
        for i, c in enumerate(self.coeffs):
            if (c != 0) if is_exact(c) else abs(c) > eps:
                return i
        return None

    def is_invertible(self, eps: float = DEFAULT_EPS) -> bool:
        return self.first_nonzero_index(eps) == 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __eq__(self, other):
        if isinstance(other, Sequence):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.N > 8 else ""
        return f"Sequence([{head}{tail}], N={self.N})"

    def allclose(self, other, rel: float = 1e-10, abs_tol: float = 1e-12) -> bool:
        other = other.coeffs if isinstance(other, Sequence) else list(other)
        if len(other) != self.N:
            return False
        return all(close(a, b, rel, abs_tol) for a, b in zip(self.coeffs, other))

    def _coerce(self, other, strict):
        if not isinstance(other, Sequence):
            return None
        if other.N != self.N:
            if strict:
                raise TruncationMismatch(f"truncations differ: {self.N} vs {other.N}")
            n = min(self.N, other.N)
            return self.truncate(n), other.truncate(n)
        return self, other

    def add(self, other, strict: bool = False) -> "Sequence":
        a, b = self._coerce(other, strict)
        return Sequence([x + y for x, y in zip(a, b)])

    def __add__(self, other):
        if isinstance(other, Sequence):
            return self.add(other)
        return self.add(Sequence.constant(other, self.N))

    __radd__ = __add__

    def __neg__(self):
        return Sequence([-c for c in self.coeffs], self.degraded)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Sequence":
        return Sequence([c * x for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Sequence):
            return cauchy_product(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def cauchy_product(a: Sequence, b: Sequence, strict: bool = False) -> Sequence:
    """``(ab)_n = sum_{k<=n} a_k b_{n-k}`` for ``n < N``."""
    a, b = a._coerce(b, strict)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for n in range(a.N):
        acc = ac[0] * bc[n]
        for k in range(1, n + 1):
            acc = acc + ac[k] * bc[n - k]
        out.append(acc)
    return Sequence(out)


def invert(a: Sequence, eps: float = DEFAULT_EPS) -> Sequence:
    """Cauchy inverse via ``b_n = -(a_1 b_{n-1} + ... + a_n b_0) / a_0``."""
    a0 = a[0]
    if (a0 == 0) if is_exact(a0) else abs(a0) <= eps:
        raise NotInvertible(f"leading coefficient {a0} is zero")
    inv0 = 1 / a0 if not is_exact(a0) else Fraction(1) / a0
    b = [inv0]
    for n in range(1, a.N):
        acc = a[1] * b[n - 1]
        for k in range(2, n + 1):
            acc = acc + a[k] * b[n - k]
        b.append(-acc * inv0)
    return Sequence(b)


def shift_right(a: Sequence, m: int) -> Sequence:
    """Multiply by ``s^m``; coefficients pushed past ``N`` are dropped."""
    if m < 0:
        raise ValueError("shift amount must be non-negative")
    zero = a[0] * 0
    m = min(m, a.N)
    return Sequence([zero] * m + list(a.coeffs[: a.N - m]))


def shift_left(a: Sequence, m: int) -> Sequence:
    """``{a_{n+m}}``; the last ``m`` slots are zero padding, flagged via ``degraded``."""
    if m < 0:
        raise ValueError("shift amount must be non-negative")
    zero = a[0] * 0
    m = min(m, a.N)
    return Sequence(list(a.coeffs[m:]) + [zero] * m, degraded=a.degraded + m)


def shift_identity_rhs(a: Sequence, m: int) -> Sequence:
    """``a - a_0 - a_1 s - ... - a_{m-1} s^{m-1}``, equal to ``s^m l^m a``."""
    if m < 0:
        raise ValueError("shift amount must be non-negative")
    zero = a[0] * 0
    m = min(m, a.N)
    return Sequence([zero] * m + list(a.coeffs[m:]))
