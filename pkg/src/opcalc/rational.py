"""Polynomials and rational functions in the formal variable ``s``.

Denominators are factored into rate form ``(1 - r s)^k`` rather than by
their roots in ``s``; partial fractions are expressed as
``c / (1 - r s)^j`` terms plus an optional polynomial part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DenominatorVanishesAtZero, NoFactorization
from .scalar import QQi, all_exact, close, is_exact, simplify_float
from .sequence import Sequence, default_truncation, invert

CLUSTER_EPS = 1e-8
FACTOR_RESIDUAL_TOL = 1e-7
# Rational-root candidates are enumerated only when both end coefficients
# are below this bound; larger problems go straight to root snapping.
_RRT_LIMIT = 10**12


def _clean(values):
    values = list(values)
    if all_exact(values):
        values = [Fraction(v) if isinstance(v, int) else v for v in values]
    else:
        values = [simplify_float(v) for v in values]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


class Poly:
    """Polynomial with ascending coefficients; the zero polynomial is ``()``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _clean(coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def s(cls):
        return cls([0, 1])

    @classmethod
    def monomial(cls, j, c=1):
        return cls([0] * j + [c])

    @classmethod
    def from_rates(cls, rates):
        """Expand ``prod (1 - r s)^k`` for ``(r, k)`` pairs."""
        p = cls.const(Fraction(1))
        for r, k in rates:
            p = p * cls([1, -r]) ** k
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = str(c)
            if j == 0:
                parts.append(cs)
            else:
                mono = "s" if j == 1 else f"s^{j}"
                parts.append(mono if c == 1 else f"{cs}*{mono}")
        return " + ".join(parts) or "0"

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self), len(other))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Poly":
        return Poly([c * x for x in self.coeffs])

    def shift(self, j: int) -> "Poly":
        """Multiply by ``s^j``."""
        if self.is_zero():
            return self
        return Poly([0] * j + list(self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([j * c for j, c in enumerate(self.coeffs)][1:])

    def compose(self, q: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def reversed(self, degree: int | None = None) -> "Poly":
        """``s^d p(1/s)`` with ``d`` defaulting to ``self.degree``."""
        d = self.degree if degree is None else degree
        padded = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return Poly(padded[::-1])

    def low_order(self) -> int:
        """Number of leading zero coefficients (the power of ``s`` dividing ``p``)."""
        for j, c in enumerate(self.coeffs):
            if c != 0:
                return j
        return 0

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = len(rem) - len(other)
        if dq < 0:
            return Poly(), self
        quot = [0] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] / lead
            quot[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * b
        return Poly(quot), Poly(rem[: other.degree])

    def to_float(self) -> "Poly":
        return Poly([complex(c) for c in self.coeffs])

    def allclose(self, other, rel=1e-10, abs_tol=1e-12) -> bool:
        n = max(len(self), len(other))
        return all(close(self[i], other[i], rel, abs_tol) for i in range(n))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over an exact field (Fractions or Gaussian rationals)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    if a.is_zero():
        return Poly.const(Fraction(1))
    return a.scale(Fraction(1) / a.coeffs[-1] if is_exact(a.coeffs[-1]) else 1 / a.coeffs[-1])


class RationalExpr:
    """``num / (var^pole_order * den)``.

    For ``var == "s"`` the stored ``den`` satisfies ``den(0) == 1`` and any
    power of ``s`` that divides the true denominator is held in
    ``pole_order`` after cancelling common powers with the numerator. For
    ``var == "z"`` the denominator is made monic instead.
    """

    __slots__ = ("num", "den", "pole_order", "var")

    def __init__(self, num, den=None, var: str = "s"):
        num = num if isinstance(num, Poly) else Poly(num if isinstance(num, (list, tuple)) else [num])
        if den is None:
            den = Poly.const(Fraction(1))
        den = den if isinstance(den, Poly) else Poly(den if isinstance(den, (list, tuple)) else [den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        pole = 0
        if var == "s":
            j = den.low_order()
            if j:
                k = min(j, num.low_order()) if not num.is_zero() else j
                num = Poly(num.coeffs[k:])
                den = Poly(den.coeffs[k:])
                pole = den.low_order()
                den = Poly(den.coeffs[pole:])
            lead = den.coeffs[0]
        else:
            lead = den.coeffs[-1]
        if lead != 1:
            inv = Fraction(1) / lead if is_exact(lead) else 1 / lead
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "pole_order", pole)
        object.__setattr__(self, "var", var)

    def __setattr__(self, key, value):
        raise AttributeError("RationalExpr is immutable")

    @classmethod
    def const(cls, c, var="s"):
        return cls(Poly.const(c), var=var)

    @classmethod
    def zero(cls, var="s"):
        return cls(Poly(), var=var)

    @classmethod
    def geometric(cls, r, c=1):
        """``c / (1 - r s)``."""
        return cls(Poly.const(c), Poly([1, -r]))

    @property
    def full_den(self) -> Poly:
        return self.den.shift(self.pole_order)

    @property
    def exact(self) -> bool:
        return self.num.exact and self.den.exact

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, x):
        return self.num(x) / self.full_den(x)

    def __repr__(self):
        return f"RationalExpr(({self.num}) / ({self.full_den}), var={self.var!r})"

    def __str__(self):
        return f"({self.num}) / ({self.full_den})".replace("s", self.var)

    def _check_var(self, other):
        if other.var != self.var:
            raise ValueError(f"cannot combine functions of {self.var} and {other.var}")

    def _lift(self, other):
        if isinstance(other, RationalExpr):
            self._check_var(other)
            return other
        return RationalExpr.const(other, self.var)

    def __add__(self, other):
        other = self._lift(other)
        if self.full_den == other.full_den:
            return RationalExpr(self.num + other.num, self.full_den, self.var)
        return RationalExpr(
            self.num * other.full_den + other.num * self.full_den,
            self.full_den * other.full_den,
            self.var,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.full_den, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        return RationalExpr(self.num * other.num, self.full_den * other.full_den, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalExpr(self.num * other.full_den, self.full_den * other.num, self.var)

    def __eq__(self, other):
        if not isinstance(other, RationalExpr):
            if isinstance(other, (int, float, complex, Fraction, QQi)):
                other = RationalExpr.const(other, self.var)
            else:
                return NotImplemented
        if other.var != self.var:
            return False
        return self.num * other.full_den == other.num * self.full_den

    __hash__ = None

    def equals(self, other, rel=1e-10, abs_tol=1e-12) -> bool:
        """Equality by cross multiplication, exact or within tolerance."""
        if other.var != self.var:
            return False
        return (self.num * other.full_den).allclose(other.num * self.full_den, rel, abs_tol)

    def reduced(self) -> "RationalExpr":
        """Cancel the polynomial gcd of numerator and denominator (exact only)."""
        if not self.exact or self.num.is_zero():
            return self
        g = poly_gcd(self.num, self.full_den)
        if g.degree == 0:
            return self
        return RationalExpr(self.num.divmod(g)[0], self.full_den.divmod(g)[0], self.var)

    def to_float(self) -> "RationalExpr":
        return RationalExpr(self.num.to_float(), self.full_den.to_float(), self.var)


def solve_linear(A, b, exact: bool = True):
    """Solve a square system; Gauss-Jordan over exact scalars, LAPACK for floats.

    Returns None when the system is singular.
    """
    n = len(A)
    if not exact:
        M = np.array([[complex(x) for x in row] for row in A])
        try:
            sol = np.linalg.solve(M, np.array([complex(x) for x in b]))
        except np.linalg.LinAlgError:
            return None
        if np.linalg.cond(M) > 1e12:
            return None
        return [simplify_float(v) for v in sol]
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = Fraction(1) / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def rational_to_sequence(f: RationalExpr, N: int | None = None) -> Sequence:
    """First ``N`` coefficients of ``num * invert(den)``."""
    N = N or default_truncation()
    if f.var != "s":
        raise ValueError("expand rational functions of s; bridge z-forms first")
    if f.pole_order:
        raise DenominatorVanishesAtZero(f"{f} has a pole of order {f.pole_order} at s = 0")
    num = Sequence.from_values(f.num.coeffs[:N] or [Fraction(0)], N)
    den = Sequence.from_values(f.den.coeffs[:N], N)
    return num * invert(den)


class Factorization(NamedTuple):
    rates: list
    mode: str  # "exact", "float" or "mixed"
    residual: float


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _deflate(p: Poly, root):
    """Divide ``p`` by ``(x - root)`` exactly; returns the quotient or None."""
    q, r = p.divmod(Poly([-root, 1]))
    return q if r.is_zero() else None


def _rational_roots(p: Poly):
    """Rational roots of an exact polynomial with rational coefficients."""
    if any(isinstance(c, QQi) for c in p.coeffs):
        return []
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    a0, ad = ints[0], ints[-1]
    if a0 == 0:
        return [Fraction(0)]
    if abs(a0) > _RRT_LIMIT or abs(ad) > _RRT_LIMIT:
        return []
    found = []
    for num in _divisors(a0):
        for den in _divisors(ad):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in found and p(cand) == 0:
                    found.append(cand)
    return found


def _snap(z: complex, max_den: int = 10**6):
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    return QQi.make(re, im)


def _single_linkage(roots, tol):
    groups: list[list[complex]] = []
    for z in roots:
        hits = [g for g in groups if any(abs(z - w) <= tol * max(1.0, abs(w)) for w in g)]
        merged = [z]
        for g in hits:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups


def _tidy(z: complex, scale: float) -> complex:
    re, im = z.real, z.imag
    if abs(im) <= 1e-13 * scale:
        im = 0.0
    if abs(re) <= 1e-13 * scale:
        re = 0.0
    return complex(re, im)


def _exact_complex(z):
    z = complex(z)
    return QQi.make(Fraction(z.real), Fraction(z.imag))


def _polish(coeffs, z: complex, k: int, steps: int = 8) -> complex:
    """Newton on the (k-1)-th derivative, where a k-fold root is simple.

    The cluster mean of a k-fold root is only good to about eps**(1/k), and
    even simple roots next to a cluster lose digits when the polynomial is
    evaluated in floating point. Float coefficients are exact binary
    fractions, so the residual is evaluated exactly and only the step is
    rounded; a step is kept only while it lowers the residual.
    """
    p = Poly([_exact_complex(c) for c in coeffs[::-1]])
    for _ in range(k - 1):
        p = p.derivative()
    dp = p.derivative()
    best = complex(z)
    fbest = abs(complex(p(_exact_complex(best))))
    for _ in range(steps):
        if fbest == 0:
            break
        x = _exact_complex(best)
        slope = complex(dp(x))
        if slope == 0:
            break
        cand = best - complex(p(x)) / slope
        fc = abs(complex(p(_exact_complex(cand))))
        if fc >= fbest:
            break
        best, fbest = cand, fc
    return best


def _monic_from_roots(roots, mults, skip=None):
    out = np.array([1.0 + 0j])
    for i, (z, k) in enumerate(zip(roots, mults)):
        k = k - 1 if i == skip else k
        for _ in range(k):
            out = np.convolve(out, [1.0, -z])
    return out


def _joint_refine(coeffs, roots, mults, steps: int = 6):
    """Gauss-Newton fit of ``prod (x - r_i)^{k_i}`` to the monic coefficients.

    Once multiplicities are fixed, fitting all centres together keeps a
    simple root from absorbing the splitting of a nearby multiple root.
    """
    if len(roots) < 2 and mults[0] == 1:
        return roots
    target = np.asarray(coeffs, dtype=complex)

    def resid(rs):
        return _monic_from_roots(rs, mults)[1:] - target[1:]

    best = np.array(roots, dtype=complex)
    rbest = np.linalg.norm(resid(best))
    for _ in range(steps):
        if rbest == 0:
            break
        J = np.empty((len(target) - 1, len(best)), dtype=complex)
        for i, k in enumerate(mults):
            col = -k * _monic_from_roots(best, mults, skip=i)
            J[:, i] = np.concatenate([np.zeros(len(target) - len(col)), col])[1:]
        delta = np.linalg.lstsq(J, -resid(best), rcond=None)[0]
        cand = best + delta
        rc = np.linalg.norm(resid(cand))
        if not rc < rbest:
            break
        best, rbest = cand, rc
    return [complex(z) for z in best]


def _float_rates(rev: Poly, cluster_eps):
    """Roots of the monic reversed polynomial, grouped into multiplicities.

    Eigenvalue root finders split a k-fold root into a ring of radius about
    eps**(1/k), so grouping is tried with a ladder of tolerances. Each
    grouping is refined (polished centres, then a joint fit) and the
    coarsest one that rebuilds the polynomial to 1e-10 is kept.
    """
    raw = [complex(c) for c in rev.coeffs[::-1]]
    coeffs = np.array(raw) / raw[0]
    if len(coeffs) < 2:
        return []
    roots = [complex(z) for z in np.roots(coeffs)]
    scale = max(1.0, max(abs(z) for z in roots))
    cscale = max(1.0, float(np.max(np.abs(coeffs))))

    def fit(groups):
        mults = [len(g) for g in groups]
        centres = [_polish(raw, complex(np.mean(g)), k) for g, k in zip(groups, mults)]
        centres = _joint_refine(coeffs, centres, mults)
        res = float(np.max(np.abs(_monic_from_roots(centres, mults) - coeffs))) / cscale
        return centres, mults, res

    best = fit([[z] for z in roots])
    for tol in (cluster_eps, 1e-6, 1e-5, 1e-4, 1e-3):
        groups = _single_linkage(roots, tol)
        if len(groups) < len(best[0]):
            cand = fit(groups)
            if cand[2] <= 1e-10:
                best = cand
    out = [(simplify_float(_tidy(z, scale)), k) for z, k in zip(best[0], best[1])]
    return sorted(out, key=lambda rk: (complex(rk[0]).real, complex(rk[0]).imag))


def factor_rates(den: Poly, cluster_eps: float = CLUSTER_EPS) -> Factorization:
    """Write ``den`` (with ``den(0) == 1``) as ``prod (1 - r_i s)^{k_i}``.

    The rates are the roots of the reversed polynomial. Exact input tries
    the rational-root theorem, then Gaussian-rational snapping of numeric
    roots verified by exact division; whatever is left is solved in floating
    point with companion-matrix eigenvalues.
    """
    if den.is_zero() or den[0] == 0:
        raise NoFactorization("denominator must be nonzero at s = 0")
    if den[0] != 1:
        den = den.scale(Fraction(1) / den[0] if is_exact(den[0]) else 1 / den[0])
    rev = den.reversed()
    rates: dict = {}
    mode = "exact" if den.exact else "float"
    if den.exact:
        rest = rev
        for root in _rational_roots(rest):
            while rest.degree > 0:
                q = _deflate(rest, root)
                if q is None:
                    break
                rates[root] = rates.get(root, 0) + 1
                rest = q
        if rest.degree > 0:
            for z, _ in _float_rates(rest, cluster_eps):
                cand = _snap(complex(z))
                while rest.degree > 0:
                    q = _deflate(rest, cand)
                    if q is None:
                        break
                    rates[cand] = rates.get(cand, 0) + 1
                    rest = q
        if rest.degree > 0:
            mode = "mixed"
            for r, k in _float_rates(rest, cluster_eps):
                rates[r] = rates.get(r, 0) + k
    else:
        for r, k in _float_rates(rev, cluster_eps):
            rates[r] = rates.get(r, 0) + k
    out = sorted(rates.items(), key=lambda rk: (float(complex(rk[0]).real), float(complex(rk[0]).imag)))
    residual = 0.0
    if mode != "exact":
        rebuilt = Poly.from_rates(out)
        scale = max(1.0, max(abs(complex(c)) for c in den.coeffs))
        residual = max(abs(complex(rebuilt[i]) - complex(den[i])) for i in range(max(len(den), len(rebuilt)))) / scale
        if residual > FACTOR_RESIDUAL_TOL:
            raise NoFactorization(f"factorization residual {residual:.3e} exceeds tolerance")
    return Factorization(out, mode, residual)


def find_rates(den: Poly, cluster_eps: float = CLUSTER_EPS):
    """List of ``(rate, multiplicity)`` with ``den == prod (1 - rate*s)^multiplicity``."""
    return factor_rates(den, cluster_eps).rates


@dataclass(frozen=True)
class PoleTerm:
    """``coeff / (1 - rate*s)^multiplicity``."""

    rate: object
    multiplicity: int
    coeff: object

    def to_rational(self) -> RationalExpr:
        return RationalExpr(Poly.const(self.coeff), Poly([1, -self.rate]) ** self.multiplicity)

    def __call__(self, s):
        return self.coeff / (1 - self.rate * s) ** self.multiplicity


def pole_term_sequence(t: PoleTerm, N: int | None = None) -> Sequence:
    """``c * C(n+k-1, k-1) * r^n``."""
    N = N or default_truncation()
    k, r, c = t.multiplicity, t.rate, t.coeff
    out, p = [], Fraction(1) if is_exact(r) else 1.0
    for n in range(N):
        out.append(c * math.comb(n + k - 1, k - 1) * p)
        p = p * r
    return Sequence(out)


@dataclass(frozen=True)
class PFDecomposition:
    terms: tuple
    poly_part: Poly = field(default_factory=Poly)
    mode: str = "exact"

    def to_rational(self) -> RationalExpr:
        out = RationalExpr(self.poly_part)
        for t in self.terms:
            out = out + t.to_rational()
        return out

    def to_sequence(self, N: int | None = None) -> Sequence:
        N = N or default_truncation()
        seq = Sequence.from_values(list(self.poly_part.coeffs[:N]) or [Fraction(0)], N)
        for t in self.terms:
            seq = seq + pole_term_sequence(t, N)
        return seq

    def __call__(self, s):
        return self.poly_part(s) + sum(t(s) for t in self.terms)

    def rates(self):
        seen = {}
        for t in self.terms:
            seen[t.rate] = max(seen.get(t.rate, 0), t.multiplicity)
        return list(seen.items())


def _taylor_div(num: Poly, den: Poly, order: int):
    """First ``order`` Taylor coefficients at 0 of ``num / den`` (``den(0) != 0``)."""
    a = [num[i] for i in range(order)]
    b = [den[i] for i in range(order)]
    inv0 = Fraction(1) / b[0] if is_exact(b[0]) else 1 / b[0]
    out = []
    for n in range(order):
        acc = a[n]
        for k in range(1, n + 1):
            acc = acc - b[k] * out[n - k]
        out.append(acc * inv0)
    return out


def partial_fractions(f: RationalExpr, cluster_eps: float = CLUSTER_EPS) -> PFDecomposition:
    """Decompose ``f`` into ``poly_part + sum c_ij / (1 - r_i s)^j``.

    For each rate ``r`` of multiplicity ``k`` the substitution
    ``u = 1 - r s`` turns ``f * u^k`` into a function analytic at ``u = 0``;
    its first ``k`` Taylor coefficients are ``c_k, c_{k-1}, ..., c_1``.
    """
    if f.var != "s":
        raise ValueError("partial fractions are taken in s; bridge z-forms first")
    if f.pole_order:
        raise DenominatorVanishesAtZero(f"{f} has a pole at s = 0")
    num, den = f.num, f.den
    poly_part = Poly()
    if not num.is_zero() and num.degree >= den.degree:
        poly_part, num = num.divmod(den)
    if den.degree == 0:
        return PFDecomposition((), poly_part + num.scale(1 / den[0] if not is_exact(den[0]) else Fraction(1) / den[0]))
    fac = factor_rates(den, cluster_eps)
    terms = []
    for r, k in fac.rates:
        one = Fraction(1) if is_exact(r) else 1.0
        # s = (1 - u) / r
        sub = Poly([one / r, -one / r])
        g_num = num.compose(sub)
        if fac.mode == "exact" or (den.exact and is_exact(r)):
            other, rem = den.divmod(Poly([1, -r]) ** k)
            if not rem.is_zero():
                raise NoFactorization(f"rate {r} does not divide the denominator exactly")
            g_den = other.compose(sub)
        else:
            # 1 - q s = (1 - q/r) + (q/r) u; multiplying the linear factors
            # avoids the cancellation of composing the expanded product
            g_den = Poly.const(one)
            for q, m in fac.rates:
                if q != r:
                    g_den = g_den * Poly([(r - q) / r, q / r]) ** m
        coeffs = _taylor_div(g_num, g_den, k)
        for i, c in enumerate(coeffs):
            j = k - i
            if is_exact(c) and c == 0:
                continue
            terms.append(PoleTerm(r, j, c))
    terms.sort(key=lambda t: (float(complex(t.rate).real), float(complex(t.rate).imag), t.multiplicity))
    return PFDecomposition(tuple(terms), poly_part, fac.mode)
