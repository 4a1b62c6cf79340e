"""Numeric evaluation: basis monomials, series reconstruction, Bessel/Kelvin
oracles and operator application.

The oracles here sum the standard ascending series directly and never look
at the transform table, so they can be used to check it.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from numpy.polynomial import chebyshev

from .errors import LimitDidNotConverge, StepUnderflow
from .sequence import Sequence

_EPS = np.finfo(float).eps


def _is_int(nu) -> bool:
    return float(nu).is_integer()


def _gamma_factor(nu, n: int) -> float:
    """``Gamma(nu + n + 1) * n!`` as a float."""
    if _is_int(nu):
        return float(math.factorial(int(nu) + n) * math.factorial(n))
    g = nu + n + 1
    if g < 171:
        return math.gamma(g) * math.factorial(n)
    return math.exp(math.lgamma(g) + math.lgamma(n + 1))


def eval_basis(n: int, nu, t) -> float:
    """Bessel-basis monomial ``(t/2)^(2n+nu) / (Gamma(nu+n+1) n!)``."""
    nu = float(nu)
    if t == 0:
        return 1.0 if (n == 0 and nu == 0) else 0.0
    if isinstance(t, complex):
        return (t / 2) ** (2 * n + nu) / _gamma_factor(nu, n)
    if t < 0:
        raise ValueError("basis monomials are evaluated for t >= 0")
    return (t / 2) ** (2 * n + nu) / _gamma_factor(nu, n)


def eval_maclaurin_basis(n: int, t) -> float:
    return t**n / math.factorial(n)


def _fsum_complex(terms):
    terms = [complex(x) for x in terms]
    re = math.fsum(z.real for z in terms)
    im = math.fsum(z.imag for z in terms)
    return re if im == 0 else complex(re, im)


class SeriesEvaluator:
    """Evaluate ``sum_{n<N} a_n basis_n(t)`` for a coefficient sequence.

    ``kind`` is ``"maclaurin"`` (basis ``t^n/n!``), ``"bessel"`` (basis
    ``f_{n,nu}``) or ``"zbridge"`` (``t`` is an integer index and the value
    is ``a_t``). After each call ``last_term`` holds the magnitude of the
    final retained term as a truncation indicator.
    """

    def __init__(self, coeffs, kind: str = "maclaurin", nu=0):
        self.coeffs = list(coeffs.coeffs if isinstance(coeffs, Sequence) else coeffs)
        self.kind = kind
        self.nu = float(nu)
        self.last_term = 0.0

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def basis(self, n, t):
        if self.kind == "bessel":
            return eval_basis(n, self.nu, t)
        return eval_maclaurin_basis(n, t)

    def shifted(self, k: int) -> "SeriesEvaluator":
        """The series of ``L^k y``: coefficients moved ``k`` places left."""
        return SeriesEvaluator(self.coeffs[k:] or [0], self.kind, self.nu)

    def __call__(self, t):
        if self.kind == "zbridge":
            k = int(t)
            return complex(self.coeffs[k]) if 0 <= k < self.N else 0.0
        terms = [complex(a) * self.basis(n, t) for n, a in enumerate(self.coeffs)]
        self.last_term = abs(terms[-1]) if terms else 0.0
        val = _fsum_complex(terms)
        return val


def apply_operator_numeric(f, realization, t: float, h: float = 1e-3) -> float:
    """``f'(t)`` (Maclaurin) or ``(L_nu f)(t)`` (Bessel) by central
    differences at steps ``h`` and ``h/2`` combined by Richardson
    extrapolation."""
    if t <= 0:
        raise ValueError("operators are applied at t > 0")
    if h < 1e3 * _EPS * t:
        raise StepUnderflow(f"step {h} too small at t={t}")
    if realization.kind == "bessel" and h >= t:
        raise ValueError("step must be smaller than t for the Bessel operator")

    if realization.kind == "bessel":
        nu = float(realization.nu)

        def op(step):
            fp, f0, fm = f(t + step), f(t), f(t - step)
            d1 = (fp - fm) / (2 * step)
            d2 = (fp - 2 * f0 + fm) / step**2
            return d2 + d1 / t - nu**2 * f0 / t**2
    else:

        def op(step):
            return (f(t + step) - f(t - step)) / (2 * step)

    return (4 * op(h / 2) - op(h)) / 3


def _chebyshev_limits(f, nu, X, deg, m_max, bessel):
    npts = 4 * (deg + 1)
    k = np.arange(npts)
    x = X * (1 + np.cos((2 * k + 1) * np.pi / (2 * npts))) / 2
    if bessel:
        t = 2 * np.sqrt(x)
        h = np.array([f(float(ti)) for ti in t]) / (t / 2) ** nu
    else:
        h = np.array([f(float(xi)) for xi in x])
    c = chebyshev.chebfit(2 * x / X - 1, h, deg)
    out = []
    for m in range(m_max + 1):
        d = chebyshev.chebder(c, m) if m else c
        dm = chebyshev.chebval(-1.0, d) * (2 / X) ** m
        out.append(dm * (_gamma_factor(nu, m) / math.factorial(m) if bessel else 1.0))
    return np.array(out)


def basis_limits(f, realization, m_max: int, tol: float = 1e-5):
    """Estimate ``a_m`` for ``m <= m_max`` from samples of ``f`` on ``t > 0``.

    Maclaurin: ``a_m = f^(m)(0)``. Bessel: ``a_m = lim L^m f(t) / f_{0,nu}(t)``,
    which equals the plain limit when ``nu == 0``. ``f`` is rewritten as a
    function of ``x = (t/2)^2`` with the ``t^nu`` factor removed, fitted by
    Chebyshev least squares on ``(0, X]`` and differentiated at ``x = 0``.
    Two nested intervals must agree to ``tol`` (relative to ``max(1, |a_m|)``).
    """
    bessel = realization.kind == "bessel"
    nu = float(realization.nu) if bessel else 0.0
    coarse = _chebyshev_limits(f, nu, 2.0, 14, m_max, bessel)
    fine = _chebyshev_limits(f, nu, 1.0, 12, m_max, bessel)
    diff = np.abs(coarse - fine) / np.maximum(1.0, np.abs(fine))
    if np.any(diff > tol):
        m = int(np.argmax(diff > tol))
        raise LimitDidNotConverge(f"estimate of a_{m} unstable: {fine[m]} vs {coarse[m]}")
    return [float(v) for v in fine]


def _ascending(nu: float, lead, q, cap: int):
    """Terms ``lead * q^k / (k! (nu+1)_k)`` until they are negligible."""
    terms = [lead]
    term = lead
    big = abs(lead)
    for k in range(1, cap):
        ratio = q / (k * (k + nu))
        term = term * ratio
        terms.append(term)
        big = max(big, abs(term))
        if abs(ratio) < 1 and abs(term) < 1e-17 * big:
            break
    return terms


def _gamma1(nu: float) -> float:
    return math.gamma(nu + 1) if nu + 1 < 171 else math.exp(math.lgamma(nu + 1))


def oracle_bessel(family: str, nu, t, terms: int | None = None):
    """Reference values of ``J_nu``, ``I_nu``, ``Ber_nu``, ``Bei_nu`` from the
    ascending series.

    ``Ber_nu(t) + i Bei_nu(t) = J_nu(t e^{3 pi i / 4})``, summed as a complex
    series with the phase of ``(z/2)^nu`` taken on the rotated ray. ``t`` may
    be complex for ``J``/``I`` (principal branch of ``(t/2)^nu``).
    """
    family = family.lower()
    nu = float(nu)
    cap = terms or 400
    if t == 0:
        lead0 = 1.0 if nu == 0 else 0.0
        return 0.0 if family == "bei" else lead0
    if family in ("j", "besselj", "i", "besseli"):
        sign = -1 if family in ("j", "besselj") else 1
        half = t / 2
        return _fsum_complex(_ascending(nu, half**nu / _gamma1(nu), sign * half * half, cap))
    if family in ("ber", "bei"):
        rot = cmath.exp(0.75j * math.pi)
        lead = (t / 2) ** nu * cmath.exp(0.75j * math.pi * nu) / _gamma1(nu)
        q = -((t * rot / 2) ** 2)
        val = complex(_fsum_complex(_ascending(nu, lead, q, cap)))
        return val.real if family == "ber" else val.imag
    raise ValueError(f"unknown family {family!r}")


def series_coefficients(family: str, nu, n: int, t: float = 1.3) -> list:
    """Coefficients ``a_k`` (``k < n``) of a Bessel-type function in the
    ``f_{k,nu}`` basis, read off the ascending series as ``term_k / f_{k,nu}(t)``.

    Uses the same series as :func:`oracle_bessel` (for ``Ber``/``Bei`` the
    rotated complex series, taking real or imaginary parts), so it is
    independent of the transform table.
    """
    family = family.lower()
    nu = float(nu)
    if family in ("j", "i"):
        half = t / 2
        sign = -1 if family == "j" else 1
        terms = [half**nu / _gamma1(nu)]
        for k in range(1, n):
            terms.append(terms[-1] * sign * half * half / (k * (k + nu)))
    elif family in ("ber", "bei"):
        rot = cmath.exp(0.75j * math.pi)
        terms = [(t / 2) ** nu * cmath.exp(0.75j * math.pi * nu) / _gamma1(nu)]
        q = -((t * rot / 2) ** 2)
        for k in range(1, n):
            terms.append(terms[-1] * q / (k * (k + nu)))
        terms = [z.real if family == "ber" else z.imag for z in terms]
    else:
        raise ValueError(f"unknown family {family!r}")
    return [complex(x).real / eval_basis(k, nu, t) for k, x in enumerate(terms)]


def kelvin_classical(family: str, t: float) -> float:
    """Order-zero ``ber``/``bei`` from their classical real series:
    ``ber = sum (-1)^k (t/2)^{4k} / ((2k)!)^2``,
    ``bei = sum (-1)^k (t/2)^{4k+2} / ((2k+1)!)^2``."""
    off = 0 if family == "ber" else 1
    terms = []
    for k in range(200):
        j = 2 * k + off
        term = (-1) ** k * (t / 2) ** (2 * j) / math.factorial(j) ** 2
        terms.append(term)
        if k > 2 and abs(term) < 1e-18 * max(abs(x) for x in terms):
            break
    return math.fsum(terms)


def eval_named(nf, t):
    """Numeric value of a named function term at ``t`` (including its prefactor)."""
    fam = nf.family
    p = nf.params
    c = complex(nf.prefactor)
    if fam == "Exp":
        return c * cmath.exp(complex(p["rate"]) * t)
    if fam in ("Cos", "Sin"):
        trig = math.cos if fam == "Cos" else math.sin
        return c * cmath.exp(complex(p.get("rate", 0)) * t) * trig(float(p["omega"]) * t)
    if fam == "PolyExp":
        j = int(p["degree"])
        return c * t**j / math.factorial(j) * cmath.exp(complex(p["rate"]) * t)
    if fam == "Geometric":
        k = int(round(t))
        m = int(p.get("multiplicity", 1))
        return c * math.comb(k + m - 1, m - 1) * complex(p["rate"]) ** k
    if fam == "BasisMonomial":
        j = int(p["degree"])
        if p.get("kind", "maclaurin") == "bessel":
            return c * eval_basis(j, p["nu"], t)
        if p.get("kind") == "zbridge":
            return c if int(round(t)) == j else 0.0
        return c * eval_maclaurin_basis(j, t)
    if fam in ("BesselJ", "BesselI"):
        scale = complex(p["scale"])
        arg = scale * t
        if arg.imag == 0:
            arg = arg.real
        return c * oracle_bessel("J" if fam == "BesselJ" else "I", p["nu"], arg)
    if fam in ("Ber", "Bei"):
        return c * oracle_bessel(fam, p["nu"], float(p.get("scale", 1)) * t)
    raise ValueError(f"cannot evaluate family {fam!r}")


def residual(problem, y_eval: SeriesEvaluator, t, rhs_eval: SeriesEvaluator | None = None) -> float:
    """``|sum c_k (L^k y)(t) - g(t)|`` with ``L^k`` applied as a ``k``-place
    coefficient shift on the basis series."""
    total = [complex(c) * y_eval.shifted(k)(t) for k, c in enumerate(problem.op_poly)]
    g = rhs_eval(t) if rhs_eval is not None else 0.0
    return abs(_fsum_complex(total + [-complex(g)]))
