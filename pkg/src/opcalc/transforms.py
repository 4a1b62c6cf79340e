"""Concrete realizations of the shift and the transforms they induce.

* Maclaurin: basis ``t^n/n!``, shift realized by ``d/dt``.
* Bessel(nu): basis ``f_{n,nu}(t) = (t/2)^{2n+nu} / (Gamma(nu+n+1) n!)``,
  shift realized by ``L_nu = (1/t) D t D - nu^2/t^2``.
* ZBridge: sequences themselves, with ``s`` playing the role of ``1/z``.

Sign conventions follow the ascending series: ``J_nu`` has coefficient
sequence ``{(-1)^n}`` and ``I_nu`` has ``{1}``, so a pole term
``c/(1 - r s)`` with ``r < 0`` inverts to a ``J_nu`` and with ``r > 0`` to an
``I_nu``. The order-zero ``Bei`` sequence is ``{0, 1, 0, -1, ...}``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import numerics
from .errors import UnnamedInverse
from .rational import PFDecomposition, PoleTerm, Poly, RationalExpr, rational_to_sequence, solve_linear
from .scalar import QQi, close, imag_part, is_exact, real_part, scalar_to_json, simplify_float
from .sequence import Sequence, default_truncation, shift_left


@dataclass(frozen=True)
class Realization:
    kind: str
    nu: object = 0

    def __post_init__(self):
        if self.kind not in ("maclaurin", "bessel", "zbridge"):
            raise ValueError(f"unknown realization {self.kind!r}")
        if self.kind == "bessel":
            nu = float(self.nu)
            if not math.isfinite(nu) or nu < 0:
                raise ValueError("Bessel order must be a finite real >= 0")

    @classmethod
    def maclaurin(cls):
        return cls("maclaurin")

    @classmethod
    def bessel(cls, nu=0):
        return cls("bessel", nu)

    @classmethod
    def zbridge(cls):
        return cls("zbridge")

    def __str__(self):
        if self.kind == "bessel":
            return f"bessel(nu={self.nu})"
        return self.kind

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind == "bessel":
            out["nu"] = scalar_to_json(self.nu) if is_exact(self.nu) else float(self.nu)
        return out


def _half_turns(nu):
    """``3 nu / 2`` when it is an integer, i.e. when ``3 nu pi/4`` is a multiple of ``pi/2``."""
    q = Fraction(nu) if is_exact(nu) else Fraction(float(nu)).limit_denominator(10**6)
    k = 3 * q / 2
    if k.denominator == 1 and (is_exact(nu) or abs(float(nu) - float(q)) < 1e-15):
        return int(k)
    return None


def kelvin_phase(nu):
    """``(cos, sin)`` of ``3 nu pi / 4``, exact when they are 0 or +-1."""
    k = _half_turns(nu)
    if k is not None:
        return [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4]
    th = 3 * float(nu) * math.pi / 4
    return math.cos(th), math.sin(th)


def kelvin_rule(which: str, nu) -> Callable[[int], object]:
    """Coefficient rule ``a_n = cos`` (``Ber``) or ``sin`` (``Bei``) of ``(3 nu + 2n) pi / 4``."""
    c, s = kelvin_phase(nu)
    cycle_cos = [1, 0, -1, 0]
    cycle_sin = [0, 1, 0, -1]

    def rule(n):
        cn, sn = cycle_cos[n % 4], cycle_sin[n % 4]
        if which == "ber":
            return c * cn - s * sn
        return s * cn + c * sn

    return rule


def _pow(x, n):
    if is_exact(x):
        return Fraction(1) * x**n if not isinstance(x, QQi) else x**n
    return complex(x) ** n


@dataclass(frozen=True)
class NamedFunction:
    """A closed-form function term ``prefactor * family(params)(t)``.

    ``params`` by family: ``Exp``: rate; ``Cos``/``Sin``: omega and optional
    damping rate (``e^{rate t} cos(omega t)``); ``PolyExp``: rate, degree
    ``j`` for ``t^j/j! e^{rate t}``; ``BesselJ``/``BesselI``: nu, scale
    (argument ``scale * t``); ``Ber``/``Bei``: nu, scale; ``BasisMonomial``:
    degree, kind, nu; ``Geometric``: rate, multiplicity for
    ``C(k+m-1, m-1) rate^k`` on integer ``k``.
    """

    family: str
    params: dict = field(default_factory=dict)
    prefactor: object = 1

    def __call__(self, t):
        return numerics.eval_named(self, t)

    def coefficient(self, n: int):
        """``n``-th transform coefficient of this term in its own basis."""
        fam, p, c = self.family, self.params, self.prefactor
        if fam == "Exp":
            return c * _pow(p["rate"], n)
        if fam in ("Cos", "Sin"):
            a, w = p.get("rate", 0), p["omega"]
            z = QQi.make(a, w) if is_exact(a) and is_exact(w) else complex(a, float(w))
            zn = _pow(z, n)
            return c * (real_part(zn) if fam == "Cos" else imag_part(zn))
        if fam == "PolyExp":
            j = p["degree"]
            if n < j:
                return 0 * c
            return c * math.comb(n, j) * _pow(p["rate"], n - j)
        if fam == "Geometric":
            m = p.get("multiplicity", 1)
            return c * math.comb(n + m - 1, m - 1) * _pow(p["rate"], n)
        if fam == "BasisMonomial":
            return c if n == p["degree"] else 0 * c
        if fam in ("BesselJ", "BesselI"):
            k = complex(p["scale"])
            sign = -1 if fam == "BesselJ" else 1
            return complex(c) * k ** float(p["nu"]) * (sign * k * k) ** n
        if fam in ("Ber", "Bei"):
            w = float(p.get("scale", 1))
            rule = kelvin_rule(fam.lower(), p["nu"])
            return c * w ** float(p["nu"]) * w ** (2 * n) * rule(n)
        raise ValueError(f"unknown family {fam!r}")

    def sequence(self, N: int | None = None) -> Sequence:
        N = N or default_truncation()
        return Sequence([self.coefficient(n) for n in range(N)])

    def describe(self) -> str:
        p = self.params
        fam = self.family
        if fam == "Exp":
            body = f"exp({p['rate']}*t)"
        elif fam in ("Cos", "Sin"):
            body = f"{fam.lower()}({p['omega']}*t)"
            if p.get("rate", 0) != 0:
                body = f"exp({p['rate']}*t)*{body}"
        elif fam == "PolyExp":
            body = f"t^{p['degree']}/{p['degree']}!*exp({p['rate']}*t)"
        elif fam == "Geometric":
            m = p.get("multiplicity", 1)
            body = f"{p['rate']}^k" if m == 1 else f"C(k+{m - 1},{m - 1})*{p['rate']}^k"
        elif fam == "BasisMonomial":
            j = p["degree"]
            body = {"bessel": f"f_{{{j},{p.get('nu')}}}(t)", "zbridge": f"delta(k-{j})"}.get(p.get("kind"), f"t^{j}/{j}!")
        elif fam in ("BesselJ", "BesselI"):
            body = f"{fam[-1]}_{p['nu']}({p['scale']}*t)"
        else:
            body = f"{fam}_{p['nu']}({p.get('scale', 1)}*t)"
        return f"{self.prefactor}*{body}"

    def to_json(self):
        params = {}
        for k, v in self.params.items():
            params[k] = v if isinstance(v, (str, int)) and not isinstance(v, bool) else scalar_to_json(v)
        return {"family": self.family, "params": params, "prefactor": scalar_to_json(self.prefactor)}


@dataclass(frozen=True)
class TableEntry:
    realization: Realization
    function: NamedFunction
    transform: RationalExpr
    rule: Callable[[int], object]
    label: str = ""

    def sequence(self, N: int | None = None) -> Sequence:
        N = N or default_truncation()
        return Sequence([self.rule(n) for n in range(N)])

    def to_json(self, N: int = 8):
        return {
            "realization": self.realization.to_json(),
            "label": self.label,
            "family": self.function.family,
            "params": self.function.to_json()["params"],
            "transform": {
                "num": [scalar_to_json(c) for c in self.transform.num.coeffs],
                "den": [scalar_to_json(c) for c in self.transform.full_den.coeffs],
            },
            "sequence": [scalar_to_json(c) for c in self.sequence(N)],
        }


def _R(num, den):
    return RationalExpr(Poly(num), Poly(den))


def table(realization: Realization) -> list[TableEntry]:
    """Built-in transform pairs for a realization."""
    one = Fraction(1)
    if realization.kind == "maclaurin":
        R = realization
        return [
            TableEntry(R, NamedFunction("Exp", {"rate": one}), _R([1], [1, -1]), lambda n: one, "e^t"),
            TableEntry(R, NamedFunction("Cos", {"omega": one}), _R([1], [1, 0, 1]),
                       kelvin_rule("ber", 0), "cos t"),
            TableEntry(R, NamedFunction("Sin", {"omega": one}), _R([0, 1], [1, 0, 1]),
                       kelvin_rule("bei", 0), "sin t"),
        ]
    if realization.kind == "bessel":
        R, nu = realization, realization.nu
        c, s = kelvin_phase(nu)
        return [
            TableEntry(R, NamedFunction("BesselJ", {"nu": nu, "scale": one}), _R([1], [1, 1]),
                       lambda n: Fraction((-1) ** n), f"J_{nu}(t)"),
            TableEntry(R, NamedFunction("BesselI", {"nu": nu, "scale": one}), _R([1], [1, -1]),
                       lambda n: one, f"I_{nu}(t)"),
            TableEntry(R, NamedFunction("Ber", {"nu": nu, "scale": one}), _R([c, -s], [1, 0, 1]),
                       kelvin_rule("ber", nu), f"Ber_{nu}(t)"),
            TableEntry(R, NamedFunction("Bei", {"nu": nu, "scale": one}), _R([s, c], [1, 0, 1]),
                       kelvin_rule("bei", nu), f"Bei_{nu}(t)"),
        ]
    R = realization
    return [
        TableEntry(R, NamedFunction("Geometric", {"rate": one, "multiplicity": 1}), _R([1], [1, -1]),
                   lambda n: one, "{1}"),
        TableEntry(R, NamedFunction("Geometric", {"rate": -one, "multiplicity": 1}), _R([1], [1, 1]),
                   lambda n: Fraction((-1) ** n), "{(-1)^n}"),
        TableEntry(R, NamedFunction("BasisMonomial", {"degree": 0, "kind": "zbridge"}), _R([1], [1]),
                   lambda n: Fraction(int(n == 0)), "{1,0,0,...}"),
    ]


def _geometric_entry(realization: Realization, r, c) -> TableEntry:
    """Entry for ``c / (1 - r s)``, i.e. the sequence ``{c r^n}``."""
    rat = RationalExpr.geometric(r, c)
    rule = lambda n: c * _pow(r, n)  # noqa: E731
    return TableEntry(realization, _name_simple_pole(realization, r, c), rat, rule, f"{c}/(1-{r}s)")


def table_lookup(realization: Realization, f, N: int = 32) -> TableEntry | None:
    """Match ``f`` (a RationalExpr or a Sequence prefix) against the table,
    including the parametric ``c/(1 - r s)`` family."""
    entries = table(realization)
    if isinstance(f, RationalExpr):
        for e in entries:
            if e.transform == f or (not f.exact and e.transform.equals(f)):
                return e
        if f.pole_order == 0 and f.den.degree == 1 and f.num.degree <= 0:
            r = -f.den[1]
            c = f.num[0] if f.num.coeffs else 0
            if c != 0:
                return _geometric_entry(realization, r, c)
        return None
    seq = f if isinstance(f, Sequence) else Sequence(f)
    for e in entries:
        if seq.allclose(e.sequence(seq.N)):
            return e
    a = seq.coeffs
    if seq.N >= 3 and a[0] != 0:
        r = a[1] / a[0]
        if all(close(a[n + 1], r * a[n]) for n in range(seq.N - 1)):
            return _geometric_entry(realization, r, a[0])
    return None


# ---------------------------------------------------------------------------
# forward transforms


@dataclass(frozen=True)
class ForwardResult:
    sequence: Sequence
    rational: RationalExpr | None = None
    entry: TableEntry | None = None


def fit_rational(seq: Sequence, max_order: int = 8, tol: float = 1e-9) -> RationalExpr | None:
    """Smallest ``P/Q`` (``deg Q <= max_order``, ``deg P <= max_order``,
    ``Q(0) = 1``) whose expansion reproduces every term of ``seq``.

    Exact sequences are matched exactly; float sequences within ``tol``
    relative to the largest coefficient.
    """
    a = list(seq.coeffs)
    N = len(a)
    exact = seq.exact
    scale = max((abs(complex(x)) for x in a), default=0.0)
    if scale == 0:
        return RationalExpr.zero()
    for total in range(0, 2 * max_order + 1):
        for M in range(0, min(max_order, total) + 1):
            L = total - M
            if L > max_order or N < L + 2 * M + 2:
                continue
            # q_1..q_M from a_n + sum_k q_k a_{n-k} = 0 for n = L+1 .. L+M
            rows = [[a[n - k] if n - k >= 0 else 0 for k in range(1, M + 1)] for n in range(L + 1, L + M + 1)]
            rhs = [-a[n] for n in range(L + 1, L + M + 1)]
            q = solve_linear(rows, rhs, exact) if M else []
            if q is None:
                continue
            Q = [1] + list(q)
            ok = True
            for n in range(L + 1, N):
                v = a[n] + sum(Q[k] * a[n - k] for k in range(1, M + 1) if n - k >= 0)
                if (v != 0) if exact else abs(complex(v)) > tol * scale:
                    ok = False
                    break
            if not ok:
                continue
            P = [sum(Q[k] * a[n - k] for k in range(0, min(n, M) + 1)) for n in range(L + 1)]
            if not exact:
                P = [simplify_float(p) for p in P]
                Q = [simplify_float(x) for x in Q]
            return RationalExpr(Poly(P), Poly(Q))
    return None


def forward_from_series(coeffs, realization: Realization, max_order: int = 8) -> ForwardResult:
    """Transform of a function given by its basis coefficients.

    The sequence is returned as-is; a rational form is attached when a
    bounded-order recurrence reproduces it, and a table entry when one
    matches.
    """
    seq = coeffs if isinstance(coeffs, Sequence) else Sequence(coeffs)
    rat = fit_rational(seq, max_order)
    entry = None
    if rat is not None and not rat.is_zero():
        entry = table_lookup(realization, rat)
    return ForwardResult(seq, rat, entry)


def forward_by_operator(f, realization: Realization, m_max: int, tol: float = 1e-5) -> Sequence:
    """``{a_0, ..., a_{m_max}}`` with ``a_m`` the limit of ``L^m f`` at 0.

    If ``f`` is a Sequence of basis coefficients the answer is pure shift
    bookkeeping (``a_m`` is the head of ``l^m f``). Otherwise ``f`` is a
    callable sampled on ``t > 0`` and the limits are extrapolated
    numerically; for ``nu > 0`` the limit is taken after dividing by
    ``f_{0,nu}(t)``, since every basis function vanishes at 0.
    """
    if realization.kind == "zbridge":
        raise ValueError("forward_by_operator needs a differential realization")
    if isinstance(f, Sequence):
        return Sequence([shift_left(f, m)[0] for m in range(m_max + 1)])
    return Sequence(numerics.basis_limits(f, realization, m_max, tol))


# ---------------------------------------------------------------------------
# inverse transforms


def _sqrt(x):
    z = cmath.sqrt(complex(x))
    return z.real if z.imag == 0 else z


def _exact_sqrt(q):
    """Square root of a non-negative rational when it is rational, else None."""
    if not is_exact(q) or isinstance(q, QQi) or q < 0:
        return None
    q = Fraction(q)
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _scale_power(k, nu):
    """``k^(-nu)``, exact when ``k`` is rational and ``nu`` an integer."""
    if is_exact(k) and is_exact(nu) and Fraction(nu).denominator == 1:
        return Fraction(1) / Fraction(k) ** int(nu)
    return complex(k) ** -float(nu)


def _name_simple_pole(realization: Realization, r, c) -> NamedFunction:
    """Named function with coefficient sequence ``{c r^n}``."""
    kind = realization.kind
    if kind == "maclaurin":
        if r == 0:
            return NamedFunction("BasisMonomial", {"degree": 0, "kind": "maclaurin"}, c)
        return NamedFunction("Exp", {"rate": r}, c)
    if kind == "zbridge":
        return NamedFunction("Geometric", {"rate": r, "multiplicity": 1}, c)
    nu = realization.nu
    if r == 0:
        return NamedFunction("BasisMonomial", {"degree": 0, "kind": "bessel", "nu": nu}, c)
    rc = complex(r)
    if rc.imag == 0 and rc.real < 0:
        family, k = "BesselJ", _exact_sqrt(-r) if is_exact(r) else None
        k = k if k is not None else math.sqrt(-rc.real)
    else:
        family, k = "BesselI", _exact_sqrt(r) if is_exact(r) else None
        k = k if k is not None else _sqrt(r)
    pre = c * _scale_power(k, nu)
    return NamedFunction(family, {"nu": nu, "scale": k}, pre if is_exact(pre) else simplify_float(pre))


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def _pair_up(simple):
    """Split simple pole terms into conjugate pairs ``(t, tbar)`` (positive
    imaginary part first) and leftovers."""
    pairs, used = [], set()
    for i, t in enumerate(simple):
        if complex(t.rate).imag <= 0:
            continue
        for j, u in enumerate(simple):
            if j not in used and j != i and close(u.rate, _conj(t.rate), 1e-9, 1e-12):
                pairs.append((t, u))
                used.update((i, j))
                break
    rest = [t for i, t in enumerate(simple) if i not in used]
    return pairs, rest


def _name_pair(realization: Realization, t: PoleTerm, u: PoleTerm):
    """Combine ``c1/(1-(a+ib)s) + c2/(1-(a-ib)s)`` into real-form terms."""
    c1, c2 = t.coeff, u.coeff
    r = t.rate
    a = r.re if isinstance(r, QQi) else complex(r).real
    b = r.im if isinstance(r, QQi) else complex(r).imag
    if realization.kind == "maclaurin":
        A = c1 + c2
        B = (c1 - c2) * QQi(0, 1) if is_exact(c1) and is_exact(c2) else (complex(c1) - complex(c2)) * 1j
        A, B = _realify(A), _realify(B)
        out = []
        params = {"omega": b, "rate": a} if a != 0 else {"omega": b}
        if A != 0:
            out.append(NamedFunction("Cos", dict(params), A))
        if B != 0:
            out.append(NamedFunction("Sin", dict(params), B))
        return out
    # Bessel: only purely imaginary rates map onto Kelvin functions
    if a != 0:
        return None
    nu = realization.nu
    if b < 0:
        return None
    w = _exact_sqrt(b)
    w = w if w is not None else math.sqrt(float(b))
    cs, sn = kelvin_phase(nu)
    scale = _scale_power(w, nu)
    if all(is_exact(v) for v in (c1, c2, cs, sn, scale)):
        ph, iu = QQi.make(cs, sn), QQi(0, 1)
    else:
        ph, iu = complex(cs, sn), 1j
        c1, c2, scale = complex(c1), complex(c2), complex(scale)
    A = _realify(scale * (c1 / ph + c2 * ph))
    B = _realify(scale * iu * (c1 / ph - c2 * ph))
    out = []
    if A != 0:
        out.append(NamedFunction("Ber", {"nu": nu, "scale": w}, A))
    if B != 0:
        out.append(NamedFunction("Bei", {"nu": nu, "scale": w}, B))
    return out


def _realify(x):
    if isinstance(x, QQi):
        return x
    if is_exact(x):
        return x
    return simplify_float(x)


def _poly_names(realization: Realization, p: Poly):
    out = []
    for j, c in enumerate(p.coeffs):
        if c == 0:
            continue
        params = {"degree": j, "kind": realization.kind}
        if realization.kind == "bessel":
            params["nu"] = realization.nu
        out.append(NamedFunction("BasisMonomial", params, c))
    return out


def _maclaurin_repeated(t: PoleTerm):
    """``c/(1 - r s)^k`` is the Maclaurin image of
    ``c * sum_{j<k} C(k-1, j) r^j t^j/j! e^{r t}``."""
    k, r, c = t.multiplicity, t.rate, t.coeff
    out = []
    for j in range(k):
        coef = c * math.comb(k - 1, j) * _pow(r, j)
        if coef != 0:
            out.append(NamedFunction("PolyExp", {"rate": r, "degree": j}, coef))
    return out


@dataclass(frozen=True)
class InverseResult:
    named: list
    unnamed: list
    sequence: Sequence

    @property
    def complete(self) -> bool:
        return not self.unnamed


def inverse_transform(dec: PFDecomposition, realization: Realization, N: int | None = None,
                      strict: bool = False) -> InverseResult:
    """Map each partial-fraction term to a named function.

    The coefficient sequence is always produced. Terms that cannot be named
    (repeated poles under the Bessel realization) are returned in
    ``unnamed``; with ``strict`` they raise :class:`UnnamedInverse`.
    """
    N = N or default_truncation()
    seq = dec.to_sequence(N)
    named = _poly_names(realization, dec.poly_part)
    unnamed = []
    simple = [t for t in dec.terms if t.multiplicity == 1]
    repeated = [t for t in dec.terms if t.multiplicity > 1]
    if realization.kind == "zbridge":
        for t in dec.terms:
            named.append(NamedFunction("Geometric", {"rate": t.rate, "multiplicity": t.multiplicity}, t.coeff))
        return InverseResult(named, unnamed, seq)
    pairs, rest = _pair_up(simple)
    for t, u in pairs:
        got = _name_pair(realization, t, u)
        if got is None:
            rest.extend([t, u])
        else:
            named.extend(got)
    for t in rest:
        named.append(_name_simple_pole(realization, t.rate, t.coeff))
    for t in repeated:
        if realization.kind == "maclaurin":
            named.extend(_maclaurin_repeated(t))
        else:
            unnamed.append(t)
    if unnamed and strict:
        raise UnnamedInverse(f"no named inverse for repeated poles {unnamed} under {realization}")
    return InverseResult(named, unnamed, seq)


def named_sequence(named, N: int | None = None) -> Sequence:
    """Sum of the coefficient sequences of named terms."""
    N = N or default_truncation()
    total = Sequence.zeros(N)
    for nf in named:
        total = total + nf.sequence(N)
    return total


# ---------------------------------------------------------------------------
# Z correspondence


def z_bridge(direction: str, x: RationalExpr) -> RationalExpr:
    """Substitute ``s <-> 1/z``.

    Numerator and denominator are padded to a common degree and their
    coefficient lists reversed, so the map is an involution.
    """
    if direction not in ("toZ", "fromZ"):
        raise ValueError("direction must be 'toZ' or 'fromZ'")
    src, dst = ("s", "z") if direction == "toZ" else ("z", "s")
    if x.var != src:
        raise ValueError(f"{direction} expects a function of {src}")
    num, den = x.num, x.full_den
    M = max(num.degree, den.degree, 0)
    return RationalExpr(num.reversed(M) if not num.is_zero() else Poly(), den.reversed(M), var=dst)


def z_series(x: RationalExpr, N: int | None = None) -> Sequence:
    """Coefficients ``g_n`` of ``sum g_n z^{-n}`` for a function of ``z``."""
    return rational_to_sequence(z_bridge("fromZ", x), N)
