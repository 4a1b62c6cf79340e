"""Initial-value problems for operator polynomials ``sum_k c_k L^k y = g``.

The equation is transformed with ``L -> left shift``, multiplied by
``s^m`` and closed with ``s^k l^k Y = Y - Y_0 - ... - Y_{k-1} s^{k-1}``,
which leaves ``Y(s)`` as an explicit rational function. Partial fractions
and the realization's inverse table then give the closed form.

For the Bessel realization with ``nu > 0`` every basis function vanishes at
``t = 0``; the initial data ``Y_k`` are the normalized limits
``lim L^k y(t) / f_{0,nu}(t)``, i.e. the leading coefficients of
``L^k y`` in the basis.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import numerics
from .errors import IncompatibleRHS, InvalidProblem, NoFactorization
from .rational import PFDecomposition, Poly, RationalExpr, partial_fractions, rational_to_sequence
from .scalar import all_exact, close, is_exact, to_exact, to_float
from .sequence import Sequence, default_truncation, shift_left
from .transforms import (
    NamedFunction,
    Realization,
    TableEntry,
    _pow,
    kelvin_phase,
    inverse_transform,
    z_bridge,
)

log = logging.getLogger(__name__)

_FAMILIES = {
    "maclaurin": {"Exp", "Cos", "Sin", "PolyExp", "BasisMonomial"},
    "bessel": {"BesselJ", "BesselI", "Ber", "Bei", "BasisMonomial"},
    "zbridge": {"Geometric", "BasisMonomial"},
}


def named_transform(nf: NamedFunction) -> RationalExpr:
    """Rational transform of a named function in its own realization."""
    fam, p, c = nf.family, nf.params, nf.prefactor
    one = Fraction(1)
    if fam == "Exp":
        return RationalExpr(Poly([c]), Poly([1, -p["rate"]]))
    if fam == "Geometric":
        return RationalExpr(Poly([c]), Poly([1, -p["rate"]]) ** p.get("multiplicity", 1))
    if fam == "PolyExp":
        j = p["degree"]
        return RationalExpr(Poly.monomial(j, c), Poly([1, -p["rate"]]) ** (j + 1))
    if fam == "BasisMonomial":
        return RationalExpr(Poly.monomial(p["degree"], c))
    if fam in ("Cos", "Sin"):
        a, w = p.get("rate", 0), p["omega"]
        den = Poly([1, -a]) ** 2 + Poly([0, 0, w * w])
        num = Poly([1, -a]) if fam == "Cos" else Poly([0, w])
        return RationalExpr(num.scale(c), den)
    if fam in ("BesselJ", "BesselI"):
        k, nu = p["scale"], p["nu"]
        k2 = k * k
        lead = c * (_pow(k, int(nu)) if is_exact(k) and Fraction(nu).denominator == 1 else complex(k) ** float(nu))
        return RationalExpr(Poly([lead]), Poly([1, k2 if fam == "BesselJ" else -k2]))
    if fam in ("Ber", "Bei"):
        w, nu = p.get("scale", one), p["nu"]
        cs, sn = kelvin_phase(nu)
        w2 = w * w
        lead = c * (_pow(w, int(nu)) if is_exact(w) and Fraction(nu).denominator == 1 else float(w) ** float(nu))
        num = Poly([cs, -sn * w2]) if fam == "Ber" else Poly([sn, cs * w2])
        return RationalExpr(num.scale(lead), Poly([1, 0, w2 * w2]))
    raise IncompatibleRHS(f"no rational transform for family {fam!r}")


def _rhs_rational(rhs, realization: Realization) -> RationalExpr:
    if rhs is None:
        return RationalExpr.zero()
    if isinstance(rhs, RationalExpr):
        return z_bridge("fromZ", rhs) if rhs.var == "z" else rhs
    if isinstance(rhs, TableEntry):
        rhs = rhs.function
    if isinstance(rhs, NamedFunction):
        allowed = _FAMILIES[realization.kind]
        if rhs.family not in allowed:
            raise IncompatibleRHS(f"{rhs.family} is not a {realization.kind} table function")
        if "nu" in rhs.params and realization.kind == "bessel" and float(rhs.params["nu"]) != float(realization.nu):
            raise IncompatibleRHS(f"order {rhs.params['nu']} does not match realization order {realization.nu}")
        kind = rhs.params.get("kind")
        if rhs.family == "BasisMonomial" and kind not in (None, realization.kind):
            raise IncompatibleRHS(f"basis monomial of kind {kind} under {realization.kind}")
        return named_transform(rhs)
    if isinstance(rhs, (list, tuple)):
        total = RationalExpr.zero()
        for part in rhs:
            total = total + _rhs_rational(part, realization)
        return total
    raise IncompatibleRHS(f"unsupported right-hand side {rhs!r}")


@dataclass(frozen=True)
class IVProblem:
    """``sum_k op_poly[k] L^k y = rhs`` with ``init[k] = Y_k``.

    ``rhs`` may be None (zero), a RationalExpr in ``s`` (or ``z``), a
    NamedFunction/TableEntry of the same realization, or a list of these.
    """

    realization: Realization
    op_poly: tuple
    rhs: object = None
    init: tuple = ()

    def __post_init__(self):
        op = tuple(self.op_poly)
        init = tuple(self.init)
        object.__setattr__(self, "op_poly", op)
        object.__setattr__(self, "init", init)
        if not op:
            raise InvalidProblem("operator polynomial is empty")
        if op[-1] == 0:
            raise InvalidProblem("leading operator coefficient must be nonzero")
        if len(init) != self.order:
            raise InvalidProblem(f"expected {self.order} initial values, got {len(init)}")

    @property
    def order(self) -> int:
        return len(self.op_poly) - 1

    @property
    def exact(self) -> bool:
        return all_exact(self.op_poly) and all_exact(self.init)

    def rhs_rational(self) -> RationalExpr:
        return _rhs_rational(self.rhs, self.realization)

    def to_float(self) -> "IVProblem":
        rhs = self.rhs_rational().to_float()
        return IVProblem(self.realization, tuple(to_float(c) for c in self.op_poly), rhs,
                         tuple(to_float(v) for v in self.init))

    def to_exact(self) -> "IVProblem":
        return IVProblem(self.realization, tuple(to_exact(c) for c in self.op_poly), self.rhs,
                         tuple(to_exact(v) for v in self.init))


@dataclass(frozen=True)
class DifferenceProblem:
    """``sum_k coeffs[k] y_{n+k} = g_n`` with ``y_0 .. y_{m-1}`` given.

    ``rhs`` is the transform of ``{g_n}``: a RationalExpr in ``s``, or in
    ``z`` (bridged via ``s = 1/z``), or None for zero.
    """

    coeffs: tuple
    init: tuple
    rhs: object = None

    def as_ivp(self) -> IVProblem:
        return IVProblem(Realization.zbridge(), tuple(self.coeffs), self.rhs, tuple(self.init))


@dataclass(frozen=True)
class Solution:
    transform: RationalExpr
    decomposition: PFDecomposition | None
    named: list
    coeff_seq: Sequence
    diagnostics: dict = field(default_factory=dict)
    realization: Realization = field(default_factory=Realization.maclaurin)

    @property
    def N(self) -> int:
        return self.coeff_seq.N

    def evaluator(self) -> numerics.SeriesEvaluator:
        R = self.realization
        return numerics.SeriesEvaluator(self.coeff_seq, R.kind, R.nu if R.kind == "bessel" else 0)

    def __call__(self, t):
        """Value at ``t`` from the named terms when available, else from the series."""
        if self.named:
            return numerics._fsum_complex([nf(t) for nf in self.named])
        return self.evaluator()(t)

    def closed_form(self) -> str:
        if not self.named:
            return ""
        if self.realization.kind == "zbridge":
            return _render_geometric(self.named)
        return " + ".join(nf.describe() for nf in self.named).replace("+ -", "- ")


def _render_geometric(named) -> str:
    parts = []
    for nf in named:
        c = nf.prefactor
        if nf.family == "BasisMonomial":
            parts.append((c, f"delta(k-{nf.params['degree']})"))
            continue
        r, m = nf.params["rate"], nf.params.get("multiplicity", 1)
        binom = "" if m == 1 else f"C(k+{m - 1},{m - 1})*"
        if r == 1:
            parts.append((c, binom.rstrip("*") or None))
            continue
        j = _log_exact(c, r)
        if j is not None:
            power = f"{r}^(k+{j})" if j else f"{r}^k"
            parts.append((1, binom + power))
        else:
            parts.append((c, f"{binom}{r}^k"))
    out = ""
    for c, body in parts:
        if body is None:
            term = str(c)
        elif c == 1:
            term = body
        elif c == -1:
            term = "-" + body
        else:
            term = f"{c}*{body}"
        if not out:
            out = term
        elif term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


def _log_exact(c, r):
    """``j`` with ``c == r^j`` for a small non-negative integer ``j``."""
    if not (is_exact(c) and is_exact(r)) or r in (0, 1, -1):
        return None
    for j in range(0, 8):
        if c == _pow(r, j):
            return j
    return None


def transform_equation(p: IVProblem) -> RationalExpr:
    """Solve the transformed equation for ``Y(s)``.

    ``Y = (s^m G + sum_{k>=1} c_k s^{m-k} sum_{j<k} Y_j s^j) / sum_k c_k s^{m-k}``.
    """
    G = p.rhs_rational()
    if G.pole_order:
        raise IncompatibleRHS("right-hand side transform has a pole at s = 0")
    c, m = p.op_poly, p.order
    if m == 0:
        if c[0] == 0:
            raise InvalidProblem("degenerate equation 0*y = g")
        return G / c[0]
    Q = Poly([c[m - i] for i in range(m + 1)])
    P = Poly()
    for k in range(1, m + 1):
        head = Poly(p.init[:k])
        P = P + (head * c[k]).shift(m - k)
    num = G.num.shift(m) + P * G.den
    return RationalExpr(num, Q * G.den)


def solve_ivp(p: IVProblem, N: int | None = None) -> Solution:
    """Transform, decompose, and invert. The coefficient sequence is always
    produced; factorization or naming failures are recorded in
    ``diagnostics`` rather than raised."""
    N = N or default_truncation()
    Y = transform_equation(p)
    coeff_seq = rational_to_sequence(Y, N)
    diag = {"truncation": N, "mode": "exact" if Y.exact else "float", "errors": []}
    dec, named = None, []
    try:
        dec = partial_fractions(Y)
        diag["factorization"] = dec.mode
        inv = inverse_transform(dec, p.realization, N)
        if inv.complete:
            named = inv.named
        else:
            diag["errors"].append(
                f"UnnamedInverse: repeated poles {[(str(t.rate), t.multiplicity) for t in inv.unnamed]} "
                f"have no named inverse under {p.realization}"
            )
    except NoFactorization as exc:
        diag["errors"].append(f"{exc.name}: {exc}")
        log.info("factorization failed: %s", exc)
    return Solution(Y, dec, named, coeff_seq, diag, p.realization)


def solve_difference(p: DifferenceProblem, K: int | None = None) -> Solution:
    """``y_0 .. y_{K-1}`` of a constant-coefficient recurrence plus its
    closed form in geometric terms."""
    return solve_ivp(p.as_ivp(), K)


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def failures(self):
        return {k: v for k, v in self.checks.items() if not v[0]}


DEFAULT_SAMPLES = tuple(round(0.1 * i, 1) for i in range(1, 21))


def verify_solution(p: IVProblem, sol: Solution, sample_points=DEFAULT_SAMPLES,
                    rel_tol: float = 1e-9, sample_tol: float = 1e-6) -> VerificationReport:
    """Check a solution three ways.

    ``recurrence``: ``sum c_k l^k a - g`` vanishes for ``n < N - m``.
    ``initial``: the first ``m`` coefficients are the initial data.
    ``samples``: at each sample point the named closed form matches the
    basis series, and the operator residual (shift-applied) is small.
    """
    rep = VerificationReport()
    N, m = sol.N, p.order
    a = sol.coeff_seq
    g = rational_to_sequence(p.rhs_rational(), N)
    lhs = g * 0
    for k, c in enumerate(p.op_poly):
        lhs = lhs + shift_left(a, k) * c
    res = lhs - g
    span = range(max(N - m, 0))
    if a.exact and g.exact and all_exact(p.op_poly):
        worst = next((n for n in span if res[n] != 0), None)
        rep.checks["recurrence"] = (worst is None, "exact" if worst is None else f"nonzero at n={worst}")
    else:
        scale = max([1.0] + [abs(complex(x)) for x in a.coeffs[: N]])
        worst = max((abs(complex(res[n])) for n in span), default=0.0) / scale
        rep.checks["recurrence"] = (worst <= rel_tol, f"max relative residual {worst:.3e}")
    ok_init = all(close(a[k], p.init[k], 1e-12, 1e-12) for k in range(m))
    rep.checks["initial"] = (ok_init, f"prefix {[str(a[k]) for k in range(m)]} vs {[str(v) for v in p.init]}")

    if sol.named:
        R = p.realization
        y_eval = sol.evaluator()
        rhs_eval = numerics.SeriesEvaluator(g, R.kind, R.nu if R.kind == "bessel" else 0)
        if R.kind == "zbridge":
            points = list(range(min(N - m, 20)))
        else:
            points = list(sample_points)
        worst = 0.0
        for t in points:
            series_val = y_eval(t)
            named_val = sol(t)
            scale = max(1.0, abs(series_val))
            worst = max(worst, abs(complex(named_val) - complex(series_val)) / scale)
            if R.kind != "zbridge":
                r = numerics.residual(p, y_eval, t, rhs_eval)
                mag = max(1.0, sum(abs(complex(c)) * abs(y_eval.shifted(k)(t)) for k, c in enumerate(p.op_poly)))
                worst = max(worst, r / mag)
        rep.checks["samples"] = (worst <= sample_tol, f"max relative discrepancy {worst:.3e}")
    return rep


def perturbed(sol: Solution, index: int, delta) -> Solution:
    """Copy of ``sol`` with one coefficient moved by ``delta`` (for testing checks)."""
    vals = list(sol.coeff_seq.coeffs)
    vals[index] = vals[index] + delta
    return replace(sol, coeff_seq=Sequence(vals))

