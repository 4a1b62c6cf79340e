import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opcalc.errors import IncompatibleRHS, InvalidProblem
from opcalc.rational import Poly, RationalExpr
from opcalc.solver import (
    DifferenceProblem,
    IVProblem,
    perturbed,
    solve_difference,
    solve_ivp,
    transform_equation,
    verify_solution,
)
from opcalc.transforms import NamedFunction, Realization, table

from conftest import small_fractions


def P(*c):
    return Poly(list(c))


def ode_problem():
    # y'' - 3y' + 2y = e^{3t}, y(0) = 1, y'(0) = 0
    return IVProblem(Realization.maclaurin(), (2, -3, 1), NamedFunction("Exp", {"rate": 3}, 1), (1, 0))


def plum_problem(lam, mu, y0, y1):
    c1 = -8 / mu
    c0 = -lam**2 * (8 / mu + lam**2)
    return IVProblem(Realization.bessel(2), (c0, c1, 1), None, (y0, y1))


def iterate_recurrence(coeffs, init, g, K):
    y = list(init)
    m = len(coeffs) - 1
    while len(y) < K:
        n = len(y) - m
        y.append((g(n) - sum(coeffs[k] * y[n + k] for k in range(m))) / coeffs[m])
    return y


class TestTransformEquation:
    def test_ode(self):
        Y = transform_equation(ode_problem())
        assert Y == RationalExpr(P(1, -6, 10), P(1, -3) * P(1, -3, 2))

    def test_plum_symbolic_form(self):
        lam, mu, y0, y1 = F(3, 2), F(2, 3), F(5), F(-1, 4)
        Y = transform_equation(plum_problem(lam, mu, y0, y1))
        assert Y == RationalExpr(P(y0, y1 - 8 * y0 / mu), P(1, lam**2) * P(1, -(8 / mu + lam**2)))

    def test_constant(self):
        Y = transform_equation(IVProblem(Realization.maclaurin(), (0, 1), None, (1,)))
        assert Y == RationalExpr.const(F(1))

    @given(st.lists(small_fractions, min_size=2, max_size=5).filter(lambda c: c[-1] != 0), st.data())
    def test_denominator_is_reversed_operator(self, c, data):
        init = tuple(data.draw(small_fractions) for _ in range(len(c) - 1))
        p = IVProblem(Realization.maclaurin(), tuple(c), NamedFunction("Exp", {"rate": F(1, 3)}, 1), init)
        m = len(c) - 1
        Y = transform_equation(p)
        Q = Poly([c[m - i] for i in range(m + 1)]) * P(1, F(-1, 3))
        assert Y.full_den.scale(Q[0]) == Q


class TestSolveIVP:
    def test_ode_named(self):
        sol = solve_ivp(ode_problem(), 32)
        got = {(nf.family, nf.params["rate"], nf.prefactor) for nf in sol.named}
        assert got == {("Exp", 3, F(1, 2)), ("Exp", 1, F(5, 2)), ("Exp", 2, F(-2))}
        for t in (0.5, 1.0, 2.0):
            exact = 0.5 * math.exp(3 * t) + 2.5 * math.exp(t) - 2 * math.exp(2 * t)
            assert abs(sol(t) - exact) <= 1e-10 * abs(exact)

    def test_plum_unit(self):
        sol = solve_ivp(plum_problem(F(1), F(1), F(1), F(0)), 40)
        fams = {nf.family: nf for nf in sol.named}
        assert fams["BesselJ"].prefactor == F(9, 10) and fams["BesselJ"].params["scale"] == 1
        assert fams["BesselI"].prefactor == F(1, 90) and fams["BesselI"].params["scale"] == 3
        assert {(t.rate, t.coeff) for t in sol.decomposition.terms} == {(-1, F(9, 10)), (9, F(1, 10))}

    def test_cosine(self):
        sol = solve_ivp(IVProblem(Realization.maclaurin(), (1, 0, 1), None, (1, 0)), 16)
        assert [nf.family for nf in sol.named] == ["Cos"]
        assert sol(1.3) == pytest.approx(math.cos(1.3), rel=1e-14)

    def test_resonance_maclaurin(self):
        # y' - y = e^t, y(0) = 1  ->  (1 + t) e^t
        p = IVProblem(Realization.maclaurin(), (-1, 1), NamedFunction("Exp", {"rate": 1}, 1), (1,))
        sol = solve_ivp(p, 24)
        assert {nf.family for nf in sol.named} == {"PolyExp"}
        assert sol(0.7) == pytest.approx(1.7 * math.exp(0.7), rel=1e-13)
        assert verify_solution(p, sol).passed

    def test_resonance_bessel_keeps_sequence(self):
        p = IVProblem(Realization.bessel(1), (-1, 1), NamedFunction("BesselI", {"nu": 1, "scale": 1}, 1), (1,))
        sol = solve_ivp(p, 16)
        assert not sol.named and sol.diagnostics["errors"][0].startswith("UnnamedInverse")
        assert list(sol.coeff_seq)[:4] == [1, 2, 3, 4]
        assert verify_solution(p, sol).passed

    def test_algebraic(self):
        p = IVProblem(Realization.maclaurin(), (F(2),), NamedFunction("Exp", {"rate": 1}, 4), ())
        sol = solve_ivp(p, 8)
        assert list(sol.coeff_seq) == [2] * 8
        with pytest.raises(InvalidProblem):
            IVProblem(Realization.maclaurin(), (0,), None, ())

    def test_invalid(self):
        with pytest.raises(InvalidProblem):
            IVProblem(Realization.maclaurin(), (1, 1), None, ())
        with pytest.raises(IncompatibleRHS):
            IVProblem(Realization.maclaurin(), (1, 1), NamedFunction("BesselJ", {"nu": 0, "scale": 1}), (0,)).rhs_rational()
        with pytest.raises(IncompatibleRHS):
            IVProblem(Realization.bessel(1), (1, 1), NamedFunction("BesselJ", {"nu": 2, "scale": 1}), (0,)).rhs_rational()

    def test_float_mode(self):
        sol = solve_ivp(ode_problem().to_float(), 32)
        assert sol.diagnostics["mode"] == "float"
        assert sol(1.0) == pytest.approx(0.5 * math.e**3 + 2.5 * math.e - 2 * math.e**2, rel=1e-10)


class TestDifference:
    def test_worked_example(self):
        p = DifferenceProblem((-3, 1), (1,), RationalExpr(P(4), P(1, -1)))
        sol = solve_difference(p, 64)
        assert sol.closed_form() == "-2 + 3^(k+1)"
        direct = iterate_recurrence([F(-3), F(1)], [F(1)], lambda n: F(4), 64)
        assert list(sol.coeff_seq) == direct
        assert list(sol.coeff_seq) == [-2 + 3 ** (k + 1) for k in range(64)]

    def test_z_form_rhs(self):
        rhs = RationalExpr(P(0, 4), P(-1, 1), var="z")  # 4z/(z-1)
        sol = solve_difference(DifferenceProblem((-3, 1), (1,), rhs), 10)
        assert list(sol.coeff_seq) == [-2 + 3 ** (k + 1) for k in range(10)]

    def test_constant(self):
        sol = solve_difference(DifferenceProblem((-1, 1), (F(7, 2),)), 6)
        assert list(sol.coeff_seq) == [F(7, 2)] * 6

    def test_period_two(self):
        sol = solve_difference(DifferenceProblem((-1, 0, 1), (1, 0)), 8)
        assert list(sol.coeff_seq) == [1, 0] * 4
        assert verify_solution(DifferenceProblem((-1, 0, 1), (1, 0)).as_ivp(), sol).passed


class TestVerify:
    def test_ode_passes(self):
        p = ode_problem()
        rep = verify_solution(p, solve_ivp(p, 32))
        assert rep.passed and set(rep.checks) == {"recurrence", "initial", "samples"}
        assert rep.checks["recurrence"][1] == "exact"

    def test_perturbed_fails_recurrence(self):
        p = ode_problem()
        bad = perturbed(solve_ivp(p, 32), 3, F(1, 100))
        rep = verify_solution(p, bad)
        assert not rep.checks["recurrence"][0]
        assert rep.checks["initial"][0]

    def test_perturbed_initial(self):
        p = ode_problem()
        rep = verify_solution(p, perturbed(solve_ivp(p, 32), 0, F(1, 100)))
        assert not rep.checks["initial"][0]

    @pytest.mark.parametrize("N", [20, 30, 40])
    def test_plum_samples(self, N):
        p = plum_problem(F(1), F(1), F(1), F(0))
        rep = verify_solution(p, solve_ivp(p, N), sample_points=(0.25, 0.5, 1.0))
        assert rep.passed, rep.failures()


def test_plum_parametric_float():
    rng = random.Random(20240611)
    for _ in range(10):
        lam, mu = rng.uniform(0.1, 3), rng.uniform(0.1, 3)
        y0, y1 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        sol = solve_ivp(plum_problem(lam, mu, y0, y1), 40)
        cj = (8 * y0 - mu * y1 + y0 * lam**2 * mu) / (2 * (4 + lam**2 * mu))
        ci = (y1 * mu + y0 * lam**2 * mu) / (2 * (4 + lam**2 * mu))
        got = {round(complex(t.rate).real, 6): complex(t.coeff) for t in sol.decomposition.terms}
        assert abs(got[round(-lam**2, 6)] - cj) <= 1e-10 * abs(cj)
        assert abs(got[round(8 / mu + lam**2, 6)] - ci) <= 1e-10 * abs(ci)


# property tests --------------------------------------------------------------

REALIZATIONS = [Realization.maclaurin(), Realization.bessel(0), Realization.bessel(1), Realization.bessel(2)]


@st.composite
def random_problems(draw):
    R = draw(st.sampled_from(REALIZATIONS))
    m = draw(st.integers(1, 4))
    coeffs = [draw(st.fractions(-3, 3, max_denominator=3)) for _ in range(m)]
    coeffs.append(draw(st.sampled_from([F(1), F(-1), F(2), F(1, 2)])))
    init = [draw(small_fractions) for _ in range(m)]
    # Kelvin entries at orders with 3*nu/2 not an integer carry sqrt(2)/2 and
    # are not exact; exact-mode properties draw from the exact entries only
    entries = [e for e in table(R) if e.transform.exact]
    rhs = draw(st.sampled_from(entries + [None]))
    if rhs is not None:
        rhs = NamedFunction(rhs.function.family, rhs.function.params, draw(small_fractions))
    return IVProblem(R, tuple(coeffs), rhs, tuple(init))


@settings(max_examples=60)
@given(random_problems())
def test_random_problems_verify_exactly(p):
    sol = solve_ivp(p, 40)
    rep = verify_solution(p, sol, sample_points=(0.25, 0.5, 1.0))
    assert rep.checks["recurrence"] == (True, "exact")
    assert rep.checks["initial"][0]


@settings(max_examples=40)
@given(random_problems(), st.data())
def test_linearity(p, data):
    g2 = NamedFunction("Exp", {"rate": F(1)}, F(1)) if p.realization.kind == "maclaurin" else \
        NamedFunction("BesselI", {"nu": p.realization.nu, "scale": F(1)}, F(1))
    zero_init = (F(0),) * p.order
    both = IVProblem(p.realization, p.op_poly, [p.rhs, g2] if p.rhs is not None else g2, p.init)
    a = solve_ivp(p, 24).coeff_seq
    b = solve_ivp(IVProblem(p.realization, p.op_poly, g2, zero_init), 24).coeff_seq
    assert solve_ivp(both, 24).coeff_seq == a + b
