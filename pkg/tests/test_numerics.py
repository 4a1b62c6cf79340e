import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from scipy import special

from opcalc.errors import StepUnderflow
from opcalc.numerics import (
    SeriesEvaluator,
    apply_operator_numeric,
    eval_basis,
    eval_named,
    kelvin_classical,
    oracle_bessel,
    residual,
)
from opcalc.solver import IVProblem, solve_ivp
from opcalc.transforms import NamedFunction, Realization

T_GRID = np.linspace(0.05, 5.0, 23)


class TestBasis:
    def test_examples(self):
        assert eval_basis(0, 0, 3.7) == 1.0
        assert eval_basis(0, 0, 0) == 1.0
        assert eval_basis(1, 0, 2.0) == 1.0
        assert eval_basis(2, 2, 1.0) == pytest.approx(1 / 3072, rel=1e-15)
        assert eval_basis(1, 2, 0) == 0.0

    @pytest.mark.parametrize("nu", [0.5, 1.5, 2.25])
    def test_non_integer_order_against_mpmath(self, nu):
        for n in (0, 5, 40):
            for t in (0.3, 2.0, 10.0):
                ref = mpmath.mpf(t / 2) ** (2 * n + nu) / (mpmath.gamma(nu + n + 1) * mpmath.factorial(n))
                assert eval_basis(n, nu, t) == pytest.approx(float(ref), rel=1e-12)


class TestOperator:
    def test_shift_law_example(self):
        R = Realization.bessel(2)
        got = apply_operator_numeric(lambda t: eval_basis(3, 2, t), R, 1.5, h=1e-3)
        assert abs(got - eval_basis(2, 2, 1.5)) < 1e-6

    def test_annihilates_f0(self):
        for nu in (0, 1, 2, 0.5):
            R = Realization.bessel(nu)
            assert abs(apply_operator_numeric(lambda t: eval_basis(0, nu, t), R, 1.0)) < 1e-8

    def test_derivative(self):
        assert apply_operator_numeric(math.exp, Realization.maclaurin(), 1.0) == pytest.approx(math.e, rel=1e-10)

    def test_step_underflow(self):
        with pytest.raises(StepUnderflow):
            apply_operator_numeric(math.exp, Realization.maclaurin(), 1.0, h=1e-14)

    @pytest.mark.parametrize("nu", [0, F(1, 2), 1, 2])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_shift_law_converges_with_order_two(self, nu, t):
        R = Realization.bessel(nu)
        for n in range(1, 9):
            target = eval_basis(n - 1, nu, t)

            def err(h):
                return abs(apply_operator_numeric(lambda x: eval_basis(n, nu, x), R, t, h) - target)

            h = t / 4
            e1, e2 = err(h), err(h / 2)
            noise = 1e-11 * max(1.0, abs(target))
            if e1 <= noise:
                # finite differences are already exact for this low-degree monomial
                assert e2 <= 10 * noise
                continue
            assert e2 < e1
            assert math.log2(e1 / max(e2, 1e-300)) >= 2.0


class TestOracles:
    def test_j0_at_zero(self):
        assert oracle_bessel("J", 0, 0.0) == 1.0
        assert oracle_bessel("J", 2, 0.0) == 0.0

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_half_order_i(self, t):
        assert oracle_bessel("I", 0.5, t) == pytest.approx(math.sqrt(2 / (math.pi * t)) * math.sinh(t), rel=1e-12)

    @pytest.mark.parametrize("u", [0.5, 1.0, 3.0])
    def test_recurrences(self, u):
        J = lambda n: oracle_bessel("J", n, u)
        I = lambda n: oracle_bessel("I", n, u)
        assert abs(J(2) + J(0) - 2 / u * J(1)) < 1e-14
        assert abs(I(2) - I(0) + 2 / u * I(1)) < 1e-14

    @pytest.mark.parametrize("nu", [0, 0.5, 1, 2, 3.5])
    def test_against_scipy(self, nu):
        for t in T_GRID:
            assert oracle_bessel("J", nu, t) == pytest.approx(special.jv(nu, t), rel=1e-12, abs=1e-14)
            assert oracle_bessel("I", nu, t) == pytest.approx(special.iv(nu, t), rel=1e-12, abs=1e-14)

    @pytest.mark.parametrize("nu", [0, 0.5, 1, 2])
    def test_kelvin_against_mpmath(self, nu):
        for t in T_GRID:
            assert oracle_bessel("Ber", nu, t) == pytest.approx(float(mpmath.ber(nu, t)), rel=1e-12, abs=1e-14)
            assert oracle_bessel("Bei", nu, t) == pytest.approx(float(mpmath.bei(nu, t)), rel=1e-12, abs=1e-14)

    def test_kelvin_classical_series_matches_rotated_series(self):
        # adjudicates the sign of bei: the rotated-argument definition and the
        # classical real series must agree, and bei starts positive
        for t in T_GRID:
            assert oracle_bessel("Ber", 0, t) == pytest.approx(kelvin_classical("ber", t), rel=1e-12, abs=1e-15)
            assert oracle_bessel("Bei", 0, t) == pytest.approx(kelvin_classical("bei", t), rel=1e-12, abs=1e-15)
            assert kelvin_classical("ber", t) == pytest.approx(special.ber(t), rel=1e-12, abs=1e-15)
            assert kelvin_classical("bei", t) == pytest.approx(special.bei(t), rel=1e-12, abs=1e-15)
        assert kelvin_classical("bei", 0.5) > 0


class TestSeriesEvaluator:
    def test_exp_compensated(self):
        ev = SeriesEvaluator([1] * 60, "maclaurin")
        assert abs(ev(5.0) - math.exp(5.0)) <= 1e-12 * math.exp(5.0)
        assert ev.last_term < 1e-30

    def test_bessel_basis_reconstruction(self):
        ev = SeriesEvaluator([(-1) ** n for n in range(40)], "bessel", 1)
        for t in (0.5, 2.0, 5.0):
            assert ev(t) == pytest.approx(special.jv(1, t), rel=1e-10, abs=1e-14)

    def test_zbridge_indexes(self):
        ev = SeriesEvaluator([1, 7, 25], "zbridge")
        assert ev(1) == 7 and ev(5) == 0.0

    def test_shifted(self):
        ev = SeriesEvaluator([1, 2, 3, 4], "maclaurin")
        assert ev.shifted(2).coeffs == [3, 4]


class TestNamedEvaluation:
    def test_families(self):
        assert eval_named(NamedFunction("Exp", {"rate": 2}, F(1, 2)), 1.0) == pytest.approx(0.5 * math.e**2)
        assert eval_named(NamedFunction("Cos", {"omega": 3}, 1), 0.7) == pytest.approx(math.cos(2.1))
        assert eval_named(NamedFunction("BesselI", {"nu": 2, "scale": 3}, 1), 1.0) == pytest.approx(special.iv(2, 3.0))
        assert eval_named(NamedFunction("Geometric", {"rate": 3, "multiplicity": 2}, 1), 2) == pytest.approx(27)


class TestResidual:
    def ode(self):
        return IVProblem(Realization.maclaurin(), (2, -3, 1), NamedFunction("Exp", {"rate": 3}, 1), (1, 0))

    @pytest.mark.parametrize("N", [30, 40, 64])
    def test_ode_residual(self, N):
        p = self.ode()
        sol = solve_ivp(p, N)
        from opcalc.rational import rational_to_sequence

        g = SeriesEvaluator(rational_to_sequence(p.rhs_rational(), N), "maclaurin")
        assert residual(p, sol.evaluator(), 1.0, g) < 1e-10

    def test_zero_function(self):
        p = IVProblem(Realization.bessel(1), (1, 0, 1), None, (0, 0))
        assert residual(p, SeriesEvaluator([0] * 20, "bessel", 1), 1.0) == 0.0

    @pytest.mark.parametrize("N", [25, 40])
    def test_plum_residual(self, N):
        p = IVProblem(Realization.bessel(2), (-9, -8, 1), None, (1, 0))
        sol = solve_ivp(p, N)
        assert residual(p, sol.evaluator(), 1.0) < 1e-8
