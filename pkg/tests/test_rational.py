import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opcalc.errors import DenominatorVanishesAtZero, NoFactorization
from opcalc.rational import (
    PoleTerm,
    Poly,
    RationalExpr,
    factor_rates,
    find_rates,
    partial_fractions,
    pole_term_sequence,
    poly_gcd,
    rational_to_sequence,
    solve_linear,
)
from opcalc.sequence import Sequence, cauchy_product
from opcalc.scalar import QQi

from conftest import small_fractions


def P(*c):
    return Poly(list(c))


class TestPoly:
    def test_products(self):
        assert P(1, -1) * P(1, -2) == P(1, -3, 2)
        assert P(1, 2, 3) * Poly() == Poly()
        assert P(1, 1) * P(1, -1) == P(1, 0, -1)

    def test_trailing_zeros_stripped(self):
        assert P(1, 2, 0, 0) == P(1, 2)
        assert P(1, 2, 0).degree == 1

    def test_divmod(self):
        q, r = P(1, -3, 2).divmod(P(1, -1))
        assert q == P(1, -2) and r == Poly()

    def test_gcd(self):
        g = poly_gcd(P(1, -3, 2), P(1, -4, 3))
        assert g == P(1, -1) or g == P(-1, 1) or g.degree == 1 and g(1) == 0

    def test_reversed_and_compose(self):
        assert P(1, -3, 2).reversed() == P(2, -3, 1)
        assert P(0, 0, 1).compose(P(1, 1)) == P(1, 2, 1)

    def test_from_rates(self):
        assert Poly.from_rates([(1, 1), (2, 1)]) == P(1, -3, 2)
        assert Poly.from_rates([(2, 2)]) == P(1, -4, 4)


class TestRationalToSequence:
    def test_geometric(self):
        assert list(rational_to_sequence(RationalExpr(P(1), P(1, -1)), 5)) == [1] * 5
        assert list(rational_to_sequence(RationalExpr(P(1), P(1, -3)), 5)) == [1, 3, 9, 27, 81]

    def test_sine_pattern(self):
        assert list(rational_to_sequence(RationalExpr(P(0, 1), P(1, 0, 1)), 6)) == [0, 1, 0, -1, 0, 1]

    def test_pole_at_zero(self):
        f = RationalExpr(P(1), P(0, 1))
        assert f.pole_order == 1
        with pytest.raises(DenominatorVanishesAtZero):
            rational_to_sequence(f, 4)

    def test_common_s_power_cancels(self):
        f = RationalExpr(P(0, 2), P(0, 1, -1))
        assert f.pole_order == 0
        assert list(rational_to_sequence(f, 3)) == [2, 2, 2]


class TestFindRates:
    def test_two_simple(self):
        assert find_rates(P(1, -3, 2)) == [(1, 1), (2, 1)]

    def test_plum_denominator(self):
        lam, mu = F(1), F(1)
        den = P(1, lam**2) * P(1, -(8 / mu + lam**2))
        assert find_rates(den) == [(-1, 1), (9, 1)]

    def test_double_rate(self):
        assert find_rates(P(1, -4, 4)) == [(2, 2)]
        # brute-force numeric roots of the reversed polynomial agree
        assert np.allclose(np.roots([1, -4, 4]), [2, 2])

    def test_gaussian_rates(self):
        fac = factor_rates(P(1, 0, 1))
        assert fac.mode == "exact"
        assert sorted(fac.rates, key=lambda rk: complex(rk[0]).imag) == [(QQi(0, -1), 1), (QQi(0, 1), 1)]

    def test_irrational_rates_fall_back_to_float(self):
        fac = factor_rates(P(1, 0, -2))
        assert fac.mode == "mixed"
        rates = sorted(complex(r).real for r, _ in fac.rates)
        assert np.allclose(rates, [-2**0.5, 2**0.5])

    def test_float_triple_rate(self):
        den = Poly.from_rates([(1.5, 3)]).to_float()
        fac = factor_rates(den)
        assert len(fac.rates) == 1 and fac.rates[0][1] == 3
        assert abs(complex(fac.rates[0][0]) - 1.5) < 1e-6

    def test_zero_at_origin_rejected(self):
        with pytest.raises(NoFactorization):
            factor_rates(P(0, 1))


class TestPartialFractions:
    def test_ode_example(self):
        f = RationalExpr(P(1, -6, 10), P(1, -3) * P(1, -1) * P(1, -2))
        dec = partial_fractions(f)
        got = {(t.rate, t.multiplicity, t.coeff) for t in dec.terms}
        assert got == {(3, 1, F(1, 2)), (1, 1, F(5, 2)), (2, 1, F(-2))}
        assert dec.mode == "exact" and dec.poly_part == Poly()

    @pytest.mark.parametrize("seed", range(5))
    def test_plum_closed_form_coefficients(self, seed):
        rng = random.Random(seed)
        lam, mu, y0, y1 = (F(rng.randint(1, 40), rng.randint(1, 20)) for _ in range(4))
        f = RationalExpr(P(y0, y1 - 8 * y0 / mu), P(1, lam**2) * P(1, -(8 / mu + lam**2)))
        coeffs = {t.rate: t.coeff for t in partial_fractions(f).terms}
        cj = (8 * y0 - mu * y1 + y0 * lam**2 * mu) / (2 * (4 + lam**2 * mu))
        ci = (y1 * mu + y0 * lam**2 * mu) / (2 * (4 + lam**2 * mu))
        assert coeffs == {-lam**2: cj, 8 / mu + lam**2: ci}

    def test_already_decomposed(self):
        dec = partial_fractions(RationalExpr(P(F(7, 3)), P(1, -5)))
        assert dec.terms == (PoleTerm(5, 1, F(7, 3)),)

    def test_repeated(self):
        # s / (1-2s)^2 = (1/2)/(1-2s)^2 - (1/2)/(1-2s)
        dec = partial_fractions(RationalExpr(P(0, 1), P(1, -4, 4)))
        assert set(dec.terms) == {PoleTerm(2, 2, F(1, 2)), PoleTerm(2, 1, F(-1, 2))}

    def test_poly_part(self):
        f = RationalExpr(P(1, 0, 0, 1), P(1, -1))
        dec = partial_fractions(f)
        assert dec.to_rational() == f
        assert dec.poly_part.degree == 2

    def test_float_mode(self):
        f = RationalExpr(P(1.0, -6.0, 10.0), Poly.from_rates([(1.0, 1), (2.0, 1), (3.0, 1)]))
        dec = partial_fractions(f)
        got = sorted((complex(t.rate).real, complex(t.coeff).real) for t in dec.terms)
        assert np.allclose(got, [(1, 2.5), (2, -2), (3, 0.5)], rtol=1e-10)


class TestPoleTermSequence:
    def test_examples(self):
        assert list(pole_term_sequence(PoleTerm(3, 1, 1), 4)) == [1, 3, 9, 27]
        assert list(pole_term_sequence(PoleTerm(0, 1, 5), 3)) == [5, 0, 0]
        assert list(pole_term_sequence(PoleTerm(2, 2, 1), 4)) == [1, 4, 12, 32]

    def test_double_is_self_convolution(self):
        g = Sequence.geometric(F(2), 10)
        assert pole_term_sequence(PoleTerm(F(2), 2, 1), 10) == cauchy_product(g, g)


def test_solve_linear_exact_and_float():
    A = [[F(2), F(1)], [F(1), F(3)]]
    assert solve_linear(A, [F(3), F(5)], exact=True) == [F(4, 5), F(7, 5)]
    x = solve_linear([[2.0, 1.0], [1.0, 3.0]], [3.0, 5.0], exact=False)
    assert np.allclose(x, [0.8, 1.4])


# property tests --------------------------------------------------------------

rates_strategy = st.lists(
    st.tuples(st.fractions(-6, 6, max_denominator=4).filter(lambda q: q != 0), st.integers(1, 3)),
    min_size=1,
    max_size=4,
    unique_by=lambda rk: rk[0],
).filter(lambda rs: sum(k for _, k in rs) <= 6)


@given(rates_strategy)
def test_find_rates_inverts_expansion(rates):
    assert find_rates(Poly.from_rates(rates)) == sorted(rates)


@st.composite
def random_rational(draw):
    rates = draw(rates_strategy)
    den = Poly.from_rates(rates)
    num = Poly(draw(st.lists(small_fractions, min_size=1, max_size=den.degree + 2)))
    return RationalExpr(num, den)


@given(random_rational())
def test_round_trip_sequence_exact(f):
    dec = partial_fractions(f)
    assert dec.to_sequence(24) == rational_to_sequence(f, 24)


@given(random_rational())
def test_recombination_exact(f):
    assert partial_fractions(f).to_rational() == f


# Float checks use well-separated rates: with nearly coincident multiple
# rates the partial-fraction coefficients grow like gap^-k and their
# cancellation alone costs more than 1e-10 in double precision.
separated_rates = st.lists(
    st.tuples(st.integers(-4, 4).filter(lambda q: q != 0), st.integers(1, 3)),
    min_size=1,
    max_size=4,
    unique_by=lambda rk: rk[0],
).filter(lambda rs: sum(k for _, k in rs) <= 6)


@st.composite
def separated_rational(draw):
    den = Poly.from_rates([(F(r, 2), k) for r, k in draw(separated_rates)])
    num = Poly(draw(st.lists(small_fractions, min_size=1, max_size=den.degree + 2)))
    return RationalExpr(num, den)


@settings(max_examples=300)
@given(separated_rational(), st.randoms(use_true_random=False))
def test_recombination_float(f, rnd):
    ff = f.to_float()
    dec = partial_fractions(ff)
    rates = [complex(r) for r, _ in find_rates(ff.den)]
    checked = 0
    while checked < 20:
        s = complex(rnd.uniform(-2, 2), rnd.uniform(-2, 2))
        if min(abs(1 - r * s) for r in rates) < 0.2:
            continue
        a, b = complex(ff(s)), complex(dec(s))
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
        checked += 1


@settings(max_examples=300)
@given(separated_rational())
def test_round_trip_sequence_float(f):
    ff = f.to_float()
    a = rational_to_sequence(ff, 20)
    b = partial_fractions(ff).to_sequence(20)
    for x, y in zip(a, b):
        assert abs(complex(x) - complex(y)) <= 1e-9 * max(1.0, abs(complex(x)))
