"""Twisted Bernoulli numbers/polynomials and power sums against oracles."""

import math
from fractions import Fraction

import pytest

from bernsym.bernoulli import (
    EgfCheckResult,
    ParameterError,
    TwistSpec,
    bernoulli_egf,
    field_conductor,
    gen_bernoulli_numbers,
    gen_bernoulli_poly,
    power_sum,
    power_sum_egf_check,
)
from bernsym.dirichlet import DirichletCharacter, enumerate_characters, trivial_character
from bernsym.exactnum import CyclotomicNumber as Cyc
from bernsym.series import NonUnitConstantError, TruncatedSeries


CHI1 = trivial_character(1)
Z3 = TwistSpec(3, 1)


def bernoulli_via_recurrence(chi, twist, w, order):
    """Independent oracle: solve the defining relation coefficientwise.

    (xi^{wd} e^{dt} - 1) * sum B_n t^n/n! = t * sum_{a<d} chi(a) xi^{wa} e^{at}
    gives, comparing t^n/n! and isolating B_n,
    B_n = [n * sum_a chi(a) xi^{wa} a^{n-1}
           - xi^{wd} * sum_{k<n} C(n,k) d^{n-k} B_k] / (xi^{wd} - 1).
    """
    m = field_conductor(chi, twist)
    d = chi.d
    zeta_wd = twist.root_power(w * d, m)
    out = [Cyc.zero(m)]
    for n in range(1, order + 1):
        rhs = Cyc.zero(m)
        for a in range(d):
            val = chi(a)
            if val.is_zero():
                continue
            apow = 1 if n == 1 else a ** (n - 1)
            if apow:
                rhs = rhs + (val.embed(m) * twist.root_power(w * a, m)).scale(n * apow)
        lower = Cyc.zero(m)
        for k in range(n):
            lower = lower + out[k].scale(math.comb(n, k) * d ** (n - k))
        out.append((rhs - zeta_wd * lower) / (zeta_wd - Cyc.one(m)))
    return out


def test_twist_spec_validation():
    with pytest.raises(ParameterError):
        TwistSpec(1, 1)
    with pytest.raises(ParameterError):
        TwistSpec(4, 2)
    assert TwistSpec(4, 3).root() == Cyc.zeta(4) ** 3


def test_first_values_d1_zeta3():
    b = gen_bernoulli_numbers(CHI1, Z3, 1, 2)
    z = Cyc.zeta(3)
    assert b[0].is_zero()
    assert b[1] == (z ** 2 - 1).scale(Fraction(1, 3))
    assert b[2] == Fraction(2, 3)


def test_d1_reduces_to_plain_twisted_numbers():
    # Eq-(6)-style computation: t / (xi e^t - 1), no character machinery
    order = 8
    xi = Cyc.zeta(3)
    t = TruncatedSeries(3, [Cyc.zero(3), Cyc.one(3)] + [Cyc.zero(3)] * (order - 1))
    plain = t / (TruncatedSeries.exp_linear(1, order, 3).scale(xi) - TruncatedSeries.one(order, 3))
    b = gen_bernoulli_numbers(CHI1, Z3, 1, order)
    for n in range(order + 1):
        assert b[n] == plain.egf_coefficient(n)


@pytest.mark.parametrize("d,r,w", [(1, 3, 1), (3, 4, 1), (4, 3, 2), (5, 3, 1), (5, 4, 3)])
def test_b0_vanishes_and_recurrence_agrees(d, r, w):
    twist = TwistSpec(r, 1)
    for chi in enumerate_characters(d):
        b = gen_bernoulli_numbers(chi, twist, w, 6)
        oracle = bernoulli_via_recurrence(chi, twist, w, 6)
        assert b[0].is_zero()
        assert b == oracle


def test_unit_denominator_violation_surfaces_series_error():
    with pytest.raises(NonUnitConstantError):
        gen_bernoulli_numbers(CHI1, Z3, 3, 4)  # r | w*d
    chi3 = trivial_character(3)
    with pytest.raises(NonUnitConstantError):
        gen_bernoulli_numbers(chi3, Z3, 1, 4)  # r | d


def test_poly_examples():
    z = Cyc.zeta(3)
    b1 = (z ** 2 - 1).scale(Fraction(1, 3))
    p1 = gen_bernoulli_poly(CHI1, Z3, 1, 1)
    # B_0 = 0 kills the x term: constant polynomial
    assert p1(Fraction(7, 2)) == b1
    assert p1(0) == b1
    p2 = gen_bernoulli_poly(CHI1, Z3, 1, 2)
    assert p2(0) == Fraction(2, 3)
    x = Fraction(5, 4)
    assert p2(x) == b1.scale(2 * x) + Fraction(2, 3)


@pytest.mark.parametrize("d,r", [(1, 3), (4, 5), (5, 4)])
def test_poly_at_zero_is_number(d, r):
    twist = TwistSpec(r, 1)
    for chi in enumerate_characters(d)[:2]:
        numbers = gen_bernoulli_numbers(chi, twist, 1, 8)
        for n in range(9):
            assert gen_bernoulli_poly(chi, twist, 1, n)(0) == numbers[n]


@pytest.mark.parametrize("x,y", [(Fraction(1, 2), Fraction(1, 3)), (2, 3), (Fraction(-3, 5), 1)])
def test_binomial_shift_identity(x, y):
    # B_n(x+y) = sum_k C(n,k) B_k(x) y^{n-k}
    chi = DirichletCharacter(5, (1,))
    twist = TwistSpec(4, 1)
    for n in range(6):
        lhs = gen_bernoulli_poly(chi, twist, 1, n)(Fraction(x) + Fraction(y))
        rhs_terms = [
            gen_bernoulli_poly(chi, twist, 1, k)(x).scale(math.comb(n, k) * Fraction(y) ** (n - k))
            for k in range(n + 1)
        ]
        rhs = rhs_terms[0]
        for t in rhs_terms[1:]:
            rhs = rhs + t
        assert lhs == rhs


def test_poly_accepts_cyclotomic_argument():
    p2 = gen_bernoulli_poly(CHI1, Z3, 1, 2)
    z = Cyc.zeta(3)
    expected = ((z ** 2 - 1).scale(Fraction(2, 3))) * z + Fraction(2, 3)
    assert p2(z) == expected


def test_power_sum_examples():
    z = Cyc.zeta(3)
    assert power_sum(1, 2, CHI1, Z3, 1) == z + (z ** 2).scale(2)
    chi4 = DirichletCharacter(4, (1,))
    xi = TwistSpec(5, 1)
    expected = xi.root() - xi.root_power(3)
    assert power_sum(0, 3, chi4, xi, 1) == expected
    assert power_sum(0, 0, CHI1, Z3, 1) == 1  # 0^0 = 1
    assert power_sum(3, 0, CHI1, Z3, 1).is_zero()


def test_power_sum_any_twist_power():
    # no measure here: w may be any integer, even a multiple of r
    assert power_sum(2, 4, CHI1, Z3, 3) == Fraction(1 + 4 + 9 + 16)
    assert power_sum(0, 2, CHI1, Z3, -1) == 1 + Cyc.zeta(3) ** 2 + Cyc.zeta(3)


def test_egf_check_examples():
    assert power_sum_egf_check(CHI1, Z3, 2, 10).passed
    # the d=4 instance needs r coprime to w; w=3 forces a twist of order != 3
    chi4 = DirichletCharacter(4, (1,))
    assert power_sum_egf_check(chi4, TwistSpec(5, 1), 3, 10).passed
    assert power_sum_egf_check(chi4, Z3, 2, 10).passed
    with pytest.raises(ParameterError):
        power_sum_egf_check(CHI1, Z3, 3, 5)


def test_egf_check_reports_failure_against_corrupted_sum():
    res = power_sum_egf_check(CHI1, Z3, 2, 6)
    assert isinstance(res, EgfCheckResult) and res.passed and res.first_failure is None


def test_bernoulli_egf_matches_numbers():
    egf = bernoulli_egf(CHI1, Z3, 1, 7)
    numbers = gen_bernoulli_numbers(CHI1, Z3, 1, 7)
    for n, b in enumerate(numbers):
        assert egf.egf_coefficient(n) == b
