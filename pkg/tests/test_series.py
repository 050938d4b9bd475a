"""Truncated series arithmetic and the EGF helpers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bernsym.exactnum import CyclotomicNumber as Cyc
from bernsym.series import NonUnitConstantError, TruncatedSeries as TS, egf_coefficient, exp_linear, ser_arith


def test_basic_mul():
    one_plus_t = TS(1, [1, 1, 0, 0, 0])
    one_minus_t = TS(1, [1, -1, 0, 0, 0])
    prod = one_plus_t * one_minus_t
    assert prod == TS(1, [1, 0, -1, 0, 0])


def test_order_is_min_of_operands():
    a = TS(1, [1, 2, 3])
    b = TS(1, [1, 1])
    assert (a * b).order == 1
    assert (a + b).order == 1


def test_exp_linear_values():
    e0 = exp_linear(0, 4)
    assert e0 == TS.one(4)
    e2 = exp_linear(2, 4)
    assert e2.coeffs[3] == Fraction(4, 3)
    ez = exp_linear(Cyc.zeta(3), 3)
    assert ez.coeffs[2] == (Cyc.zeta(3) ** 2).scale(Fraction(1, 2))


def test_egf_coefficient():
    e2 = exp_linear(2, 5)
    assert egf_coefficient(e2, 3) == 8
    assert egf_coefficient(TS.zero(5), 4) == 0
    with pytest.raises(IndexError):
        egf_coefficient(e2, 6)


def hand_expansion_t_over_z3_exp_minus_one():
    """Oracle: expand t / (zeta_3 e^t - 1) by hand to order 1.

    zeta_3 e^t - 1 = (zeta_3 - 1) + zeta_3 t + ..., and the unit constant
    inverts to (zeta_3^2 - 1)/3.
    """
    z = Cyc.zeta(3)
    c0 = Cyc.zero(3)
    c1 = (z ** 2 - 1).scale(Fraction(1, 3))
    return c0, c1


def test_quotient_example_to_order_one():
    z = Cyc.zeta(3)
    num = TS(3, [0, 1])  # t, order 1
    den = exp_linear(z, 1).scale(z) - TS.one(1, 3)
    q = num / den
    c0, c1 = hand_expansion_t_over_z3_exp_minus_one()
    assert q.coeffs[0] == c0
    assert q.coeffs[1] == c1
    assert q.egf_coefficient(1) == c1


def test_div_zero_constant_term():
    t = TS(1, [0, 1, 0])
    with pytest.raises(NonUnitConstantError):
        TS.one(2) / t


def small_series(m, order):
    coeff = st.integers(min_value=-5, max_value=5)
    return st.lists(coeff, min_size=order + 1, max_size=order + 1).map(
        lambda cs: TS(m, [Cyc.from_rational(c, m) for c in cs])
    )


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_div_is_section_of_mul(data):
    a = data.draw(small_series(3, 4))
    b = data.draw(small_series(3, 4))
    if b.coeffs[0].is_zero():
        b = b + TS.one(4, 3)
    assert (a * b) / b == a


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_mul_assoc_comm(data):
    a = data.draw(small_series(4, 3))
    b = data.draw(small_series(4, 3))
    c = data.draw(small_series(4, 3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=-4, max_value=4), st.integers(min_value=-4, max_value=4))
def test_exp_linear_is_homomorphism(x, y):
    n = 6
    assert exp_linear(x, n) * exp_linear(y, n) == exp_linear(x + y, n)


def test_scale_variable():
    s = exp_linear(1, 5)
    assert s.scale_variable(3) == exp_linear(3, 5)
    z = Cyc.zeta(4)
    sz = exp_linear(z, 4).scale_variable(2)
    assert sz == exp_linear(z.scale(2), 4)


def test_ser_arith_dispatch():
    a = TS(1, [1, 2, 3])
    b = TS(1, [1, 1, 1])
    assert ser_arith(a, b, "add") == a + b
    assert ser_arith(a, b, "sub") == a - b
    assert ser_arith(a, b, "mul") == a * b
    assert ser_arith(a, b, "div") == a / b
    with pytest.raises(ValueError):
        ser_arith(a, b, "compose")


def test_shift_and_truncate():
    a = TS(1, [1, 2])
    shifted = a.shift_up(2)
    assert shifted.order == 3
    assert shifted.coeffs[2] == 1 and shifted.coeffs[3] == 2
    assert shifted.truncate(2).order == 2
