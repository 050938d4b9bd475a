"""Generalized twisted Bernoulli numbers, polynomials, and power sums.

B_{n,chi,xi} is the n-th EGF coefficient of

    t * sum_{a<d} chi(a) xi^a e^{at} / (xi^d e^{dt} - 1),

which requires xi^d != 1; with xi of exact order r that is r not dividing d
(and r not dividing w*d when the twist is xi^w).  The d = 1 case is the
plain twisted Bernoulli number.  Power sums S_k(n; chi, xi) use the
convention 0^0 = 1, which is what makes the closed quotient identity hold
at k = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .dirichlet import DirichletCharacter
from .errors import ParameterError
from .exactnum import CyclotomicNumber, Scalar
from .series import NonUnitConstantError, TruncatedSeries

__all__ = [
    "BernoulliPolynomial",
    "EgfCheckResult",
    "ParameterError",
    "TwistSpec",
    "bernoulli_egf",
    "character_sum_series",
    "field_conductor",
    "gen_bernoulli_numbers",
    "gen_bernoulli_poly",
    "power_sum",
    "power_sum_egf_check",
]


@dataclass(frozen=True)
class TwistSpec:
    """The twist root xi = zeta_r^j, required primitive of exact order r."""

    r: int
    j: int = 1

    def __post_init__(self):
        if self.r < 2:
            raise ParameterError("twist root must differ from 1 (r >= 2)")
        if not 0 < self.j < self.r or math.gcd(self.j, self.r) != 1:
            raise ParameterError(f"j={self.j} does not give a primitive {self.r}-th root")

    def root(self, conductor: int | None = None) -> CyclotomicNumber:
        xi = CyclotomicNumber.zeta(self.r, self.j)
        return xi.embed(conductor) if conductor else xi

    def root_power(self, w: int, conductor: int | None = None) -> CyclotomicNumber:
        xi = CyclotomicNumber.zeta(self.r, (self.j * w) % self.r)
        return xi.embed(conductor) if conductor else xi

    def coprime_to(self, d: int) -> bool:
        return math.gcd(self.r, d) == 1

    def require_coprime(self, d: int) -> None:
        if not self.coprime_to(d):
            raise ParameterError(f"gcd(r, d) = gcd({self.r}, {d}) != 1")

    def divides(self, value: int) -> bool:
        return value % self.r == 0


def field_conductor(chi: DirichletCharacter, twist: TwistSpec) -> int:
    """Smallest conductor containing the character values and the twist root."""
    return math.lcm(twist.r, chi.order)


def character_sum_series(chi: DirichletCharacter, twist: TwistSpec, w: int,
                         order: int, m: int | None = None) -> TruncatedSeries:
    """sum_{a<d} chi(a) xi^{w a} e^{a t} truncated at `order`."""
    m = m or field_conductor(chi, twist)
    total = TruncatedSeries.zero(order, m)
    for a in range(chi.d):
        val = chi(a)
        if val.is_zero():
            continue
        coeff = val.embed(m) * twist.root_power(w * a, m)
        total = total + TruncatedSeries.exp_linear(a, order, m).scale(coeff)
    return total


def bernoulli_egf(chi: DirichletCharacter, twist: TwistSpec, w: int, order: int,
                  m: int | None = None) -> TruncatedSeries:
    """t * sum_{a<d} chi(a) xi^{wa} e^{at} / (xi^{wd} e^{dt} - 1), exact to `order`."""
    m = m or field_conductor(chi, twist)
    d = chi.d
    numerator = character_sum_series(chi, twist, w, order, m).shift_up(1).truncate(order)
    denominator = TruncatedSeries.exp_linear(d, order, m).scale(twist.root_power(w * d, m)) \
        - TruncatedSeries.one(order, m)
    try:
        return numerator / denominator
    except NonUnitConstantError as exc:
        raise NonUnitConstantError(
            f"xi^(w*d) = xi^({w}*{d}) = 1: r={twist.r} divides w*d", factor="xi^(w*d) e^(d t) - 1"
        ) from exc


def gen_bernoulli_numbers(chi: DirichletCharacter, twist: TwistSpec, w: int, order: int) -> list[CyclotomicNumber]:
    """B_{n, chi, xi^w} for n = 0..order."""
    egf = bernoulli_egf(chi, twist, w, order)
    return [egf.egf_coefficient(n) for n in range(order + 1)]


class BernoulliPolynomial:
    """B_{n, chi, xi^w}(x) = sum_k C(n,k) B_k x^{n-k}; coeffs stored by x-power."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: list[CyclotomicNumber]):
        self.n = n
        self.coeffs = list(coeffs)

    def __call__(self, x: Union[Scalar, CyclotomicNumber]) -> CyclotomicNumber:
        if isinstance(x, CyclotomicNumber):
            acc = CyclotomicNumber.zero(math.lcm(x.m, self.coeffs[0].m))
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc.scale(x) + c
        return acc

    def __eq__(self, other):
        return isinstance(other, BernoulliPolynomial) and self.n == other.n and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"BernoulliPolynomial(n={self.n})"


def gen_bernoulli_poly(chi: DirichletCharacter, twist: TwistSpec, w: int, n: int) -> BernoulliPolynomial:
    numbers = gen_bernoulli_numbers(chi, twist, w, n)
    coeffs = [numbers[n - i].scale(math.comb(n, i)) for i in range(n + 1)]
    return BernoulliPolynomial(n, coeffs)


def power_sum(k: int, upper: int, chi: DirichletCharacter, twist: TwistSpec, w: int) -> CyclotomicNumber:
    """S_k(upper; chi, xi^w) = sum_{a=0}^{upper} chi(a) xi^{wa} a^k, with 0^0 = 1."""
    if k < 0 or upper < 0:
        raise ParameterError("power sum needs k >= 0 and upper >= 0")
    m = field_conductor(chi, twist)
    total = CyclotomicNumber.zero(m)
    for a in range(upper + 1):
        val = chi(a)
        if val.is_zero():
            continue
        apow = 1 if k == 0 else a ** k
        if apow == 0:
            continue
        total = total + (val.embed(m) * twist.root_power(w * a, m)).scale(apow)
    return total


@dataclass
class EgfCheckResult:
    passed: bool
    order: int
    first_failure: tuple[int, CyclotomicNumber, CyclotomicNumber] | None = None

    def __bool__(self):
        return self.passed


def power_sum_egf_check(chi: DirichletCharacter, twist: TwistSpec, w: int, order: int) -> EgfCheckResult:
    """Verify the quotient identity chain to the given order.

    Both equalities are checked: the closed quotient
    (xi^{dw} e^{dwt} - 1)/(xi^d e^{dt} - 1) * sum_{a<d} chi(a) xi^a e^{at}
    equals sum_{a<dw} chi(a) xi^a e^{at}, and the EGF coefficients of that
    sum are the power sums S_k(dw - 1; chi, xi).
    """
    d = chi.d
    if twist.divides(w):
        raise ParameterError(f"r={twist.r} divides w={w}")
    if twist.divides(d * w):
        raise ParameterError(f"r={twist.r} divides d*w={d * w}")
    m = field_conductor(chi, twist)
    big_exp = TruncatedSeries.exp_linear(d * w, order, m).scale(twist.root_power(d * w, m)) \
        - TruncatedSeries.one(order, m)
    small_exp = TruncatedSeries.exp_linear(d, order, m).scale(twist.root_power(d, m)) \
        - TruncatedSeries.one(order, m)
    closed = big_exp / small_exp * character_sum_series(chi, twist, 1, order, m)

    expanded = TruncatedSeries.zero(order, m)
    for a in range(d * w):
        val = chi(a)
        if val.is_zero():
            continue
        coeff = val.embed(m) * twist.root_power(a, m)
        expanded = expanded + TruncatedSeries.exp_linear(a, order, m).scale(coeff)

    for k in range(order + 1):
        lhs = closed.egf_coefficient(k)
        mid = expanded.egf_coefficient(k)
        rhs = power_sum(k, d * w - 1, chi, twist, 1)
        if lhs != mid or mid != rhs:
            return EgfCheckResult(False, order, (k, lhs, rhs if mid == rhs else mid))
    return EgfCheckResult(True, order)
