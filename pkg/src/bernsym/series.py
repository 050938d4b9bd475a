"""Truncated formal power series over a cyclotomic field.

The exponential-generating-function engine: a series stores coefficients
c_0..c_N exactly; every binary operation truncates to the smaller order, so
each computed coefficient is exact.  The analytic convergence region of the
source expressions plays no role here; coefficients are formal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from .errors import ParameterError
from .exactnum import CycDivisionError, CyclotomicNumber, Scalar


class NonUnitConstantError(ParameterError):
    """Series division with a non-invertible constant term.

    In this engine a zero constant term is the arithmetic signal that some
    parameter choice made xi^(d*w) collapse to 1.
    """

    def __init__(self, message: str, factor: str | None = None):
        super().__init__(message)
        self.factor = factor


def _as_cyc(value, m: int) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value.embed(m) if value.m != m else value
    return CyclotomicNumber.from_rational(value, m)


class TruncatedSeries:
    """Formal power series over Q(zeta_m) truncated at an explicit order."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence[Union[CyclotomicNumber, Scalar]]):
        if not coeffs:
            raise ValueError("a series stores at least the constant term")
        self.m = m
        self.coeffs = tuple(_as_cyc(c, m) for c in coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def constant(value, order: int, m: int = 1) -> "TruncatedSeries":
        c = _as_cyc(value, m)
        zero = CyclotomicNumber.zero(m)
        return TruncatedSeries(m, (c,) + (zero,) * order)

    @staticmethod
    def one(order: int, m: int = 1) -> "TruncatedSeries":
        return TruncatedSeries.constant(1, order, m)

    @staticmethod
    def zero(order: int, m: int = 1) -> "TruncatedSeries":
        return TruncatedSeries.constant(0, order, m)

    @staticmethod
    def exp_linear(c, order: int, m: int | None = None) -> "TruncatedSeries":
        """exp(c*t) truncated: coefficients c^n / n!."""
        if m is None:
            m = c.m if isinstance(c, CyclotomicNumber) else 1
        cur = CyclotomicNumber.one(m)
        coeffs = [cur]
        cc = _as_cyc(c, m)
        for n in range(1, order + 1):
            cur = (cur * cc).scale(Fraction(1, n))
            coeffs.append(cur)
        return TruncatedSeries(m, coeffs)

    # ------------------------------------------------------------------
    # arithmetic (binary ops truncate to the common order)

    def _common(self, other: "TruncatedSeries") -> tuple["TruncatedSeries", "TruncatedSeries", int]:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        m = self.m if self.m == other.m else math.lcm(self.m, other.m)
        a = self if self.m == m else TruncatedSeries(m, self.coeffs)
        b = other if other.m == m else TruncatedSeries(m, other.coeffs)
        return a, b, min(a.order, b.order)

    def __add__(self, other):
        a, b, n = self._common(other)
        return TruncatedSeries(a.m, [x + y for x, y in zip(a.coeffs[: n + 1], b.coeffs[: n + 1])])

    def __sub__(self, other):
        a, b, n = self._common(other)
        return TruncatedSeries(a.m, [x - y for x, y in zip(a.coeffs[: n + 1], b.coeffs[: n + 1])])

    def __neg__(self):
        return TruncatedSeries(self.m, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        a, b, n = self._common(other)
        zero = CyclotomicNumber.zero(a.m)
        out = [zero] * (n + 1)
        for i, ai in enumerate(a.coeffs[: n + 1]):
            if ai.is_zero():
                continue
            for j in range(n + 1 - i):
                bj = b.coeffs[j]
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
        return TruncatedSeries(a.m, out)

    __rmul__ = __mul__

    def scale(self, value) -> "TruncatedSeries":
        c = _as_cyc(value, self.m) if isinstance(value, CyclotomicNumber) else value
        if isinstance(c, CyclotomicNumber):
            return TruncatedSeries(self.m, [x * c for x in self.coeffs])
        return TruncatedSeries(self.m, [x.scale(c) for x in self.coeffs])

    def __truediv__(self, other):
        a, b, n = self._common(other)
        b0 = b.coeffs[0]
        if b0.is_zero():
            raise NonUnitConstantError("series division by a series with zero constant term")
        try:
            inv0 = b0.inverse()
        except CycDivisionError as exc:  # pragma: no cover - guarded above
            raise NonUnitConstantError(str(exc)) from exc
        out = [a.coeffs[0] * inv0]
        for k in range(1, n + 1):
            acc = a.coeffs[k]
            for i in range(1, k + 1):
                bi = b.coeffs[i]
                if not bi.is_zero():
                    acc = acc - bi * out[k - i]
            out.append(acc * inv0)
        return TruncatedSeries(a.m, out)

    # ------------------------------------------------------------------
    # series-specific helpers

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k, keeping all known coefficients (order grows by k)."""
        zero = CyclotomicNumber.zero(self.m)
        return TruncatedSeries(self.m, (zero,) * k + self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self.m, self.coeffs[: order + 1])

    def scale_variable(self, w) -> "TruncatedSeries":
        """Substitute t -> w*t, mapping c_n to w^n * c_n."""
        out = []
        power = CyclotomicNumber.one(self.m) if isinstance(w, CyclotomicNumber) else Fraction(1)
        for n, c in enumerate(self.coeffs):
            if n:
                power = power * w
            out.append(c * power if isinstance(power, CyclotomicNumber) else c.scale(power))
        return TruncatedSeries(self.m, out)

    def egf_coefficient(self, n: int) -> CyclotomicNumber:
        """n! times the coefficient of t^n."""
        if n > self.order:
            raise IndexError(f"index {n} beyond truncation order {self.order}")
        return self.coeffs[n].scale(math.factorial(n))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        a, b, n = self._common(other)
        return a.coeffs[: n + 1] == b.coeffs[: n + 1] and a.order == b.order

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"TruncatedSeries(m={self.m}, order={self.order})"


def ser_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """Dispatch helper: op is one of add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def exp_linear(c, order: int, m: int | None = None) -> TruncatedSeries:
    return TruncatedSeries.exp_linear(c, order, m)


def egf_coefficient(s: TruncatedSeries, n: int) -> CyclotomicNumber:
    return s.egf_coefficient(n)
