"""Exact rational and cyclotomic-field arithmetic.

Every algebraic value in the engine lives in some Q(zeta_m).  Elements are
represented on the power basis 1, zeta_m, ..., zeta_m^{phi(m)-1} as the
canonical remainder modulo the m-th cyclotomic polynomial, stored as one
integer coefficient vector over a common positive denominator.  The
representation is unique, so equality is componentwise; there is no
floating point anywhere.

`Rational` is an alias for `fractions.Fraction`, which already provides the
required canonical form (reduced, positive denominator).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class CycDivisionError(ZeroDivisionError):
    """Division by zero inside a cyclotomic field."""


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    result = m
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def divisors(m: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i != m // i:
                large.append(m // i)
        i += 1
    return small + large[::-1]


def _poly_divmod_int(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (low-to-high coeffs); den must be monic."""
    num = list(num)
    dden = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(1, len(num) - dden)
    for k in range(len(num) - 1, dden - 1, -1):
        c = num[k]
        if c == 0:
            continue
        quot[k - dden] = c
        for i, dc in enumerate(den):
            num[k - dden + i] -= c * dc
    rem = num[:dden]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, low degree first, computed by exact division
    of x^m - 1 by the product of Phi_d over proper divisors d of m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return (-1, 1)
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        poly, rem = _poly_divmod_int(poly, cyclotomic_polynomial(d))
        if any(rem):
            raise ArithmeticError(f"Phi_{d} does not divide x^{m}-1")
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_rows(m: int) -> tuple[tuple[int, ...], ...]:
    """Rows r[k - phi] with x^k == r (mod Phi_m) for k = phi .. 2*phi - 2."""
    phi = euler_phi(m)
    cyc = cyclotomic_polynomial(m)
    base = tuple(-c for c in cyc[:phi])
    rows = [base]
    for _ in range(phi - 2):
        prev = rows[-1]
        top = prev[phi - 1]
        shifted = [0] + list(prev[:-1])
        if top:
            for i in range(phi):
                shifted[i] += top * base[i]
        rows.append(tuple(shifted))
    return tuple(rows)


def _vec_mul_mod(m: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
    phi = len(a)
    if phi == 1:
        return [a[0] * b[0]]
    conv = [0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    rows = _reduction_rows(m)
    out = conv[:phi]
    for k in range(phi, 2 * phi - 1):
        c = conv[k]
        if c:
            row = rows[k - phi]
            for i in range(phi):
                out[i] += c * row[i]
    return out


@lru_cache(maxsize=None)
def _embed_rows(m: int, big: int) -> tuple[tuple[int, ...], ...]:
    """Image of the basis powers zeta_m^i inside Q(zeta_big), m | big."""
    if big % m:
        raise ValueError(f"conductor {m} does not divide {big}")
    step = big // m
    phi_m = euler_phi(m)
    phi_big = euler_phi(big)
    rows = []
    cur = [1] + [0] * (phi_big - 1)
    gen = _power_vec(big, step)
    for i in range(phi_m):
        rows.append(tuple(cur))
        if i + 1 < phi_m:
            cur = _vec_mul_mod(big, cur, gen)
    return tuple(rows)


def _power_vec(m: int, k: int) -> list[int]:
    """Integer vector of zeta_m^k reduced modulo Phi_m."""
    phi = euler_phi(m)
    k %= m
    if k < phi:
        vec = [0] * phi
        vec[k] = 1
        return vec
    vec = [0] * phi
    vec[phi - 1] = 1
    rows = _reduction_rows(m)
    for _ in range(k - (phi - 1)):
        top = vec[phi - 1]
        vec = [0] + vec[:-1]
        if top:
            row = rows[0]
            for i in range(phi):
                vec[i] += top * row[i]
    return vec


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise CycDivisionError("zero denominator")
    if den < 0:
        den = -den
        num = [-c for c in num]
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                return tuple(num), den
    if g == den and not any(num):
        return tuple(num), 1
    return tuple(c // g for c in num), den // g


class CyclotomicNumber:
    """An exact element of Q(zeta_m) on the power basis modulo Phi_m."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num: Sequence[int], den: int = 1, _normalized: bool = False):
        self.m = m
        if _normalized:
            self.num = tuple(num)
            self.den = den
        else:
            self.num, self.den = _normalize(list(num), den)

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def from_rational(value: Scalar, m: int = 1) -> "CyclotomicNumber":
        fr = Fraction(value)
        phi = euler_phi(m)
        return CyclotomicNumber(m, (fr.numerator,) + (0,) * (phi - 1), fr.denominator)

    @staticmethod
    def zero(m: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber(m, (0,) * euler_phi(m), 1, _normalized=True)

    @staticmethod
    def one(m: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber(m, (1,) + (0,) * (euler_phi(m) - 1), 1, _normalized=True)

    @staticmethod
    def zeta(m: int, k: int = 1) -> "CyclotomicNumber":
        """zeta_m^k as an element of Q(zeta_m)."""
        return CyclotomicNumber(m, _power_vec(m, k))

    @staticmethod
    def from_coefficients(m: int, coeffs: Iterable[Scalar]) -> "CyclotomicNumber":
        fracs = [Fraction(c) for c in coeffs]
        phi = euler_phi(m)
        if len(fracs) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {m}")
        den = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        return CyclotomicNumber(m, [f.numerator * (den // f.denominator) for f in fracs], den)

    # ------------------------------------------------------------------
    # structure

    @property
    def conductor(self) -> int:
        return self.m

    def coefficients(self) -> tuple[Fraction, ...]:
        """Power-basis coordinates as Rationals."""
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return Fraction(self.num[0], self.den)

    def embed(self, big: int) -> "CyclotomicNumber":
        """Image under the ring embedding zeta_m -> zeta_big^(big/m)."""
        if big == self.m:
            return self
        rows = _embed_rows(self.m, big)
        phi_big = len(rows[0])
        out = [0] * phi_big
        for c, row in zip(self.num, rows):
            if c:
                for i in range(phi_big):
                    out[i] += c * row[i]
        return CyclotomicNumber(big, out, self.den)

    # ------------------------------------------------------------------
    # arithmetic

    def _coerce(self, other) -> "CyclotomicNumber | None":
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(other, 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = _to_common(self, o)
        if a.den == b.den:
            return CyclotomicNumber(a.m, [x + y for x, y in zip(a.num, b.num)], a.den)
        lcm = math.lcm(a.den, b.den)
        fa, fb = lcm // a.den, lcm // b.den
        return CyclotomicNumber(a.m, [x * fa + y * fb for x, y in zip(a.num, b.num)], lcm)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, tuple(-c for c in self.num), self.den, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = _to_common(self, other)
        return CyclotomicNumber(a.m, _vec_mul_mod(a.m, a.num, b.num), a.den * b.den)

    __rmul__ = __mul__

    def scale(self, fr: Scalar) -> "CyclotomicNumber":
        fr = Fraction(fr)
        return CyclotomicNumber(self.m, [c * fr.numerator for c in self.num], self.den * fr.denominator)

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise CycDivisionError(f"division by zero in Q(zeta_{self.m})")
        if self.is_rational():
            q = Fraction(self.num[0], self.den)
            return CyclotomicNumber.from_rational(1 / q, self.m)
        inv = _inverse_vec(self.m, self.num)
        # inv is the inverse of the integer-vector part; restore denominator
        return inv.scale(self.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__mul__(o.inverse())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__mul__(self.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.one(self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.m == o.m:
            return self.den == o.den and self.num == o.num
        a, b = _to_common(self, o)
        return a.den == b.den and a.num == b.num

    # Cross-conductor equality would require canonical compression to hash
    # consistently; values are compared, not hashed.
    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return any(self.num)

    # ------------------------------------------------------------------
    # presentation

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [str(c) for c in self.coefficients()]}

    @staticmethod
    def from_json(data: dict) -> "CyclotomicNumber":
        return CyclotomicNumber.from_coefficients(int(data["m"]), [Fraction(c) for c in data["coeffs"]])

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self.num[0], self.den))
        parts = []
        for i, c in enumerate(self.coefficients()):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = f"z{self.m}" if i == 1 else f"z{self.m}^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        out = " + ".join(parts).replace("+ -", "- ")
        return out

    def __repr__(self):
        return f"CyclotomicNumber({self.m}, {list(self.coefficients())})"


def _to_common(a: CyclotomicNumber, b: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
    if a.m == b.m:
        return a, b
    big = math.lcm(a.m, b.m)
    return a.embed(big), b.embed(big)


def _inverse_vec(m: int, num: Sequence[int]) -> CyclotomicNumber:
    """Inverse of the element with integer vector `num` via extended gcd of
    its representative polynomial with Phi_m over the rationals."""
    mod = [Fraction(c) for c in cyclotomic_polynomial(m)]
    a = [Fraction(c) for c in num]
    # extended Euclid keeping only the coefficient of `a`
    r0, r1 = mod, list(a)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while True:
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        if len(r1) == 1 and r1[0] == 0:
            raise CycDivisionError(f"division by zero in Q(zeta_{m})")
        if len(r1) == 1:
            c = r1[0]
            u = [x / c for x in s1]
            break
        q, r = _qpoly_divmod(r0, r1)
        s = _qpoly_sub(s0, _qpoly_mul(q, s1))
        r0, s0, r1, s1 = r1, s1, r, s
    # reduce u modulo Phi_m and convert to integer vector over one denominator
    if len(u) >= len(mod):
        _, u = _qpoly_divmod(u, mod)
    phi = euler_phi(m)
    u = (u + [Fraction(0)] * phi)[:phi]
    den = math.lcm(*(f.denominator for f in u))
    return CyclotomicNumber(m, [f.numerator * (den // f.denominator) for f in u], den)


def _qpoly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    dden = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(1, len(num) - dden)
    for k in range(len(num) - 1, dden - 1, -1):
        c = num[k]
        if c == 0:
            continue
        q = c / lead
        quot[k - dden] = q
        for i, dc in enumerate(den):
            num[k - dden + i] -= q * dc
    rem = num[:dden] or [Fraction(0)]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _qpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _qpoly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def cyc_arith(a: CyclotomicNumber, b, op: str):
    """Dispatch helper: op is one of add|sub|mul|div|pow."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def cyc_embed(a: CyclotomicNumber, big: int) -> CyclotomicNumber:
    """Embed a into Q(zeta_big); big must be a multiple of a's conductor."""
    return a.embed(big)


def linear_combination(terms: Iterable[tuple[Scalar, CyclotomicNumber]], m: int) -> CyclotomicNumber:
    """Sum of coeff * value over terms, all values at conductor m.

    Accumulates integer vectors over one running denominator, which is much
    cheaper than repeated pairwise additions in hot loops.
    """
    phi = euler_phi(m)
    acc = [0] * phi
    den = 1
    for coeff, val in terms:
        fr = Fraction(coeff)
        t_den = val.den * fr.denominator
        lcm = math.lcm(den, t_den)
        if lcm != den:
            f = lcm // den
            acc = [c * f for c in acc]
            den = lcm
        f = den // t_den
        cn = fr.numerator * f
        for i, c in enumerate(val.num):
            if c:
                acc[i] += c * cn
    return CyclotomicNumber(m, acc, den)
