"""Finite-level realization of the twist measure in an unramified p-adic ring.

Elements live in Z[x]/(Phi_r(x), p^M) with gcd(r, p) = 1, which avoids
factoring Phi_r mod p; the coefficientwise valuation is the minimum over
the ring's components and suffices for convergence checks.  The measure
assigns a residue class a + d p^N Z_p the value z^a / (z^(d p^N) - 1) with
z the image of the twist root, and integrals are finite Riemann sums over
residue classes whose p-adic limits are checked against the algebraic
Bernoulli moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .bernoulli import ParameterError, TwistSpec, gen_bernoulli_numbers
from .dirichlet import DirichletCharacter
from .exactnum import CyclotomicNumber, cyclotomic_polynomial, euler_phi

DEFAULT_PRECISION = 40
GUARD_BAND = 4


class NonUnitInverseError(ValueError):
    """Inversion of a non-unit in Z[x]/(Phi_r, p^M)."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PadicContext:
    """The quotient ring Z[x]/(Phi_r(x), p^M)."""

    p: int
    M: int
    r: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ParameterError(f"p={self.p} is not prime")
        if self.M < 1:
            raise ParameterError("precision M must be positive")
        if self.r < 1 or math.gcd(self.r, self.p) != 1:
            raise ParameterError(f"unramified twist needs gcd(r, p) = 1, got r={self.r}, p={self.p}")

    @property
    def modulus(self) -> int:
        return self.p ** self.M

    @property
    def degree(self) -> int:
        return euler_phi(self.r)

    def zero(self) -> "PadicCycNumber":
        return PadicCycNumber(self, (0,) * self.degree)

    def one(self) -> "PadicCycNumber":
        return PadicCycNumber(self, (1,) + (0,) * (self.degree - 1))

    def x_power(self, k: int) -> "PadicCycNumber":
        """Image of zeta_r^k (the class of x^k)."""
        k %= self.r
        vec = [0] * self.degree
        if k < self.degree:
            vec[k] = 1
            return PadicCycNumber(self, tuple(vec))
        rows = _padic_reduction_rows(self.r)
        vec = [0] * self.degree
        vec[self.degree - 1] = 1
        for _ in range(k - (self.degree - 1)):
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                row = rows[0]
                vec = [c + top * rc for c, rc in zip(vec, row)]
        return PadicCycNumber(self, tuple(c % self.modulus for c in vec))


@lru_cache(maxsize=None)
def _padic_reduction_rows(r: int) -> tuple[tuple[int, ...], ...]:
    phi = euler_phi(r)
    cyc = cyclotomic_polynomial(r)
    base = tuple(-c for c in cyc[:phi])
    rows = [base]
    for _ in range(phi - 2):
        prev = rows[-1]
        top = prev[phi - 1]
        shifted = [0] + list(prev[:-1])
        if top:
            shifted = [c + top * b for c, b in zip(shifted, base)]
        rows.append(tuple(shifted))
    return tuple(rows)


class PadicCycNumber:
    """An element of Z[x]/(Phi_r(x), p^M), coefficients reduced mod p^M."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PadicContext, coeffs: Sequence[int]):
        if len(coeffs) != ctx.degree:
            raise ValueError(f"expected {ctx.degree} coefficients")
        mod = ctx.modulus
        self.ctx = ctx
        self.coeffs = tuple(c % mod for c in coeffs)

    def _check(self, other: "PadicCycNumber") -> None:
        if self.ctx != other.ctx:
            raise ValueError("operands live in different rings")

    def __add__(self, other: "PadicCycNumber") -> "PadicCycNumber":
        self._check(other)
        return PadicCycNumber(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "PadicCycNumber") -> "PadicCycNumber":
        self._check(other)
        return PadicCycNumber(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "PadicCycNumber":
        return PadicCycNumber(self.ctx, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicCycNumber(self.ctx, [a * other for a in self.coeffs])
        self._check(other)
        phi = self.ctx.degree
        if phi == 1:
            return PadicCycNumber(self.ctx, (self.coeffs[0] * other.coeffs[0],))
        mod = self.ctx.modulus
        conv = [0] * (2 * phi - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(other.coeffs):
                    if bj:
                        conv[i + j] += ai * bj
        rows = _padic_reduction_rows(self.ctx.r)
        out = conv[:phi]
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = rows[k - phi]
                out = [o + c * rc for o, rc in zip(out, row)]
        return PadicCycNumber(self.ctx, [c % mod for c in out])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PadicCycNumber":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    def inverse(self) -> "PadicCycNumber":
        """Invert via gcd with Phi_r over GF(p), then Hensel lifting to p^M."""
        p, M, r = self.ctx.p, self.ctx.M, self.ctx.r
        inv_mod_p = _invert_mod_p(self.coeffs, r, p)
        if inv_mod_p is None:
            raise NonUnitInverseError(
                f"element shares a factor with Phi_{r} mod {p}; not a unit"
            )
        x = PadicCycNumber(self.ctx, inv_mod_p)
        two = self.ctx.one() * 2
        precision = 1
        while precision < M:
            x = x * (two - self * x)
            precision *= 2
        return x

    def valuation(self) -> int:
        """Largest k <= M with p^k dividing every coefficient."""
        p, M = self.ctx.p, self.ctx.M
        best = M
        for c in self.coeffs:
            if c == 0:
                continue
            v = 0
            while c % p == 0 and v < best:
                c //= p
                v += 1
            best = min(best, v)
            if best == 0:
                return 0
        return best

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PadicCycNumber) and self.ctx == other.ctx and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"PadicCycNumber(p={self.ctx.p}, M={self.ctx.M}, r={self.ctx.r}, {list(self.coeffs)})"


def _gfp_trim(poly: list[int]) -> list[int]:
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _gfp_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    rem = list(num)
    q = [0] * max(1, len(rem) - len(den) + 1)
    lead_inv = pow(den[-1], -1, p)
    for k in range(len(rem) - 1, len(den) - 2, -1):
        c = rem[k]
        if c == 0:
            continue
        factor = (c * lead_inv) % p
        q[k - len(den) + 1] = factor
        for i, dc in enumerate(den):
            rem[k - len(den) + 1 + i] = (rem[k - len(den) + 1 + i] - factor * dc) % p
    return q, _gfp_trim(rem[: len(den) - 1] or [0])


def _invert_mod_p(coeffs: Sequence[int], r: int, p: int) -> Optional[tuple[int, ...]]:
    """Inverse of the representative modulo (Phi_r, p), or None if not a unit."""
    phi = euler_phi(r)
    mod_poly = [c % p for c in cyclotomic_polynomial(r)]
    r0, r1 = mod_poly, _gfp_trim([c % p for c in coeffs])
    s0, s1 = [0], [1]
    while len(r1) > 1:
        q, rem = _gfp_divmod(r0, r1, p)
        s = [0] * max(len(s0), len(q) + len(s1) - 1)
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    s[i + j] = (s[i + j] - qc * sc) % p
        for i, sc in enumerate(s0):
            s[i] = (s[i] + sc) % p
        r0, s0, r1, s1 = r1, s1, rem, _gfp_trim(s)
    if r1 == [0]:
        return None
    inv_c = pow(r1[0], -1, p)
    u = [(inv_c * c) % p for c in s1]
    u = (u + [0] * phi)[:phi]
    return tuple(u)


def padic_arith(a: PadicCycNumber, b: Optional[PadicCycNumber], op: str) -> PadicCycNumber:
    """Dispatch helper: op is one of add|mul|inv (inv ignores b)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# embedding of exact algebraic values


def embed_algebraic(value: CyclotomicNumber, ctx: PadicContext) -> PadicCycNumber:
    """Ring homomorphism Q(zeta_c) -> Z[x]/(Phi_r, p^M) for c | r, sending
    zeta_c to x^(r/c); rationals map by modular inversion of denominators."""
    c = value.conductor
    if ctx.r % c:
        raise ParameterError(f"conductor {c} does not divide r={ctx.r}")
    if value.den % ctx.p == 0:
        raise ParameterError(f"denominator {value.den} is divisible by p={ctx.p}")
    den_inv = pow(value.den, -1, ctx.modulus)
    out = ctx.zero()
    step = ctx.r // c
    for i, num in enumerate(value.num):
        if num:
            out = out + ctx.x_power(i * step) * (num * den_inv)
    return out


# ---------------------------------------------------------------------------
# the measure and its Riemann sums


@dataclass(frozen=True)
class MeasureQuery:
    """One residue class a + d p^N Z_p and the twist power used as z."""

    d: int
    level: int
    twist_exp: int
    residue: int

    def __post_init__(self):
        if self.d < 1 or self.level < 0:
            raise ParameterError("need d >= 1 and level N >= 0")
        if self.residue < 0:
            raise ParameterError("residue must be nonnegative")


def measure_value(query: MeasureQuery, twist: TwistSpec, ctx: PadicContext) -> PadicCycNumber:
    """mu_z(a + d p^N Z_p) = z^a / (z^(d p^N) - 1), z = xi^twist_exp."""
    if ctx.r != twist.r:
        raise ParameterError("ring and twist orders differ")
    span = query.d * ctx.p ** query.level
    if query.residue >= span:
        raise ParameterError(f"residue {query.residue} outside 0..{span - 1}")
    z_exp = twist.j * query.twist_exp
    if z_exp % twist.r == 0:
        raise ParameterError("z = 1 does not define a measure")
    z = ctx.x_power(z_exp)
    den = ctx.x_power(z_exp * span) - ctx.one()
    return z ** query.residue * den.inverse()


def riemann_sum(f_coeffs: Sequence, chi: Optional[DirichletCharacter],
                twist: TwistSpec, d: int, level: int, ctx: PadicContext,
                twist_exp: int = 1) -> PadicCycNumber:
    """The level-N sum over residues a < d p^N of chi(a) f(a) mu(a + ...).

    f is a polynomial given by rational coefficients (low degree first)
    whose denominators must be prime to p; when chi is supplied its order
    must divide r so the values embed in the ring.
    """
    fracs = [Fraction(c) for c in f_coeffs] or [Fraction(0)]
    for c in fracs:
        if c.denominator % ctx.p == 0:
            raise ParameterError(f"coefficient {c} has denominator divisible by p={ctx.p}")
    if chi is not None and ctx.r % chi.order:
        raise ParameterError(
            f"character order {chi.order} does not divide r={ctx.r}; values do not embed"
        )
    span = d * ctx.p ** level
    z_exp = twist.j * twist_exp
    if z_exp % twist.r == 0:
        raise ParameterError("z = 1 does not define a measure")

    chi_embedded = None
    if chi is not None:
        chi_embedded = [embed_algebraic(chi(a), ctx) for a in range(chi.d)]

    mod = ctx.modulus
    total = ctx.zero()
    z = ctx.x_power(z_exp)
    z_pow = ctx.one()
    for a in range(span):
        if a:
            z_pow = z_pow * z
        fa = sum(c * Fraction(a) ** i for i, c in enumerate(fracs))
        if fa == 0 and chi is None:
            continue
        term = z_pow * (fa.numerator * pow(fa.denominator, -1, mod))
        if chi_embedded is not None:
            cv = chi_embedded[a % chi.d]
            if cv.is_zero():
                continue
            term = term * cv
        total = total + term
    den = ctx.x_power(z_exp * span) - ctx.one()
    return total * den.inverse()


def distribution_check(twist: TwistSpec, d: int, level: int, residue: int,
                       ctx: PadicContext, twist_exp: int = 1) -> bool:
    """Exact finite-level compatibility: the p classes refining
    a + d p^N Z_p sum to its measure."""
    coarse = measure_value(MeasureQuery(d, level, twist_exp, residue), twist, ctx)
    total = ctx.zero()
    span = d * ctx.p ** level
    for i in range(ctx.p):
        fine = MeasureQuery(d, level + 1, twist_exp, residue + i * span)
        total = total + measure_value(fine, twist, ctx)
    return total == coarse


# ---------------------------------------------------------------------------
# convergence of moments to Bernoulli values


@dataclass
class ConvergenceReport:
    moment: int
    p: int
    M: int
    r: int
    j: int
    d: int
    levels: list[int]
    valuations: list[int]
    exact: list[bool]
    passed: bool

    def to_json(self) -> dict:
        return {
            "moment": self.moment,
            "p": self.p,
            "M": self.M,
            "r": self.r,
            "j": self.j,
            "d": self.d,
            "table": [
                {"level": lv, "valuation": v, "exact": ex}
                for lv, v, ex in zip(self.levels, self.valuations, self.exact)
            ],
            "pass": self.passed,
        }


def convergence_check(moment: int, chi: DirichletCharacter, twist: TwistSpec,
                      levels: Sequence[int], ctx: PadicContext) -> ConvergenceReport:
    """Compare level-N sums of chi(z) z^n against B_{n+1,chi,xi}/(n+1).

    Valuations of the differences must be nondecreasing in the level and
    strictly larger at the last level than the first (or the difference is
    exactly zero at every level, the level-exact case).  Verdicts only
    trust valuations below M minus a guard band.
    """
    d = chi.d
    if moment < 0:
        raise ParameterError("moment index must be nonnegative")
    if ctx.p <= moment + 1:
        raise ParameterError(f"need p > n+1 = {moment + 1} to keep 1/(n+1) a unit")
    if ctx.r % chi.order:
        raise ParameterError(f"character order {chi.order} does not divide r={ctx.r}")
    if math.gcd(twist.r, ctx.p * d) != 1:
        raise ParameterError("need gcd(r, p*d) = 1")
    levels = list(levels)
    if not levels:
        raise ParameterError("need at least one level")

    numbers = gen_bernoulli_numbers(chi, twist, 1, moment + 1)
    target = numbers[moment + 1].scale(Fraction(1, moment + 1))
    target_ring = embed_algebraic(target, ctx)

    f = [Fraction(0)] * moment + [Fraction(1)]
    valuations, exact = [], []
    for lv in levels:
        s = riemann_sum(f, chi, twist, d, lv, ctx)
        diff = s - target_ring
        valuations.append(diff.valuation())
        exact.append(diff.is_zero())

    if all(exact):
        passed = True
    else:
        trusted_cap = ctx.M - GUARD_BAND
        vals = valuations
        monotone = all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))
        growing = vals[-1] > vals[0]
        trustworthy = vals[0] < trusted_cap
        passed = monotone and growing and trustworthy
    return ConvergenceReport(moment, ctx.p, ctx.M, ctx.r, twist.j, d,
                             levels, valuations, exact, passed)
