"""The theorem catalog, redundancy equalities, and the verification engine.

Each theorem is one expansion form plus the list of w-permutations that
produce its displayed sides, in print order.  A side therefore evaluates
as the base form at the permuted w-tuple, which also permutes its
normalization weight monomial; sides sharing a weight monomial form an
orbit and are equal as stated, while cross-orbit equality holds only
after dividing each side by its weight ("normalized" mode).

Verification works on the sides as polynomials in the y variables.  Each
side has degree at most n in every y, so coefficientwise equality is
equivalent to agreement on the standard grid of n+2 integer points per
variable; the point grid is still used to extract concrete counterexample
witnesses and to report values, and a pointwise verification method is
available for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .bernoulli import ParameterError, TwistSpec
from .dirichlet import DirichletCharacter, enumerate_characters
from .exactnum import CyclotomicNumber
from .quotients import (
    FORMS,
    BSlot,
    EvalContext,
    ExpansionForm,
    Mono,
    Mutation,
    SSlot,
    YPoly,
    eval_ypoly,
    expansion_polys,
    mono_name,
    mono_val,
    perm_apply,
    perm_monomial,
)

ID2 = ((1, 2), (2, 1))
LEX3 = ((1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1))


@dataclass(frozen=True)
class TheoremSpec:
    id: int
    base_key: str
    form_no: int
    sigmas: tuple[tuple[int, ...], ...]
    conditions: tuple[Mono, ...]
    condition_text: str

    @property
    def base(self) -> ExpansionForm:
        return FORMS[self.base_key][self.form_no - 1]

    @property
    def sides(self) -> int:
        return len(self.sigmas)

    @property
    def y_count(self) -> int:
        return self.base.qt.y_count

    @property
    def arity(self) -> int:
        return self.base.qt.arity

    def side_weight_monos(self) -> list[Mono]:
        base_mono = self.base.weight_mono()
        return [perm_monomial(sig, base_mono) for sig in self.sigmas]

    def orbits(self) -> list[list[int]]:
        """1-based side indices grouped by weight monomial, in print order."""
        groups: dict[Mono, list[int]] = {}
        for i, mono in enumerate(self.side_weight_monos(), start=1):
            groups.setdefault(mono, []).append(i)
        return list(groups.values())

    @property
    def permutes_cleanly(self) -> bool:
        """True when every slot is a plain B slot bound to its own y
        variable, so permuted sides are index permutations of one tensor."""
        slots = self.base.slots
        return all(isinstance(s, BSlot) and not s.asums for s in slots) and \
            [s.y_var for s in slots] == list(range(len(slots)))


def _mk(id_, base_key, form_no, sigmas, conditions, text):
    return TheoremSpec(id_, base_key, form_no, tuple(sigmas), tuple(conditions), text)


_E1, _E2, _E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
_P1, _P2, _P3 = (0, 1, 1), (1, 0, 1), (1, 1, 0)
_Q3 = (1, 1, 1)

THEOREMS: dict[int, TheoremSpec] = {
    1: _mk(1, "G0", 1, ID2, ((1, 0), (0, 1)), "r divides neither w1 nor w2"),
    2: _mk(2, "G1", 1, ID2, ((1, 1),), "r does not divide w1*w2"),
    3: _mk(3, "G1", 2, ID2, ((1, 1),), "r does not divide w1*w2"),
    4: _mk(4, "L23:0", 1, LEX3, (_P1, _P2, _P3), "r divides none of w2*w3, w1*w3, w1*w2"),
    5: _mk(5, "L23:1", 1,
           ((1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 2, 1), (3, 1, 2)),
           (_Q3,), "r does not divide w1*w2*w3"),
    6: _mk(6, "L23:1", 2,
           ((3, 2, 1), (2, 3, 1), (3, 1, 2), (1, 3, 2), (2, 1, 3), (1, 2, 3)),
           (_Q3,), "r does not divide w1*w2*w3"),
    7: _mk(7, "L23:2", 1, ((1, 2, 3), (2, 3, 1), (3, 1, 2)), (_Q3,),
           "r does not divide w1*w2*w3"),
    8: _mk(8, "L23:2", 2,
           ((2, 1, 3), (3, 1, 2), (1, 2, 3), (3, 2, 1), (1, 3, 2), (2, 3, 1)),
           (_Q3,), "r does not divide w1*w2*w3"),
    9: _mk(9, "L23:2", 3, ((3, 1, 2), (1, 2, 3), (2, 3, 1)), (_Q3,),
           "r does not divide w1*w2*w3"),
    10: _mk(10, "L12:0", 1, ((3, 1, 2), (2, 1, 3)), (_E1, _E2, _E3),
            "r divides none of w1, w2, w3"),
    11: _mk(11, "L12:1", 1, ((3, 1, 2), (2, 1, 3)), (_P1, _P2, _P3),
            "r divides none of w2*w3, w1*w3, w1*w2"),
}


# ---------------------------------------------------------------------------
# instances and reports


@dataclass(frozen=True)
class TheoremInstance:
    theorem: int
    d: int
    char: tuple[int, ...]
    r: int
    j: int
    w: tuple[int, ...]
    n_max: int
    mode: str = "as-stated"

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ParameterError(f"theorem id {self.theorem} out of range 1..11")
        if self.mode not in ("as-stated", "normalized"):
            raise ParameterError(f"mode must be as-stated or normalized, got {self.mode!r}")

    def theorem_spec(self) -> TheoremSpec:
        return THEOREMS[self.theorem]

    def character(self) -> DirichletCharacter:
        return DirichletCharacter(self.d, self.char)

    def twist(self) -> TwistSpec:
        return TwistSpec(self.r, self.j)

    def validate(self) -> None:
        thm = self.theorem_spec()
        if math.gcd(self.r, self.d) != 1:
            raise ParameterError(f"gcd(r, d) = gcd({self.r}, {self.d}) != 1")
        if len(self.w) != thm.arity:
            raise ParameterError(f"theorem {self.theorem} needs {thm.arity} w components")
        if any(x < 1 for x in self.w):
            raise ParameterError("w components must be positive")
        if self.n_max < 0:
            raise ParameterError("n_max must be nonnegative")
        for mono in thm.conditions:
            if mono_val(mono, self.w) % self.r == 0:
                raise ParameterError(
                    f"theorem {self.theorem} requires {thm.condition_text}; "
                    f"r={self.r} divides {mono_name(mono)}={mono_val(mono, self.w)} at w={self.w}"
                )

    def key(self) -> tuple:
        return (self.theorem, self.d, self.char, self.r, self.j, self.w)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "d": self.d,
            "char": {"d": self.d, "exponents": list(self.char)},
            "r": self.r,
            "j": self.j,
            "w": list(self.w),
            "n_max": self.n_max,
            "mode": self.mode,
        }


@dataclass
class Witness:
    mode: str
    n: int
    y: tuple[Fraction, ...]
    side_a: int
    side_b: int
    value_a: CyclotomicNumber
    value_b: CyclotomicNumber

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "y": [str(v) for v in self.y],
            "side_a": self.side_a,
            "side_b": self.side_b,
            "value_a": self.value_a.to_json(),
            "value_b": self.value_b.to_json(),
        }


@dataclass
class VerificationReport:
    instance: TheoremInstance
    side_weights: list[tuple[str, int]]
    orbits_static: list[list[int]]
    orbits_by_value: list[list[int]]
    pass_as_stated: bool
    pass_normalized: bool
    pass_orbits: bool
    witness: Optional[Witness] = None
    values: Optional[list] = None   # [side][n][grid point] serialized values

    @property
    def passed(self) -> bool:
        return self.pass_normalized if self.instance.mode == "normalized" else self.pass_as_stated

    def to_json(self) -> dict:
        out = {
            "instance": self.instance.to_json(),
            "mode": self.instance.mode,
            "sides": [
                {"label": f"side-{i}", "weight": name, "weight_value": val}
                for i, (name, val) in enumerate(self.side_weights, start=1)
            ],
            "orbits": self.orbits_static,
            "orbits_by_weight_value": self.orbits_by_value,
            "pass": self.passed,
            "pass_as_stated": self.pass_as_stated,
            "pass_normalized": self.pass_normalized,
            "pass_within_orbits": self.pass_orbits,
            "witness": self.witness.to_json() if self.witness else None,
        }
        if self.values is not None:
            for side, vals in zip(out["sides"], self.values):
                side["values"] = vals
        return out


def y_grid_points(n: int, y_count: int) -> list[tuple[Fraction, ...]]:
    """The deterministic verification grid: n+2 points 0,1,..,n+1 per variable."""
    if y_count == 0:
        return [()]
    axis = [Fraction(i) for i in range(n + 2)]
    return [tuple(p) for p in product(axis, repeat=y_count)]


def _side_polys(inst: TheoremInstance, ctx: EvalContext,
                mutation: Optional[Mutation] = None) -> list[list[YPoly]]:
    """Per side, the y-polynomials for n = 0..n_max.

    Theorems whose base form is a plain product of B slots (1 and 4) are
    evaluated once; permuted sides are index permutations of that tensor.
    The equivalence with direct evaluation is covered by tests.
    """
    thm = inst.theorem_spec()
    if thm.permutes_cleanly and mutation is None:
        base_polys = expansion_polys(thm.base, inst.w, ctx, inst.n_max, check=False)
        sides = []
        for sig in thm.sigmas:
            sides.append([
                {tuple(exps[s - 1] for s in sig): v for exps, v in poly.items()}
                for poly in base_polys
            ])
        return sides
    sides = []
    for idx, sig in enumerate(thm.sigmas):
        mut = mutation if idx == 0 else None
        sides.append(expansion_polys(thm.base, perm_apply(sig, inst.w), ctx,
                                     inst.n_max, mutation=mut, check=False))
    return sides


def theorem_sides(inst: TheoremInstance, n: int | None = None,
                  y: Sequence | None = None,
                  ctx: Optional[EvalContext] = None) -> list[tuple[str, int, CyclotomicNumber]]:
    """Evaluate every displayed side exactly at one (n, y-point):
    returns (label, weight, value) per side in print order."""
    inst.validate()
    thm = inst.theorem_spec()
    ctx = ctx or EvalContext(inst.character(), inst.twist())
    n = inst.n_max if n is None else n
    if not 0 <= n <= inst.n_max:
        raise ParameterError(f"n={n} outside 0..{inst.n_max}")
    y = tuple(Fraction(v) for v in (y or ()))
    y = y + (Fraction(0),) * (max(1, thm.y_count) - len(y))
    polys = _side_polys(inst, ctx)
    out = []
    for i, (sig, mono) in enumerate(zip(thm.sigmas, thm.side_weight_monos()), start=1):
        value = eval_ypoly(polys[i - 1][n], y, ctx.m)
        out.append((f"side-{i}", mono_val(mono, inst.w), value))
    return out


def _scaled_equal(a: YPoly, b: YPoly, wa: int, wb: int) -> bool:
    """a / wa == b / wb without building scaled copies."""
    if a.keys() != b.keys():
        return False
    for k, va in a.items():
        if va.scale(wb) != b[k].scale(wa):
            return False
    return True


def verify_instance(inst: TheoremInstance, method: str = "poly",
                    include_values: bool = False,
                    ctx: Optional[EvalContext] = None,
                    mutation: Optional[Mutation] = None,
                    want_witness: bool = True) -> VerificationReport:
    """Check all side equalities of one theorem instance, in both modes.

    method 'poly' compares y-polynomial coefficients (equivalent to the
    grid by the degree bound); method 'points' evaluates every side at
    every grid point directly.  Witnesses are concrete grid points.
    """
    inst.validate()
    if method not in ("poly", "points"):
        raise ParameterError(f"unknown verification method {method!r}")
    thm = inst.theorem_spec()
    ctx = ctx or EvalContext(inst.character(), inst.twist())
    weights = [mono_val(m, inst.w) for m in thm.side_weight_monos()]
    names = [mono_name(m) for m in thm.side_weight_monos()]
    polys = _side_polys(inst, ctx, mutation)

    orbits_static = thm.orbits()
    by_value: dict[int, list[int]] = {}
    for i, wt in enumerate(weights, start=1):
        by_value.setdefault(wt, []).append(i)
    orbits_by_value = list(by_value.values())

    if method == "points":
        values = [
            [[eval_ypoly(polys[s][n], pt, ctx.m) for pt in y_grid_points(n, thm.y_count)]
             for n in range(inst.n_max + 1)]
            for s in range(thm.sides)
        ]
        def equal_pair(i, j, normalized):
            for n in range(inst.n_max + 1):
                for p in range(len(values[0][n])):
                    va, vb = values[i][n][p], values[j][n][p]
                    if normalized:
                        va, vb = va.scale(weights[j]), vb.scale(weights[i])
                    if va != vb:
                        return False
            return True
        pass_as_stated = all(equal_pair(0, s, False) for s in range(1, thm.sides))
        pass_normalized = all(equal_pair(0, s, True) for s in range(1, thm.sides))
        pass_orbits = all(
            equal_pair(orbit[0] - 1, i - 1, False)
            for orbit in orbits_static for i in orbit[1:]
        )
    else:
        def poly_equal(i, j, normalized):
            for n in range(inst.n_max + 1):
                if normalized:
                    if not _scaled_equal(polys[i][n], polys[j][n], weights[i], weights[j]):
                        return False
                elif polys[i][n] != polys[j][n]:
                    return False
            return True
        pass_as_stated = all(poly_equal(0, s, False) for s in range(1, thm.sides))
        pass_normalized = all(poly_equal(0, s, True) for s in range(1, thm.sides))
        pass_orbits = all(
            poly_equal(orbit[0] - 1, i - 1, False)
            for orbit in orbits_static for i in orbit[1:]
        )

    report = VerificationReport(
        instance=inst,
        side_weights=list(zip(names, weights)),
        orbits_static=orbits_static,
        orbits_by_value=orbits_by_value,
        pass_as_stated=pass_as_stated,
        pass_normalized=pass_normalized,
        pass_orbits=pass_orbits,
    )

    failed = not (pass_normalized if inst.mode == "normalized" else pass_as_stated)
    if failed and want_witness:
        report.witness = _find_witness(inst, ctx, polys, weights, thm)

    if include_values:
        report.values = [
            [
                [eval_ypoly(polys[s][n], pt, ctx.m).to_json()
                 for pt in y_grid_points(n, thm.y_count)]
                for n in range(inst.n_max + 1)
            ]
            for s in range(thm.sides)
        ]
    return report


def _find_witness(inst: TheoremInstance, ctx: EvalContext,
                  polys: list[list[YPoly]], weights: list[int],
                  thm: TheoremSpec) -> Optional[Witness]:
    """First (n, grid point, side pair) where the requested mode fails."""
    normalized = inst.mode == "normalized"
    for n in range(inst.n_max + 1):
        for pt in y_grid_points(n, thm.y_count):
            vals = [eval_ypoly(polys[s][n], pt, ctx.m) for s in range(thm.sides)]
            for i in range(thm.sides):
                for jdx in range(i + 1, thm.sides):
                    va, vb = vals[i], vals[jdx]
                    if normalized:
                        ok = va.scale(weights[jdx]) == vb.scale(weights[i])
                    else:
                        ok = va == vb
                    if not ok:
                        return Witness(inst.mode, n, pt, i + 1, jdx + 1, va, vb)
    return None


# ---------------------------------------------------------------------------
# redundancy equalities


def _rot(slots, k):
    return tuple(slots[k:] + slots[:k])


_THM7_BASE = FORMS["L23:2"][0]
_THM11_BASE = FORMS["L12:1"][0]

# the duplicate displays: the Thm-7 base with its two power-sum slots
# interchanged, and slot rotations of the Thm-11 base
_DUP_BS = ExpansionForm(_THM7_BASE.qt, 91,
                        (_THM7_BASE.slots[0], _THM7_BASE.slots[2], _THM7_BASE.slots[1]))
_DUP_SSS_A = ExpansionForm(_THM11_BASE.qt, 92, _rot(_THM11_BASE.slots, 1))
_DUP_SSS_B = ExpansionForm(_THM11_BASE.qt, 93,
                           (SSlot(upper=_E3, twist=_E1, t_scale=_E1),
                            SSlot(upper=_E2, twist=_E3, t_scale=_E3),
                            SSlot(upper=_E1, twist=_E2, t_scale=_E2)))
_DUP_SSS_C = ExpansionForm(_THM11_BASE.qt, 94, _rot(_DUP_SSS_B.slots, 1))


@dataclass
class RedundancyReport:
    w: tuple[int, ...]
    n_max: int
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self) -> dict:
        return {"w": list(self.w), "n_max": self.n_max,
                "checks": [{"pair": name, "equal": ok} for name, ok in self.checks],
                "pass": self.passed}


def redundancy_check(w: Sequence[int], chi: DirichletCharacter, twist: TwistSpec,
                     n_max: int, ctx: Optional[EvalContext] = None) -> RedundancyReport:
    """The duplicate-display equalities: each extra expression equals the
    corresponding theorem side exactly (index relabelings of the same sum)."""
    w = tuple(w)
    twist.require_coprime(chi.d)
    for mono in (_Q3, _P1, _P2, _P3):
        if mono_val(mono, w) % twist.r == 0:
            raise ParameterError(
                f"redundancy check requires r not dividing {mono_name(mono)}"
            )
    ctx = ctx or EvalContext(chi, twist)
    report = RedundancyReport(w, n_max)

    # three-variable B*S*S displays against the Thm-7 sides
    thm7_sigmas = THEOREMS[7].sigmas
    for idx, sig in enumerate(thm7_sigmas):
        wp = perm_apply(sig, w)
        lhs = expansion_polys(_DUP_BS, wp, ctx, n_max, check=False)
        rhs = expansion_polys(_THM7_BASE, wp, ctx, n_max, check=False)
        report.checks.append((f"dup-{idx + 37}=side-{idx + 1}", lhs == rhs))

    # pure power-sum displays against the two Thm-11 sides
    side1_w = perm_apply(THEOREMS[11].sigmas[0], w)
    side2_w = perm_apply(THEOREMS[11].sigmas[1], w)
    side1 = expansion_polys(_THM11_BASE, side1_w, ctx, n_max, check=False)
    side2 = expansion_polys(_THM11_BASE, side2_w, ctx, n_max, check=False)
    for name, form, target in (
        ("dup-40=first", _THM11_BASE, side1),
        ("dup-41=first", _DUP_SSS_A, side1),
        ("dup-42=second", _DUP_SSS_B, side2),
        ("dup-43=second", _DUP_SSS_C, side2),
    ):
        vals = expansion_polys(form, w, ctx, n_max, check=False)
        report.checks.append((name, vals == target))
    return report


# ---------------------------------------------------------------------------
# grid verification


@dataclass(frozen=True)
class GridConfig:
    theorems: tuple[int, ...] = tuple(range(1, 12))
    d_values: tuple[int, ...] = (1, 3, 4, 5)
    char_filter: str = "all"            # all | primitive-only | explicit
    char_labels: tuple[tuple[int, tuple[int, ...]], ...] = ()
    r_values: tuple[int, ...] = (3, 4, 5, 7)
    j_values: tuple[int, ...] = (1,)
    w_components: tuple[int, ...] = (1, 2, 3, 4)
    n_max: int = 6
    modes: tuple[str, ...] = ("as-stated", "normalized")

    def __post_init__(self):
        if not (self.theorems and self.d_values and self.r_values and self.j_values
                and self.w_components and self.modes):
            raise ParameterError("grid configuration lists must be nonempty")
        for t in self.theorems:
            if t not in THEOREMS:
                raise ParameterError(f"theorem id {t} out of range 1..11")
        for mode in self.modes:
            if mode not in ("as-stated", "normalized"):
                raise ParameterError(f"unknown mode {mode!r}")

    def characters(self, d: int) -> list[DirichletCharacter]:
        if self.char_filter == "explicit":
            return [DirichletCharacter(dd, lab) for dd, lab in self.char_labels if dd == d]
        chars = enumerate_characters(d)
        if self.char_filter == "primitive-only":
            chars = [c for c in chars if c.is_primitive]
        return chars


@dataclass
class GridRow:
    instance_key: tuple
    skipped: bool = False
    skip_reason: str = ""
    pass_as_stated: bool | None = None
    pass_normalized: bool | None = None
    pass_orbits: bool | None = None


@dataclass
class GridReport:
    config: GridConfig
    rows: list[GridRow]
    counts: dict[tuple[int, str], dict[str, int]]
    first_witness: dict[tuple[int, str], Witness]

    def failures(self, theorem: int, mode: str) -> int:
        return self.counts[(theorem, mode)]["fail"]

    def to_json(self) -> dict:
        return {
            "summary": [
                {
                    "theorem": t,
                    "mode": mode,
                    **counts,
                    "first_witness": (self.first_witness[(t, mode)].to_json()
                                      if (t, mode) in self.first_witness else None),
                }
                for (t, mode), counts in sorted(self.counts.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            ],
            "instances": len(self.rows),
        }


def grid_instances(config: GridConfig) -> Iterable[TheoremInstance]:
    """All grid instances in deterministic key order (skips applied later)."""
    items = []
    for theorem in sorted(set(config.theorems)):
        thm = THEOREMS[theorem]
        for d in sorted(set(config.d_values)):
            for chi in config.characters(d):
                for r in sorted(set(config.r_values)):
                    for j in sorted(set(config.j_values)):
                        for w in product(sorted(set(config.w_components)), repeat=thm.arity):
                            items.append(TheoremInstance(
                                theorem, d, chi.exponents, r, j, tuple(w), config.n_max))
    items.sort(key=lambda inst: inst.key())
    return items


def grid_verify(config: GridConfig, method: str = "poly") -> GridReport:
    """Run the whole grid; precondition-violating points are skipped, never
    counted as evidence.  Reports are assembled in instance-key order."""
    rows: list[GridRow] = []
    counts: dict[tuple[int, str], dict[str, int]] = {
        (t, mode): {"pass": 0, "fail": 0, "skipped": 0}
        for t in sorted(set(config.theorems)) for mode in config.modes
    }
    first_witness: dict[tuple[int, str], Witness] = {}
    contexts: dict[tuple, EvalContext] = {}

    for inst in grid_instances(config):
        row = GridRow(instance_key=inst.key())
        try:
            inst.validate()
        except ParameterError as exc:
            row.skipped = True
            row.skip_reason = str(exc)
            for mode in config.modes:
                counts[(inst.theorem, mode)]["skipped"] += 1
            rows.append(row)
            continue
        ckey = (inst.d, inst.char, inst.r, inst.j)
        ctx = contexts.get(ckey)
        if ctx is None:
            ctx = contexts[ckey] = EvalContext(inst.character(), inst.twist())
        report = verify_instance(inst, method=method, ctx=ctx, want_witness=False)
        row.pass_as_stated = report.pass_as_stated
        row.pass_normalized = report.pass_normalized
        row.pass_orbits = report.pass_orbits
        for mode in config.modes:
            ok = report.pass_normalized if mode == "normalized" else report.pass_as_stated
            counts[(inst.theorem, mode)]["pass" if ok else "fail"] += 1
            if not ok and (inst.theorem, mode) not in first_witness:
                witness_inst = TheoremInstance(inst.theorem, inst.d, inst.char, inst.r,
                                               inst.j, inst.w, inst.n_max, mode)
                wrep = verify_instance(witness_inst, method=method, ctx=ctx)
                if wrep.witness:
                    first_witness[(inst.theorem, mode)] = wrep.witness
        rows.append(row)
    return GridReport(config, rows, counts, first_witness)
