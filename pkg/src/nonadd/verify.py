"""Seeded theorem suite over generated and shipped scenarios.

Every check first verifies its hypotheses (via :func:`check_properties`,
:func:`variation` and direct inspection) and skips with the unmet hypothesis
named.  Scenario ``i`` of profile ``p`` under seed ``s`` is drawn from
``random.Random(f"{p}:{s}:{i}")`` and can be regenerated on its own, which is
what makes failure witnesses replayable.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .funcs import FuncSpec
from .integrals import (
    DIVERGENT,
    VALUE,
    Budget,
    birkhoff_simple,
    gould_integrate,
    replay_certificate,
    rl_integrate,
)
from .measures import (
    CardinalityClass,
    Distortion,
    Measure,
    PiecewiseLinear,
    PointMass,
    Scale,
    SqrtMap,
    Sum,
    Table,
    UnsupportedFamily,
    _variation_is_singleton_sum,
    ae_zero_set,
    atoms,
    check_properties,
    example_measure,
    is_atom,
    value_table,
    variation,
)
from .numeric import EPS, norm, vadd, vscale, vsub, zero
from .setalg import OMEGA, AnySet, Ground, UPSet, submasks

THEOREMS = (
    "T3.4-restriction",
    "P3.5-bound",
    "T3.6-null-ae",
    "T3.7-linearity",
    "C3.8-additivity",
    "C3.9-ae-equal",
    "T3.10-measure-sum",
    "T3.11-lipschitz",
    "T3.12-monotone-f",
    "T3.13-monotone-m",
    "T3.14i-abscont-finvar",
    "T3.14ib-ocont-exhaustive",
    "T3.14ii-monotone-If",
    "T4.5-rl-implies-bs",
    "P4.10-gould-eq-rl",
    "E4.12-counterexample",
    "T4.13-submeasure-equiv",
    "T4.14-atom-finite",
)

DEFAULT_PROFILES = (
    "finite:5",
    "finite:4:monotone",
    "finite:4:subadditive",
    "finite:4:atomic",
    "omega",
    "null",
    "order",
)

VERIFY_BUDGET = Budget(depth=12, chains=8, arity=8)

FINITE_FAMILIES = ("table", "monotone", "subadditive", "additive", "cardclass", "distortion", "atomic")
OMEGA_FAMILIES = ("pointmass", "distortion", "cardclass", "sum", "scale")
RATIOS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4), Fraction(1, 5))


@dataclass(frozen=True)
class Profile:
    kind: str
    n: int = 0
    family: str | None = None

    @classmethod
    def parse(cls, text: str) -> "Profile":
        parts = text.strip().split(":")
        kind = parts[0]
        if kind == "finite":
            if len(parts) < 2:
                raise ValueError("finite profiles need a size, e.g. finite:5")
            n = int(parts[1])
            if not 1 <= n <= 8:
                raise ValueError("finite profiles support 1 <= n <= 8")
            family = parts[2] if len(parts) > 2 else None
            if family is not None and family not in FINITE_FAMILIES:
                raise ValueError(f"unknown finite family {family!r}")
            return cls("finite", n, family)
        if kind == "omega":
            family = parts[1] if len(parts) > 1 else None
            if family is not None and family not in OMEGA_FAMILIES:
                raise ValueError(f"unknown omega family {family!r}")
            return cls("omega", 0, family)
        if kind in ("null", "order") and len(parts) == 1:
            return cls(kind)
        raise ValueError(f"unknown profile {text!r}")

    def __str__(self) -> str:
        out = self.kind
        if self.kind == "finite":
            out += f":{self.n}"
        if self.family:
            out += f":{self.family}"
        return out


@dataclass(frozen=True)
class Scenario:
    profile: str
    seed: int
    index: int
    m: Measure
    f: FuncSpec
    g: FuncSpec
    m2: Measure
    A: AnySet
    B: AnySet
    alpha: Fraction
    beta: Fraction

    @property
    def ground(self) -> Ground:
        return self.m.ground

    @property
    def key(self) -> dict:
        return {"profile": self.profile, "seed": self.seed, "index": self.index}


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _rat(rng: random.Random, lo: int = 0, hi: int = 12, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _monotone_closure(vals: list) -> list:
    out = list(vals)
    for S in range(1, len(out)):
        t = S
        while t:
            low = t & -t
            out[S] = max(out[S], out[S ^ low])
            t ^= low
    return out


def _subadditive_hull(vals: list) -> list:
    out = list(vals)
    for S in range(1, len(out)):
        for A in submasks(S):
            if A and A != S:
                out[S] = min(out[S], out[A] + out[S ^ A])
    return out


def _random_pl(rng: random.Random) -> PiecewiseLinear:
    k = rng.randint(0, 2)
    breaks = sorted({_rat(rng, 1, 8, 8) for _ in range(k)})
    slopes = sorted((_rat(rng, 0, 6, 3) for _ in range(len(breaks) + 1)), reverse=True)
    if slopes[0] == 0:
        slopes[0] = Fraction(1)
    return PiecewiseLinear(tuple(breaks), tuple(slopes))


def gen_finite_measure(rng: random.Random, n: int, family: str | None = None) -> Measure:
    family = family or rng.choice(FINITE_FAMILIES)
    ground = Ground.finite(n)
    size = 1 << n
    if family in ("table", "monotone", "subadditive"):
        vals = [Fraction(0)] + [_rat(rng) for _ in range(size - 1)]
        if family == "monotone":
            vals = _monotone_closure(vals)
        elif family == "subadditive":
            vals = _subadditive_hull(vals)
        return Table(ground, tuple(vals))
    if family == "additive":
        return PointMass(ground, tuple(_rat(rng) if rng.random() < 0.85 else Fraction(0) for _ in range(n)))
    if family == "cardclass":
        theta = [Fraction(0)] + [_rat(rng) for _ in range(rng.randint(1, n))]
        return CardinalityClass(ground, tuple(theta))
    if family == "distortion":
        return Distortion(_random_pl(rng), PointMass(ground, tuple(_rat(rng, 0, 4, 4) for _ in range(n))))
    if family == "atomic":
        core = [t for t in range(n) if rng.random() < 0.5] or [rng.randrange(n)]
        phi = [Fraction(0)]
        for _ in core:
            phi.append(phi[-1] + _rat(rng, 1, 6, 3))
        cmask = sum(1 << t for t in core)
        return Table(ground, tuple(phi[bin(S & cmask).count("1")] for S in range(size)))
    raise ValueError(f"unknown finite family {family!r}")


def _random_pointmass(rng: random.Random) -> PointMass:
    weights = tuple(_rat(rng, 0, 6, 6) for _ in range(rng.randint(0, 3)))
    return PointMass(OMEGA, weights, _rat(rng, 1, 6, 6), rng.choice(RATIOS))


def gen_omega_measure(rng: random.Random, family: str | None = None) -> Measure:
    family = family or rng.choice(OMEGA_FAMILIES)
    if family == "pointmass":
        return _random_pointmass(rng)
    if family == "distortion":
        g = SqrtMap() if rng.random() < 0.5 else _random_pl(rng)
        return Distortion(g, _random_pointmass(rng))
    if family == "cardclass":
        K = rng.randint(0, 3)
        if rng.random() < 0.5:
            theta = (Fraction(0),) * (K + 1)
        else:
            theta = (Fraction(0),) + tuple(_rat(rng, 0, 6, 3) for _ in range(K))
        return CardinalityClass(OMEGA, theta, _rat(rng, 0, 6, 3))
    if family == "sum":
        return Sum(_random_pointmass(rng), gen_omega_measure(rng, "distortion"))
    if family == "scale":
        return Scale(_rat(rng, 0, 6, 3), gen_omega_measure(rng, rng.choice(("pointmass", "distortion"))))
    raise ValueError(f"unknown omega family {family!r}")


def _finite_func(rng: random.Random, n: int, dim: int, lo: int = -6, hi: int = 6) -> FuncSpec:
    return FuncSpec.table([[_rat(rng, lo, hi, 4) for _ in range(dim)] for _ in range(n)])


def _omega_func(rng: random.Random, dim: int, lo: int = -6, hi: int = 6) -> FuncSpec:
    vec = lambda: [_rat(rng, lo, hi, 4) for _ in range(dim)]
    return FuncSpec.periodic([vec() for _ in range(rng.randint(0, 3))], [vec() for _ in range(rng.randint(1, 4))])


def _omega_set(rng: random.Random) -> UPSet:
    start, period = rng.randint(0, 3), rng.randint(1, 4)
    bits = [rng.random() < 0.5 for _ in range(start + period)]
    return UPSet(tuple(bits[:start]), tuple(bits[start:]))


def _sets(rng: random.Random, ground: Ground) -> tuple:
    if ground.is_finite:
        A = rng.randrange(1 << ground.n)
        rest = ((1 << ground.n) - 1) ^ A
        B = rng.randrange(1 << ground.n) & rest
        return A, B
    A = _omega_set(rng)
    return A, _omega_set(rng) - A


def _scalars(rng: random.Random) -> tuple:
    return _rat(rng, -6, 6, 4), _rat(rng, -6, 6, 4)


def _gen_null(rng: random.Random) -> tuple:
    """(m, f, g) with f - g supported on a set of m-tilde zero."""
    dim = rng.randint(1, 2)
    case = rng.randrange(3)
    if case == 0:
        m = example_measure()
        g = _omega_func(rng, dim)
        h = FuncSpec.periodic([[_rat(rng, -6, 6, 4) for _ in range(dim)] for _ in range(rng.randint(1, 5))],
                              [[0] * dim])
    elif case == 1:
        n_w = rng.randint(2, 5)
        weights = [Fraction(0) if rng.random() < 0.5 else _rat(rng, 1, 6, 6) for _ in range(n_w)]
        c = Fraction(0) if rng.random() < 0.5 else _rat(rng, 1, 6, 6)
        m = PointMass(OMEGA, tuple(weights), c, rng.choice(RATIOS))
        g = _omega_func(rng, dim)
        null = lambda t: (t < n_w and weights[t] == 0) or (t >= n_w and c == 0)
        h = FuncSpec.from_rule(OMEGA, dim, n_w, 2,
                               lambda t: [_rat(rng, -6, 6, 4) if null(t) else 0 for _ in range(dim)])
    else:
        n = rng.randint(2, 6)
        weights = [Fraction(0) if rng.random() < 0.5 else _rat(rng, 1, 6, 6) for _ in range(n)]
        m = PointMass(Ground.finite(n), tuple(weights))
        g = _finite_func(rng, n, dim)
        h = FuncSpec.table([[_rat(rng, -6, 6, 4) if weights[t] == 0 else 0 for _ in range(dim)]
                            for t in range(n)])
    return m, g + h, g


def _gen_order(rng: random.Random) -> tuple:
    """(m, m2, f, g) with d = 1, 0 <= f <= g, m monotone and m <= m2."""
    if rng.random() < 0.5:
        n = rng.randint(2, 6)
        m = gen_finite_measure(rng, n, rng.choice(("monotone", "additive", "atomic")))
        extra = gen_finite_measure(rng, n, rng.choice(("monotone", "additive")))
        f = _finite_func(rng, n, 1, 0, 6)
        h = _finite_func(rng, n, 1, 0, 6)
    else:
        m = gen_omega_measure(rng, rng.choice(("pointmass", "distortion")))
        extra = gen_omega_measure(rng, "pointmass")
        f = _omega_func(rng, 1, 0, 6)
        h = _omega_func(rng, 1, 0, 6)
    return m, Sum(m, extra), f, f + h


def gen_scenario(profile: str, seed: int, index: int) -> Scenario:
    prof = Profile.parse(profile)
    rng = random.Random(f"{prof}:{seed}:{index}")
    if prof.kind == "finite":
        n = prof.n
        m = gen_finite_measure(rng, n, prof.family)
        m2 = gen_finite_measure(rng, n)
        dim = rng.randint(1, 2)
        f, g = _finite_func(rng, n, dim), _finite_func(rng, n, dim)
    elif prof.kind == "omega":
        m = gen_omega_measure(rng, prof.family)
        m2 = gen_omega_measure(rng, rng.choice(("pointmass", "distortion")))
        dim = rng.randint(1, 2)
        f, g = _omega_func(rng, dim), _omega_func(rng, dim)
    elif prof.kind == "null":
        m, f, g = _gen_null(rng)
        m2 = m
    else:
        m, m2, f, g = _gen_order(rng)
    A, B = _sets(rng, m.ground)
    alpha, beta = _scalars(rng)
    return Scenario(str(prof), seed, index, m, f, g, m2, A, B, alpha, beta)


def gen_scenarios(profile: str, count: int, seed: int) -> list[Scenario]:
    if count < 1:
        raise ValueError("count must be at least 1")
    return [gen_scenario(profile, seed, i) for i in range(count)]


def corpus_scenarios() -> list[Scenario]:
    from .scenario import load_corpus

    out = []
    for sf in load_corpus():
        out.append(_from_file(sf))
    return out


def _from_file(sf) -> Scenario:
    ground = sf.ground
    sets = [sf.set_option("set")] if "set" in sf.options else []
    if "sets" in sf.options:
        from .setalg import parse_set

        sets = [parse_set(t, ground) for t in sf.options["sets"]]
    defaults = [ground.singleton(0), ground.singleton(1)] if ground.is_finite else \
        [UPSet((), (True, False)), UPSet((), (False, True))]
    A = sets[0] if sets else defaults[0]
    B = sets[1] if len(sets) > 1 else defaults[1]
    B = ground.difference(B, A)
    return Scenario(
        f"corpus:{sf.name}", int(sf.options.get("seed", 0)), 0, sf.measure, sf.function,
        sf.function2 or sf.function, sf.measure2 or sf.measure, A, B, Fraction(2), Fraction(-1, 2),
    )


def file_scenario(path) -> Scenario:
    from .scenario import load_scenario

    sc = _from_file(load_scenario(path))
    return replace(sc, profile=f"file:{path}")


def load_scenario_key(profile: str, seed: int, index: int) -> Scenario:
    if profile.startswith("file:"):
        return file_scenario(profile[len("file:"):])
    if profile.startswith("corpus:"):
        from .scenario import load_corpus

        name = profile[len("corpus:"):]
        for sf in load_corpus():
            if sf.name == name:
                return _from_file(sf)
        raise KeyError(f"no corpus scenario named {name!r}")
    return gen_scenario(profile, seed, index)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""


PASS = Outcome("pass")


def _skip(reason: str) -> Outcome:
    return Outcome("skip", reason)


def _fail(detail: str) -> Outcome:
    return Outcome("fail", detail)


_rl = lru_cache(maxsize=4096)(rl_integrate)


def _exact(*vals) -> bool:
    return all(isinstance(x, Fraction) for v in vals for x in v)


def _slack(rad: float, *vals) -> float:
    if _exact(*vals):
        return rad
    return rad + 8 * EPS * sum(float(norm(v)) for v in vals)


def _exceeds(x, y, rad: float, *vals) -> bool:
    """x > y beyond the rounding slack; exact operands compare exactly."""
    if x <= y:
        return False
    slack = _slack(rad, *vals)
    return not slack or x - y > slack


def _close(x, y, rad: float = 0.0) -> bool:
    return norm(vsub(x, y)) <= _slack(rad, x, y)


def _show(v) -> str:
    return "[" + ", ".join(str(x) if isinstance(x, Fraction) else repr(x) for x in v) + "]"


def _integrable(f, m, A=None):
    v = _rl(f, m, A)
    return v if v.status == VALUE else None


def _total_variation(m: Measure):
    try:
        return variation(m)
    except UnsupportedFamily:
        return None


def _var_gate(m: Measure):
    tv = _total_variation(m)
    if tv is None:
        return None, _skip("no variation rule for this measure")
    if tv.is_infinite:
        return None, _skip("variation of T is infinite")
    return tv, None


def _dominated(m: Measure, m2: Measure):
    """True/False when m <= m2 setwise is decided, None otherwise."""
    if m.ground.is_finite:
        a, _ = value_table(m)
        b, _ = value_table(m2)
        return all(x <= y for x, y in zip(a, b))
    if isinstance(m2, Sum) and m in (m2.first, m2.second):
        return True
    return None


def _probe_sets(sc: Scenario) -> list:
    g = sc.ground
    if g.is_finite:
        n = g.n
        masks = range(1 << n)
        return list(masks) if n <= 6 else [random.Random(f"probe:{sc.index}:{i}").randrange(1 << n)
                                            for i in range(64)]
    base = [sc.A, sc.B, sc.A | sc.B, ~sc.A, UPSet((), (True, False)), UPSet((), (False, True)),
            UPSet.tail_from(3), UPSet.finite([0, 1]), UPSet.empty(), UPSet.full()]
    return list(dict.fromkeys(base))


def check_t3_4(sc: Scenario) -> Outcome:
    if not _integrable(sc.f, sc.m):
        return _skip("f is not integrable on T")
    lhs = _rl(sc.f, sc.m, sc.A)
    rhs = _rl(sc.f.chi(sc.A), sc.m)
    if lhs.status != VALUE or rhs.status != VALUE:
        return _fail(f"restriction not integrable: I_f(A) {lhs.status}, f*chi_A {rhs.status}")
    if not _close(lhs.value, rhs.value, lhs.radius + rhs.radius):
        return _fail(f"I_f(A) = {_show(lhs.value)} but integral of f*chi_A = {_show(rhs.value)}")
    return PASS


def check_p3_5(sc: Scenario) -> Outcome:
    tv, skip = _var_gate(sc.m)
    if skip:
        return skip
    v = _rl(sc.f, sc.m)
    if v.status != VALUE:
        return _fail("bounded f with finite variation is not integrable")
    bound = sc.f.sup_norm() * tv.value
    if _exceeds(norm(v.value), bound, v.radius + float(sc.f.sup_norm()) * tv.radius, v.value, (bound,)):
        return _fail(f"|integral| = {norm(v.value)} exceeds {bound}")
    return PASS


def check_t3_6(sc: Scenario) -> Outcome:
    h = sc.f - sc.g
    try:
        ae = ae_zero_set(h, sc.m)
    except UnsupportedFamily:
        return _skip("m-tilde of the support is not computable")
    if not ae.holds:
        return _skip("f - g is not zero m-a.e.")
    v = _rl(h, sc.m)
    if v.status != VALUE:
        return _fail("a.e.-zero function is not integrable")
    if not _close(v.value, zero(h.dim), v.radius):
        return _fail(f"a.e.-zero function integrates to {_show(v.value)}")
    return PASS


def check_t3_7(sc: Scenario) -> Outcome:
    vf, vg = _integrable(sc.f, sc.m), _integrable(sc.g, sc.m)
    if not (vf and vg):
        return _skip("f or g is not integrable")
    a, b = sc.alpha, sc.beta
    lhs = _rl(sc.f.scale(a) + sc.g.scale(b), sc.m)
    if lhs.status != VALUE:
        return _fail("linear combination is not integrable")
    rhs = vadd(vscale(a, vf.value), vscale(b, vg.value))
    rad = lhs.radius + abs(float(a)) * vf.radius + abs(float(b)) * vg.radius
    if not _close(lhs.value, rhs, rad):
        return _fail(f"integral of af+bg = {_show(lhs.value)}, a*If+b*Ig = {_show(rhs)}")
    c = abs(a)
    scaled = _rl(sc.f, Scale(c, sc.m))
    if scaled.status != VALUE or not _close(scaled.value, vscale(c, vf.value), scaled.radius + float(c) * vf.radius):
        return _fail(f"integral against {c}*m is {_show(scaled.value or ())}, expected {_show(vscale(c, vf.value))}")
    return PASS


def check_c3_8(sc: Scenario) -> Outcome:
    if not _integrable(sc.f, sc.m):
        return _skip("f is not integrable on T")
    g = sc.ground
    A, B = sc.A, g.difference(sc.B, sc.A)
    u, a, b = _rl(sc.f, sc.m, g.union(A, B)), _rl(sc.f, sc.m, A), _rl(sc.f, sc.m, B)
    if VALUE != u.status or VALUE != a.status or VALUE != b.status:
        return _fail("indefinite integral undefined on a measurable set")
    rhs = vadd(a.value, b.value)
    if not _close(u.value, rhs, u.radius + a.radius + b.radius):
        return _fail(f"I_f(A u B) = {_show(u.value)}, I_f(A) + I_f(B) = {_show(rhs)}")
    return PASS


def check_c3_9(sc: Scenario) -> Outcome:
    try:
        ae = ae_zero_set(sc.f - sc.g, sc.m)
    except UnsupportedFamily:
        return _skip("m-tilde of the disagreement set is not computable")
    if not ae.holds:
        return _skip("f and g are not equal m-a.e.")
    vf = _integrable(sc.f, sc.m)
    if not vf:
        return _skip("f is not integrable on T")
    vg = _rl(sc.g, sc.m)
    if vg.status != VALUE:
        return _fail("g equals f a.e. but is not integrable")
    if not _close(vf.value, vg.value, vf.radius + vg.radius):
        return _fail(f"a.e.-equal functions integrate to {_show(vf.value)} and {_show(vg.value)}")
    return PASS


def check_t3_10(sc: Scenario) -> Outcome:
    v1, v2 = _integrable(sc.f, sc.m), _integrable(sc.f, sc.m2)
    if not (v1 and v2):
        return _skip("f is not integrable for both measures")
    s = _rl(sc.f, Sum(sc.m, sc.m2))
    if s.status != VALUE:
        return _fail("f is not integrable for m1 + m2")
    rhs = vadd(v1.value, v2.value)
    if not _close(s.value, rhs, s.radius + v1.radius + v2.radius):
        return _fail(f"integral for m1+m2 = {_show(s.value)}, sum of integrals = {_show(rhs)}")
    return PASS


def check_t3_11(sc: Scenario) -> Outcome:
    tv, skip = _var_gate(sc.m)
    if skip:
        return skip
    vf, vg = _integrable(sc.f, sc.m), _integrable(sc.g, sc.m)
    if not (vf and vg):
        return _fail("bounded functions with finite variation are not integrable")
    lip = (sc.f - sc.g).sup_norm()
    bound = lip * tv.value
    diff = norm(vsub(vf.value, vg.value))
    if _exceeds(diff, bound, vf.radius + vg.radius + float(lip) * tv.radius, vf.value, vg.value, (bound,)):
        return _fail(f"|If - Ig| = {diff} exceeds sup|f-g| * var = {bound}")
    return PASS


def check_t3_12(sc: Scenario) -> Outcome:
    if sc.f.dim != 1:
        return _skip("order comparison needs real-valued functions")
    if not sc.f.le(sc.g):
        return _skip("f <= g does not hold")
    vf, vg = _integrable(sc.f, sc.m), _integrable(sc.g, sc.m)
    if not (vf and vg):
        return _skip("f or g is not integrable")
    if _exceeds(vf.value[0], vg.value[0], vf.radius + vg.radius, vf.value, vg.value):
        return _fail(f"If = {_show(vf.value)} > Ig = {_show(vg.value)}")
    return PASS


def check_t3_13(sc: Scenario) -> Outcome:
    if sc.f.dim != 1 or not sc.f.is_nonnegative():
        return _skip("needs a non-negative real-valued f")
    dom = _dominated(sc.m, sc.m2)
    if dom is None:
        return _skip("m1 <= m2 is not established")
    if not dom:
        return _skip("m1 <= m2 does not hold")
    v1, v2 = _integrable(sc.f, sc.m), _integrable(sc.f, sc.m2)
    if not (v1 and v2):
        return _skip("f is not integrable for both measures")
    if _exceeds(v1.value[0], v2.value[0], v1.radius + v2.radius, v1.value, v2.value):
        return _fail(f"integral for m1 = {_show(v1.value)} exceeds integral for m2 = {_show(v2.value)}")
    return PASS


def check_t3_14i(sc: Scenario) -> Outcome:
    tv, skip = _var_gate(sc.m)
    if skip:
        return skip
    if not _integrable(sc.f, sc.m):
        return _fail("bounded f with finite variation is not integrable")
    M = sc.f.sup_norm()
    g = sc.ground
    for S in _probe_sets(sc):
        v = _rl(sc.f, sc.m, S)
        var = variation(sc.m, S)
        if v.status != VALUE:
            return _fail(f"I_f undefined on {g.literal(S)}")
        if _exceeds(norm(v.value), M * var.value, v.radius + float(M) * var.radius, v.value, (M * var.value,)):
            return _fail(f"|I_f({g.literal(S)})| = {norm(v.value)} > sup|f| * var = {M * var.value} "
                         "(dominating bound)")
    A, B = sc.A, g.difference(sc.B, sc.A)
    rest = g.complement(g.union(A, B))
    total = sum((norm(_rl(sc.f, sc.m, S).value) for S in (A, B, rest)), Fraction(0))
    if _exceeds(total, M * tv.value, 3 * _rl(sc.f, sc.m).radius + float(M) * tv.radius, (total,), (M * tv.value,)):
        return _fail(f"variation of I_f over {{A, B, rest}} is {total} > {M * tv.value}")
    return PASS


def check_t3_14ib(sc: Scenario) -> Outcome:
    tv, skip = _var_gate(sc.m)
    if skip:
        return skip
    g = sc.ground
    if not g.is_finite and not _variation_is_singleton_sum(sc.m):
        return _skip("variation is not certified o-continuous and exhaustive")
    if not _integrable(sc.f, sc.m):
        return _fail("bounded f with finite variation is not integrable")
    M = sc.f.sup_norm()
    if g.is_finite:
        # sequences decreasing to the empty set or disjoint sequences are eventually empty
        v = _rl(sc.f, sc.m, g.empty())
        return PASS if v.status == VALUE and norm(v.value) == 0 else _fail("I_f(empty) != 0")
    chain = [UPSet.tail_from(j) for j in (0, 4, 16, 64, 160)]
    chain += [UPSet.residue(0, 2 ** j) & UPSet.tail_from(j) for j in (0, 3, 6)]
    disjoint = [UPSet.residue(2 ** j - 1, 2 ** (j + 1)) for j in range(10)]
    prev = None
    for S in chain[:5]:
        var = variation(sc.m, S)
        v = _rl(sc.f, sc.m, S)
        if _exceeds(norm(v.value), M * var.value, v.radius + float(M) * var.radius, v.value, (M * var.value,)):
            return _fail(f"|I_f({S.literal()})| exceeds the dominating bound")
        if prev is not None and var.value > prev + var.radius:
            return _fail("variation increases along a decreasing chain")
        prev = var.value
    if tv.value > 0 and prev > tv.value / 1000:
        return _fail(f"variation of [160, inf) is {prev}, not small against {tv.value}")
    total = Fraction(0)
    for S in disjoint + chain[5:]:
        var = variation(sc.m, S)
        v = _rl(sc.f, sc.m, S)
        if _exceeds(norm(v.value), M * var.value, v.radius + float(M) * var.radius, v.value, (M * var.value,)):
            return _fail(f"|I_f({S.literal()})| exceeds the dominating bound")
    for S in disjoint:
        total += variation(sc.m, S).value
    if _exceeds(total, tv.value, tv.radius * len(disjoint), (total,), (tv.value,)):
        return _fail("variation over a disjoint sequence exceeds the total")
    return PASS


def check_t3_14ii(sc: Scenario) -> Outcome:
    if sc.f.dim != 1 or not sc.f.is_nonnegative():
        return _skip("needs a non-negative real-valued f")
    if not check_properties(sc.m).proved("monotone"):
        return _skip("m is not proved monotone")
    if not _integrable(sc.f, sc.m):
        return _skip("f is not integrable on T")
    g = sc.ground
    if g.is_finite:
        full = (1 << g.n) - 1
        pairs = [(S, T) for T in range(full + 1) for S in submasks(T)] if g.n <= 5 else \
            [(sc.A & T, T) for T in _probe_sets(sc)]
    else:
        A, B = sc.A, sc.B
        pairs = [(UPSet.empty(), A), (A, A | B), (A & UPSet((), (True, False)), A), (A, UPSet.full()),
                 (UPSet.tail_from(3), UPSet.tail_from(1))]
    for S, T in pairs:
        a, b = _rl(sc.f, sc.m, S), _rl(sc.f, sc.m, T)
        if _exceeds(a.value[0], b.value[0], a.radius + b.radius, a.value, b.value):
            return _fail(f"I_f({g.literal(S)}) = {_show(a.value)} > I_f({g.literal(T)}) = {_show(b.value)}")
    return PASS


def check_t4_5(sc: Scenario) -> Outcome:
    v = _integrable(sc.f, sc.m)
    if not v:
        return _skip("f is not RL integrable")
    b = birkhoff_simple(sc.f, sc.m)
    if b.status != VALUE:
        return _fail(f"RL integrable but Birkhoff simple verdict is {b.status}")
    if not _close(v.value, b.value, v.radius + b.radius):
        return _fail(f"RL = {_show(v.value)}, Birkhoff simple = {_show(b.value)}")
    return PASS


def default_budget() -> Budget:
    """Probe budget for the suite: ``NONADD_BUDGET`` when set, a light default otherwise."""
    return Budget.from_env() if os.environ.get("NONADD_BUDGET") else VERIFY_BUDGET


def _gould_matches(sc: Scenario, budget: Budget | None, tol: float) -> Outcome:
    budget = budget or default_budget()
    v = _rl(sc.f, sc.m)
    if v.status != VALUE:
        return _fail("RL verdict is not a value under the theorem's hypotheses")
    gv = gould_integrate(sc.f, sc.m, budget, seed=sc.seed, tol=tol)
    if gv.status != VALUE:
        return _fail(f"Gould verdict is {gv.status}: {gv.note}")
    if not _close(v.value, gv.value, v.radius + gv.radius + tol):
        return _fail(f"Gould = {_show(gv.value)}, RL = {_show(v.value)}")
    return PASS


def check_p4_10(sc: Scenario, budget: Budget | None = None, tol: float = 1e-9) -> Outcome:
    if not check_properties(sc.m).proved("sigma_additive"):
        return _skip("m is not proved sigma-additive")
    _, skip = _var_gate(sc.m)
    if skip:
        return skip
    return _gould_matches(sc, budget, tol)


def check_t4_13(sc: Scenario, budget: Budget | None = None, tol: float = 1e-9) -> Outcome:
    if not check_properties(sc.m).proved("submeasure", "sigma_subadditive"):
        return _skip("m is not proved a sigma-subadditive submeasure")
    _, skip = _var_gate(sc.m)
    if skip:
        return skip
    return _gould_matches(sc, budget, tol)


def check_e4_12(sc: Scenario, budget: Budget | None = None, tol: float = 1e-9) -> Outcome:
    m = sc.m
    if not (isinstance(m, CardinalityClass) and not m.ground.is_finite):
        return _skip("needs a cardinality-class measure on the naturals")
    if any(t != 0 for t in m.theta) or m.theta_inf <= 0:
        return _skip("needs m = 0 on finite sets and m > 0 on infinite sets")
    if sc.f.support().is_finite():
        return _skip("f vanishes outside a finite set")
    rl = _rl(sc.f, m)
    if rl.status != VALUE or any(x != 0 for x in rl.value):
        return _fail(f"RL verdict {rl.status} {rl.value}, expected exact 0")
    bs = birkhoff_simple(sc.f, m)
    if bs.status != VALUE or any(x != 0 for x in bs.value):
        return _fail(f"Birkhoff simple verdict {bs.status} {bs.value}, expected exact 0")
    gv = gould_integrate(sc.f, m, budget or default_budget(), seed=sc.seed, tol=tol)
    if gv.status != DIVERGENT:
        return _fail(f"Gould verdict is {gv.status}, expected divergent")
    if not replay_certificate(sc.f, m, gv):
        return _fail("divergence certificate does not replay")
    if sc.f.dim == 1 and sc.f.start == 0 and sc.f.period == 1:
        c = sc.f(0)[0]
        sigmas = [s.sigma[0] for s in gv.certificate]
        expected = [m.theta_inf * c * k for k in range(1, len(sigmas) + 1)]
        if sigmas != expected or len(sigmas) < 11:
            return _fail(f"certificate sigmas {sigmas} differ from {expected}")
    return PASS


def check_t4_14(sc: Scenario) -> Outcome:
    g = sc.ground
    if not g.is_finite:
        return _skip("atoms are only decided on finite grounds")
    if sc.f.dim != 1:
        return _skip("needs a real-valued f")
    rep = check_properties(sc.m)
    if not rep.proved("monotone", "null_additive", "property_sigma"):
        return _skip("m is not proved monotone, null-additive with property (sigma)")
    atom = sc.A if sc.A and is_atom(sc.m, sc.A) else next(iter(atoms(sc.m)), None)
    if atom is None:
        return _skip("m has no atom")
    rl = _rl(sc.f, sc.m, atom)
    if rl.status != VALUE:
        return _skip("f is not RL integrable on the atom")
    gv = gould_integrate(sc.f.chi(atom), sc.m)
    if gv.status != VALUE or not _close(gv.value, rl.value, gv.radius + rl.radius):
        return _fail(f"on atom {g.literal(atom)}: Gould {gv.status} {gv.value}, RL {_show(rl.value)}")
    return PASS


CHECKS: dict[str, Callable[[Scenario], Outcome]] = {
    "T3.4-restriction": check_t3_4,
    "P3.5-bound": check_p3_5,
    "T3.6-null-ae": check_t3_6,
    "T3.7-linearity": check_t3_7,
    "C3.8-additivity": check_c3_8,
    "C3.9-ae-equal": check_c3_9,
    "T3.10-measure-sum": check_t3_10,
    "T3.11-lipschitz": check_t3_11,
    "T3.12-monotone-f": check_t3_12,
    "T3.13-monotone-m": check_t3_13,
    "T3.14i-abscont-finvar": check_t3_14i,
    "T3.14ib-ocont-exhaustive": check_t3_14ib,
    "T3.14ii-monotone-If": check_t3_14ii,
    "T4.5-rl-implies-bs": check_t4_5,
    "P4.10-gould-eq-rl": check_p4_10,
    "E4.12-counterexample": check_e4_12,
    "T4.13-submeasure-equiv": check_t4_13,
    "T4.14-atom-finite": check_t4_14,
}

NOTES = {
    "T3.6-null-ae": "applied to f - g",
    "T3.14i-abscont-finvar": "verified via dominating bound |I_f(A)| <= sup|f| * var(A)",
    "T3.14ib-ocont-exhaustive": "necessary-condition probe along fixed decreasing and disjoint set sequences",
    "T4.14-atom-finite": "finite grounds only; both integrals reduce to the singleton sum there",
}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class TheoremReport:
    theorem: str
    scenarios: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)
    skips: list = field(default_factory=list)
    note: str = ""

    def add(self, sc: Scenario, outcome: Outcome):
        self.scenarios += 1
        if outcome.status == "pass":
            self.passes += 1
        elif outcome.status == "fail":
            self.failures.append({**sc.key, "witness": {"theorem": self.theorem, "observed": outcome.detail}})
        else:
            self.skips.append({**sc.key, "reason": outcome.detail})

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "scenarios": self.scenarios,
            "passes": self.passes,
            "failures": [{"seed": f["seed"], "profile": f["profile"], "index": f["index"],
                          "witness": f["witness"]} for f in self.failures],
            "skips": [{"reason": s["reason"], "profile": s["profile"], "seed": s["seed"], "index": s["index"]}
                      for s in self.skips],
        }
        if self.note:
            out["note"] = self.note
        return out


def run_check(theorem: str, scenarios: Iterable[Scenario]) -> TheoremReport:
    if theorem not in CHECKS:
        raise KeyError(f"unknown theorem id {theorem!r}")
    check = CHECKS[theorem]
    report = TheoremReport(theorem, note=NOTES.get(theorem, ""))
    for sc in scenarios:
        report.add(sc, check(sc))
    return report


def run_all(
    profiles: Iterable[str] = DEFAULT_PROFILES,
    seed: int = 0,
    count: int = 20,
    corpus: bool = True,
    theorems: Iterable[str] = THEOREMS,
    extra: Iterable[Scenario] = (),
) -> list[TheoremReport]:
    scenarios = [sc for p in profiles for sc in gen_scenarios(p, count, seed)]
    if corpus:
        scenarios += corpus_scenarios()
    scenarios += list(extra)
    return [run_check(t, scenarios) for t in theorems]


@dataclass(frozen=True)
class Replay:
    reproduced: bool
    observed: str
    message: str = ""


def replay(failure: dict) -> Replay:
    """Regenerate the scenario behind a failure record and rerun its check.

    ``reproduced`` is False (a flagged mismatch) when the check no longer
    fails or fails with a different observation.
    """
    witness = failure["witness"]
    theorem = witness["theorem"]
    sc = load_scenario_key(failure["profile"], failure["seed"], failure["index"])
    outcome = CHECKS[theorem](sc)
    if outcome.status != "fail":
        return Replay(False, outcome.detail, f"mismatch: check now reports {outcome.status}")
    if outcome.detail != witness["observed"]:
        return Replay(False, outcome.detail, "mismatch: failure observation differs")
    return Replay(True, outcome.detail)

