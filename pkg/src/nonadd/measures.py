"""Non-negative set functions with m(empty) = 0, their variation and properties.

Families
--------
``Table``              explicit value for every subset of a finite ground
``PointMass``          sigma-additive weights, optionally with a geometric tail
``CardinalityClass``   value depends only on |A| (capped at K) or on A being infinite
``Distortion``         g(mu(A)) for a concave monotone g and a PointMass mu
``Sum`` / ``Scale``    m1 + m2 and alpha * m

Evaluation is exact (``Fraction``) except where a square root is irrational;
those paths return floats with a rounding radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .funcs import FuncSpec
from .numeric import EPS, INF, Scalar, as_scalar, fsqrt, norm, rounding, scalar_json, zero
from .setalg import (
    OMEGA,
    AnySet,
    Ground,
    GroundMismatch,
    UPSet,
    bits,
    mask_of,
    submasks,
)


class MeasureError(ValueError):
    pass


class UnsupportedFamily(MeasureError):
    pass


class UnsupportedGround(MeasureError):
    pass


class SeriesDivergence(ArithmeticError):
    """A singleton series fails to converge absolutely.

    ``first`` is an index from which every ``period``-th term has norm at
    least ``step``; partial sums therefore grow without bound.
    """

    def __init__(self, first: int, period: int, step):
        super().__init__(f"terms n = {first} + k*{period} each contribute at least {step}")
        self.first = first
        self.period = period
        self.step = step


@dataclass(frozen=True)
class ExtValue:
    """Value in [0, +inf] with an optional rounding radius."""

    value: Scalar
    radius: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.radius > 0 and self.value == INF:
            raise ValueError("an infinite value cannot carry a radius")

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def to_json(self) -> dict:
        return {"value": scalar_json(self.value), "radius": self.radius}


# ---------------------------------------------------------------------------
# Concave distortion maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SqrtMap:
    def __call__(self, x) -> tuple[Scalar, float]:
        return fsqrt(x)

    @property
    def positive(self) -> bool:
        return True

    def linear_limit(self):
        """Largest x with g linear on [0, x] (0: nowhere)."""
        return Fraction(0)

    def literal(self):
        return "sqrt"


@dataclass(frozen=True)
class PiecewiseLinear:
    """Concave piecewise-linear map with g(0) = 0.

    Slope ``slopes[0]`` on [0, breaks[0]], ``slopes[1]`` up to ``breaks[1]``
    and so on; the last slope continues to infinity.
    """

    breaks: tuple
    slopes: tuple

    def __post_init__(self):
        breaks = tuple(as_scalar(b) for b in self.breaks)
        slopes = tuple(as_scalar(s) for s in self.slopes)
        if len(slopes) != len(breaks) + 1:
            raise ValueError("need one more slope than breakpoints")
        if any(b <= 0 for b in breaks) or any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must be positive and strictly increasing")
        if any(s < 0 for s in slopes) or any(a < b for a, b in zip(slopes, slopes[1:])):
            raise ValueError("slopes must be non-negative and non-increasing (monotone concave)")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "slopes", slopes)

    def __call__(self, x) -> tuple[Scalar, float]:
        total, prev = Fraction(0), Fraction(0)
        for b, s in zip(self.breaks, self.slopes):
            if x <= b:
                return total + s * (x - prev), 0.0
            total += s * (b - prev)
            prev = b
        return total + self.slopes[-1] * (x - prev), 0.0

    @property
    def positive(self) -> bool:
        return self.slopes[0] > 0

    def linear_limit(self):
        return self.breaks[0] if self.breaks else INF

    def literal(self):
        return {"piecewise": {"breaks": [scalar_json(b) for b in self.breaks],
                              "slopes": [scalar_json(s) for s in self.slopes]}}


ConcaveMap = SqrtMap | PiecewiseLinear


# ---------------------------------------------------------------------------
# Singleton profiles: m({n}) as "explicit head, then a sum of geometric terms"
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingletonProfile:
    """``m({n}) = head[n]`` for ``n < len(head)``, else ``sum(a * rho**n for a, rho in terms)``.

    ``rho == 1`` encodes a constant term (a non-summable series when ``a > 0``).
    """

    head: tuple = ()
    terms: tuple = ()

    def at(self, n: int) -> Scalar:
        if n < len(self.head):
            return self.head[n]
        return sum((a * rho ** n for a, rho in self.terms), Fraction(0))

    def tail_mass(self, start: int) -> Scalar:
        """``sum(m({n}) for n >= start)``; ``INF`` when it diverges."""
        total = sum((self.head[n] for n in range(start, len(self.head))), Fraction(0))
        m0 = max(start, len(self.head))
        for a, rho in self.terms:
            if a == 0:
                continue
            if rho >= 1:
                return INF
            total += a * rho ** m0 / (1 - rho)
        return total

    def scaled(self, alpha) -> "SingletonProfile":
        return SingletonProfile(tuple(alpha * h for h in self.head),
                                tuple((alpha * a, rho) for a, rho in self.terms))

    def plus(self, other: "SingletonProfile") -> "SingletonProfile":
        size = max(len(self.head), len(other.head))
        head = tuple(self.at(n) + other.at(n) for n in range(size))
        return SingletonProfile(head, self.terms + other.terms)


def profile_sum(
    profile: SingletonProfile, dim: int, start: int, period: int, value_at: Callable[[int], tuple]
) -> tuple[tuple, float]:
    """``sum(value_at(n) * m({n}) for n in N)`` in closed form.

    ``value_at`` must be periodic with ``period`` from ``start`` on.  Returns
    the sum and a first-order rounding radius (0 when exact).  Raises
    :class:`SeriesDivergence` if the series is not absolutely convergent.
    """
    acc = [Fraction(0)] * dim
    magnitude = 0.0
    max_exp = 0
    m0 = max(start, len(profile.head))
    for n in range(m0):
        v = value_at(n)
        if all(x == 0 for x in v):
            continue
        s = profile.at(n)
        if s == 0:
            continue
        for i, x in enumerate(v):
            acc[i] += x * s
        if not isinstance(s, Fraction):
            magnitude += float(norm(v) * s)
            max_exp = max(max_exp, n)
    for i in range(period):
        n0 = m0 + i
        v = value_at(n0)
        if all(x == 0 for x in v):
            continue
        for a, rho in profile.terms:
            if a == 0:
                continue
            if rho >= 1:
                raise SeriesDivergence(n0, period, norm(v) * a)
            coef = a * rho ** n0 / (1 - rho ** period)
            for j, x in enumerate(v):
                acc[j] += x * coef
            if not (isinstance(a, Fraction) and isinstance(rho, Fraction)):
                magnitude += float(norm(v) * coef)
                max_exp = max(max_exp, n0 + period)
    radius = 0.0
    if magnitude:
        radius = magnitude * EPS * (16 + 2 * max_exp)
    return tuple(acc), radius


# ---------------------------------------------------------------------------
# Measure families
# ---------------------------------------------------------------------------


class Measure:
    """Base class; subclasses are frozen dataclasses and therefore hashable."""

    ground: Ground

    def evaluate(self, A: AnySet) -> tuple[Scalar, float]:
        raise NotImplementedError

    def __call__(self, A) -> Scalar:
        return self.evaluate(self.ground.coerce(A))[0]

    def singleton(self, t: int) -> Scalar:
        return self.evaluate(self.ground.singleton(t))[0]

    def profile(self) -> SingletonProfile:
        raise UnsupportedFamily(f"{type(self).__name__} has no singleton profile")


def _nonneg(values: Iterable, what: str):
    for v in values:
        if v < 0:
            raise MeasureError(f"{what} must be non-negative, got {v}")


@dataclass(frozen=True)
class Table(Measure):
    """Explicit values on a finite ground, indexed by subset bit mask."""

    ground: Ground
    values: tuple

    def __post_init__(self):
        if not self.ground.is_finite:
            raise UnsupportedGround("a table needs a finite ground")
        vals = tuple(as_scalar(v) for v in self.values)
        if len(vals) != 1 << self.ground.n:
            raise MeasureError(f"a table on {self.ground!r} needs {1 << self.ground.n} values")
        if vals[0] != 0:
            raise MeasureError("m(empty) must be 0")
        _nonneg(vals, "table values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], Scalar]) -> "Table":
        """Tabulate ``fn(mask)`` over all subsets of ``{0..n-1}``."""
        return cls(Ground.finite(n), tuple(fn(mask) for mask in range(1 << n)))

    @classmethod
    def from_sets(cls, n: int, mapping: dict) -> "Table":
        vals = [None] * (1 << n)
        for key, v in mapping.items():
            vals[key if isinstance(key, int) else mask_of(key)] = v
        vals[0] = 0 if vals[0] is None else vals[0]
        missing = [bits(i) for i, v in enumerate(vals) if v is None]
        if missing:
            raise MeasureError(f"table is missing values for {missing[:4]}...")
        return cls(Ground.finite(n), tuple(vals))

    def evaluate(self, A):
        v = self.values[self.ground.check(A)]
        return v, rounding(v)


@dataclass(frozen=True)
class PointMass(Measure):
    """``m(A) = sum of w_n over A``: explicit weights, then ``c * r**n`` from ``len(weights)`` on."""

    ground: Ground
    weights: tuple
    c: Scalar = Fraction(0)
    r: Scalar = Fraction(0)

    def __post_init__(self):
        w = tuple(as_scalar(x) for x in self.weights)
        c, r = as_scalar(self.c), as_scalar(self.r)
        _nonneg(w, "weights")
        if self.ground.is_finite:
            if len(w) != self.ground.n:
                raise MeasureError(f"need {self.ground.n} weights on {self.ground!r}")
            if c != 0:
                raise MeasureError("a finite ground has no geometric tail")
        if c < 0 or not 0 <= r < 1:
            raise MeasureError("tail needs c >= 0 and 0 <= r < 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "r", r)

    @classmethod
    def finite(cls, weights: Sequence) -> "PointMass":
        return cls(Ground.finite(len(weights)), tuple(weights))

    @classmethod
    def geometric(cls, c, r, weights: Sequence = ()) -> "PointMass":
        return cls(OMEGA, tuple(weights), as_scalar(c), as_scalar(r))

    def weight(self, n: int) -> Scalar:
        if n < len(self.weights):
            return self.weights[n]
        return self.c * self.r ** n

    def evaluate(self, A):
        A = self.ground.check(A)
        if self.ground.is_finite:
            return sum((self.weights[t] for t in bits(A)), Fraction(0)), 0.0
        m0 = max(len(self.weights), A.prefix_len)
        q = A.period
        win = A._window(m0 + q)
        total = sum((self.weight(n) for n in range(m0) if win[n]), Fraction(0))
        hits = [i for i in range(q) if win[m0 + i]]
        if self.c != 0 and hits:
            r = self.r
            if isinstance(r, Fraction):
                # sum of r^i over hit residues, as one integer polynomial
                a, b = r.numerator, r.denominator
                poly = sum(a ** i * b ** (q - 1 - i) for i in hits)
                geo = Fraction(poly, b ** (q - 1))
            else:
                geo = sum(r ** i for i in hits)
            total += self.c * r ** m0 * geo / (1 - r ** q)
        return total, 0.0

    def profile(self) -> SingletonProfile:
        terms = ((self.c, self.r),) if self.c != 0 else ()
        return SingletonProfile(self.weights, terms)


@dataclass(frozen=True)
class CardinalityClass(Measure):
    """``m(A) = theta[min(|A|, K)]`` for finite A and ``theta_inf`` for infinite A."""

    ground: Ground
    theta: tuple
    theta_inf: Scalar = Fraction(0)

    def __post_init__(self):
        theta = tuple(as_scalar(t) for t in self.theta) or (Fraction(0),)
        tinf = as_scalar(self.theta_inf)
        if theta[0] != 0:
            raise MeasureError("theta(0) must be 0")
        _nonneg(theta + (tinf,), "theta values")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "theta_inf", tinf if not self.ground.is_finite else Fraction(0))

    @property
    def K(self) -> int:
        return len(self.theta) - 1

    def th(self, k) -> Scalar:
        """theta at a cardinality (``math.inf`` for infinite)."""
        if k == INF:
            return self.theta_inf
        return self.theta[min(k, self.K)]

    def evaluate(self, A):
        return self.th(self.ground.cardinality(self.ground.check(A))), 0.0

    def profile(self) -> SingletonProfile:
        t1 = self.th(1)
        return SingletonProfile((), ((t1, Fraction(1)),) if t1 != 0 else ())


@dataclass(frozen=True)
class Distortion(Measure):
    """``m(A) = g(mu(A))`` with ``g`` concave, monotone, ``g(0) = 0``."""

    g: ConcaveMap
    base: PointMass

    @property
    def ground(self) -> Ground:
        return self.base.ground

    def evaluate(self, A):
        mu, _ = self.base.evaluate(A)
        return self.g(mu)

    def profile(self) -> SingletonProfile:
        b = self.base
        if isinstance(self.g, SqrtMap):
            head = tuple(self.g(w)[0] for w in b.weights)
            if b.c == 0:
                return SingletonProfile(head)
            return SingletonProfile(head, ((self.g(b.c)[0], self.g(b.r)[0]),))
        # piecewise linear: exact once c*r**n drops below the first breakpoint
        limit = self.g.linear_limit()
        m0 = len(b.weights)
        if b.c != 0:
            while b.c * b.r ** m0 > limit:
                m0 += 1
        head = tuple(self.g(b.weight(n))[0] for n in range(m0))
        if b.c == 0:
            return SingletonProfile(head)
        return SingletonProfile(head, ((self.g.slopes[0] * b.c, b.r),))


@dataclass(frozen=True)
class Sum(Measure):
    first: Measure
    second: Measure

    def __post_init__(self):
        if self.first.ground != self.second.ground:
            raise GroundMismatch("summands live on different grounds")

    @property
    def ground(self) -> Ground:
        return self.first.ground

    def evaluate(self, A):
        a, ra = self.first.evaluate(A)
        b, rb = self.second.evaluate(A)
        v = a + b
        return v, ra + rb + rounding(v)

    def profile(self) -> SingletonProfile:
        return self.first.profile().plus(self.second.profile())


@dataclass(frozen=True)
class Scale(Measure):
    alpha: Scalar
    inner: Measure

    def __post_init__(self):
        alpha = as_scalar(self.alpha)
        if alpha < 0:
            raise MeasureError("scale factor must be non-negative")
        object.__setattr__(self, "alpha", alpha)

    @property
    def ground(self) -> Ground:
        return self.inner.ground

    def evaluate(self, A):
        v, r = self.inner.evaluate(A)
        out = self.alpha * v
        return out, self.alpha * r + rounding(out)

    def profile(self) -> SingletonProfile:
        return self.inner.profile().scaled(self.alpha)


def example_measure() -> CardinalityClass:
    """0 on finite subsets of the naturals, 1 on infinite ones."""
    return CardinalityClass(OMEGA, (Fraction(0),), Fraction(1))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_measure(m: Measure, A) -> ExtValue:
    v, r = m.evaluate(m.ground.coerce(A))
    return ExtValue(v, r)


@lru_cache(maxsize=512)
def value_table(m: Measure) -> tuple[tuple, tuple]:
    """(values, radii) for every subset mask of a finite ground."""
    if not m.ground.is_finite:
        raise UnsupportedGround("value tables need a finite ground")
    pairs = [m.evaluate(mask) for mask in range(1 << m.ground.n)]
    return tuple(v for v, _ in pairs), tuple(r for _, r in pairs)


def singleton_weights(m: Measure) -> tuple:
    """``m({t})`` for every t of a finite ground."""
    vals, _ = value_table(m)
    return tuple(vals[1 << t] for t in range(m.ground.n))


# ---------------------------------------------------------------------------
# Variation
# ---------------------------------------------------------------------------


def _dp_variation(vals: Sequence, radii: Sequence, E: int) -> tuple[Scalar, float]:
    best: dict[int, Scalar] = {0: Fraction(0)}
    rad: dict[int, float] = {0: 0.0}
    for S in sorted(submasks(E)):
        if S == 0:
            continue
        v, r = vals[S], radii[S]
        low = S & -S
        rest = S ^ low
        sub = rest
        while sub:
            # proper split with the lowest element of S kept in the first part
            a = low | (rest ^ sub)
            b = sub
            cand = best[a] + best[b]
            if cand > v:
                v, r = cand, rad[a] + rad[b]
            sub = (sub - 1) & rest
        best[S], rad[S] = v, r
    return best[E], rad[E]


def _cardclass_finite_variation(m: CardinalityClass, size: int) -> Scalar:
    v = [Fraction(0)] * (size + 1)
    for s in range(1, size + 1):
        v[s] = max([m.th(s)] + [v[j] + v[s - j] for j in range(1, s // 2 + 1)])
    return v[size]


def _variation_is_singleton_sum(m: Measure) -> bool:
    """Whether m is known sigma-subadditive, so that its variation is sum of m({n})."""
    if isinstance(m, (PointMass, Distortion)):
        return True
    if isinstance(m, Scale):
        return _variation_is_singleton_sum(m.inner)
    if isinstance(m, Sum):
        return _variation_is_singleton_sum(m.first) and _variation_is_singleton_sum(m.second)
    if isinstance(m, CardinalityClass):
        return _cardclass_verdicts(m)["sigma_subadditive"].status == PROVED
    return False


def variation(m: Measure, E=None) -> ExtValue:
    """Variation: sup of sum m(A_i) over finite disjoint families inside E.

    Finite grounds use an exact dynamic program over subset masks.  On the
    naturals the value is derived from the family: additive and
    sigma-subadditive families sum their singleton values in closed form,
    cardinality classes use a counting argument.
    """
    ground = m.ground
    E = ground.full() if E is None else ground.coerce(E)
    if ground.is_finite:
        vals, radii = value_table(m)
        return ExtValue(*_dp_variation(vals, radii, E))
    if isinstance(m, PointMass):
        return eval_measure(m, E)
    if isinstance(m, CardinalityClass):
        if E.is_finite():
            return ExtValue(_cardclass_finite_variation(m, E.cardinality()))
        if m.theta_inf > 0 or any(t > 0 for t in m.theta[1:]):
            return ExtValue(INF)
        return ExtValue(Fraction(0))
    if isinstance(m, Scale):
        inner = variation(m.inner, E)
        if m.alpha == 0:
            return ExtValue(Fraction(0))
        if inner.is_infinite:
            return inner
        v = m.alpha * inner.value
        return ExtValue(v, m.alpha * inner.radius + rounding(v))
    if _variation_is_singleton_sum(m):
        try:
            (v,), r = profile_sum(m.profile(), 1, E.prefix_len, E.period,
                                  lambda n: (Fraction(1),) if n in E else (Fraction(0),))
        except SeriesDivergence:
            return ExtValue(INF)
        return ExtValue(v, r)
    if isinstance(m, Sum):
        v1, v2 = variation(m.first, E), variation(m.second, E)
        if v1.is_infinite or v2.is_infinite:
            return ExtValue(INF)
        # a summand with zero variation on E vanishes on every subset of E
        if v1.value == 0:
            return v2
        if v2.value == 0:
            return v1
    raise UnsupportedFamily(f"no variation rule for {type(m).__name__} here")


def mtilde(m: Measure, A=None) -> ExtValue:
    """inf of the variation over measurable supersets; every set is measurable, so A itself is optimal."""
    return variation(m, A)


def is_atom(m: Measure, A) -> bool:
    """m(A) > 0 and every B inside A has m(B) = 0 or m(A - B) = 0.

    This is the usual definition from null-additive set function theory.
    """
    if not m.ground.is_finite:
        raise UnsupportedGround("atoms are only decided on finite grounds")
    A = m.ground.coerce(A)
    vals, _ = value_table(m)
    if vals[A] <= 0:
        return False
    return all(vals[B] == 0 or vals[A ^ B] == 0 for B in submasks(A))


def atoms(m: Measure) -> list[int]:
    if not m.ground.is_finite:
        raise UnsupportedGround("atoms are only decided on finite grounds")
    return [A for A in range(1, 1 << m.ground.n) if is_atom(m, A)]


@dataclass(frozen=True)
class AeResult:
    holds: bool
    support: AnySet
    mtilde: ExtValue


def ae_zero_set(f: FuncSpec, m: Measure) -> AeResult:
    """Whether f = 0 m-a.e., i.e. the support of f has mtilde = 0."""
    if f.ground != m.ground:
        raise GroundMismatch("function and measure live on different grounds")
    support = f.support()
    mt = mtilde(m, support)
    return AeResult(mt.value == 0, support, mt)


# ---------------------------------------------------------------------------
# Property lattice
# ---------------------------------------------------------------------------

PROPERTIES = (
    "monotone",
    "subadditive",
    "sigma_subadditive",
    "null_additive",
    "finitely_additive",
    "sigma_additive",
    "exhaustive",
    "o_continuous",
    "property_sigma",
    "submeasure",
)

PROVED, REFUTED, PROBED = "proved", "refuted", "probed"


@dataclass(frozen=True)
class Witness:
    """Sets realizing a violation.

    ``kind`` is one of ``subset_pair`` (A, B with A inside B), ``disjoint_pair``,
    ``null_pair`` (B null, union differs from A), ``null_union`` (A, B null,
    union not null) or ``sequence`` (union first, then the first terms of a
    countable family described by ``note``).
    """

    kind: str
    sets: tuple
    note: str = ""

    def to_json(self, ground: Ground) -> dict:
        return {"kind": self.kind, "sets": [ground.literal(s) for s in self.sets], "note": self.note}


@dataclass(frozen=True)
class PropertyVerdict:
    status: str
    witness: Witness | None = None
    probes: int = 0
    reason: str = ""

    def to_json(self, ground: Ground) -> dict:
        out = {"status": self.status, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness.to_json(ground)
        if self.status == PROBED:
            out["probes"] = self.probes
        return out


@dataclass(frozen=True)
class PropertyReport:
    ground: Ground
    verdicts: dict = field(hash=False)

    def __getitem__(self, name: str) -> PropertyVerdict:
        return self.verdicts[name]

    def proved(self, *names: str) -> bool:
        return all(self.verdicts[n].status == PROVED for n in names)

    def to_json(self) -> dict:
        return {name: self.verdicts[name].to_json(self.ground) for name in PROPERTIES}


def _proved(reason: str) -> PropertyVerdict:
    return PropertyVerdict(PROVED, reason=reason)


def _refuted(kind: str, sets: Sequence, note: str = "") -> PropertyVerdict:
    return PropertyVerdict(REFUTED, Witness(kind, tuple(sets), note))


def _gt(a, b, slack) -> bool:
    # exact operands must not be rounded through a float slack
    return a > b and (not slack or a - b > slack)


def _finite_verdicts(m: Measure) -> dict:
    n = m.ground.n
    vals, radii = value_table(m)
    full = (1 << n) - 1
    out = {}

    def search_pairs(test):
        for S in range(1 << n):
            for A in submasks(S):
                hit = test(S, A)
                if hit:
                    return hit
        return None

    hit = search_pairs(lambda B, A: (A, B) if _gt(vals[A], vals[B], radii[A] + radii[B]) else None)
    out["monotone"] = _refuted("subset_pair", hit) if hit else _proved("exhaustive check over nested pairs")

    hit = search_pairs(
        lambda S, A: (A, S ^ A) if _gt(vals[S], vals[A] + vals[S ^ A], radii[S] + radii[A] + radii[S ^ A]) else None
    )
    out["subadditive"] = _refuted("disjoint_pair", hit) if hit else _proved("exhaustive check over disjoint pairs")
    out["sigma_subadditive"] = (
        _refuted("disjoint_pair", out["subadditive"].witness.sets,
                 "countable family with finitely many nonempty terms")
        if hit else _proved("finite ground: countable families have finitely many nonempty terms")
    )

    hit = search_pairs(
        lambda S, A: (A, S ^ A)
        if abs(vals[S] - vals[A] - vals[S ^ A]) > radii[S] + radii[A] + radii[S ^ A] else None
    )
    out["finitely_additive"] = _refuted("disjoint_pair", hit) if hit else _proved("exhaustive check over disjoint pairs")
    out["sigma_additive"] = (
        _refuted("disjoint_pair", hit, "countable family with finitely many nonempty terms")
        if hit else _proved("finite ground: reduces to finite additivity")
    )

    nulls = [B for B in range(1 << n) if vals[B] == 0]
    hit = None
    for B in nulls:
        for A in range(1 << n):
            if abs(vals[A | B] - vals[A]) > radii[A | B] + radii[A]:
                hit = (A, B)
                break
        if hit:
            break
    out["null_additive"] = _refuted("null_pair", hit) if hit else _proved("exhaustive check over null sets")

    hit = None
    for i, A in enumerate(nulls):
        for B in nulls[i:]:
            if vals[A | B] != 0:
                hit = (A, B)
                break
        if hit:
            break
    out["property_sigma"] = _refuted("null_union", hit) if hit else _proved("null sets closed under unions")

    out["exhaustive"] = _proved("finite ground: disjoint sequences are eventually empty")
    out["o_continuous"] = _proved("finite ground: decreasing sequences with empty meet are eventually empty")
    del full
    return out


def _submeasure(out: dict) -> PropertyVerdict:
    mono, sub = out["monotone"], out["subadditive"]
    if mono.status == PROVED and sub.status == PROVED:
        return _proved("monotone and subadditive")
    for v in (mono, sub):
        if v.status == REFUTED:
            return PropertyVerdict(REFUTED, v.witness, reason=f"inherits {v.witness.kind} witness")
    return PropertyVerdict(PROBED, probes=max(mono.probes, sub.probes), reason="components only probed")


def _first(n: int) -> UPSet:
    return UPSet.finite(range(n))


def _block(start: int, size: int) -> UPSet:
    return UPSet.finite(range(start, start + size))


def _sizes(m: CardinalityClass) -> list:
    return list(range(m.K + 2)) + [INF]


def _set_of_size(k, start: int = 0) -> UPSet:
    return UPSet.tail_from(start) if k == INF else _block(start, k)


@lru_cache(maxsize=256)
def _cardclass_verdicts(m: CardinalityClass) -> dict:
    """Exact decisions on the naturals; only sizes 0..K+1 and infinity matter."""
    th = m.th
    sizes = _sizes(m)
    finite_sizes = sizes[:-1]
    out = {}

    def union_sizes(a, b):
        if a == INF or b == INF:
            return [INF]
        return range(max(a, b), a + b + 1)

    hit = None
    for i in finite_sizes:
        for j in sizes:
            if j != INF and j <= i:
                continue
            if th(i) > th(j):
                hit = (_first(i), _set_of_size(j))
                break
        if hit:
            break
    out["monotone"] = _refuted("subset_pair", hit) if hit else _proved("theta is non-decreasing")

    hit = None
    for a in finite_sizes:
        for b in finite_sizes:
            if th(a + b) > th(a) + th(b):
                hit = (_first(a), _block(a, b))
                break
        if hit:
            break
    out["subadditive"] = _refuted("disjoint_pair", hit) if hit else _proved("theta subadditive over sizes")

    zero_k = next((k for k in range(1, m.K + 2) if th(k) == 0), None)
    if out["subadditive"].status == REFUTED:
        out["sigma_subadditive"] = PropertyVerdict(REFUTED, out["subadditive"].witness)
    elif m.theta_inf > 0 and zero_k is not None:
        out["sigma_subadditive"] = _refuted(
            "sequence", (UPSet.full(),) + tuple(_block(j * zero_k, zero_k) for j in range(4)),
            f"N is the disjoint union of blocks of size {zero_k}, each of measure 0",
        )
    else:
        out["sigma_subadditive"] = _proved("subadditive, and every countable cover of an infinite set "
                                           "by finite sets has infinite sum or theta_inf = 0")

    hit = None
    for a in finite_sizes:
        for b in finite_sizes:
            if th(a + b) != th(a) + th(b):
                hit = (_first(a), _block(a, b))
                break
        if hit:
            break
    if hit is None:
        for b in finite_sizes:
            if th(b) != 0:
                hit = (UPSet.tail_from(b), _first(b))
                break
    if hit is None and m.theta_inf != 0:
        hit = (UPSet((), (True, False)), UPSet((), (False, True)))
    out["finitely_additive"] = _refuted("disjoint_pair", hit) if hit else _proved("theta identically 0")
    out["sigma_additive"] = (
        PropertyVerdict(REFUTED, out["finitely_additive"].witness) if hit
        else _proved("theta identically 0")
    )

    hit = None
    for b in sizes:
        if th(b) != 0:
            continue
        for a in sizes:
            for c in union_sizes(a, b):
                if th(c) != th(a):
                    if a == INF or b == INF:
                        A, B = _set_of_size(a), (_set_of_size(b, a) if a != INF else _set_of_size(b))
                        if a == INF:
                            A, B = UPSet.tail_from(b if b != INF else 0), _first(b) if b != INF else UPSet.full()
                    else:
                        overlap = a + b - c
                        A, B = _first(a), _block(a - overlap, b)
                    hit = (A, B)
                    break
            if hit:
                break
        if hit:
            break
    out["null_additive"] = _refuted("null_pair", hit) if hit else _proved("decided over all size combinations")

    hit = None
    nulls = [k for k in finite_sizes if th(k) == 0]
    for a in nulls:
        for b in nulls:
            for c in union_sizes(a, b):
                if th(c) != 0:
                    overlap = a + b - c
                    hit = (_first(a), _block(a - overlap, b))
                    break
            if hit:
                break
        if hit:
            break
    if hit:
        out["property_sigma"] = _refuted("null_union", hit)
    elif m.theta_inf > 0 and zero_k is not None:
        out["property_sigma"] = _refuted(
            "sequence", (UPSet.full(),) + tuple(_block(j * zero_k, zero_k) for j in range(4)),
            f"blocks of size {zero_k} are null but their union N is not",
        )
    else:
        out["property_sigma"] = _proved("decided over all size combinations")

    pos_k = next((k for k in range(1, m.K + 2) if th(k) > 0), None)
    if pos_k is not None:
        out["exhaustive"] = _refuted(
            "sequence", (UPSet.full(),) + tuple(_block(j * pos_k, pos_k) for j in range(4)),
            f"disjoint blocks of size {pos_k} all have measure {th(pos_k)}",
        )
    elif m.theta_inf > 0:
        out["exhaustive"] = _refuted(
            "sequence",
            (UPSet.full(),) + tuple(UPSet.residue(2 ** j - 1, 2 ** (j + 1)) for j in range(4)),
            "A_j = {n : n+1 has 2-adic valuation j}: disjoint, infinite",
        )
    else:
        out["exhaustive"] = _proved("theta identically 0")

    if m.theta_inf > 0:
        out["o_continuous"] = _refuted(
            "sequence", (UPSet.empty(),) + tuple(UPSet.tail_from(j) for j in range(4)),
            "tails [j, inf) decrease to the empty set, each infinite",
        )
    else:
        out["o_continuous"] = _proved("decreasing sequences with empty meet are eventually finite")

    out["submeasure"] = _submeasure(out)
    return out


_PROBE_SETS = (
    UPSet.empty(),
    UPSet.full(),
    UPSet((), (True, False)),
    UPSet((), (False, True)),
    UPSet.residue(0, 3),
    UPSet.residue(1, 3),
    UPSet.residue(2, 4),
    UPSet.finite([0]),
    UPSet.finite([1]),
    UPSet.finite([2]),
    UPSet.finite([0, 1]),
    UPSet.finite([0, 1, 2, 3]),
    UPSet.tail_from(1),
    UPSet.tail_from(3),
    UPSet.finite([0]) | UPSet.residue(1, 2),
)


def _probe_pairs(m: Measure, names: Iterable[str], known: dict) -> dict:
    """Pair-based falsification over a fixed probe family of ultimately periodic sets."""
    vals = {s: m.evaluate(s) for s in _PROBE_SETS}
    out = {}
    probes = len(_PROBE_SETS) ** 2
    for name in names:
        hit = None
        for A in _PROBE_SETS:
            for B in _PROBE_SETS:
                (a, ra), (b, rb) = vals[A], vals[B]
                u, ru = m.evaluate(A | B)
                slack = ra + rb + ru
                disjoint = A.isdisjoint(B)
                if name == "monotone" and A.issubset(B) and _gt(a, b, slack):
                    hit = ("subset_pair", (A, B))
                elif name in ("subadditive", "sigma_subadditive") and disjoint and _gt(u, a + b, slack):
                    hit = ("disjoint_pair", (A, B))
                elif name in ("finitely_additive", "sigma_additive") and disjoint and abs(u - a - b) > slack:
                    hit = ("disjoint_pair", (A, B))
                elif name == "null_additive" and b == 0 and abs(u - a) > slack:
                    hit = ("null_pair", (A, B))
                elif name == "property_sigma" and a == 0 and b == 0 and u != 0:
                    hit = ("null_union", (A, B))
                if hit:
                    break
            if hit:
                break
        if hit:
            out[name] = _refuted(hit[0], hit[1], "found by probing")
        else:
            out[name] = PropertyVerdict(PROBED, probes=probes, reason=known.get(name, "no counterexample among probes"))
    return out


def _omega_verdicts(m: Measure) -> dict:
    if isinstance(m, PointMass):
        return {p: _proved("sigma-additive point masses") for p in PROPERTIES}
    if isinstance(m, CardinalityClass):
        return dict(_cardclass_verdicts(m))
    if isinstance(m, Scale):
        if m.alpha == 0:
            return {p: _proved("zero measure") for p in PROPERTIES}
        return dict(_omega_verdicts(m.inner))
    if isinstance(m, Distortion):
        g = m.g
        if isinstance(g, PiecewiseLinear) and not g.positive:
            return {p: _proved("zero measure (g vanishes)") for p in PROPERTIES}
        out = {
            "monotone": _proved("g monotone and mu additive"),
            "subadditive": _proved("concave g with g(0) = 0 is subadditive"),
            "sigma_subadditive": _proved("g continuous and subadditive, mu sigma-additive"),
            "exhaustive": _proved("mu(A_n) -> 0 and g continuous at 0"),
            "o_continuous": _proved("mu(A_n) -> 0 and g continuous at 0"),
            "null_additive": _proved("g(x) > 0 for x > 0, so null sets are mu-null"),
            "property_sigma": _proved("null sets are mu-null"),
        }
        total = m.base.evaluate(UPSet.full())[0]
        if total <= g.linear_limit():
            out["finitely_additive"] = _proved("g is linear on [0, mu(N)]")
            out["sigma_additive"] = _proved("g is linear on [0, mu(N)]")
        else:
            out.update(_probe_pairs(m, ("finitely_additive", "sigma_additive"), {}))
        out["submeasure"] = _submeasure(out)
        return out
    if isinstance(m, Sum):
        a, b = _omega_verdicts(m.first), _omega_verdicts(m.second)
        out, unknown = {}, []
        for p in PROPERTIES:
            if p == "submeasure":
                continue
            if a[p].status == PROVED and b[p].status == PROVED:
                out[p] = _proved("preserved by sums")
            else:
                unknown.append(p)
        out.update(_probe_pairs(m, unknown, {}))
        for p in ("exhaustive", "o_continuous"):
            if out[p].status == PROBED:
                out[p] = PropertyVerdict(PROBED, probes=out[p].probes,
                                         reason="limit property; pair probes cannot refute it")
        out["submeasure"] = _submeasure(out)
        return out
    raise UnsupportedFamily(f"no property rules for {type(m).__name__}")


@lru_cache(maxsize=512)
def check_properties(m: Measure) -> PropertyReport:
    """Verdict per property: proved, refuted with a witness, or probed without counterexample."""
    if m.ground.is_finite:
        out = _finite_verdicts(m)
        out["submeasure"] = _submeasure(out)
    else:
        out = _omega_verdicts(m)
    return PropertyReport(m.ground, {p: out[p] for p in PROPERTIES})


def recheck_witness(m: Measure, prop: str, witness: Witness) -> bool:
    """Re-evaluate a refutation witness under ``eval_measure``."""
    g = m.ground
    ev = lambda s: m.evaluate(s)
    kind, sets = witness.kind, witness.sets
    if kind == "subset_pair":
        A, B = sets
        (a, ra), (b, rb) = ev(A), ev(B)
        return g.is_subset(A, B) and _gt(a, b, ra + rb)
    if kind == "disjoint_pair":
        A, B = sets
        (a, ra), (b, rb), (u, ru) = ev(A), ev(B), ev(g.union(A, B))
        if not g.is_empty(g.intersect(A, B)):
            return False
        if prop in ("subadditive", "sigma_subadditive", "submeasure"):
            return _gt(u, a + b, ra + rb + ru)
        return abs(u - a - b) > ra + rb + ru
    if kind == "null_pair":
        A, B = sets
        (a, ra), (b, _), (u, ru) = ev(A), ev(B), ev(g.union(A, B))
        return b == 0 and abs(u - a) > ra + ru
    if kind == "null_union":
        A, B = sets
        return ev(A)[0] == 0 and ev(B)[0] == 0 and ev(g.union(A, B))[0] != 0
    if kind == "sequence":
        first, terms = sets[0], sets[1:]
        vals = [ev(t)[0] for t in terms]
        if prop == "o_continuous":
            nested = all(g.is_subset(b, a) for a, b in zip(terms, terms[1:]))
            return nested and all(v > 0 for v in vals) and len(set(vals)) == 1
        disjoint = all(g.is_empty(g.intersect(a, b)) for i, a in enumerate(terms) for b in terms[i + 1:])
        if not disjoint:
            return False
        if prop == "exhaustive":
            return all(v > 0 for v in vals) and len(set(vals)) == 1
        # sigma_subadditive / property_sigma: null terms covering a non-null set
        return all(v == 0 for v in vals) and ev(first)[0] > 0
    raise ValueError(f"unknown witness kind {kind!r}")
