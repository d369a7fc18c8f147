"""Bounded functions into R^d on a finite ground or eventually periodic on the naturals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .numeric import Vector, as_vector, norm, vadd, vscale, vsub, zero
from .setalg import (
    OMEGA,
    AnySet,
    Ground,
    GroundMismatch,
    Partition,
    UPSet,
    aligned_window,
    eventual_at,
    mask_of,
    normalize_eventual,
)


@dataclass(frozen=True)
class FuncSpec:
    """f: T -> R^dim.

    On a finite ground ``prefix`` is the full table and ``cycle`` is empty.
    On the naturals ``f(n) = prefix[n]`` for ``n < len(prefix)`` and
    ``cycle[(n - len(prefix)) % len(cycle)]`` afterwards; the pair is
    normalized like a :class:`~nonadd.setalg.UPSet`.
    """

    ground: Ground
    dim: int
    prefix: tuple
    cycle: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        values = [tuple(v) for v in self.prefix] + [tuple(v) for v in self.cycle]
        if any(len(v) != self.dim for v in values):
            raise ValueError(f"every value must have {self.dim} components")
        if self.ground.is_finite:
            if len(self.prefix) != self.ground.n or self.cycle:
                raise ValueError("a finite-ground function needs exactly one value per element")
            object.__setattr__(self, "prefix", tuple(tuple(v) for v in self.prefix))
        else:
            if not self.cycle:
                raise ValueError("an eventually periodic function needs a nonempty cycle")
            prefix, cycle = normalize_eventual(
                tuple(tuple(v) for v in self.prefix), tuple(tuple(v) for v in self.cycle)
            )
            object.__setattr__(self, "prefix", prefix)
            object.__setattr__(self, "cycle", cycle)

    # construction -----------------------------------------------------------

    @classmethod
    def table(cls, values: Sequence) -> "FuncSpec":
        vecs = [as_vector(v) for v in values]
        return cls(Ground.finite(len(vecs)), len(vecs[0]), tuple(vecs))

    @classmethod
    def periodic(cls, prefix: Sequence, cycle: Sequence) -> "FuncSpec":
        pre = [as_vector(v) for v in prefix]
        cyc = [as_vector(v) for v in cycle]
        return cls(OMEGA, len(cyc[0]), tuple(pre), tuple(cyc))

    @classmethod
    def constant(cls, ground: Ground, value) -> "FuncSpec":
        v = as_vector(value)
        if ground.is_finite:
            return cls(ground, len(v), (v,) * ground.n)
        return cls(ground, len(v), (), (v,))

    @classmethod
    def zero(cls, ground: Ground, dim: int = 1) -> "FuncSpec":
        return cls.constant(ground, list(zero(dim)))

    @classmethod
    def indicator(cls, ground: Ground, A: AnySet, value=1) -> "FuncSpec":
        return cls.constant(ground, value).chi(A)

    @classmethod
    def from_rule(cls, ground: Ground, dim: int, start: int, period: int, rule: Callable) -> "FuncSpec":
        """Tabulate ``rule`` assuming it is periodic with ``period`` from ``start`` on."""
        if ground.is_finite:
            return cls(ground, dim, tuple(tuple(rule(t)) for t in range(ground.n)))
        vals = [tuple(rule(t)) for t in range(start + period)]
        return cls(ground, dim, tuple(vals[:start]), tuple(vals[start:]))

    # evaluation -------------------------------------------------------------

    def __call__(self, t: int) -> Vector:
        if self.ground.is_finite:
            return self.prefix[t]
        return eventual_at(self.prefix, self.cycle, t)

    @property
    def start(self) -> int:
        """First index from which the function is periodic (the ground size when finite)."""
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle) if self.cycle else 1

    def values(self) -> Iterable[Vector]:
        yield from self.prefix
        yield from self.cycle

    def sup_norm(self):
        return max((norm(v) for v in self.values()), default=Fraction(0))

    # algebra ----------------------------------------------------------------

    def _window(self, *others) -> tuple[int, int]:
        if self.ground.is_finite:
            return self.ground.n, 1
        lens, periods = [self.start], [self.period]
        for o in others:
            if isinstance(o, FuncSpec):
                lens.append(o.start)
                periods.append(o.period)
            else:
                lens.append(o.prefix_len)
                periods.append(o.period)
        return aligned_window(lens, periods)

    def _check(self, other: "FuncSpec"):
        if other.ground != self.ground:
            raise GroundMismatch(f"functions live on {self.ground!r} and {other.ground!r}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def pointwise(self, other: "FuncSpec", op: Callable) -> "FuncSpec":
        self._check(other)
        start, period = self._window(other)
        return FuncSpec.from_rule(self.ground, self.dim, start, period, lambda t: op(self(t), other(t)))

    def __add__(self, other: "FuncSpec") -> "FuncSpec":
        return self.pointwise(other, vadd)

    def __sub__(self, other: "FuncSpec") -> "FuncSpec":
        return self.pointwise(other, vsub)

    def __neg__(self) -> "FuncSpec":
        return self.scale(-1)

    def scale(self, alpha) -> "FuncSpec":
        alpha = Fraction(alpha) if isinstance(alpha, int) else alpha
        return FuncSpec(self.ground, self.dim, tuple(vscale(alpha, v) for v in self.prefix),
                        tuple(vscale(alpha, v) for v in self.cycle))

    def __mul__(self, alpha) -> "FuncSpec":
        return self.scale(alpha)

    __rmul__ = __mul__

    def chi(self, A) -> "FuncSpec":
        """Pointwise product with the indicator of ``A``."""
        A = self.ground.coerce(A)
        z = zero(self.dim)
        if self.ground.is_finite:
            return FuncSpec(self.ground, self.dim,
                            tuple(v if A >> t & 1 else z for t, v in enumerate(self.prefix)))
        start, period = self._window(A)
        return FuncSpec.from_rule(self.ground, self.dim, start, period, lambda t: self(t) if t in A else z)

    def support(self) -> AnySet:
        """``{t : f(t) != 0}``."""
        nonzero = lambda v: any(x != 0 for x in v)
        if self.ground.is_finite:
            return mask_of(t for t, v in enumerate(self.prefix) if nonzero(v))
        return UPSet(tuple(nonzero(v) for v in self.prefix), tuple(nonzero(v) for v in self.cycle))

    def disagreement(self, other: "FuncSpec") -> AnySet:
        """``{t : f(t) != g(t)}``."""
        return (self - other).support()

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for v in self.values() for x in v)

    def le(self, other: "FuncSpec") -> bool:
        """Pointwise ``f <= g`` (componentwise)."""
        return (other - self).is_nonnegative()

    def level_partition(self, singles_below: int = 0) -> Partition:
        """Finite partition on which the function is constant.

        On the naturals: singletons below ``max(start, singles_below)`` and one
        residue class per cycle position above.  On a finite ground: singletons.
        """
        if self.ground.is_finite:
            return Partition.singletons(self.ground)
        m = max(self.start, singles_below)
        blocks = [UPSet.finite([t]) for t in range(m)]
        blocks += [UPSet.residue(m + i, self.period, start=m) for i in range(self.period)]
        return Partition._trusted(self.ground, blocks)

    def literal(self) -> dict:
        from .numeric import vector_json

        if self.ground.is_finite:
            return {"table": [vector_json(v) for v in self.prefix]}
        return {"prefix": [vector_json(v) for v in self.prefix],
                "cycle": [vector_json(v) for v in self.cycle]}
