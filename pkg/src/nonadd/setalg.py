"""Ground sets, ultimately periodic subsets of the naturals, and partitions.

Two ground models are supported.  ``Ground.finite(n)`` is ``{0, ..., n-1}``
and its subsets are plain ``int`` bit masks.  ``OMEGA`` is the set of
naturals and its subsets are :class:`UPSet` values (ultimately periodic
sets).  In both models every subset is measurable.

Countable partitions of ``OMEGA`` have the shape "finitely many explicit
blocks plus singletons of whatever is left"; the leftover set is kept as the
partition's ``tail``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import islice
from typing import Iterable, Iterator, Sequence, Union


class SetAlgError(ValueError):
    pass


class GroundMismatch(SetAlgError):
    pass


class InvalidPartition(SetAlgError):
    pass


class NotApplicable(SetAlgError):
    pass


class LimitExceeded(SetAlgError):
    pass


def _min_period(cycle: Sequence) -> int:
    """Smallest d dividing len(cycle) with cycle invariant under rotation by d."""
    q = len(cycle)
    for d in range(1, q):
        if q % d == 0 and cycle[d:] + cycle[:d] == cycle:
            return d
    return q


def normalize_eventual(prefix: Sequence, cycle: Sequence) -> tuple[tuple, tuple]:
    """Canonical (prefix, cycle) for the sequence ``prefix + cycle + cycle + ...``.

    The cycle is cut to its minimal period, then the prefix is shortened as
    long as its last entry can be absorbed into a rotated cycle.  Equal
    sequences get equal canonical forms.
    """
    if not cycle:
        raise ValueError("cycle must be nonempty")
    cycle = tuple(cycle[: _min_period(cycle)])
    prefix = list(prefix)
    while prefix and prefix[-1] == cycle[-1]:
        prefix.pop()
        cycle = (cycle[-1],) + cycle[:-1]
    return tuple(prefix), cycle


def eventual_at(prefix: Sequence, cycle: Sequence, n: int):
    if n < len(prefix):
        return prefix[n]
    return cycle[(n - len(prefix)) % len(cycle)]


def aligned_window(prefix_lens: Iterable[int], periods: Iterable[int]) -> tuple[int, int]:
    """Common (start, period) beyond which several sequences are jointly periodic."""
    return max(prefix_lens, default=0), reduce(math.lcm, periods, 1)


@dataclass(frozen=True)
class UPSet:
    """Ultimately periodic subset of the naturals.

    ``prefix[n]`` gives membership of ``n < len(prefix)``; beyond that,
    ``n`` is a member iff ``cycle[(n - len(prefix)) % len(cycle)]``.  The
    pair is normalized on construction so ``==`` is set equality.
    """

    prefix: tuple = ()
    cycle: tuple = (False,)

    def __post_init__(self):
        prefix, cycle = normalize_eventual(tuple(map(bool, self.prefix)), tuple(map(bool, self.cycle)))
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def from_rule(cls, start: int, period: int, member) -> "UPSet":
        bits = [bool(member(n)) for n in range(start + period)]
        return cls(tuple(bits[:start]), tuple(bits[start:]))

    @classmethod
    def empty(cls) -> "UPSet":
        return cls((), (False,))

    @classmethod
    def full(cls) -> "UPSet":
        return cls((), (True,))

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "UPSet":
        elements = set(elements)
        if any(e < 0 for e in elements):
            raise ValueError("elements must be natural numbers")
        size = max(elements, default=-1) + 1
        return cls(tuple(i in elements for i in range(size)), (False,))

    @classmethod
    def residue(cls, r: int, k: int, start: int = 0) -> "UPSet":
        """``{n >= start : n = r (mod k)}``."""
        return cls.from_rule(start, k, lambda n: n >= start and n % k == r % k)

    @classmethod
    def tail_from(cls, k: int) -> "UPSet":
        return cls((False,) * k, (True,))

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def residues(self) -> frozenset[int]:
        """Residues ``r`` such that ``n >= prefix_len`` is a member iff ``n % period`` is in them."""
        n0, q = self.prefix_len, self.period
        return frozenset((n0 + i) % q for i, b in enumerate(self.cycle) if b)

    def __contains__(self, n: int) -> bool:
        return n >= 0 and eventual_at(self.prefix, self.cycle, n)

    def is_empty(self) -> bool:
        return not any(self.prefix) and not any(self.cycle)

    def is_finite(self) -> bool:
        return not any(self.cycle)

    def cardinality(self):
        return sum(self.prefix) if self.is_finite() else math.inf

    def min_element(self) -> int | None:
        return next(self.members(), None)

    def members(self) -> Iterator[int]:
        """Members in increasing order (an infinite iterator for infinite sets)."""
        for n, b in enumerate(self.prefix):
            if b:
                yield n
        hits = self._hits
        if not hits:
            return
        base = self.prefix_len
        while True:
            for i in hits:
                yield base + i
            base += self.period

    @cached_property
    def _hits(self) -> tuple:
        return tuple(i for i, b in enumerate(self.cycle) if b)

    def take(self, k: int) -> list[int]:
        return list(islice(self.members(), k))

    def _window(self, length: int) -> tuple:
        """Membership bits of ``0..length-1``."""
        bits = self.prefix[:length]
        if len(bits) < length:
            reps = -(-(length - len(bits)) // self.period)
            bits += (self.cycle * reps)[: length - len(bits)]
        return bits

    def _combine(self, other: "UPSet", op: str) -> "UPSet":
        if not isinstance(other, UPSet):
            return NotImplemented
        start, q = aligned_window((self.prefix_len, other.prefix_len), (self.period, other.period))
        xs, ys = self._window(start + q), other._window(start + q)
        if op == "or":
            bits = tuple(a or b for a, b in zip(xs, ys))
        elif op == "and":
            bits = tuple(a and b for a, b in zip(xs, ys))
        elif op == "sub":
            bits = tuple(a and not b for a, b in zip(xs, ys))
        else:
            bits = tuple(a != b for a, b in zip(xs, ys))
        return UPSet(bits[:start], bits[start:])

    def __or__(self, other):
        return self._combine(other, "or")

    def __and__(self, other):
        return self._combine(other, "and")

    def __sub__(self, other):
        return self._combine(other, "sub")

    def __xor__(self, other):
        return self._combine(other, "xor")

    def __invert__(self):
        return UPSet(tuple(not b for b in self.prefix), tuple(not b for b in self.cycle))

    def issubset(self, other: "UPSet") -> bool:
        return (self - other).is_empty()

    def isdisjoint(self, other: "UPSet") -> bool:
        return (self & other).is_empty()

    def __le__(self, other):
        return self.issubset(other)

    def literal(self) -> str:
        if self.is_finite():
            return "finite:[" + ",".join(str(n) for n in self.members()) + "]"
        for name, value in _SUGAR.items():
            if value == self:
                return name
        bits = "".join("1" if b else "0" for b in self.prefix)
        res = ",".join(str(r) for r in sorted(self.residues))
        return f"upset:N={self.prefix_len};prefix={bits};p={self.period};R={{{res}}}"

    def __repr__(self) -> str:
        return f"UPSet({self.literal()!r})"


_SUGAR = {
    "all": UPSet.full(),
    "evens": UPSet((), (True, False)),
    "odds": UPSet((), (False, True)),
}


def upset_normalize(prefix_bits: Sequence, period: int, residues: Iterable[int]) -> UPSet:
    """Canonical :class:`UPSet` for "prefix bits, then ``n % period`` in ``residues``"."""
    if period < 1:
        raise ValueError("period must be at least 1")
    bits = tuple(bool(int(b)) for b in prefix_bits)
    residues = {r % period for r in residues}
    n0 = len(bits)
    return UPSet(bits, tuple((n0 + i) % period in residues for i in range(period)))


# ---------------------------------------------------------------------------
# Ground models
# ---------------------------------------------------------------------------

AnySet = Union[int, UPSet]


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Ground:
    """``Ground(n)`` is the finite set ``{0..n-1}``; ``Ground(None)`` is the naturals."""

    n: int | None = None

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("a finite ground needs at least one element")

    @classmethod
    def finite(cls, n: int) -> "Ground":
        return cls(n)

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    def __repr__(self) -> str:
        return f"Finite({self.n})" if self.is_finite else "Omega"

    def full(self) -> AnySet:
        return (1 << self.n) - 1 if self.is_finite else UPSet.full()

    def empty(self) -> AnySet:
        return 0 if self.is_finite else UPSet.empty()

    def check(self, A) -> AnySet:
        if self.is_finite:
            if isinstance(A, bool) or not isinstance(A, int) or A < 0 or A >> self.n:
                raise GroundMismatch(f"{A!r} is not a subset of {self!r}")
            return A
        if not isinstance(A, UPSet):
            raise GroundMismatch(f"{A!r} is not an ultimately periodic subset of the naturals")
        return A

    def coerce(self, A) -> AnySet:
        """Accept masks/UPSets, element iterables, or set literals."""
        if isinstance(A, str):
            return parse_set(A, self)
        if self.is_finite and isinstance(A, (set, frozenset, list, tuple)):
            if any(not 0 <= e < self.n for e in A):
                raise GroundMismatch(f"{sorted(A)} is not a subset of {self!r}")
            return mask_of(A)
        if not self.is_finite and isinstance(A, (set, frozenset, list, tuple)):
            return UPSet.finite(A)
        return self.check(A)

    def complement(self, A: AnySet) -> AnySet:
        return self.full() ^ A if self.is_finite else ~A

    def union(self, A: AnySet, B: AnySet) -> AnySet:
        return A | B

    def intersect(self, A: AnySet, B: AnySet) -> AnySet:
        return A & B

    def difference(self, A: AnySet, B: AnySet) -> AnySet:
        return A & ~B if self.is_finite else A - B

    def is_subset(self, A: AnySet, B: AnySet) -> bool:
        return A & ~B == 0 if self.is_finite else A.issubset(B)

    def is_empty(self, A: AnySet) -> bool:
        return A == 0 if self.is_finite else A.is_empty()

    def is_finite_set(self, A: AnySet) -> bool:
        return True if self.is_finite else A.is_finite()

    def cardinality(self, A: AnySet):
        return bin(A).count("1") if self.is_finite else A.cardinality()

    def min_element(self, A: AnySet) -> int | None:
        if self.is_finite:
            return (A & -A).bit_length() - 1 if A else None
        return A.min_element()

    def members(self, A: AnySet) -> Iterator[int]:
        return iter(bits(A)) if self.is_finite else A.members()

    def singleton(self, t: int) -> AnySet:
        return 1 << t if self.is_finite else UPSet.finite([t])

    def contains(self, A: AnySet, t: int) -> bool:
        return bool(A >> t & 1) if self.is_finite else t in A

    def literal(self, A: AnySet) -> str:
        if self.is_finite:
            return "finite:[" + ",".join(map(str, bits(A))) + "]"
        return A.literal()


OMEGA = Ground(None)


_UPSET_FIELD = re.compile(r"^\s*(N|prefix|p|R)\s*=\s*(.*?)\s*$")


def parse_set(text: str, ground: Ground = OMEGA) -> AnySet:
    """Parse a set literal.

    Grammar::

        all | empty | evens | odds
        finite:[e0,e1,...]
        upset:N=<int>;prefix=<bits>;p=<int>;R={r0,r1,...}
        mod:<k>:<r>          # n = r (mod k)
        tail:<k>             # n >= k

    In ``upset`` literals ``N`` may be omitted (it defaults to the length of
    ``prefix``) and residues in ``R`` are taken mod ``p`` on absolute indices.
    On a finite ground the described set is intersected with ``{0..n-1}``;
    ``finite`` literals must already lie inside it.
    """
    s = text.strip()
    low = s.lower()
    if low in _SUGAR:
        up = _SUGAR[low]
    elif low == "empty":
        up = UPSet.empty()
    elif low.startswith("finite:"):
        body = s[len("finite:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed finite literal {text!r}")
        items = [x for x in body[1:-1].split(",") if x.strip()]
        elems = [int(x) for x in items]
        if ground.is_finite and any(not 0 <= e < ground.n for e in elems):
            raise GroundMismatch(f"{text!r} is not a subset of {ground!r}")
        up = UPSet.finite(elems)
    elif low.startswith("upset:"):
        fields = {}
        for part in s[len("upset:"):].split(";"):
            if not part.strip():
                continue
            match = _UPSET_FIELD.match(part)
            if not match:
                raise ValueError(f"malformed upset field {part!r}")
            fields[match.group(1)] = match.group(2)
        prefix = fields.get("prefix", "")
        if any(c not in "01" for c in prefix):
            raise ValueError(f"prefix must be a bit string, got {prefix!r}")
        n0 = int(fields.get("N", len(prefix)))
        if n0 < len(prefix):
            raise ValueError("N shorter than the prefix")
        prefix = prefix + "0" * (n0 - len(prefix))
        period = int(fields.get("p", 1))
        res = fields.get("R", "{}").strip()
        if not (res.startswith("{") and res.endswith("}")):
            raise ValueError(f"malformed residue set {res!r}")
        residues = [int(x) for x in res[1:-1].split(",") if x.strip()]
        up = upset_normalize(prefix, period, residues)
    elif low.startswith("mod:"):
        _, k, r = low.split(":")
        up = UPSet.residue(int(r), int(k))
    elif low.startswith("tail:"):
        up = UPSet.tail_from(int(low.split(":")[1]))
    else:
        raise ValueError(f"unknown set literal {text!r}")
    if ground.is_finite:
        return mask_of(n for n in range(ground.n) if n in up)
    return up


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Partition of a ground set.

    ``blocks`` are the explicit blocks sorted by minimum element.  On the
    naturals ``tail`` (when not ``None``) is an infinite set whose elements
    each form a singleton block.  Use :meth:`make` to build one; it checks
    disjointness and coverage and puts the result into canonical form.
    """

    ground: Ground
    blocks: tuple
    tail: UPSet | None = None

    @classmethod
    def make(cls, ground: Ground, blocks: Iterable, singleton_tail: bool = False) -> "Partition":
        """Validate and normalize.

        With ``singleton_tail=True`` any part of an infinite ground not covered
        by ``blocks`` becomes singleton blocks; otherwise coverage is required.
        """
        blocks = [ground.coerce(b) for b in blocks]
        seen = ground.empty()
        for b in blocks:
            if ground.is_empty(b):
                raise InvalidPartition("partition blocks must be nonempty")
            if not ground.is_empty(ground.intersect(seen, b)):
                raise InvalidPartition("partition blocks must be pairwise disjoint")
            seen = ground.union(seen, b)
        rest = ground.complement(seen)
        tail = None
        if not ground.is_empty(rest):
            if ground.is_finite or not singleton_tail:
                raise InvalidPartition("blocks do not cover the ground set")
            if rest.is_finite():
                blocks.extend(UPSet.finite([t]) for t in rest.members())
            else:
                tail = rest
        if tail is not None:
            absorbed = [b for b in blocks if b.cardinality() == 1]
            if absorbed:
                tail = reduce(lambda a, b: a | b, absorbed, tail)
                blocks = [b for b in blocks if b.cardinality() != 1]
        blocks.sort(key=ground.min_element)
        return cls(ground, tuple(blocks), tail)

    @classmethod
    def _trusted(cls, ground: Ground, blocks: Iterable, tail: UPSet | None = None) -> "Partition":
        return cls(ground, tuple(sorted(blocks, key=ground.min_element)), tail)

    @classmethod
    def trivial(cls, ground: Ground) -> "Partition":
        return cls(ground, (ground.full(),), None)

    @classmethod
    def singletons(cls, ground: Ground) -> "Partition":
        if ground.is_finite:
            return cls(ground, tuple(1 << t for t in range(ground.n)), None)
        return cls(ground, (), UPSet.full())

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def __len__(self) -> int:
        if self.tail is not None:
            raise TypeError("countable partition has infinitely many blocks")
        return len(self.blocks)

    @property
    def num_blocks(self):
        return len(self.blocks) if self.tail is None else math.inf

    def iter_blocks(self) -> Iterator[AnySet]:
        """All blocks (explicit and tail singletons) in order of minimum element."""
        if self.tail is None:
            yield from self.blocks
            return
        explicit = iter(self.blocks)
        pending = next(explicit, None)
        for d in self.tail.members():
            while pending is not None and pending.min_element() < d:
                yield pending
                pending = next(explicit, None)
            yield UPSet.finite([d])

    def block_of(self, t: int) -> AnySet:
        for b in self.blocks:
            if self.ground.contains(b, t):
                return b
        if self.tail is not None and t in self.tail:
            return UPSet.finite([t])
        raise ValueError(f"{t} is not in the ground set")

    def default_tags(self) -> tuple[int, ...]:
        return tuple(self.ground.min_element(b) for b in self.blocks)

    def to_json(self) -> dict:
        return {
            "blocks": [self.ground.literal(b) for b in self.blocks],
            "tail": None if self.tail is None else self.tail.literal(),
        }

    @classmethod
    def from_json(cls, data: dict, ground: Ground) -> "Partition":
        blocks = [parse_set(b, ground) for b in data["blocks"]]
        return cls.make(ground, blocks, singleton_tail=data.get("tail") is not None)


@dataclass(frozen=True)
class TaggedPartition:
    """A partition with one tag per explicit block; a tail singleton ``{d}`` is tagged ``d``."""

    partition: Partition
    tags: tuple

    def __post_init__(self):
        p = self.partition
        if len(self.tags) != len(p.blocks):
            raise InvalidPartition("need exactly one tag per explicit block")
        for b, t in zip(p.blocks, self.tags):
            if not p.ground.contains(b, t):
                raise InvalidPartition(f"tag {t} is not in its block")

    @classmethod
    def with_min_tags(cls, partition: Partition) -> "TaggedPartition":
        return cls(partition, partition.default_tags())


def _same_ground(P: Partition, Q: Partition) -> Ground:
    if P.ground != Q.ground:
        raise GroundMismatch(f"partitions live on {P.ground!r} and {Q.ground!r}")
    return P.ground


def common_refinement(P: Partition, Q: Partition) -> Partition:
    """Blocks are the nonempty intersections of a block of P with a block of Q.

    Tail singletons of either side stay singletons, so the tails simply unite.
    """
    ground = _same_ground(P, Q)
    tails = [t for t in (P.tail, Q.tail) if t is not None]
    tail = reduce(lambda a, b: a | b, tails) if tails else None
    blocks = []
    for a in P.blocks:
        for b in Q.blocks:
            c = ground.intersect(a, b)
            if not ground.is_empty(c):
                blocks.append(c)
    if tail is not None:
        singles = [b for b in blocks if b.cardinality() == 1]
        if singles:
            tail = reduce(lambda a, b: a | b, singles, tail)
            blocks = [b for b in blocks if b.cardinality() != 1]
    return Partition._trusted(ground, blocks, tail)


def is_refinement(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of ``fine`` lies inside some block of ``coarse``."""
    ground = _same_ground(fine, coarse)
    for b in fine.blocks:
        if any(ground.is_subset(b, c) for c in coarse.blocks):
            continue
        if coarse.tail is not None and ground.cardinality(b) == 1 and ground.is_subset(b, coarse.tail):
            continue
        return False
    return True


# ---------------------------------------------------------------------------
# Refinement moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ByResidue:
    """Split a block of period p by residues mod k*p."""

    k: int


@dataclass(frozen=True)
class SplitOffFinite:
    """Split off the j smallest elements of a block."""

    j: int


@dataclass(frozen=True)
class IntoKInfinite:
    """Split an infinite block into k infinite pieces by member index mod k."""

    k: int


Strategy = Union[ByResidue, SplitOffFinite, IntoKInfinite]


def split_block(ground: Ground, block: AnySet, strategy: Strategy) -> list[AnySet] | None:
    """Pieces of ``block`` under ``strategy``, or ``None`` if it does not apply."""
    if isinstance(strategy, ByResidue):
        if strategy.k < 2:
            raise ValueError("ByResidue needs k >= 2")
        if ground.is_finite:
            pieces = [mask_of(t for t in bits(block) if t % strategy.k == r) for r in range(strategy.k)]
        else:
            n0, mod = block.prefix_len, strategy.k * block.period
            win = block._window(n0 + mod)
            flags = {}
            for t, b in enumerate(win):
                if b:
                    flags.setdefault(t % mod, [False] * len(win))[t] = True
            pieces = [UPSet(tuple(f[:n0]), tuple(f[n0:])) for _, f in sorted(flags.items())]
        pieces = [p for p in pieces if not ground.is_empty(p)]
        return pieces if len(pieces) >= 2 else None
    if isinstance(strategy, SplitOffFinite):
        if strategy.j < 1:
            raise ValueError("SplitOffFinite needs j >= 1")
        if ground.cardinality(block) <= strategy.j:
            return None
        head = list(islice(ground.members(block), strategy.j))
        first = ground.coerce(head)
        return [first, ground.difference(block, first)]
    if isinstance(strategy, IntoKInfinite):
        if strategy.k < 2:
            raise ValueError("IntoKInfinite needs k >= 2")
        if ground.is_finite or block.is_finite():
            return None
        n0, q, k = block.prefix_len, block.period, strategy.k
        span = n0 + k * q
        owner = {}
        for idx, t in enumerate(block.members()):
            if t >= span:
                break
            owner[t] = idx % k
        pieces = []
        for j in range(k):
            flags = [owner.get(t) == j for t in range(span)]
            pieces.append(UPSet(tuple(flags[:n0]), tuple(flags[n0:])))
        return pieces
    raise TypeError(f"unknown strategy {strategy!r}")


def split_moves(P: Partition, strategy: Strategy) -> list[Partition]:
    """One partition per block that ``strategy`` can split, each differing from P in that block only."""
    if not P.is_finite:
        raise NotApplicable("split moves are defined for finite partitions")
    out = []
    for i, block in enumerate(P.blocks):
        pieces = split_block(P.ground, block, strategy)
        if pieces is None:
            continue
        blocks = list(P.blocks[:i]) + pieces + list(P.blocks[i + 1:])
        out.append(Partition._trusted(P.ground, blocks))
    if not out:
        raise NotApplicable(f"{strategy!r} applies to no block")
    return out


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

ENUMERATION_LIMIT = 12


def enumerate_partitions(
    ground: Ground | int, max_blocks: int | None = None, limit: int = ENUMERATION_LIMIT
) -> Iterator[Partition]:
    """Every set partition of ``{0..n-1}`` exactly once, via restricted growth strings."""
    if isinstance(ground, int):
        ground = Ground.finite(ground)
    if not ground.is_finite:
        raise GroundMismatch("can only enumerate partitions of a finite ground")
    n = ground.n
    if n > limit:
        raise LimitExceeded(f"n={n} exceeds the enumeration limit {limit}")
    cap = n if max_blocks is None else max_blocks

    def rec(t: int, blocks: list[int]):
        if t == n:
            yield Partition(ground, tuple(blocks), None)
            return
        bit = 1 << t
        for i in range(len(blocks)):
            blocks[i] |= bit
            yield from rec(t + 1, blocks)
            blocks[i] ^= bit
        if len(blocks) < cap:
            blocks.append(bit)
            yield from rec(t + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def partitions_of_mask(mask: int) -> Iterator[list[int]]:
    """Set partitions of the elements of ``mask`` as lists of block masks."""
    elems = bits(mask)

    def rec(i: int, blocks: list[int]):
        if i == len(elems):
            yield list(blocks)
            return
        bit = 1 << elems[i]
        for j in range(len(blocks)):
            blocks[j] |= bit
            yield from rec(i + 1, blocks)
            blocks[j] ^= bit
        blocks.append(bit)
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])
