"""Tagged sums over partitions and the Riemann-Lebesgue, Birkhoff simple and Gould engines.

On a countable ground the all-singletons partition refines every countable
partition, so the Riemann-Lebesgue and Birkhoff simple integrals reduce to the
singleton series ``sum f(n) m({n})``; in finite dimension unconditional and
absolute convergence agree.  The Gould integral is a limit over *finite*
partitions and is handled by rule dispatch, probing and divergence search.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .funcs import FuncSpec
from .measures import (
    Measure,
    SeriesDivergence,
    UnsupportedFamily,
    check_properties,
    profile_sum,
    variation,
)
from .numeric import norm, rounding, scalar_json, vadd, vector_json, vscale, vsub, zero
from .setalg import (
    AnySet,
    ByResidue,
    GroundMismatch,
    IntoKInfinite,
    Partition,
    SplitOffFinite,
    TaggedPartition,
    aligned_window,
    is_refinement,
    split_block,
)

VALUE, DIVERGENT, UNKNOWN = "value", "divergent", "unknown"

# moves that would push a block's period past this are skipped
PERIOD_CAP = 1 << 10


class TailDivergent(ArithmeticError):
    def __init__(self, cause: SeriesDivergence):
        super().__init__(f"singleton tail series diverges: {cause}")
        self.cause = cause


class NotIntegrable(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    depth: int = 12
    chains: int = 64
    arity: int = 8

    @classmethod
    def parse(cls, text: str) -> "Budget":
        """``"depth=12,chains=64,arity=8"``; omitted keys keep their defaults."""
        fields = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in ("depth", "chains", "arity"):
                raise ValueError(f"unknown budget key {key!r}")
            fields[key] = int(val)
        budget = cls(**fields)
        if budget.depth < 1 or budget.chains < 0 or budget.arity < 2:
            raise ValueError("budget needs depth >= 1, chains >= 0, arity >= 2")
        return budget

    @classmethod
    def from_env(cls) -> "Budget":
        text = os.environ.get("NONADD_BUDGET", "")
        return cls.parse(text) if text else cls()


@dataclass(frozen=True)
class SigmaSum:
    value: tuple
    radius: float = 0.0
    abs_convergent: bool = True


@dataclass(frozen=True)
class ChainStep:
    partition: Partition | None
    tags: tuple
    sigma: tuple
    radius: float = 0.0
    label: str = ""

    @property
    def k_blocks(self):
        if self.partition is None:
            return len(self.tags)
        return self.partition.num_blocks

    def to_json(self) -> dict:
        out = {
            "partition": None if self.partition is None else self.partition.to_json(),
            "tags": list(self.tags),
            "sigma": vector_json(self.sigma),
            "radius": self.radius,
        }
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class IntegralVerdict:
    status: str
    engine: str
    value: tuple | None = None
    radius: float = 0.0
    abs_convergent: bool | None = None
    certificate: tuple = ()
    lower: tuple | None = None
    upper: tuple | None = None
    budget_spent: int = 0
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "engine": self.engine,
            "value": None if self.value is None else vector_json(self.value),
            "radius": self.radius,
            "certificate": [s.to_json() for s in self.certificate],
        }
        if self.abs_convergent is not None:
            out["abs_convergent"] = self.abs_convergent
        if self.status == UNKNOWN:
            out["lower"] = None if self.lower is None else vector_json(self.lower)
            out["upper"] = None if self.upper is None else vector_json(self.upper)
            out["budget_spent"] = self.budget_spent
        if self.note:
            out["note"] = self.note
        return out


def _check_pair(f: FuncSpec, m: Measure):
    if f.ground != m.ground:
        raise GroundMismatch(f"function on {f.ground!r}, measure on {m.ground!r}")


# ---------------------------------------------------------------------------
# Tagged sums
# ---------------------------------------------------------------------------


def _block_term(f: FuncSpec, m: Measure, block: AnySet, tag: int) -> tuple[tuple, float]:
    mv, mr = m.evaluate(block)
    fv = f(tag)
    term = vscale(mv, fv)
    return term, float(norm(fv)) * mr + rounding(norm(term))


def _series(f: FuncSpec, m: Measure, A: AnySet | None) -> tuple[tuple, float]:
    """``sum over n in A of f(n) m({n})`` on the naturals (A = everything when None)."""
    z = zero(f.dim)
    if A is None:
        start, period, value_at = f.start, f.period, f
    else:
        start, period = aligned_window([f.start, A.prefix_len], [f.period, A.period])
        value_at = lambda n: f(n) if n in A else z
    return profile_sum(m.profile(), f.dim, start, period, value_at)


def sigma_sum(f: FuncSpec, TP: TaggedPartition, m: Measure) -> SigmaSum:
    """``sum f(t_i) m(A_i)`` over the explicit blocks plus the singleton tail series."""
    _check_pair(f, m)
    P = TP.partition
    if P.ground != m.ground:
        raise GroundMismatch("partition and measure live on different grounds")
    acc, radius = zero(f.dim), 0.0
    for block, tag in zip(P.blocks, TP.tags):
        term, r = _block_term(f, m, block, tag)
        acc = vadd(acc, term)
        radius += r
    if P.tail is not None:
        try:
            tail, r = _series(f, m, P.tail)
        except SeriesDivergence as exc:
            raise TailDivergent(exc) from None
        acc = vadd(acc, tail)
        radius += r
    return SigmaSum(acc, radius, True)


def _partial_sums(f: FuncSpec, m: Measure, A: AnySet | None, count: int) -> list[ChainStep]:
    prof = m.profile() if not m.ground.is_finite else None
    z = zero(f.dim)
    acc, steps = z, []
    for n in range(count):
        if A is not None and n not in A:
            continue
        s = prof.at(n) if prof else m.singleton(n)
        acc = vadd(acc, vscale(s, f(n)))
        steps.append(ChainStep(None, (n,), acc, 0.0, f"partial sum through {n}"))
    return steps


def _divergent_series(engine: str, f: FuncSpec, m: Measure, A, exc: SeriesDivergence) -> IntegralVerdict:
    horizon = exc.first + 12 * exc.period + 1
    steps = _partial_sums(f, m, A, horizon)
    return IntegralVerdict(
        DIVERGENT, engine, abs_convergent=False, certificate=tuple(steps),
        note=f"singleton series is not absolutely convergent: {exc}",
    )


# ---------------------------------------------------------------------------
# Riemann-Lebesgue and Birkhoff simple
# ---------------------------------------------------------------------------


def rl_integrate(f: FuncSpec, m: Measure, A=None) -> IntegralVerdict:
    """Integral over A as the absolutely convergent singleton series, or Divergent."""
    _check_pair(f, m)
    g = f.ground
    A = None if A is None else g.coerce(A)
    if g.is_finite:
        idx = range(g.n) if A is None else g.members(A)
        acc, radius = zero(f.dim), 0.0
        for t in idx:
            term, r = _block_term(f, m, g.singleton(t), t)
            acc = vadd(acc, term)
            radius += r
        return IntegralVerdict(VALUE, "rl", acc, radius, True)
    try:
        value, radius = _series(f, m, A)
    except SeriesDivergence as exc:
        return _divergent_series("rl", f, m, A, exc)
    return IntegralVerdict(VALUE, "rl", value, radius, True)


def _reordering_probes(horizon: int) -> list[tuple[str, list[int]]]:
    """Index orders probing unconditional convergence: block reversal and two-evens-one-odd."""
    block = 8
    rev = []
    for b in range(0, horizon, block):
        rev.extend(reversed(range(b, min(b + block, horizon))))
    evens, odds = list(range(0, 2 * horizon, 2)), list(range(1, 2 * horizon, 2))
    mix, i, j = [], 0, 0
    while len(mix) < horizon:
        mix.extend(evens[i:i + 2])
        mix.append(odds[j])
        i, j = i + 2, j + 1
    return [("block reversal", rev), ("two evens, one odd", mix[:horizon])]


def birkhoff_simple(f: FuncSpec, m: Measure, horizon: int = 64) -> IntegralVerdict:
    """Singleton series under the reordering probes; agrees with rl when that is a Value."""
    rl = rl_integrate(f, m)
    if rl.status != VALUE:
        return IntegralVerdict(rl.status, "bs", abs_convergent=False, certificate=rl.certificate, note=rl.note)
    if m.ground.is_finite:
        return IntegralVerdict(VALUE, "bs", rl.value, rl.radius, True)
    prof = m.profile()
    fnorm = f.sup_norm()
    for name, order in _reordering_probes(horizon):
        acc = zero(f.dim)
        for n in order:
            acc = vadd(acc, vscale(prof.at(n), f(n)))
        seen = set(order)
        missing = next(n for n in range(len(order) + 1) if n not in seen)
        bound = fnorm * prof.tail_mass(missing)
        slack = rl.radius + 1e-12 * float(norm(acc) + 1) * (not _exact(acc))
        excess = norm(vsub(acc, rl.value)) - bound
        if excess > 0 and (not slack or excess > slack):
            return IntegralVerdict(UNKNOWN, "bs", note=f"reordering probe '{name}' disagrees")
    return IntegralVerdict(VALUE, "bs", rl.value, rl.radius, True)


def _exact(v) -> bool:
    return all(isinstance(x, Fraction) for x in v)


# ---------------------------------------------------------------------------
# Gould
# ---------------------------------------------------------------------------


class _Chain:
    """Finite tagged partition with per-block contributions, updated incrementally."""

    def __init__(self, f: FuncSpec, m: Measure, blocks: Iterable, tags: Iterable | None = None):
        self.f, self.m = f, m
        self.blocks = list(blocks)
        g = m.ground
        self.tags = list(tags) if tags is not None else [g.min_element(b) for b in self.blocks]
        self.terms = [_block_term(f, m, b, t) for b, t in zip(self.blocks, self.tags)]
        self.evals = len(self.blocks)
        acc = zero(f.dim)
        for term, _ in self.terms:
            acc = vadd(acc, term)
        self._sigma = acc

    @property
    def sigma(self) -> tuple:
        return self._sigma

    @property
    def radius(self) -> float:
        return sum(r for _, r in self.terms)

    def replace(self, i: int, pieces: list, tags: list | None = None):
        g = self.m.ground
        tags = tags if tags is not None else [g.min_element(p) for p in pieces]
        new = [_block_term(self.f, self.m, p, t) for p, t in zip(pieces, tags)]
        acc = vsub(self._sigma, self.terms[i][0])
        for term, _ in new:
            acc = vadd(acc, term)
        self._sigma = acc
        self.blocks[i:i + 1] = pieces
        self.tags[i:i + 1] = tags
        self.terms[i:i + 1] = new
        self.evals += len(pieces)

    def copy(self) -> "_Chain":
        other = object.__new__(_Chain)
        other.f, other.m = self.f, self.m
        other.blocks, other.tags, other.terms = list(self.blocks), list(self.tags), list(self.terms)
        other._sigma = self._sigma
        other.evals = 0
        return other

    def step(self, label: str = "") -> ChainStep:
        order = sorted(range(len(self.blocks)), key=lambda i: self.m.ground.min_element(self.blocks[i]))
        P = Partition._trusted(self.m.ground, [self.blocks[i] for i in order])
        return ChainStep(P, tuple(self.tags[i] for i in order), self.sigma, self.radius, label)


def _period_ok(g, block, strategy) -> bool:
    if g.is_finite or isinstance(strategy, SplitOffFinite):
        return True
    return block.period * strategy.k <= PERIOD_CAP


def _random_move(chain: _Chain, rng: random.Random, arity: int) -> bool:
    g = chain.m.ground
    for _ in range(16):
        i = rng.randrange(len(chain.blocks))
        kind = rng.randrange(3)
        if kind == 0:
            strategy = ByResidue(rng.randint(2, arity))
        elif kind == 1:
            strategy = SplitOffFinite(rng.randint(1, arity))
        else:
            strategy = IntoKInfinite(rng.randint(2, arity))
        if not _period_ok(g, chain.blocks[i], strategy):
            continue
        pieces = split_block(g, chain.blocks[i], strategy)
        if pieces is None:
            continue
        tags = [rng.choice(list(g.members(p)) if g.is_finite else p.take(arity)) for p in pieces]
        chain.replace(i, pieces, tags)
        return True
    return False


def _tail_bound_start(f: FuncSpec, m: Measure, tol: float, cap: int = 4096) -> tuple[int, Fraction]:
    """Smallest M >= f.start with 2 ||f|| sum_{n >= M} m({n}) <= tol / 4 (capped)."""
    prof = m.profile()
    fnorm = f.sup_norm()
    M = f.start
    bound = 2 * fnorm * prof.tail_mass(M)
    while bound > tol / 4 and M < cap:
        M += 1
        bound = 2 * fnorm * prof.tail_mass(M)
    return M, bound


def _dispatch_rule(m: Measure) -> str | None:
    report = check_properties(m)
    try:
        total = variation(m)
    except UnsupportedFamily:
        return None
    if total.is_infinite:
        return None
    if report.proved("sigma_additive"):
        return "sigma-additive measure of finite variation"
    if report.proved("monotone", "sigma_subadditive"):
        return "monotone, sigma-subadditive measure of finite variation"
    return None


def _cauchy_probe(f, m, value, radius, budget, seed, tol):
    """Random refinement chains from a tail-controlled partition must stay near ``value``."""
    M, bound = _tail_bound_start(f, m, tol)
    start = f.level_partition(singles_below=M)
    base = _Chain(f, m, start.blocks)
    slack = float(bound) + radius + tol
    spent = base.evals
    first_chain = [base.step("tail-controlled start")]
    worst = Fraction(0)
    for c in range(budget.chains):
        rng = random.Random(f"{seed}:{c}")
        chain = base.copy()
        for d in range(budget.depth):
            if not _random_move(chain, rng, budget.arity):
                break
            dev = norm(vsub(chain.sigma, value))
            worst = max(worst, dev)
            if c == 0:
                first_chain.append(chain.step(f"random refinement {d + 1}"))
            if dev > slack + chain.radius:
                spent += chain.evals
                return False, first_chain, spent, dev, slack
        spent += chain.evals
    return True, first_chain, spent, worst, slack


def _greedy_chain(f: FuncSpec, m: Measure, blocks: list, depth: int, tol: float):
    """Refine greedily, keeping moves that push sigma away from its start by at least half the first jump."""
    chain = _Chain(f, m, blocks)
    s0 = chain.sigma
    steps = [chain.step("start")]
    jump = None
    moves = (IntoKInfinite(2), ByResidue(2), SplitOffFinite(1))
    g = m.ground
    for _ in range(depth):
        current = norm(vsub(chain.sigma, s0))
        chosen = None
        for i, block in enumerate(chain.blocks):
            for move in moves:
                if not _period_ok(g, block, move):
                    continue
                pieces = split_block(g, block, move)
                if pieces is None:
                    continue
                trial = chain.copy()
                trial.replace(i, pieces)
                chain.evals += trial.evals
                growth = norm(vsub(trial.sigma, s0)) - current
                if (jump is None and growth > tol) or (jump is not None and growth >= jump / 2):
                    chosen = (trial, move, growth)
                    break
            if chosen:
                break
        if not chosen:
            break
        trial, move, growth = chosen
        if jump is None:
            jump = growth
        evals = chain.evals
        chain = trial
        chain.evals = evals
        steps.append(chain.step(f"{type(move).__name__}({getattr(move, 'k', getattr(move, 'j', ''))})"))
    return steps, jump, chain.evals


def _grows(steps: list, jump, depth: int) -> bool:
    if jump is None or len(steps) < depth + 1:
        return False
    s0 = steps[0].sigma
    return all(norm(vsub(s.sigma, s0)) >= k * jump / 2 for k, s in enumerate(steps))


def gould_integrate(
    f: FuncSpec, m: Measure, budget: Budget | None = None, seed: int = 0, tol: float = 1e-9
) -> IntegralVerdict:
    """Limit of sigma(P) along the net of finite partitions, as far as it can be decided.

    Stage 1 returns a Value when a theorem covers the measure family and a
    random Cauchy probe stays within the claimed radius; stage 2 searches for
    refinement chains along which sigma grows without bound; otherwise the
    verdict is Unknown with the observed sigma range.
    """
    _check_pair(f, m)
    budget = budget or Budget()
    g = m.ground
    if g.is_finite:
        # the singleton partition refines every partition, so the net is eventually constant
        rl = rl_integrate(f, m)
        P = Partition.singletons(g)
        step = ChainStep(P, P.default_tags(), rl.value, rl.radius, "finest partition")
        return IntegralVerdict(VALUE, "gould", rl.value, rl.radius, True, (step,),
                               note="finite ground: finest partition is the maximum of the net")
    if all(norm(v) == 0 for v in f.values()):
        P = Partition.trivial(g)
        return IntegralVerdict(VALUE, "gould", zero(f.dim), 0.0, True,
                               (ChainStep(P, P.default_tags(), zero(f.dim)),), note="f vanishes identically")

    spent = 0
    rule = _dispatch_rule(m)
    if rule is not None:
        rl = rl_integrate(f, m)
        if rl.status == VALUE:
            ok, chain, used, worst, slack = _cauchy_probe(f, m, rl.value, rl.radius, budget, seed, tol)
            spent += used
            if ok:
                return IntegralVerdict(
                    VALUE, "gould", rl.value, rl.radius, True, tuple(chain), budget_spent=spent,
                    note=f"{rule}; Cauchy probe max deviation {float(worst):.3g} within {slack:.3g}",
                )

    starts = [list(Partition.trivial(g).blocks)]
    level = list(f.level_partition().blocks)
    if level != starts[0]:
        starts.append(level)
    for blocks in starts:
        steps, jump, used = _greedy_chain(f, m, blocks, budget.depth, tol)
        spent += used
        if not _grows(steps, jump, budget.depth):
            continue
        robust = True
        for c in range(4):
            rng = random.Random(f"{seed}:robust:{c}")
            probe = _Chain(f, m, blocks)
            for _ in range(3):
                _random_move(probe, rng, budget.arity)
            more, j2, used = _greedy_chain(f, m, probe.blocks, 3, tol)
            spent += used + probe.evals
            if not _grows(more, j2, 3):
                robust = False
                break
        if robust:
            return IntegralVerdict(
                DIVERGENT, "gould", certificate=tuple(steps), budget_spent=spent,
                note=f"sigma grows by at least {scalar_json(jump / 2) if isinstance(jump, Fraction) else jump / 2} "
                     "per refinement; growth reproduced from random partitions",
            )

    lo = hi = None
    widest = ()
    for c in range(budget.chains):
        rng = random.Random(f"{seed}:{c}")
        chain = _Chain(f, m, Partition.trivial(g).blocks)
        trail = [chain.step("start")]
        for _ in range(budget.depth):
            if not _random_move(chain, rng, budget.arity):
                break
            trail.append(chain.step())
        for s in trail:
            lo = s.sigma if lo is None else tuple(min(a, b) for a, b in zip(lo, s.sigma))
            hi = s.sigma if hi is None else tuple(max(a, b) for a, b in zip(hi, s.sigma))
        spent += chain.evals
        if len(trail) > len(widest):
            widest = tuple(trail)
    return IntegralVerdict(UNKNOWN, "gould", certificate=widest, lower=lo, upper=hi, budget_spent=spent,
                           note="no dispatch rule applied and no divergence found within budget")


def replay_certificate(f: FuncSpec, m: Measure, verdict: IntegralVerdict) -> bool:
    """Recompute every recorded sigma and check that each partition refines its predecessor."""
    prev = None
    for step in verdict.certificate:
        if step.partition is None:
            continue
        s = sigma_sum(f, TaggedPartition(step.partition, step.tags), m)
        if norm(vsub(s.value, step.sigma)) > s.radius + step.radius:
            return False
        if prev is not None and verdict.status == DIVERGENT and not is_refinement(step.partition, prev):
            return False
        prev = step.partition
    return True


# ---------------------------------------------------------------------------
# Indefinite integral
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndefiniteIntegral:
    f: FuncSpec
    m: Measure

    def __call__(self, A) -> IntegralVerdict:
        return rl_integrate(self.f, self.m, A)

    def value(self, A) -> tuple:
        return self(A).value


def indefinite(f: FuncSpec, m: Measure) -> IndefiniteIntegral:
    if rl_integrate(f, m).status != VALUE:
        raise NotIntegrable("f is not integrable on the whole ground")
    return IndefiniteIntegral(f, m)
