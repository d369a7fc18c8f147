from dataclasses import replace
from fractions import Fraction as F
import math

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from nonadd.funcs import FuncSpec
from nonadd.integrals import (
    DIVERGENT,
    UNKNOWN,
    VALUE,
    Budget,
    NotIntegrable,
    TailDivergent,
    birkhoff_simple,
    gould_integrate,
    indefinite,
    replay_certificate,
    rl_integrate,
    sigma_sum,
)
from nonadd.measures import (
    CardinalityClass,
    Distortion,
    PointMass,
    SqrtMap,
    Table,
    example_measure,
    profile_sum,
)
from nonadd.setalg import OMEGA, Ground, Partition, TaggedPartition, UPSet

EVENS = UPSet((), (True, False))
ODDS = UPSet((), (False, True))
HALF = PointMass.geometric(F(1, 2), F(1, 2))
ONE = FuncSpec.constant(OMEGA, 1)


def tagged(blocks, tail=False):
    P = Partition.make(OMEGA, blocks, singleton_tail=tail)
    return TaggedPartition(P, P.default_tags())


# -- tagged sums ----------------------------------------------------------------


def test_sigma_counts_infinite_blocks():
    TP = tagged([UPSet.residue(r, 3) for r in range(3)])
    assert sigma_sum(ONE, TP, example_measure()).value == (3,)
    singles = TaggedPartition(Partition.singletons(OMEGA), ())
    assert sigma_sum(ONE, singles, example_measure()).value == (0,)


def test_sigma_constant_pointmass():
    c = FuncSpec.constant(OMEGA, F(5, 2))
    for blocks in ([UPSet.full()], [EVENS, ODDS], [UPSet.finite([0, 3]), ~UPSet.finite([0, 3])]):
        assert sigma_sum(c, tagged(blocks), HALF).value == (F(5, 2),)


def test_sigma_tail_divergence():
    m = CardinalityClass(OMEGA, (F(0), F(1)), F(1))
    with pytest.raises(TailDivergent):
        sigma_sum(ONE, tagged([UPSet.finite([0])], tail=True), m)


# -- Riemann-Lebesgue and Birkhoff simple ----------------------------------------


def test_rl_examples():
    v = rl_integrate(ONE, example_measure())
    assert v.status == VALUE and v.value == (0,) and v.radius == 0
    assert rl_integrate(FuncSpec.zero(OMEGA), HALF).value == (0,)
    assert rl_integrate(FuncSpec.indicator(OMEGA, EVENS), HALF).value == (F(2, 3),)
    assert rl_integrate(ONE, HALF, EVENS).value == (F(2, 3),)


def test_rl_divergent_series():
    m = CardinalityClass(OMEGA, (F(0), F(1)), F(1))
    v = rl_integrate(ONE, m)
    assert v.status == DIVERGENT and not v.abs_convergent
    sigmas = [s.sigma[0] for s in v.certificate]
    assert sigmas == list(range(1, len(sigmas) + 1))
    # a cycle that cancels still diverges absolutely
    alt = FuncSpec.periodic([], [[1], [-1]])
    assert rl_integrate(alt, m).status == DIVERGENT
    with pytest.raises(NotIntegrable):
        indefinite(ONE, m)


def test_bs_examples():
    assert birkhoff_simple(ONE, example_measure()).value == (0,)
    assert birkhoff_simple(FuncSpec.zero(OMEGA), HALF).value == (0,)
    alt = FuncSpec.periodic([], [[1], [-1]])
    b = birkhoff_simple(alt, HALF)
    assert b.status == VALUE and b.value == (F(1, 3),) == rl_integrate(alt, HALF).value


def test_finite_ground_rl():
    m = Table.from_function(3, lambda A: F(bin(A).count("1")) ** 2)
    f = FuncSpec.table([[1, 0], [2, 1], [3, -1]])
    assert rl_integrate(f, m).value == (6, 0)
    assert rl_integrate(f, m, 0b110).value == (5, 0)


# -- Gould ------------------------------------------------------------------------


def test_gould_counterexample():
    v = gould_integrate(ONE, example_measure())
    assert v.status == DIVERGENT
    sigmas = [s.sigma[0] for s in v.certificate]
    assert len(sigmas) >= 11 and sigmas == list(range(1, len(sigmas) + 1))
    assert all(s.partition.is_finite for s in v.certificate)
    assert replay_certificate(ONE, example_measure(), v)


def test_gould_pointmass_and_zero():
    v = gould_integrate(ONE, HALF)
    assert v.status == VALUE and v.value == (1,)
    for m in (HALF, example_measure(), Distortion(SqrtMap(), HALF)):
        z = gould_integrate(FuncSpec.zero(OMEGA, 2), m)
        assert z.status == VALUE and z.value == (0, 0)


def test_gould_sqrt_distortion_matches_series():
    m = Distortion(SqrtMap(), PointMass.geometric(F(1, 4), F(1, 4)))
    f = FuncSpec.periodic([[3]], [[1], [-1]])
    v = gould_integrate(f, m, Budget(depth=6, chains=8))
    # singleton weights are 2^-(n+1): 3/2 + sum_{n>=1} (-1)^(n+1) 2^-(n+1)
    expected = F(3, 2) + F(1, 4) / (1 + F(1, 2))
    assert v.status == VALUE
    assert abs(v.value[0] - expected) <= v.radius + 1e-12


def test_gould_finite_ground_is_singleton_sum():
    m = Table.from_function(3, lambda A: F(bin(A).count("1")) ** 2)
    f = FuncSpec.table([[1], [2], [3]])
    assert gould_integrate(f, m).value == rl_integrate(f, m).value == (6,)


def test_gould_deterministic_under_seed():
    m = CardinalityClass(OMEGA, (F(0), F(0), F(1)), F(2))
    f = FuncSpec.periodic([], [[1], [0], [2]])
    a = gould_integrate(f, m, Budget(depth=5, chains=6), seed=3)
    b = gould_integrate(f, m, Budget(depth=5, chains=6), seed=3)
    assert a == b
    assert a.status in (VALUE, DIVERGENT, UNKNOWN)


def test_replay_rejects_tampering():
    v = gould_integrate(ONE, example_measure())
    steps = list(v.certificate)
    steps[3] = replace(steps[3], sigma=(F(99),))
    assert not replay_certificate(ONE, example_measure(), replace(v, certificate=tuple(steps)))
    swapped = replace(v, certificate=(v.certificate[2], v.certificate[1]))
    assert not replay_certificate(ONE, example_measure(), swapped)


def test_budget_parsing(monkeypatch):
    assert Budget.parse("depth=4,chains=2") == Budget(4, 2, 8)
    with pytest.raises(ValueError):
        Budget.parse("width=3")
    with pytest.raises(ValueError):
        Budget.parse("depth=0")
    monkeypatch.setenv("NONADD_BUDGET", "chains=5")
    assert Budget.from_env() == Budget(chains=5)


# -- indefinite integral ----------------------------------------------------------


def test_indefinite_examples():
    I = indefinite(ONE, HALF)
    assert I.value(UPSet.empty()) == (0,)
    assert I.value(EVENS) == (F(2, 3),)
    assert I.value(ODDS) == (F(1, 3),)
    assert I.value(EVENS)[0] + I.value(ODDS)[0] == I.value(UPSet.full())[0] == 1
    J = indefinite(ONE, example_measure())
    for A in (EVENS, UPSet.finite([2, 4]), UPSet.full(), UPSet.residue(1, 5)):
        assert J.value(A) == (0,)


# -- algebra and linearity ----------------------------------------------------------


vecs = st.lists(st.fractions(-5, 5, max_denominator=4), min_size=2, max_size=2)
omega_funcs = st.builds(
    lambda pre, cyc: FuncSpec.periodic(pre, cyc),
    st.lists(vecs, max_size=3), st.lists(vecs, min_size=1, max_size=4),
)
omega_sets = st.builds(lambda pre, cyc: UPSet(tuple(pre), tuple(cyc)),
                       st.lists(st.booleans(), max_size=4), st.lists(st.booleans(), min_size=1, max_size=4))
scalars = st.fractions(-4, 4, max_denominator=3)


@given(omega_funcs, omega_funcs)
def test_func_algebra_pointwise(f, g):
    zero = FuncSpec.zero(OMEGA, 2)
    for n in range(50):
        assert (f + zero)(n) == f(n)
        assert (f + g)(n) == tuple(a + b for a, b in zip(f(n), g(n)))
        assert f.chi(UPSet.empty())(n) == (0, 0)


@given(omega_funcs, omega_funcs, scalars, scalars, omega_sets)
@settings(max_examples=60)
def test_linearity_and_restriction_exact(f, g, a, b, A):
    m = PointMass.geometric(F(1, 3), F(2, 3), [F(1), F(0), F(1, 2)])
    lhs = rl_integrate(f.scale(a) + g.scale(b), m).value
    If, Ig = rl_integrate(f, m).value, rl_integrate(g, m).value
    assert lhs == tuple(a * x + b * y for x, y in zip(If, Ig))
    assert rl_integrate(f, m, A).value == rl_integrate(f.chi(A), m).value
    B = ~A
    whole = rl_integrate(f, m).value
    parts = [rl_integrate(f, m, S).value for S in (A, B)]
    assert whole == tuple(x + y for x, y in zip(*parts))


@given(omega_funcs)
@settings(max_examples=40)
def test_closed_form_matches_truncated_series(f):
    m = PointMass.geometric(F(1, 2), F(1, 2), [F(1, 3)])
    value = rl_integrate(f, m).value
    partial = [sum((m.singleton(n) * f(n)[i] for n in range(80)), F(0)) for i in range(2)]
    tail = f.sup_norm() * m.profile().tail_mass(80)
    assert all(abs(v - p) <= tail for v, p in zip(value, partial))


def test_profile_sum_radius_for_floats():
    m = Distortion(SqrtMap(), PointMass.geometric(F(1, 3), F(1, 2)))
    (v,), r = profile_sum(m.profile(), 1, 0, 1, lambda n: (F(1),))
    direct = math.fsum(math.sqrt(1 / 3 * 0.5 ** n) for n in range(200))
    assert abs(v - direct) <= r + 1e-15
    assert r > 0
