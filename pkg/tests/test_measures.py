from fractions import Fraction as F
import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from nonadd.funcs import FuncSpec
from nonadd.measures import (
    PROPERTIES,
    PROVED,
    REFUTED,
    CardinalityClass,
    Distortion,
    MeasureError,
    PiecewiseLinear,
    PointMass,
    Scale,
    SqrtMap,
    Sum,
    Table,
    UnsupportedFamily,
    UnsupportedGround,
    ae_zero_set,
    atoms,
    check_properties,
    eval_measure,
    example_measure,
    is_atom,
    mtilde,
    recheck_witness,
    value_table,
    variation,
)
from nonadd.setalg import OMEGA, Ground, UPSet, partitions_of_mask, submasks

EVENS = UPSet((), (True, False))
ODDS = UPSet((), (False, True))


def brute_variation(vals, E):
    """Max of sum m(A_i) over all disjoint families inside E, by enumeration."""
    best = F(0)
    for S in submasks(E):
        for blocks in partitions_of_mask(S):
            best = max(best, sum((vals[b] for b in blocks), F(0)))
    return best


def rand_table(rng, n, hi=10):
    return Table(Ground.finite(n), tuple([F(0)] + [F(rng.randint(0, hi), rng.randint(1, 4))
                                                   for _ in range((1 << n) - 1)]))


tables = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.fractions(0, 10, max_denominator=6), min_size=(1 << n) - 1,
                       max_size=(1 << n) - 1).map(lambda v: Table(Ground.finite(n), (F(0),) + tuple(v))))


# -- evaluation ---------------------------------------------------------------


def test_eval_examples():
    assert eval_measure(example_measure(), EVENS).value == 1
    assert eval_measure(example_measure(), UPSet.finite([0, 5])).value == 0
    assert eval_measure(PointMass.geometric(F(1, 2), F(1, 2)), UPSet.full()).value == 1
    for m in (example_measure(), PointMass.geometric(F(1, 2), F(1, 2)),
              Table.from_function(3, lambda A: F(bin(A).count("1")))):
        assert eval_measure(m, m.ground.empty()).value == 0


def test_pointmass_evens():
    m = PointMass.geometric(F(1, 2), F(1, 2))
    assert m(EVENS) == F(2, 3)
    assert m(ODDS) == F(1, 3)
    assert m(UPSet.finite([0, 1])) == F(3, 4)


def test_distortion_sqrt_is_float_with_radius():
    m = Distortion(SqrtMap(), PointMass.geometric(F(1, 4), F(1, 4)))
    v, r = m.evaluate(UPSet.full())
    assert math.isclose(v, math.sqrt(1 / 3), rel_tol=1e-14)
    assert 0 < r < 1e-12
    # perfect squares stay exact
    exact = Distortion(SqrtMap(), PointMass.finite([F(1, 4), F(0)]))
    assert exact(1) == F(1, 2)


def test_piecewise_validation():
    with pytest.raises(ValueError):
        PiecewiseLinear((F(1),), (F(1), F(2)))  # not concave
    with pytest.raises(ValueError):
        PiecewiseLinear((F(1), F(1, 2)), (F(3), F(2), F(1)))  # breaks out of order
    g = PiecewiseLinear((F(1, 2),), (F(2), F(1)))
    assert g(F(1, 4))[0] == F(1, 2)
    assert g(F(1))[0] == F(3, 2)


def test_invalid_measures_rejected():
    with pytest.raises(MeasureError):
        Table(Ground.finite(2), (F(1), F(0), F(0), F(0)))
    with pytest.raises(MeasureError):
        PointMass.finite([F(-1)])
    with pytest.raises(MeasureError):
        PointMass.geometric(F(1), F(1))


# -- variation ----------------------------------------------------------------


def test_variation_worked_values():
    assert variation(PointMass.finite([1, 2, 3])).value == 6
    assert variation(Table.from_function(4, lambda A: F(bin(A).count("1")) ** 2)).value == 16
    roots = [F(0), F(1), F(1414, 1000), F(1732, 1000), F(2)]
    assert variation(Table.from_function(4, lambda A: roots[bin(A).count("1")])).value == 4


def test_variation_omega_rules():
    assert variation(example_measure()).is_infinite
    assert variation(example_measure(), UPSet.finite(range(7))).value == 0
    assert variation(PointMass.geometric(F(1, 2), F(1, 2)), EVENS).value == F(2, 3)
    m = Distortion(SqrtMap(), PointMass.geometric(F(1, 4), F(1, 4)))
    # singletons have sqrt weights 2^-(n+1)
    assert variation(m).value == 1
    card = CardinalityClass(OMEGA, (F(0), F(1), F(3, 2)), F(0))
    assert variation(card).is_infinite
    assert variation(card, UPSet.finite(range(4))).value == 4
    assert variation(Scale(F(3), PointMass.geometric(F(1, 2), F(1, 2)))).value == 3
    with pytest.raises(UnsupportedFamily):
        variation(Sum(CardinalityClass(OMEGA, (F(0), F(1), F(3))), PointMass.geometric(F(1), F(1, 2))),
                  UPSet.finite([0, 1]))


@given(tables)
@settings(max_examples=80)
def test_dp_matches_enumeration(m):
    vals, _ = value_table(m)
    full = (1 << m.ground.n) - 1
    for E in range(full + 1):
        assert variation(m, E).value == brute_variation(vals, E)


def test_dp_matches_enumeration_n5():
    rng = random.Random(5)
    for _ in range(3):
        m = rand_table(rng, 5)
        vals, _ = value_table(m)
        assert variation(m).value == brute_variation(vals, 31)


@given(tables)
@settings(max_examples=60)
def test_variation_monotone_superadditive_dominating(m):
    full = (1 << m.ground.n) - 1
    var = [variation(m, E).value for E in range(full + 1)]
    vals, _ = value_table(m)
    for E in range(full + 1):
        assert var[E] >= vals[E]
        for A in submasks(E):
            assert var[A] <= var[E]
            assert var[A] + var[E ^ A] <= var[E]


@given(tables)
@settings(max_examples=40)
def test_mtilde_is_inf_over_supersets(m):
    full = (1 << m.ground.n) - 1
    for A in range(full + 1):
        sups = [variation(m, B).value for B in range(full + 1) if B & A == A]
        assert mtilde(m, A).value == min(sups)


def test_mtilde_finite_sets_example_measure():
    assert mtilde(example_measure(), UPSet.empty()).value == 0
    assert mtilde(example_measure(), UPSet.finite([1, 2, 40])).value == 0


# -- atoms and a.e. -------------------------------------------------------------


def test_atom_examples():
    point = Table.from_function(3, lambda A: F(1) if A & 0b100 else F(0))
    assert is_atom(point, 0b100)
    zero_at = Table.from_function(3, lambda A: F(1) if A & 1 else F(0))
    assert is_atom(zero_at, 0b111)
    assert not any(is_atom(Table.from_function(3, lambda A: F(0)), A) for A in range(8))
    assert atoms(PointMass.finite([1, 0, 2])) == [0b001, 0b011, 0b100, 0b110]
    with pytest.raises(UnsupportedGround):
        is_atom(example_measure(), EVENS)


def test_ae_examples():
    assert ae_zero_set(FuncSpec.zero(OMEGA), example_measure()).holds
    ind = FuncSpec.indicator(OMEGA, UPSet.finite([0, 1]))
    assert ae_zero_set(ind, example_measure()).holds
    res = ae_zero_set(FuncSpec.indicator(OMEGA, EVENS), PointMass.geometric(F(1, 2), F(1, 2)))
    assert not res.holds and res.mtilde.value == F(2, 3) and res.support == EVENS


# -- property lattice -----------------------------------------------------------


def test_property_examples():
    bad = Table.from_function(3, lambda A: F(2) if A == 0b001 else F(bin(A).count("1") > 0))
    rep = check_properties(bad)
    assert rep["monotone"].status == REFUTED
    assert rep["monotone"].witness.sets == (0b001, 0b011)
    pm = check_properties(PointMass.geometric(F(1, 2), F(1, 2)))
    assert pm.proved("sigma_additive", "submeasure")
    ex = check_properties(example_measure())
    assert ex.proved("monotone", "subadditive", "null_additive", "submeasure")
    assert ex["finitely_additive"].status == REFUTED
    A, B = ex["finitely_additive"].witness.sets
    assert A.isdisjoint(B) and not (A | B).is_finite()


def _witnesses_recheck(m):
    rep = check_properties(m)
    for name in PROPERTIES:
        v = rep[name]
        if v.status == REFUTED and v.witness is not None and name != "submeasure":
            assert recheck_witness(m, name, v.witness), name
    return rep


@given(tables)
@settings(max_examples=60)
def test_finite_witnesses_recheck(m):
    rep = _witnesses_recheck(m)
    # on a finite ground every verdict is decided
    assert all(rep[p].status in (PROVED, REFUTED) for p in PROPERTIES)


@pytest.mark.parametrize("m", [
    example_measure(),
    CardinalityClass(OMEGA, (F(0), F(1), F(3))),
    CardinalityClass(OMEGA, (F(0), F(2), F(1)), F(1, 2)),
    Distortion(PiecewiseLinear((F(1, 8),), (F(2), F(1, 2))), PointMass.geometric(F(1, 2), F(1, 2))),
    Sum(PointMass.geometric(F(1, 3), F(1, 3)), example_measure()),
])
def test_omega_witnesses_recheck(m):
    _witnesses_recheck(m)


def test_finite_properties_match_definitions():
    rng = random.Random(11)
    for _ in range(30):
        m = rand_table(rng, 3, hi=3)
        vals, _ = value_table(m)
        rep = check_properties(m)
        mono = all(vals[A] <= vals[B] for B in range(8) for A in submasks(B))
        sub = all(vals[A | B] <= vals[A] + vals[B] for A in range(8) for B in range(8) if not A & B)
        add = all(vals[A | B] == vals[A] + vals[B] for A in range(8) for B in range(8) if not A & B)
        assert (rep["monotone"].status == PROVED) == mono
        assert (rep["subadditive"].status == PROVED) == sub
        assert (rep["finitely_additive"].status == PROVED) == add


# -- variation of subadditive and additive tables ---------------------------------


def _subadditive(rng, n):
    vals = [F(0)] + [F(rng.randint(0, 9), rng.randint(1, 3)) for _ in range((1 << n) - 1)]
    for S in range(1, 1 << n):
        for A in submasks(S):
            if A and A != S:
                vals[S] = min(vals[S], vals[A] + vals[S ^ A])
    return Table(Ground.finite(n), tuple(vals))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_variation_of_subadditive_is_additive(n):
    rng = random.Random(n)
    for _ in range(3 if n == 6 else 10):
        m = _subadditive(rng, n)
        full = (1 << n) - 1
        var = [variation(m, E).value for E in range(full + 1)]
        for A in range(full + 1):
            rest = full ^ A
            for B in submasks(rest):
                assert var[A | B] == var[A] + var[B]


def test_variation_of_additive_is_identity():
    rng = random.Random(3)
    for n in (1, 3, 6):
        m = PointMass.finite([F(rng.randint(0, 9), rng.randint(1, 5)) for _ in range(n)])
        vals, _ = value_table(m)
        assert all(variation(m, E).value == vals[E] for E in range(1 << n))
