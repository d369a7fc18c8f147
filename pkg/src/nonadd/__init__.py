"""Partition-net integrals (Riemann-Lebesgue, Birkhoff simple, Gould) for non-additive set functions."""

from .funcs import FuncSpec
from .integrals import (
    Budget,
    IntegralVerdict,
    NotIntegrable,
    birkhoff_simple,
    gould_integrate,
    indefinite,
    replay_certificate,
    rl_integrate,
    sigma_sum,
)
from .measures import (
    CardinalityClass,
    Distortion,
    PiecewiseLinear,
    PointMass,
    Scale,
    SqrtMap,
    Sum,
    Table,
    ae_zero_set,
    atoms,
    check_properties,
    example_measure,
    is_atom,
    mtilde,
    variation,
)
from .setalg import OMEGA, Ground, Partition, TaggedPartition, UPSet, parse_set

__version__ = "0.1.0"
