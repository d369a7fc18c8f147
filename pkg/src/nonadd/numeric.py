"""Scalar and vector helpers shared by the measure and integral engines.

Values are kept as :class:`fractions.Fraction` whenever the computation is
exact.  Irrational quantities (square roots that are not perfect squares)
fall back to ``float`` and callers carry an explicit rounding radius.
"""

from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float]
Vector = tuple

EPS = sys.float_info.epsilon
INF = math.inf

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def as_scalar(x) -> Scalar:
    """Coerce a literal to a scalar.

    Accepts ints, Fractions, floats, strings such as ``"3/4"`` and the
    serialized ``{"num": .., "den": ..}`` form.  Floats stay floats unless
    they are integral.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isfinite(x) and x == int(x):
            return Fraction(int(x))
        return x
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "+inf", "infinity"):
            return INF
        match = _RATIONAL_RE.match(x)
        if match:
            return Fraction(int(match.group(1)), int(match.group(2) or 1))
        return Fraction(x)
    if isinstance(x, dict) and "num" in x and "den" in x:
        return Fraction(int(x["num"]), int(x["den"]))
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def as_vector(x) -> Vector:
    if isinstance(x, (list, tuple)):
        return tuple(as_scalar(v) for v in x)
    return (as_scalar(x),)


def is_exact(x) -> bool:
    return isinstance(x, Fraction)


def vec_is_exact(v: Iterable) -> bool:
    return all(isinstance(x, Fraction) for x in v)


def zero(dim: int) -> Vector:
    return (Fraction(0),) * dim


def vadd(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(alpha, a: Sequence) -> Vector:
    return tuple(alpha * x for x in a)


def norm(a: Sequence) -> Scalar:
    """Max-norm; exact on rational vectors."""
    return max((abs(x) for x in a), default=Fraction(0))


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def fsqrt(x: Scalar) -> tuple[Scalar, float]:
    """Square root with a rounding radius (0 when the result is exact)."""
    if x < 0:
        raise ValueError("square root of a negative number")
    if isinstance(x, Fraction):
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd), 0.0
        x = float(x)
    root = math.sqrt(x)
    return root, 2 * EPS * root


def rounding(value: Scalar) -> float:
    """Radius contributed by one float operation producing ``value``."""
    if isinstance(value, Fraction) or value == INF:
        return 0.0
    return EPS * abs(value)


def scalar_json(x):
    """Serialize a scalar: rationals keep numerator and denominator."""
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "decimal": decimal_str(x)}
    if x == INF:
        return "inf"
    return float(x)


def decimal_str(x: Fraction, digits: int = 15) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return format(float(x), f".{digits}g")


def vector_json(v: Sequence):
    return [scalar_json(x) for x in v]


def scalar_str(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if x == INF:
        return "inf"
    return repr(float(x))
