"""JSON encoding for mixed exact/float probability values.

Exact rationals travel as strings like "3/4" so that round-trips never
lose precision; floats and ints stay native JSON numbers.
"""

from __future__ import annotations

from fractions import Fraction

Number = int | float | Fraction


def to_jsonable(value: Number):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, float)):
        return value
    raise TypeError(f"unsupported numeric type {type(value)!r}")


def from_jsonable(value) -> Number:
    if isinstance(value, bool):
        raise ValueError("booleans are not probabilities")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {value!r}") from exc
    raise ValueError(f"unsupported JSON number {value!r}")


def is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)
