"""Exact nonnegative rationals with a single point at infinity.

Every quantity in this package is either an arbitrary-size integer or an
exact rational; nothing is ever rounded.  Targets such as the comparison
radius may be infinite, so the CLI-facing value type is a nonnegative
``Fraction`` extended with ``inf``.  The accepted text forms are ``"p/q"``,
``"p"``, and ``"inf"``; serialized rationals are ``{"num": "...", "den":
"..."}`` with decimal-string components, and serialized integers are plain
decimal strings, so documents survive readers with bounded int types.

>>> ExtendedRational.parse("3/4") < ExtendedRational.parse("inf")
True
>>> str(ExtendedRational.parse("6/8"))
'3/4'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a nonnegative ``Fraction``.

    >>> parse_fraction("9/10")
    Fraction(9, 10)
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
    if value < 0:
        raise ValueError(f"negative rational not allowed: {text!r}")
    return value


def fraction_to_json(value: Fraction) -> dict[str, str]:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def fraction_from_json(obj: Any) -> Fraction:
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise ValueError(f"malformed rational object: {obj!r}")
    num, den = int(obj["num"]), int(obj["den"])
    if den <= 0 or num < 0:
        raise ValueError(f"malformed rational object: {obj!r}")
    value = Fraction(num, den)
    if (value.numerator, value.denominator) != (num, den):
        raise ValueError(f"rational not in lowest terms: {obj!r}")
    return value


def ints_to_json(values) -> list[str]:
    return [str(v) for v in values]


def ints_from_json(values) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


@dataclass(frozen=True)
class ExtendedRational:
    """A nonnegative rational or infinity, totally ordered.

    The wrapped value is ``None`` exactly when the quantity is infinite;
    ``finite_value`` refuses to unwrap an infinite instance, so arithmetic
    can never silently treat ``inf`` as a number.
    """

    _value: Fraction | None

    def __post_init__(self) -> None:
        if self._value is not None and self._value < 0:
            raise ValueError("ExtendedRational must be nonnegative")

    @classmethod
    def finite(cls, value: Fraction | int) -> "ExtendedRational":
        return cls(Fraction(value))

    @classmethod
    def infinite(cls) -> "ExtendedRational":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "ExtendedRational":
        if text.strip() == "inf":
            return cls.infinite()
        return cls(parse_fraction(text))

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def finite_value(self) -> Fraction:
        if self._value is None:
            raise ValueError("value is infinite")
        return self._value

    def __str__(self) -> str:
        return "inf" if self._value is None else str(self._value)

    def __lt__(self, other: "ExtendedRational") -> bool:
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __le__(self, other: "ExtendedRational") -> bool:
        return self == other or self < other

    def __gt__(self, other: "ExtendedRational") -> bool:
        return other < self

    def __ge__(self, other: "ExtendedRational") -> bool:
        return other <= self

    def to_json(self) -> Any:
        return "inf" if self._value is None else fraction_to_json(self._value)

    @classmethod
    def from_json(cls, obj: Any) -> "ExtendedRational":
        if obj == "inf":
            return cls.infinite()
        return cls(fraction_from_json(obj))
