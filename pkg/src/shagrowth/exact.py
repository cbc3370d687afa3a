"""Exact rational helpers and the value-or-interval type used for local contributions."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction, or "n/d" / decimal-integer string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    try:
        # integer-likes from gmpy2/sympy (mpz, Integer) expose __index__
        return Fraction(operator.index(x))
    except TypeError:
        pass
    raise TypeError(f"cannot read {x!r} as an exact rational")


def format_fraction(q: Rational) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def qvaluation(q: Rational, p: int) -> int:
    q = Fraction(q)
    return valuation(q.numerator, p) - valuation(q.denominator, p)


@dataclass(frozen=True)
class ExactOrInterval:
    """A rational value, possibly known only up to +-halfwidth.

    Intervals add by adding centers and halfwidths; scaling by a rational
    scales both (halfwidth by the absolute value).
    """

    center: Fraction
    halfwidth: Fraction = Fraction(0)
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "halfwidth", Fraction(self.halfwidth))
        if self.halfwidth < 0:
            raise ValueError("negative halfwidth")

    @classmethod
    def exact(cls, value: Rational, note: str = "") -> "ExactOrInterval":
        return cls(Fraction(value), Fraction(0), note)

    @classmethod
    def hull(cls, lo: Rational, hi: Rational, note: str = "") -> "ExactOrInterval":
        lo, hi = Fraction(lo), Fraction(hi)
        if hi < lo:
            lo, hi = hi, lo
        return cls((lo + hi) / 2, (hi - lo) / 2, note)

    @property
    def is_exact(self) -> bool:
        return self.halfwidth == 0

    @property
    def lo(self) -> Fraction:
        return self.center - self.halfwidth

    @property
    def hi(self) -> Fraction:
        return self.center + self.halfwidth

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError(f"interval value [{self.lo}, {self.hi}] is not exact")
        return self.center

    def contains(self, x: Rational) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def _join_notes(self, other: "ExactOrInterval") -> str:
        notes = [n for n in (self.note, other.note) if n]
        return "; ".join(dict.fromkeys(notes))

    def __add__(self, other):
        if not isinstance(other, ExactOrInterval):
            other = ExactOrInterval.exact(other)
        return ExactOrInterval(self.center + other.center, self.halfwidth + other.halfwidth,
                               self._join_notes(other))

    __radd__ = __add__

    def __neg__(self):
        return ExactOrInterval(-self.center, self.halfwidth, self.note)

    def __sub__(self, other):
        if not isinstance(other, ExactOrInterval):
            other = ExactOrInterval.exact(other)
        return self + (-other)

    def scale(self, k: Rational) -> "ExactOrInterval":
        k = Fraction(k)
        return ExactOrInterval(self.center * k, self.halfwidth * abs(k), self.note)

    def widen(self, amount: Rational, note: str = "") -> "ExactOrInterval":
        notes = "; ".join(n for n in (self.note, note) if n)
        return ExactOrInterval(self.center, self.halfwidth + Fraction(amount), notes)

    def to_json(self) -> dict:
        d = {"center": format_fraction(self.center), "halfwidth": format_fraction(self.halfwidth)}
        if self.note:
            d["note"] = self.note
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExactOrInterval":
        return cls(to_fraction(d["center"]), to_fraction(d["halfwidth"]), d.get("note", ""))

    def __str__(self):
        if self.is_exact:
            return format_fraction(self.center)
        return f"{format_fraction(self.center)} +- {format_fraction(self.halfwidth)}"


ZERO = ExactOrInterval.exact(0)
