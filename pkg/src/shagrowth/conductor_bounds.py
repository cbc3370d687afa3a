"""Conductor arithmetic for inertia representations and elliptic curves under base change.

Representations are never constructed. An irreducible representation of the
inertia group is summarised by its dimension, conductor exponent f and break
m = f/dim - 1 (the last upper-numbering index at which it is nontrivial).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import to_fraction

STABILIZATION_NOTE = ("conductor exponents agree over an extension and over its Galois closure, "
                      "so the bound is stable along the tower")


@dataclass(frozen=True)
class InertiaRepDatum:
    dim: int
    f: Fraction
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "f", to_fraction(self.f))
        object.__setattr__(self, "m", to_fraction(self.m))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.is_trivial:
            if self.f != 0:
                raise ValueError("the trivial character has conductor exponent 0")
        elif self.f < self.dim:
            raise ValueError(f"nontrivial datum needs f >= dim, got f={self.f}, dim={self.dim}")
        elif self.m != self.f / self.dim - 1:
            raise ValueError("break must equal f/dim - 1")

    @property
    def is_trivial(self) -> bool:
        return self.m == -1

    @classmethod
    def from_conductor(cls, f, dim: int) -> "InertiaRepDatum":
        return cls(dim, to_fraction(f), m_from_f(f, dim))

    @classmethod
    def trivial(cls) -> "InertiaRepDatum":
        return cls(1, Fraction(0), Fraction(-1))


@dataclass(frozen=True)
class ConductorValue:
    value: Fraction
    exact: bool

    def __str__(self):
        return f"{'=' if self.exact else '<='} {self.value}"


def m_from_f(f, dim: int, trivial: bool = False) -> Fraction:
    f = to_fraction(f)
    if dim < 1:
        raise ValueError("dimension must be positive")
    if trivial or f == 0:
        if f != 0:
            raise ValueError("the trivial character has conductor exponent 0")
        return Fraction(-1)
    if f < dim:
        raise ValueError(f"invalid conductor exponent {f} for a nontrivial datum of dimension {dim}")
    return f / dim - 1


def f_from_m(m, dim: int) -> Fraction:
    return dim * (to_fraction(m) + 1)


def tensor_conductor(rho: InertiaRepDatum, chi: InertiaRepDatum) -> ConductorValue:
    """Conductor exponent of rho (x) chi: exact when the breaks differ, an upper bound when equal."""
    if rho.m > chi.m:
        rho, chi = chi, rho
    value = chi.f * rho.dim
    return ConductorValue(value, rho.m < chi.m)


def base_change_conductor_bound(f_base, e_upper: int) -> Fraction:
    """Upper bound e(f - 2) + 2 for the conductor exponent of an additive curve after ramification e."""
    f_base = to_fraction(f_base)
    if f_base < 2:
        raise ValueError("the bound applies to additive reduction (conductor exponent >= 2)")
    if e_upper < 1:
        raise ValueError("ramification degree must be positive")
    return e_upper * (f_base - 2) + 2


def additive_conductor_ceiling(l: int, v: int = 1) -> int:
    """Largest conductor exponent of an elliptic curve over an extension of Q_l with v = v_K(l)."""
    if l >= 5:
        return 2
    if l == 3:
        return 3 * v + 2
    if l == 2:
        return 6 * v + 2
    raise ValueError("l must be prime")


def tower_conductor_ceiling(l: int, v_l_of_l: int = 1, e_stable: int = 1) -> Fraction:
    if v_l_of_l < 1 or e_stable < 1:
        raise ValueError("inputs must be positive")
    return base_change_conductor_bound(additive_conductor_ceiling(l, v_l_of_l), e_stable)


def epsilon_bound_two_adic(f_base, e_stable: int, r=None) -> Fraction:
    """Bound (r e + 1)/2 on the error term at residue characteristic 2.

    Any r > f/2 - 1 is admissible; with r omitted the infimum over admissible r
    is returned, which equals base_change_conductor_bound(f, e)/4.
    """
    f_base = to_fraction(f_base)
    r_min = f_base / 2 - 1
    if r is None:
        r = max(r_min, Fraction(0))
    else:
        r = to_fraction(r)
        if r <= r_min:
            raise ValueError(f"r must exceed f/2 - 1 = {r_min}")
    return (r * e_stable + 1) / 2
