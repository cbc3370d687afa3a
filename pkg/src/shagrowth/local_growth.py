"""Local contributions to Selmer growth at one place of one layer.

For an isogeny E -> E' over Q_q and a finite extension F of ramification
degree e and residue degree f, this module computes

* the discriminant valuation of the minimal model over F,
* Omega_phi(F), the normalised valuation of the double quotient of minimal
  differentials of E and E' over Q_q and over F,
* the p-adic valuation of the Tamagawa quotient c(E'/F)/c(E/F),

and combines them into the exponent of the local factor gamma_w.

Whenever only bounds are known the result is an ExactOrInterval whose centre is
the term linear in e and whose half-width is the proven error bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, prod
from typing import Optional

from .conductor_bounds import base_change_conductor_bound, epsilon_bound_two_adic
from .curves import (GOOD, NONSPLIT, POT_MULTIPLICATIVE, POT_ORDINARY, POT_SUPERSINGULAR, SPLIT,
                     LocalReductionData, tamagawa_unramified)
from .exact import ZERO, ExactOrInterval, qvaluation, valuation
from .tower import Profile


class InvalidDiscriminantError(ValueError):
    pass


# Kodaira type of a tame curve, read off from its discriminant valuation
_TAME_TYPE = {0: "I0", 2: "II", 3: "III", 4: "IV", 6: "I*", 8: "IV*", 9: "III*", 10: "II*"}
# possible Tamagawa numbers of each potentially good type
_TAMAGAWA_CHOICES = {"I0": (1,), "II": (1,), "III": (2,), "IV": (1, 3), "I*": (1, 2, 4),
                     "IV*": (1, 3), "III*": (2,), "II*": (1,)}

ALTERNATION_NOTE = ("wild potentially supersingular reduction: the Tamagawa quotient need not "
                    "stabilise and may alternate with period 2 along the tower")
STABILIZATION_NOTE = "Tamagawa quotient stabilises along the tower; stable value not computed"


def _frac_part(x: Fraction) -> Fraction:
    return x - floor(x)


def _window_representative(residue: int, lo: int, width: int = 9) -> int:
    """The unique integer in [lo, lo + width) congruent to residue mod 12 (width <= 12)."""
    x = lo + (residue - lo) % 12
    if x >= lo + width:
        raise InvalidDiscriminantError(f"no value = {residue} mod 12 in [{lo}, {lo + width - 1}]")
    return x


def discriminant_base_change(delta: int, eth: Optional[int], e: int, curve_tame: bool,
                             ext_tame: bool, p: int, *, semistable: bool = False,
                             conductor_F: Optional[int] = None,
                             conductor_base: Optional[int] = None) -> ExactOrInterval:
    """Valuation of the minimal discriminant over an extension with ramification degree e.

    Potentially good additive input is assumed. For wild curves at p = 3 the
    conductor exponent over F, when known, pins the value through Ogg's formula
    (it lies in [f_F, f_F + 8]); without it every value congruent to e*delta mod 12
    below the conductor ceiling is possible, and the hull of those is returned.
    """
    if e < 1:
        raise ValueError("ramification degree must be positive")
    if delta < 0:
        raise InvalidDiscriminantError("discriminant valuation must be non-negative")
    if e == 1:
        return ExactOrInterval.exact(delta)
    if semistable:
        return ExactOrInterval.exact(e * delta)
    if curve_tame:
        if delta >= 12:
            raise InvalidDiscriminantError(
                f"delta={delta}: a tame curve with potentially good reduction has delta < 12")
        return ExactOrInterval.exact((e * delta) % 12)
    if ext_tame:
        if eth is None:
            raise ValueError("the type invariant is needed for a tamely ramified extension")
        return ExactOrInterval.exact(e * delta - 12 * ((e * eth) // 12))
    if p == 3:
        if conductor_F is not None:
            return ExactOrInterval.exact(_window_representative(e * delta, conductor_F))
        # without the conductor over F only delta_F <= f_F + 8 <= f_max + 8 is known
        f_max = base_change_conductor_bound(conductor_base if conductor_base else 5, e)
        candidates = range((e * delta) % 12, int(f_max) + 9, 12)
        if len(candidates) == 1:
            return ExactOrInterval.exact(candidates[0])
        return ExactOrInterval.hull(candidates[0], candidates[-1],
                                    note="wild at 3: conductor over F needed to pick the representative")
    if p == 2:
        f_max = base_change_conductor_bound(conductor_base if conductor_base else 8, e)
        return ExactOrInterval.hull(0, max(4 * f_max, f_max + 8),
                                    note="wild at 2: bounded via Ogg's formula and the conductor bound")
    raise InvalidDiscriminantError(f"wild reduction is impossible at residue characteristic {p}")


def _omega_from_discriminants(delta, delta2, dF, dF2, e) -> Fraction:
    return Fraction(e * (delta2 - delta), 12) - Fraction(dF2 - dF, 12)


def omega_phi(dE: LocalReductionData, dE2: LocalReductionData, e: int, ext_tame: Optional[bool] = None,
              degree: Optional[int] = None, conductor_F: Optional[int] = None,
              e_stable: Optional[int] = None) -> ExactOrInterval:
    """Omega_phi(F) for a base change of ramification degree e."""
    q = dE.prime
    if dE2.prime != q:
        raise ValueError("local data at different primes")
    if e < 1:
        raise ValueError("ramification degree must be positive")
    if ext_tame is None:
        ext_tame = e % q != 0
    if (e == 1 or not dE.is_additive or dE.potential in (POT_ORDINARY, POT_MULTIPLICATIVE)
            or (degree is not None and degree % q)):
        return ZERO
    delta, delta2 = dE.delta, dE2.delta
    if dE.tame or ext_tame:
        dF = discriminant_base_change(delta, dE.eth, e, dE.tame, ext_tame, q).value
        dF2 = discriminant_base_change(delta2, dE2.eth, e, dE2.tame, ext_tame, q).value
        return ExactOrInterval.exact(_omega_from_discriminants(delta, delta2, dF, dF2, e))
    center = Fraction(e * (delta2 - delta), 12)
    if q == 3:
        if conductor_F is not None:
            dF = discriminant_base_change(delta, None, e, False, False, 3, conductor_F=conductor_F).value
            dF2 = discriminant_base_change(delta2, None, e, False, False, 3, conductor_F=conductor_F).value
            return ExactOrInterval.exact(_omega_from_discriminants(delta, delta2, dF, dF2, e))
        half = Fraction(1, 2) if e % 3 == 0 else Fraction(2, 3)
        return ExactOrInterval(center, half, "wild at 3: error term bounded")
    half = epsilon_bound_two_adic(dE.conductor_exponent, e_stable or e)
    return ExactOrInterval(center, half, "wild at 2: error term bounded through the conductor")


def _tamagawa_multiplicative(d: LocalReductionData, e: int, f: int) -> int:
    m = e * d.kodaira_index
    split = d.reduction == SPLIT or f % 2 == 0
    return m if split else (2 if m % 2 == 0 else 1)


def _choice_hull(c1: tuple, c2: tuple, p: int) -> ExactOrInterval:
    vals = {valuation(b, p) - valuation(a, p) for a in c1 for b in c2}
    return ExactOrInterval.hull(min(vals), max(vals))


def _check_chain(chain, degree):
    if chain is None:
        return
    steps = [getattr(s, "degree", s) for s in chain]
    if degree is not None and prod(steps) != degree:
        raise ValueError("chain degrees do not multiply to the isogeny degree")


def tamagawa_quotient_layer(dE: LocalReductionData, dE2: LocalReductionData, e: int, f: int, p: int,
                            degree: Optional[int] = None, chain=None) -> ExactOrInterval:
    """ord_p of c(E'/F)/c(E/F) at one place w of ramification e and residue degree f over Q_q."""
    q = dE.prime
    if dE2.prime != q:
        raise ValueError("local data at different primes")
    _check_chain(chain, degree)
    if dE.reduction == GOOD:
        return ZERO
    if dE.reduction in (SPLIT, NONSPLIT):
        c = _tamagawa_multiplicative(dE, e, f)
        c2 = _tamagawa_multiplicative(dE2, e, f)
        return ExactOrInterval.exact(qvaluation(Fraction(c2, c), p))
    if e == 1:
        return ExactOrInterval.exact(qvaluation(Fraction(tamagawa_unramified(dE2, f),
                                                         tamagawa_unramified(dE, f)), p))
    if dE.potential == POT_MULTIPLICATIVE:
        return _potentially_multiplicative(dE, dE2, e, p)
    if p >= 5:
        return ZERO
    if dE.tame:
        t1 = _TAME_TYPE[(e * dE.delta) % 12]
        t2 = _TAME_TYPE[(e * dE2.delta) % 12]
        return _choice_hull(_TAMAGAWA_CHOICES[t1], _TAMAGAWA_CHOICES[t2], p)
    if (dE.potential == POT_SUPERSINGULAR and q == p
            and (degree is None or degree % p == 0)):
        half = 1 if p == 3 else 2
        return ExactOrInterval(Fraction(0), Fraction(half), ALTERNATION_NOTE)
    half = 2 if p == 2 else 1  # floor(log_p 4)
    return ExactOrInterval(Fraction(0), Fraction(half), STABILIZATION_NOTE)


def _potentially_multiplicative(dE, dE2, e, p) -> ExactOrInterval:
    """Additive I_n* reduction: over F the type is I_{en}* or I_{en} depending on the twist."""
    q = dE.prime
    d = qvaluation(Fraction(dE2.kodaira_index, dE.kodaira_index), p)
    if q != 2 and e % 2 == 1:
        # the quadratic twist stays ramified: type I_{en}*, Tamagawa number 2 or 4
        if p != 2:
            return ZERO
        return ExactOrInterval.hull(-1, 1, note="I_n* over the layer: Tamagawa numbers in {2, 4}")
    if q != 2:
        return ExactOrInterval.hull(min(0, d), max(0, d), note=STABILIZATION_NOTE)
    out = ExactOrInterval.hull(min(0, d), max(0, d), note=STABILIZATION_NOTE)
    return out.widen(1) if p == 2 else out


def semistable_toric_tamagawa(C, C2, r: int, e: int, p: int) -> int:
    """ord_p of C'e^r / (C e^r); the toric factors cancel."""
    if r < 0:
        raise ValueError("toric rank must be non-negative")
    return qvaluation(Fraction(C2) / Fraction(C), p)


@dataclass(frozen=True)
class GammaExponent:
    tamagawa: ExactOrInterval = ZERO
    omega_phi: ExactOrInterval = ZERO
    archimedean: ExactOrInterval = ZERO

    @property
    def total(self) -> ExactOrInterval:
        return self.tamagawa + self.omega_phi + self.archimedean

    def scale(self, k) -> "GammaExponent":
        return GammaExponent(self.tamagawa.scale(k), self.omega_phi.scale(k), self.archimedean.scale(k))

    def to_json(self) -> dict:
        return {"tamagawa": self.tamagawa.to_json(), "omega_phi": self.omega_phi.to_json(),
                "archimedean": self.archimedean.to_json(), "total": self.total.to_json()}


def gamma_exponent(dE: LocalReductionData, dE2: LocalReductionData, profile: Profile, p: int,
                   degree: Optional[int] = None, chain=None, conductor_F: Optional[int] = None,
                   e_stable: Optional[int] = None) -> GammaExponent:
    """ord_p of gamma_w at one place w (ramification and residue degree in `profile`, over Q_q).

    gamma_w is the Tamagawa quotient times |k_w| raised to Omega_phi; the second
    factor has a p-part only when the residue characteristic q is p.
    """
    if dE.reduction == GOOD:
        return GammaExponent()
    tam = tamagawa_quotient_layer(dE, dE2, profile.e, profile.f, p, degree, chain)
    om = ZERO
    if dE.prime == p:
        om = omega_phi(dE, dE2, profile.e, degree=degree, conductor_F=conductor_F,
                       e_stable=e_stable).scale(profile.f)
    return GammaExponent(tam, om)


def archimedean_gamma(complex_places: int, ord_omega_star: int) -> GammaExponent:
    """Contribution of the real places of Q that become complex."""
    return GammaExponent(archimedean=ExactOrInterval.exact(complex_places * ord_omega_star))
