"""Real and imaginary periods of curves over Q via the AGM, and exact recognition of their quotients.

All floating point arithmetic in the package lives here. Values that leave
this module are exact rationals.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curves import WeierstrassModel, minimal_model
from .exact import qvaluation

DEFAULT_DIGITS = int(os.environ.get("SHAGROWTH_DIGITS", "50"))
DEFAULT_MAX_DENOMINATOR = 10 ** 4
AGM_ITERATIONS = 200


class PrecisionError(ArithmeticError):
    pass


class NoRationalFound(ArithmeticError):
    pass


@dataclass(frozen=True)
class PeriodData:
    omega: mpmath.mpf          # integral of |omega| over E(R)
    omega_star: mpmath.mpf     # covolume of the lattice divided by omega^2
    real_period: mpmath.mpf    # least positive real period
    covolume: mpmath.mpf
    components: int
    digits: int


def _agm(a, b):
    for _ in range(AGM_ITERATIONS):
        if abs(a - b) <= abs(a) * mpmath.mpf(10) ** (-mpmath.mp.dps + 3):
            return (a + b) / 2
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
    raise PrecisionError("AGM did not converge")


def _two_division_roots(E):
    b2, b4, b6, _ = (mpmath.mpf(x.numerator) / x.denominator for x in E.b_invariants)
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=400, extraprec=4 * mpmath.mp.dps)
    return b2, roots


def period_data(E_min: WeierstrassModel, digits: int = DEFAULT_DIGITS) -> PeriodData:
    if digits < 30:
        raise ValueError("working precision must be at least 30 digits")
    with mpmath.workdps(digits + 15):
        b2, roots = _two_division_roots(E_min)
        pi = mpmath.pi
        if E_min.discriminant > 0:
            e1, e2, e3 = sorted((mpmath.re(r) for r in roots), reverse=True)
            w1 = pi / _agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
            w2 = pi / _agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
            components = 2
            covolume = w1 * w2
        else:
            real = min(roots, key=lambda r: abs(mpmath.im(r)))
            e1 = mpmath.re(real)
            cplx = [r for r in roots if r is not real][0]
            r = abs(e1 - cplx)
            shift = 3 * e1 + b2 / 4
            w1 = 2 * pi / _agm(2 * mpmath.sqrt(r), mpmath.sqrt(2 * r + shift))
            # the second basis vector is w1/2 + i*y
            y = pi / _agm(2 * mpmath.sqrt(r), mpmath.sqrt(2 * r - shift))
            components = 1
            covolume = w1 * y
        omega = components * w1
        omega_star = covolume / omega ** 2
        return PeriodData(+omega, +omega_star, +w1, +covolume, components, digits)


def lattice_tau(E_min: WeierstrassModel, digits: int = DEFAULT_DIGITS):
    """tau = w2/w1 with w1 the least positive real period (upper half plane)."""
    pd = period_data(E_min, digits)
    with mpmath.workdps(digits + 15):
        y = pd.covolume / pd.real_period
        x = mpmath.mpf(0) if pd.components == 2 else mpmath.mpf(1) / 2
        return mpmath.mpc(x, y / pd.real_period)


def rationalize_quotient(x, max_denominator: int = DEFAULT_MAX_DENOMINATOR,
                         tolerance=mpmath.mpf(10) ** -30) -> Fraction:
    if x <= 0:
        raise ValueError("quotient must be positive")
    q = _mpf_to_fraction(mpmath.mpf(x)).limit_denominator(max_denominator)
    if abs(mpmath.mpf(q.numerator) / q.denominator - x) >= tolerance:
        raise NoRationalFound(f"{mpmath.nstr(x, 20)} is not a rational with denominator <= {max_denominator}")
    return q


def _mpf_to_fraction(x) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man) * 2 ** exp) if exp >= 0 else Fraction(int(man), 2 ** -exp)


def period_quotients(E: WeierstrassModel, E2: WeierstrassModel, digits: int = DEFAULT_DIGITS,
                     max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> tuple[Fraction, Fraction]:
    """Exact (Omega'/Omega, Omega*'/Omega*) for isogenous curves E -> E2."""
    P = period_data(minimal_model(E)[0], digits)
    Q = period_data(minimal_model(E2)[0], digits)
    tol = mpmath.mpf(10) ** (-(digits - 20))
    with mpmath.workdps(digits + 15):
        return (rationalize_quotient(Q.omega / P.omega, max_denominator, tol),
                rationalize_quotient(Q.omega_star / P.omega_star, max_denominator, tol))


def period_quotient_valuations(E: WeierstrassModel, E2: WeierstrassModel, p: int,
                               digits: int = DEFAULT_DIGITS) -> tuple[int, int]:
    om, om_star = period_quotients(E, E2, digits)
    return qvaluation(om, p), qvaluation(om_star, p)
