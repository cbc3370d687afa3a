"""Exact Weierstrass models over Q, minimal models, Tate's algorithm and torsion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Optional, Sequence

import mpmath
import sympy

from .exact import qvaluation, to_fraction, valuation
from . import finite_field as ff

GOOD = "good"
SPLIT = "split multiplicative"
NONSPLIT = "nonsplit multiplicative"
ADDITIVE = "additive"

POT_ORDINARY = "good-ordinary"
POT_SUPERSINGULAR = "good-supersingular"
POT_MULTIPLICATIVE = "multiplicative"

# substitute for delta under tame base change, by Kodaira symbol
ETH = {"I0": 0, "II": 2, "III": 3, "IV": 4, "I*": 6, "IV*": 8, "III*": 9, "II*": 10}


class SingularCurveError(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassModel:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.discriminant == 0:
            raise SingularCurveError(f"singular Weierstrass equation {self.ainvs}")

    @classmethod
    def from_list(cls, coeffs: Sequence) -> "WeierstrassModel":
        if len(coeffs) != 5:
            raise ValueError("expected five coefficients [a1,a2,a3,a4,a6]")
        return cls(*coeffs)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b_invariants(self) -> tuple:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @cached_property
    def c4(self) -> Fraction:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @cached_property
    def c6(self) -> Fraction:
        b2, b4, b6, _ = self.b_invariants
        return -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    @cached_property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def j_invariant(self) -> Fraction:
        return self.c4 ** 3 / self.discriminant

    @property
    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def scaled(self, u) -> "WeierstrassModel":
        """Model with a_i replaced by u^i a_i (so the discriminant gains u^12)."""
        u = to_fraction(u)
        return WeierstrassModel(*(a * u ** k for a, k in zip(self.ainvs, (1, 2, 3, 4, 6))))

    def transform(self, r=0, s=0, t=0, u=1) -> "WeierstrassModel":
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassModel(*_transform((a1, a2, a3, a4, a6), r, s, t, u))

    def to_json(self) -> list:
        from .exact import format_fraction
        return [format_fraction(a) for a in self.ainvs]

    def __str__(self):
        from .exact import format_fraction
        return "[" + ",".join(format_fraction(a) for a in self.ainvs) + "]"


def _transform(a, r, s, t, u=1):
    a1, a2, a3, a4, a6 = a
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
    if u == 1:
        return [n1, n2, n3, n4, n6]
    u = Fraction(u)
    return [n1 / u, n2 / u ** 2, n3 / u ** 3, n4 / u ** 4, n6 / u ** 6]


def _int_invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, disc


def _vv(n, p):
    """Valuation that treats 0 as +infinity."""
    return 10 ** 9 if n == 0 else valuation(n, p)


# --- minimal models ---------------------------------------------------------

def _kraus_local_ok(c4: int, c6: int, p: int) -> bool:
    if p == 3:
        return _vv(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return _vv(c4, 2) >= 4 and c6 % 32 in (0, 8)
    return True


def _model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-b2 ** 3 + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ArithmeticError("invariants fail the integrality conditions")
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    a4 = (b4 - a1 * a3) // 2
    a6 = (b6 - a3) // 4
    E = WeierstrassModel(a1, a2, a3, a4, a6)
    if E.c4 != c4 or E.c6 != c6:
        raise ArithmeticError("reconstructed model has wrong invariants")
    return E


def _integral_scaling(E: WeierstrassModel) -> int:
    """Smallest positive integer u0 with u0^i a_i integral."""
    u0 = 1
    den = 1
    for a in E.ainvs:
        den = den * a.denominator // gcd(den, a.denominator)
    for p in sympy.primefactors(den):
        k = 0
        for a, w in zip(E.ainvs, (1, 2, 3, 4, 6)):
            if a:
                need = -qvaluation(a, p)
                if need > 0:
                    k = max(k, -(-need // w))
        u0 *= p ** k
    return u0


def minimal_model(E: WeierstrassModel) -> tuple[WeierstrassModel, Fraction]:
    """Globally minimal reduced model over Q and the scaling u with Delta_min = Delta / u^12."""
    u0 = _integral_scaling(E)
    Ei = E.scaled(u0)
    c4, c6, disc = int(Ei.c4), int(Ei.c6), int(Ei.discriminant)
    u = 1
    for p in sympy.primefactors(abs(disc)):
        kmax = valuation(disc, p) // 12
        if c4:
            kmax = min(kmax, valuation(c4, p) // 4)
        if c6:
            kmax = min(kmax, valuation(c6, p) // 6)
        for k in range(kmax, -1, -1):
            if _kraus_local_ok(c4 // p ** (4 * k), c6 // p ** (6 * k), p):
                u *= p ** k
                break
    Emin = _model_from_c4c6(c4 // u ** 4, c6 // u ** 6)
    return Emin, Fraction(u, u0)


# --- Tate's algorithm -------------------------------------------------------

@dataclass(frozen=True)
class LocalReductionData:
    prime: int
    delta: int
    kodaira: str
    kodaira_index: int
    components: int
    tamagawa: int
    conductor_exponent: int
    reduction: str
    potential: str
    tame: bool
    eth: Optional[int]
    root_degrees: tuple = field(default=())

    @property
    def symbol(self) -> str:
        if self.kodaira in ("I", "I*"):
            return f"I{self.kodaira_index}" + ("*" if self.kodaira == "I*" else "")
        return self.kodaira

    @property
    def is_additive(self) -> bool:
        return self.reduction == ADDITIVE

    @property
    def is_semistable(self) -> bool:
        return self.reduction != ADDITIVE

    def to_json(self) -> dict:
        return {
            "prime": self.prime, "kodaira": self.symbol, "delta": self.delta,
            "components": self.components, "tamagawa": self.tamagawa,
            "conductor_exponent": self.conductor_exponent, "reduction": self.reduction,
            "potential": self.potential, "tame": self.tame, "eth": self.eth,
        }


def component_count(kodaira: str, index: int) -> int:
    return {"I0": 1, "I": max(index, 1), "II": 1, "III": 2, "IV": 3, "I*": index + 5,
            "IV*": 7, "III*": 8, "II*": 9}[kodaira]


def _root_degrees(poly, p) -> tuple:
    deg = len(poly) - 1
    r = ff.count_roots(poly, p)
    if deg == 2:
        return (1, 1) if r == 2 else (2,)
    return {3: (1, 1, 1), 1: (1, 2), 0: (3,)}[r]


def roots_over_extension(root_degrees: tuple, f: int) -> int:
    """Roots in the degree-f extension of the residue field, given irreducible factor degrees."""
    return sum(d for d in root_degrees if f % d == 0)


def _singular_point(a, p):
    a1, a2, a3, a4, a6 = a
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise ArithmeticError("no singular point found")
    b2, b4, b6, b8, c4, _ = _int_invariants(a)
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    inv12 = pow(12, -1, p)
    if c4 % p == 0:
        r = (-b2 * inv12) % p
    else:
        r = (-(c6 + b2 * c4) * pow(12 * c4, -1, p)) % p
    t = (-(a1 * r + a3) * pow(2, -1, p)) % p
    return r, t


def _step7_shift(a, p):
    a1, a2, a3, a4, a6 = a
    if p >= 5:
        cands = [((-a1 * pow(2, -1, p)) % p, (-a3 * pow(2, -1, p * p)) % (p * p))]
    else:
        cands = [(s, t) for s in range(p) for t in range(p * p)]
    for s, t in cands:
        b = _transform(a, 0, s, t)
        if (b[0] % p == 0 and b[1] % p == 0 and b[2] % (p * p) == 0
                and b[3] % (p * p) == 0 and b[4] % p ** 3 == 0):
            return [int(x) for x in b]
    raise ArithmeticError("could not normalise additive model")


def _double_root(poly, p):
    return ff.multiple_root(poly, p)


def _tate_raw(a, p):
    """Tate's algorithm on an integral model; returns a dict of local invariants."""
    a = [int(x) for x in a]
    while True:
        b2, b4, b6, b8, c4, disc = _int_invariants(a)
        n = valuation(disc, p)
        if n == 0:
            return dict(kodaira="I0", index=0, f=0, c=1, reduction=GOOD, delta=0, roots=())
        x0, y0 = _singular_point(a, p)
        a = [int(x) for x in _transform(a, x0, 0, y0)]
        assert a[2] % p == 0 and a[3] % p == 0 and a[4] % p == 0
        b2, b4, b6, b8, c4, disc = _int_invariants(a)
        if b2 % p:
            tangent = [-a[1], a[0], 1]
            roots = _root_degrees(tangent, p)
            split = roots == (1, 1)
            c = n if split else (2 if n % 2 == 0 else 1)
            return dict(kodaira="I", index=n, f=1, c=c, reduction=SPLIT if split else NONSPLIT,
                        delta=n, roots=roots)
        if a[4] % (p * p):
            return dict(kodaira="II", index=0, f=n, c=1, reduction=ADDITIVE, delta=n, roots=())
        if b8 % p ** 3:
            return dict(kodaira="III", index=0, f=n - 1, c=2, reduction=ADDITIVE, delta=n, roots=())
        if b6 % p ** 3:
            quad = [-(a[4] // (p * p)), a[2] // p, 1]
            roots = _root_degrees(quad, p)
            c = 3 if roots == (1, 1) else 1
            return dict(kodaira="IV", index=0, f=n - 2, c=c, reduction=ADDITIVE, delta=n, roots=roots)
        a = _step7_shift(a, p)
        cubic = [a[4] // p ** 3, a[3] // p ** 2, a[1] // p, 1]
        disc3 = _cubic_disc(cubic)
        if disc3 % p:
            roots = _root_degrees(cubic, p)
            c = 1 + ff.count_roots(cubic, p)
            return dict(kodaira="I*", index=0, f=n - 4, c=c, reduction=ADDITIVE, delta=n, roots=roots)
        alpha = _double_root(cubic, p)
        triple = _is_triple(cubic, alpha, p)
        a = [int(x) for x in _transform(a, p * alpha, 0, 0)]
        if not triple:
            m, mx, my = 1, p * p, p * p
            while True:
                xa2 = a[1] // p
                xa3 = a[2] // my
                xa4 = a[3] // (p * mx)
                xa6 = a[4] // (mx * my)
                if m % 2:
                    quad = [-xa6, xa3, 1]
                    if (xa3 * xa3 + 4 * xa6) % p:
                        roots = _root_degrees(quad, p)
                        break
                    t = my * _double_root(quad, p)
                    a = [int(x) for x in _transform(a, 0, 0, t)]
                    my *= p
                else:
                    quad = [xa6, xa4, xa2]
                    if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                        roots = _root_degrees(quad, p)
                        break
                    r = mx * _double_root(quad, p)
                    a = [int(x) for x in _transform(a, r, 0, 0)]
                    mx *= p
                m += 1
            c = 4 if roots == (1, 1) else 2
            return dict(kodaira="I*", index=m, f=n - 4 - m, c=c, reduction=ADDITIVE, delta=n, roots=roots)
        quad = [-(a[4] // p ** 4), a[2] // (p * p), 1]
        if (quad[1] ** 2 - 4 * quad[0]) % p:
            roots = _root_degrees(quad, p)
            c = 3 if roots == (1, 1) else 1
            return dict(kodaira="IV*", index=0, f=n - 6, c=c, reduction=ADDITIVE, delta=n, roots=roots)
        t = p * p * _double_root(quad, p)
        a = [int(x) for x in _transform(a, 0, 0, t)]
        if a[3] % p ** 4:
            return dict(kodaira="III*", index=0, f=n - 7, c=2, reduction=ADDITIVE, delta=n, roots=())
        if a[4] % p ** 6:
            return dict(kodaira="II*", index=0, f=n - 8, c=1, reduction=ADDITIVE, delta=n, roots=())
        # not minimal at p: rescale and start over
        a = [a[0] // p, a[1] // p ** 2, a[2] // p ** 3, a[3] // p ** 4, a[4] // p ** 6]


def _cubic_disc(f):
    d, c, b, _ = f  # monic x^3 + b x^2 + c x + d
    return b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d


def _is_triple(cubic, alpha, p):
    # compare with (x - alpha)^3 coefficientwise
    d, c, b, _ = cubic
    return ((b + 3 * alpha) % p == 0 and (c - 3 * alpha * alpha) % p == 0
            and (d + alpha ** 3) % p == 0)


def classify_potential(E: WeierstrassModel, p: int) -> str:
    j = E.j_invariant
    if j != 0 and qvaluation(j, p) < 0:
        return POT_MULTIPLICATIVE
    j0 = (j.numerator * pow(j.denominator, -1, p)) % p
    if p in (2, 3):
        return POT_SUPERSINGULAR if j0 == 0 else POT_ORDINARY
    return POT_SUPERSINGULAR if ff.hasse_invariant_vanishes(j0, p) else POT_ORDINARY


def tate_local_data(E_min: WeierstrassModel, p: int) -> LocalReductionData:
    if not E_min.is_integral:
        raise ValueError("Tate's algorithm needs an integral (minimal) model")
    raw = _tate_raw([int(x) for x in E_min.ainvs], p)
    kod, idx = raw["kodaira"], raw["index"]
    m = component_count(kod, idx)
    f = raw["f"]
    delta = raw["delta"]
    if f != delta - m + 1:
        raise ArithmeticError(f"Ogg's relation fails at p={p}: f={f}, delta={delta}, m={m}")
    potential = classify_potential(E_min, p)
    eth = ETH.get("I0" if (kod == "I" and idx == 0) else kod) if potential != POT_MULTIPLICATIVE else None
    return LocalReductionData(
        prime=p, delta=delta, kodaira="I0" if (kod == "I" and idx == 0) else kod,
        kodaira_index=idx, components=m, tamagawa=raw["c"], conductor_exponent=f,
        reduction=raw["reduction"], potential=potential,
        tame=raw["reduction"] != ADDITIVE or f == 2, eth=eth, root_degrees=raw["roots"],
    )


def bad_primes(E: WeierstrassModel) -> list[int]:
    Emin = E if E.is_integral else minimal_model(E)[0]
    return sorted(sympy.primefactors(abs(int(Emin.discriminant))))


def conductor(E_min: WeierstrassModel) -> int:
    N = 1
    for p in bad_primes(E_min):
        N *= p ** tate_local_data(E_min, p).conductor_exponent
    return N


def tamagawa_unramified(d: LocalReductionData, f: int) -> int:
    """Tamagawa number after an unramified extension of residue degree f."""
    if d.kodaira == "I0" or d.kodaira in ("II", "II*"):
        return 1
    if d.kodaira in ("III", "III*"):
        return 2
    r = roots_over_extension(d.root_degrees, f)
    if d.kodaira == "I":
        n = d.kodaira_index
        return n if r else (2 if n % 2 == 0 else 1)
    if d.kodaira in ("IV", "IV*"):
        return 3 if r else 1
    if d.kodaira == "I*":
        if d.kodaira_index == 0:
            return 1 + r
        return 4 if r else 2
    raise ValueError(d.kodaira)


def trace_of_frobenius(E_min: WeierstrassModel, q: int) -> int:
    a = tuple(int(x) for x in E_min.ainvs)
    b2, b4, b6, _ = (int(x) for x in E_min.b_invariants)
    return q + 1 - ff.count_points(b2, b4, b6, a, q)


# --- torsion ---------------------------------------------------------------

def _add(P, Q, cubic):
    """Group law on y^2 = x^3 + a x^2 + b x + c (None is the point at infinity)."""
    if P is None:
        return Q
    if Q is None:
        return P
    a, b, _ = cubic
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + 2 * a * x1 + b) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - a - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _is_torsion(P, cubic) -> bool:
    # rational torsion has order <= 12 and stays integral on this model
    Q = P
    for _ in range(12):
        if Q is None:
            return True
        if Q[0].denominator != 1 or Q[1].denominator != 1:
            return False
        Q = _add(Q, P, cubic)
    return Q is None


def _monotone_root(f, lo: int, hi: int, increasing: bool):
    """Integer root of f on [lo, hi] where f is monotone, or None."""
    while lo <= hi:
        mid = (lo + hi) // 2
        v = f(mid)
        if v == 0:
            return mid
        if (v < 0) == increasing:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _integer_roots_cubic(a: int, b: int, c: int) -> list[int]:
    """Integer roots of x^3 + a x^2 + b x + c, by bisection on the monotone pieces."""
    f = lambda x: ((x + a) * x + b) * x + c
    # Fujiwara bound on the absolute value of every root
    bound = 2 * max(abs(a), isqrt(abs(b)) + 1, int(sympy.integer_nthroot(abs(c) // 2 + 1, 3)[0]) + 1)
    disc = a * a - 3 * b  # the derivative 3x^2 + 2ax + b has real roots iff disc > 0
    if disc <= 0:
        pieces = [(-bound, bound, True)]
    else:
        r = isqrt(disc)
        # critical points (-a -+ sqrt(disc))/3, widened to integers
        lo_crit = (-a - r - 1) // 3
        hi_crit = -((a - r - 1) // 3)
        pieces = [(-bound, lo_crit, True), (lo_crit, hi_crit, False), (hi_crit, bound, True)]
    out = set()
    for lo, hi, inc in pieces:
        root = _monotone_root(f, lo, hi, inc)
        if root is not None:
            out.add(root)
    # the widened boundaries may sit off the monotone pieces; check them directly
    if disc > 0:
        out.update(x for x in range(lo_crit - 1, lo_crit + 2) if f(x) == 0)
        out.update(x for x in range(hi_crit - 1, hi_crit + 2) if f(x) == 0)
    return sorted(out)


def torsion_points(E: WeierstrassModel) -> list:
    """Rational torsion points other than O, on the integral model Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6.

    (X, Y) = (4x, 8y + 4a1 x + 4a3) from the minimal model.
    """
    return _torsion_points_minimal(minimal_model(E)[0])


def _torsion_points_minimal(Emin: WeierstrassModel) -> list:
    b2, b4, b6, _ = (int(v) for v in Emin.b_invariants)
    cubic = (b2, 8 * b4, 16 * b6)
    a, b, c = cubic
    disc = a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c
    ys = [1]
    for q, k in sympy.factorint(abs(disc)).items():
        ys = [y * q ** i for y in ys for i in range(k // 2 + 1)]
    pts = set()
    for y in [0] + ys:
        for x in _integer_roots_cubic(a, b, c - y * y):
            for yy in {y, -y}:
                P = (Fraction(x), Fraction(yy))
                if _is_torsion(P, cubic):
                    pts.add(P)
    return sorted(pts)


def _good_odd_primes(Emin: WeierstrassModel, count: int) -> list[int]:
    disc = int(Emin.discriminant)
    out, q = [], 3
    while len(out) < count:
        if disc % q:
            out.append(q)
        q = int(sympy.nextprime(q))
    return out


def torsion_order(E: WeierstrassModel) -> int:
    Emin = minimal_model(E)[0]
    if _torsion_bound(Emin) == 1:
        return 1
    n = len(_torsion_points_minimal(Emin)) + 1
    # the torsion subgroup injects into the reduction at good odd primes
    for q in _good_odd_primes(Emin, 2):
        Nq = q + 1 - trace_of_frobenius(Emin, q)
        if Nq % n:
            raise ArithmeticError(f"torsion order {n} does not divide #E(F_{q}) = {Nq}")
    return n


def _torsion_bound(Emin: WeierstrassModel) -> int:
    bound = 0
    for q in _good_odd_primes(Emin, 4):
        bound = gcd(bound, q + 1 - trace_of_frobenius(Emin, q))
    return bound


def torsion_p_part(E: WeierstrassModel, p: int) -> int:
    Emin = minimal_model(E)[0]
    if _torsion_bound(Emin) % p:
        return 1
    n = torsion_order(Emin)
    return p ** valuation(n, p) if n % p == 0 else 1
