"""Independent reference computations used to cross-check the package.

Nothing here imports the package's algorithms: each oracle recomputes its
quantity by a different method (quadrature, brute-force enumeration, direct
big-integer checks, or a local minimal-model search over a ramified field).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath


# --- periods by numerical integration ------------------------------------------

def _b_invariants(a):
    a1, a2, a3, a4, a6 = a
    return a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6


def quadrature_periods(a, dps: int = 30):
    """(Omega, least real period) by integrating dx / sqrt(4x^3 + b2 x^2 + 2 b4 x + b6)."""
    b2, b4, b6 = _b_invariants(a)
    with mpmath.workdps(dps):
        roots = sorted((mpmath.re(r) for r in mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200,
                                                                 extraprec=60)
                        if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)), reverse=True)
        e1 = roots[0]
        # x = e1 + t^2 removes the endpoint singularity: f(e1 + t^2) = t^2 g(t)
        c2, c1 = 12 * e1 + b2, 12 * e1 ** 2 + 2 * b2 * e1 + 2 * b4
        g = lambda t: 4 * t ** 4 + c2 * t ** 2 + c1
        w1 = 2 * mpmath.quad(lambda t: 2 / mpmath.sqrt(g(t)), [0, 1, mpmath.inf])
        components = 2 if len(roots) == 3 else 1
        return components * w1, w1


def klein_j(tau, dps: int = 30):
    with mpmath.workdps(dps):
        return 1728 * mpmath.kleinj(tau)


# --- Kodaira symbols at p >= 5 ---------------------------------------------------

_DELTA_TO_TYPE = {0: "I0", 2: "II", 3: "III", 4: "IV", 6: "I*", 8: "IV*", 9: "III*", 10: "II*"}


def vp(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        return 10 ** 9
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def kodaira_p_ge_5(delta: int, ord_c4: int, p: int):
    """(symbol, conductor exponent) for a minimal model at p >= 5, from valuations alone."""
    assert p >= 5
    if delta == 0:
        return "I0", 0
    if ord_c4 == 0:
        return f"I{delta}", 1
    if 3 * ord_c4 < delta:
        # ord j < 0 with additive reduction: type I_n* with delta = 6 + n
        return f"I{delta - 6}*", 2
    sym = _DELTA_TO_TYPE[delta]
    return ("I0*" if sym == "I*" else sym), 2


# --- cyclotomic and false Tate splitting by enumeration ----------------------------

def cyclotomic_efg_bruteforce(l: int, q: int, n: int):
    """(e, f, g) of q in the degree l^n subfield of Q(zeta_{l^(n+1)}) (or Q(zeta_{2^(n+2)}))."""
    if q == l:
        return l ** n, 1, 1
    M = l ** (n + 1) if l != 2 else 2 ** (n + 2)
    units = [x for x in range(1, M) if gcd(x, M) == 1]
    # the subgroup fixing the Z_l layer: the torsion of (Z/M)^* of order prime to l (or {+-1})
    if l == 2:
        H = {1, M - 1}
    else:
        H = {x for x in units if pow(x, l - 1, M) == 1}
    assert len(units) // len(H) == l ** n
    f, y = 1, q % M
    while y not in H:
        y = y * q % M
        f += 1
    return 1, f, l ** n // f


def false_tate_residue_degree(l: int, m: int, q: int, n: int) -> int:
    """Smallest f with q^f = 1 mod l^n and m a l^n-th power in F_{q^f} (q unramified)."""
    ln = l ** n
    f = 1
    while True:
        Q = q ** f
        if (Q - 1) % ln == 0 and pow(m, (Q - 1) // ln, q) == 1:
            # pow(m, ., q) reduces in F_q: valid since m lies in F_q and the exponent is exact
            return f
        f += 1


# --- minimal discriminant over a totally ramified cubic extension of Q_3 -----------

class RamifiedCubic:
    """Z_3[pi] with pi^3 = c2 pi^2 + c1 pi + c0 (Eisenstein), arithmetic modulo 3^N."""

    def __init__(self, min_poly=(1, -6, 9, -3), N: int = 60):
        one, a2, a1, a0 = min_poly
        assert one == 1
        self.rel = (-a0, -a1, -a2)  # pi^3 = rel[0] + rel[1] pi + rel[2] pi^2
        self.mod = 3 ** N

    def el(self, c0=0, c1=0, c2=0):
        return tuple(x % self.mod for x in (c0, c1, c2))

    def add(self, x, y):
        return tuple((a + b) % self.mod for a, b in zip(x, y))

    def mul(self, x, y):
        prod = [0] * 5
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] += a * b
        for k in (4, 3):
            c, prod[k] = prod[k], 0
            for i, r in enumerate(self.rel):
                prod[k - 3 + i] += c * r
        return tuple(v % self.mod for v in prod[:3])

    def scalar(self, k, x):
        return tuple(k * v % self.mod for v in x)

    def valuation(self, x) -> int:
        """v_pi(x) = v_3(Norm x), from the determinant of multiplication by x."""
        cols = [self.mul(x, b) for b in (self.el(1), self.el(0, 1), self.el(0, 0, 1))]
        m = [[cols[j][i] for j in range(3)] for i in range(3)]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        return vp(det % self.mod, 3) if det % self.mod else 10 ** 9


@lru_cache(maxsize=None)
def _minimal_discriminant_cached(a: tuple, max_k: int) -> int:
    return minimal_discriminant_over_ramified_cubic(list(a), None, max_k)


def cached_minimal_discriminant(a, max_k: int = 4) -> int:
    return _minimal_discriminant_cached(tuple(a), max_k)


def minimal_discriminant_over_ramified_cubic(a, field: RamifiedCubic | None = None, max_k: int = 4) -> int:
    """delta over F for the curve with integer a-invariants, found by searching Weierstrass changes.

    The curve is put in the form Y^2 = x^3 + A2 x^2 + A4 x + A6 (2 is a unit), and
    x -> pi^(2k) x + r is tried for every r modulo a power of pi.
    """
    F = field or RamifiedCubic()
    b2, b4, b6 = _b_invariants(a)
    inv4 = pow(4, -1, F.mod)
    A2, A4, A6 = b2 * inv4, b4 * pow(2, -1, F.mod), b6 * inv4
    A2, A4, A6 = (F.el(A2), F.el(A4), F.el(A6))
    disc = lambda A2, A4, A6: _cubic_discriminant(F, A2, A4, A6)
    v_disc = F.valuation(F.scalar(16, disc(A2, A4, A6)))

    def conditions(r):
        r2 = F.mul(r, r)
        c2 = F.add(A2, F.scalar(3, r))
        c4 = F.add(F.add(A4, F.scalar(2, F.mul(A2, r))), F.scalar(3, r2))
        c6 = F.add(F.add(F.add(F.mul(r2, r), F.mul(A2, r2)), F.mul(A4, r)), A6)
        return [F.valuation(c2), F.valuation(c4), F.valuation(c6)]

    pi_pow = [F.el(1)]
    for _ in range(30):
        pi_pow.append(F.mul(pi_pow[-1], F.el(0, 1)))

    best = 0
    for k in range(1, max_k + 1):
        need = [2 * k, 4 * k, 6 * k]
        # r and r + pi^(2k) s give models differing by an integral shift, so r mod pi^(2k) suffices
        depth = 2 * k
        frontier = [F.el(0)]
        for j in range(depth):
            if any(all(v >= n for v, n in zip(conditions(r), need)) for r in frontier):
                break
            nxt = []
            for r in frontier:
                for d in range(3):
                    cand = F.add(r, F.scalar(d, pi_pow[j]))
                    vals = conditions(cand)
                    # vals are only meaningful up to precision j + 1 of r
                    if all(min(v, j + 1) >= min(n, j + 1) for v, n in zip(vals, need)):
                        nxt.append(cand)
            frontier = nxt
            if not frontier:
                break
        if any(all(v >= n for v, n in zip(conditions(r), need)) for r in frontier):
            best = k
        else:
            break
    return v_disc - 12 * best


def _cubic_discriminant(F, a, b, c):
    # a^2 b^2 - 4 b^3 - 4 a^3 c - 27 c^2 + 18 a b c
    m = F.mul
    ab = m(a, b)
    terms = [m(ab, ab), F.scalar(-4, m(m(b, b), b)), F.scalar(-4, m(m(m(a, a), a), c)),
             F.scalar(-27, m(c, c)), F.scalar(18, m(ab, c))]
    out = F.el(0)
    for t in terms:
        out = F.add(out, t)
    return out


def fraction_or_int(x) -> Fraction:
    return Fraction(x)
