"""Small polynomial toolkit over F_p: root counts, multiple roots, point counts.

Polynomials are coefficient lists, lowest degree first.
"""

from __future__ import annotations

BRUTE_FORCE_LIMIT = 2000


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _norm(f, p):
    return _trim([c % p for c in f])


def poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def poly_divmod(f, g, p):
    f = _norm(f, p)
    g = _norm(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and r:
        k = len(r) - len(g)
        c = (r[-1] * inv) % p
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = (r[i + k] - c * b) % p
        r = _trim(r)
    return _trim(q), r


def poly_gcd(f, g, p):
    f, g = _norm(f, p), _norm(g, p)
    while g:
        f, g = g, poly_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [(c * inv) % p for c in f]
    return f


def poly_powmod(base, e, mod, p):
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, p), mod, p)[1]
        base = poly_divmod(poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def derivative(f, p):
    return _norm([i * c for i, c in enumerate(f)][1:], p)


def count_roots(f, p) -> int:
    """Number of distinct roots of f in F_p."""
    f = _norm(f, p)
    if len(f) <= 1:
        if not f:
            raise ValueError("zero polynomial")
        return 0
    if p < BRUTE_FORCE_LIMIT:
        return sum(1 for x in range(p) if poly_eval(f, x, p) == 0)
    h = poly_powmod([0, 1], p, f, p)
    h = list(h) + [0] * max(0, 2 - len(h))
    h[1] = (h[1] - 1) % p
    g = poly_gcd(f, _trim(h), p)
    return max(len(g) - 1, 0)


def has_root(f, p) -> bool:
    return count_roots(f, p) > 0


def multiple_root(f, p) -> int:
    """The unique root of multiplicity >= 2 of f in F_p (raises if none or several)."""
    f = _norm(f, p)
    if p < BRUTE_FORCE_LIMIT:
        fd = derivative(f, p)
        hits = [x for x in range(p) if poly_eval(f, x, p) == 0 and poly_eval(fd, x, p) == 0]
        if len(hits) != 1:
            raise ValueError(f"expected one multiple root mod {p}, found {hits}")
        return hits[0]
    g = poly_gcd(f, derivative(f, p), p)
    if len(g) == 3:
        # (x - a)^2 from a triple root
        return (-g[1] * pow(2, -1, p)) % p
    if len(g) != 2:
        raise ValueError("no multiple root")
    return (-g[0] * pow(g[1], -1, p)) % p


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def count_points(b2: int, b4: int, b6: int, a: tuple, q: int) -> int:
    """Number of F_q-points (including infinity) of a curve with good reduction at q."""
    if q == 2:
        a1, a2, a3, a4, a6 = (x % 2 for x in a)
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    total = q + 1
    for x in range(q):
        total += legendre(4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6, q)
    return total


def hasse_invariant_vanishes(j0: int, p: int) -> bool:
    """True iff the curves over F_p with j-invariant j0 are supersingular (p >= 5)."""
    j0 %= p
    if j0 == 0:
        cubic = [1, 0, 0, 1]
    elif j0 == 1728 % p:
        cubic = [0, 1, 0, 1]
    else:
        k = j0 * pow((1728 - j0) % p, -1, p) % p
        cubic = [2 * k % p, 3 * k % p, 0, 1]
    power = [1]
    base = cubic
    e = (p - 1) // 2
    while e:
        if e & 1:
            power = poly_mul(power, base, p)
        base = poly_mul(base, base, p)
        e >>= 1
    coeff = power[p - 1] if len(power) > p - 1 else 0
    return coeff % p == 0
