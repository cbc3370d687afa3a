"""Towers of number fields K_n/K: decomposition of primes and archimedean signature by layer."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import sympy

from .exact import to_fraction

Place = Union[int, str]

KINDS = ("cyclotomic-Q", "generic-Zl", "generic-Lie", "false-Tate", "preset-Z5sq-Qi")


class UnknownPlaceError(KeyError):
    pass


@dataclass(frozen=True)
class Profile:
    """`count` places w above v, each with ramification e and residue degree f."""
    e: int
    f: int
    count: int


@dataclass(frozen=True)
class AsymptoticForm:
    C1: Fraction = Fraction(1)
    C2: Fraction = Fraction(1)
    C3: Fraction = Fraction(1)
    dim_inertia: int = 0
    dim_decomposition: int = 0

    def at(self, l: int, d: int, n: int) -> tuple[int, int, int]:
        e = self.C1 * l ** (n * self.dim_inertia)
        f = self.C2 * l ** (n * (self.dim_decomposition - self.dim_inertia))
        g = self.C3 * l ** (n * (d - self.dim_decomposition))
        if any(x.denominator != 1 for x in (e, f, g)):
            raise ValueError(f"asymptotic form gives non-integral data at n={n}")
        return int(e), int(f), int(g)


@dataclass(frozen=True)
class LocalTowerData:
    place: Place
    residue_char: int
    e_base: int = 1
    f_base: int = 1
    count_base: int = 1
    threshold: int = 0
    table: tuple = ()
    asymptotic: Optional[AsymptoticForm] = None

    def at(self, l: int, d: int, n: int) -> tuple[int, int, int]:
        if n < self.threshold:
            if n >= len(self.table):
                raise ValueError(f"no table entry for layer {n} at {self.place}")
            return tuple(self.table[n])
        if self.asymptotic is None:
            raise ValueError(f"no asymptotic form for {self.place}")
        return self.asymptotic.at(l, d, n)

    @property
    def behaviour(self) -> str:
        a = self.asymptotic or AsymptoticForm()
        if a.dim_inertia > 0:
            return "ramified"
        if a.dim_decomposition > 0:
            return "unramified"
        return "split"


# --- cyclotomic layers of Q ------------------------------------------------

def cyclotomic_local_data(l: int, q: int, n: int) -> tuple[int, int, int]:
    """(e, f, g) of q in the degree l^n layer of the cyclotomic Z_l-extension of Q."""
    if n < 0:
        raise ValueError("layer must be non-negative")
    if q == l:
        return l ** n, 1, 1
    mod = l ** (n + 2)
    x = q % mod

    def in_kernel(y):
        if l == 2:
            return y in (1, mod - 1)
        return pow(y, l * (l - 1), mod) == 1

    j = 0
    while not in_kernel(x):
        x = pow(x, l, mod)
        j += 1
    f = l ** j
    return 1, f, l ** n // f


def multiplicative_order(a: int, m: int) -> int:
    return int(sympy.n_order(a, m))


# --- tower models -----------------------------------------------------------

class TowerModel:
    kind: str = ""
    l: int = 0
    d: int = 1
    base_degree: int = 1
    base_complex_places: int = 0

    def layer_degree(self, n: int) -> int:
        """[K_n : K]."""
        raise NotImplementedError

    def degree_over_Q(self, n: int) -> int:
        return self.base_degree * self.layer_degree(n)

    def complex_places(self, n: int) -> int:
        """Number of complex places of K_n (all lie above the real place of Q)."""
        raise NotImplementedError

    def local_data(self, v: Place, n: int) -> list[Profile]:
        """Profiles of places of K_n above the place v of K."""
        raise NotImplementedError

    def base_places_over(self, q: int) -> list[LocalTowerData]:
        """Places of K above the rational prime q, with their data over Q_q."""
        return [LocalTowerData(q, q)]

    def profiles_over_Q(self, q: int, n: int) -> list[Profile]:
        """Profiles of places of K_n above q, with e and f relative to Q_q."""
        out = []
        for v in self.base_places_over(q):
            for pr in self.local_data(v.place, n):
                out.append(Profile(v.e_base * pr.e, v.f_base * pr.f, v.count_base * pr.count))
        return out

    def assumptions(self) -> list[str]:
        return []

    def describe(self) -> str:
        return self.kind


class CyclotomicTower(TowerModel):
    kind = "cyclotomic-Q"

    def __init__(self, l: int):
        if not sympy.isprime(l):
            raise ValueError("l must be prime")
        self.l = l

    def layer_degree(self, n):
        return self.l ** n

    def complex_places(self, n):
        return 0

    def local_data(self, v, n):
        e, f, g = cyclotomic_local_data(self.l, int(v), n)
        return [Profile(e, f, g)]

    def describe(self):
        return f"cyclotomic:{self.l}"


class FalseTateTower(TowerModel):
    """Layers Q(zeta_{l^n}, m^{1/l^n}) for an odd prime l and an l-th-power-free m."""
    kind = "false-Tate"
    d = 2

    def __init__(self, l: int, m: int):
        if not sympy.isprime(l) or l == 2:
            raise ValueError("false Tate towers need an odd prime l")
        if m < 2 or any(k % l == 0 for k in sympy.factorint(m).values()):
            raise ValueError("m must be an integer > 1 whose exponents are prime to l")
        self.l, self.m = l, m

    def layer_degree(self, n):
        if n == 0:
            return 1
        return (self.l - 1) * self.l ** (2 * n - 1)

    def complex_places(self, n):
        return 0 if n == 0 else self.layer_degree(n) // 2

    def _unramified(self, q, n):
        l, m = self.l, self.m
        ln = l ** n
        f1 = multiplicative_order(q, ln)
        Q_mod = pow(q, f1, ln * (q - 1))
        # exponent (q^f1 - 1)/l^n reduced mod q - 1
        k = ((Q_mod - 1) % (ln * (q - 1))) // ln
        z = pow(m % q, k, q)
        f2 = multiplicative_order(z, q) if z != 1 else 1
        f = f1 * f2
        return [Profile(1, f, self.layer_degree(n) // f)]

    def local_data(self, v, n):
        q = int(v)
        l, m = self.l, self.m
        if n == 0:
            return [Profile(1, 1, 1)]
        if q != l and m % q:
            return self._unramified(q, n)
        if q != l:
            # tame Kummer ramification over the cyclotomic layer, where q is unramified
            f1 = multiplicative_order(q, l ** n)
            g1 = (l - 1) * l ** (n - 1) // f1
            return [Profile(l ** n, f1, g1)]
        if pow(m, l - 1, l * l) != 1:
            return [Profile(self.layer_degree(n), 1, 1)]
        raise UnknownPlaceError(f"decomposition of {l} is not modelled when m^(l-1) = 1 mod l^2")

    def assumptions(self):
        return [f"prime {self.l} assumed totally ramified in the false Tate tower"
                f" (m^(l-1) != 1 mod l^2); only used if a curve is bad at {self.l}"]

    def describe(self):
        return f"false-tate:{self.l}:{self.m}"


class Z5SquaredQiTower(TowerModel):
    """Preset Z_5^2 tower over Q(i): layer degree 2*5^(2n) over Q, data known at 3 and 5."""
    kind = "preset-Z5sq-Qi"
    l = 5
    d = 2

    def layer_degree(self, n):
        return 2 * 25 ** n

    def complex_places(self, n):
        return 25 ** n

    def local_data(self, v, n):
        q = int(v)
        if q == 3:
            return [Profile(1, 2 * 5 ** n, 5 ** n)]
        if q == 5:
            return [Profile(5 ** n, 5 ** n, 2)]
        raise UnknownPlaceError(f"decomposition of {q} is not part of the Z5^2 preset")

    def describe(self):
        return "z5sq-qi"


class GenericTower(TowerModel):
    """Z_l or l-adic Lie tower over a base field K described by per-place records."""

    def __init__(self, kind: str, l: int, d: int, places: list[LocalTowerData],
                 base_degree: int = 1, base_real_places: int = 1, base_complex_places: int = 0,
                 degree_constant: Fraction = Fraction(1), degree_table: tuple = (),
                 archimedean: Optional[dict] = None, base_label: str = "Q",
                 omega_quotient_over_base: Optional[tuple] = None, name: str = ""):
        if kind not in ("generic-Zl", "generic-Lie"):
            raise ValueError(f"unknown generic tower kind {kind}")
        if kind == "generic-Zl" and d != 1:
            raise ValueError("Z_l towers have dimension 1")
        if base_real_places + 2 * base_complex_places != base_degree:
            raise ValueError("base signature does not match the base degree")
        self.kind, self.l, self.d = kind, l, d
        self.places = {str(p.place): p for p in places}
        self.base_degree = base_degree
        self.base_real_places = base_real_places
        self.base_complex_places = base_complex_places
        self.degree_constant = Fraction(degree_constant)
        self.degree_table = tuple(degree_table)
        self.archimedean = archimedean or {}
        self.base_label = base_label
        self.omega_quotient_over_base = omega_quotient_over_base
        self.name = name

    def layer_degree(self, n):
        if n < len(self.degree_table):
            return int(self.degree_table[n])
        deg = self.degree_constant * self.l ** (self.d * n)
        if deg.denominator != 1:
            raise ValueError("non-integral layer degree")
        return int(deg)

    def complex_places(self, n):
        table = self.archimedean.get("table", {})
        if str(n) in table:
            return int(table[str(n)])
        if "constant" in self.archimedean:
            c = Fraction(self.archimedean["constant"]) * self.l ** (int(self.archimedean.get("power", self.d)) * n)
            return int(c)
        return self.base_complex_places * self.layer_degree(n)

    def local_data(self, v, n):
        rec = self.places.get(str(v))
        if rec is None:
            raise UnknownPlaceError(f"place {v} is not described by the tower")
        e, f, g = rec.at(self.l, self.d, n)
        return [Profile(e, f, g)]

    def base_places_over(self, q):
        found = [p for p in self.places.values() if p.residue_char == q]
        if not found:
            raise UnknownPlaceError(f"no place of {self.base_label} above {q} is described by the tower")
        return found

    def assumptions(self):
        out = []
        for p in self.places.values():
            if p.threshold:
                out.append(f"threshold n0={p.threshold} at place {p.place} is user-supplied")
        return out

    def describe(self):
        return self.name or f"{self.kind}:{self.l} over {self.base_label}"


def tower_local_data(T: TowerModel, v: Place, n: int) -> list[Profile]:
    return T.local_data(v, n)


def layer_signature(T: TowerModel, n: int) -> tuple[int, int]:
    return T.degree_over_Q(n), T.complex_places(n)


# --- tower description files and presets---------------------------------------------

def _place_from_json(d: dict) -> LocalTowerData:
    asym = d.get("asymptotic")
    form = None
    if asym is not None:
        form = AsymptoticForm(to_fraction(str(asym.get("C1", 1))), to_fraction(str(asym.get("C2", 1))),
                              to_fraction(str(asym.get("C3", 1))), int(asym.get("dimI", 0)),
                              int(asym.get("dimD", 0)))
    return LocalTowerData(
        place=str(d["place"]), residue_char=int(d["residue_char"]),
        e_base=int(d.get("e_over_Qp", 1)), f_base=int(d.get("f_over_Qp", 1)),
        count_base=int(d.get("count", 1)), threshold=int(d.get("threshold", 0)),
        table=tuple(tuple(int(x) for x in row) for row in d.get("table", [])), asymptotic=form,
    )


def tower_from_dict(d: dict) -> TowerModel:
    kind = d["kind"]
    if kind == "cyclotomic-Q":
        return CyclotomicTower(int(d["l"]))
    if kind == "false-Tate":
        return FalseTateTower(int(d["l"]), int(d["m"]))
    if kind == "preset-Z5sq-Qi":
        return Z5SquaredQiTower()
    base = d.get("base", {})
    oq = d.get("omega_quotient_over_base")
    return GenericTower(
        kind, int(d["l"]), int(d.get("d", 1)), [_place_from_json(p) for p in d.get("places", [])],
        base_degree=int(base.get("degree", 1)), base_real_places=int(base.get("real_places", 1)),
        base_complex_places=int(base.get("complex_places", 0)),
        degree_constant=to_fraction(str(d.get("degree_constant", 1))),
        degree_table=tuple(d.get("degree_table", ())), archimedean=d.get("archimedean"),
        base_label=base.get("label", "K"),
        omega_quotient_over_base=tuple(to_fraction(str(x)) for x in oq) if oq else None,
        name=d.get("name", ""),
    )


def load_tower_file(path) -> TowerModel:
    with open(path) as fh:
        return tower_from_dict(json.load(fh))


BUNDLED_TOWERS = Path(__file__).parent / "data" / "towers"


def parse_tower(text: str) -> TowerModel:
    """Tower from a preset string: cyclotomic:l, false-tate:l:m, z5sq-qi, or a bundled file name."""
    parts = text.strip().split(":")
    name = parts[0].lower()
    if name in ("cyclotomic", "cyclotomic-q") and len(parts) == 2:
        return CyclotomicTower(int(parts[1]))
    if name in ("false-tate", "falsetate") and len(parts) == 3:
        return FalseTateTower(int(parts[1]), int(parts[2]))
    if name in ("z5sq-qi", "preset-z5sq-qi") and len(parts) == 1:
        return Z5SquaredQiTower()
    bundled = BUNDLED_TOWERS / f"{text}.json"
    if bundled.exists():
        return load_tower_file(bundled)
    raise ValueError(f"unknown tower preset {text!r}")


def bundled_tower_names() -> list[str]:
    return sorted(p.stem for p in BUNDLED_TOWERS.glob("*.json"))
