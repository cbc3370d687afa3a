"""Global growth of the Selmer/Sha quotient for an isogeny along a tower of number fields.

The exponent at layer n is the p-adic valuation of

    |Sel_div(E/K_n)[phi]| / |Sel_div(E'/K_n)[phi^t]|  *  |Sha0(E/K_n)[p^oo]| / |Sha0(E'/K_n)[p^oo]|

assembled from torsion, periods and one local factor per place of K_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import sympy

from . import curves
from .curves import minimal_model, tate_local_data
from .exact import ZERO, ExactOrInterval, format_fraction, qvaluation, valuation
from .isogeny import IsogenyDescriptor
from .local_growth import (GammaExponent, archimedean_gamma, discriminant_base_change, gamma_exponent,
                          omega_phi, tamagawa_quotient_layer)
from .periods import DEFAULT_DIGITS, period_quotients
from .tower import CyclotomicTower, GenericTower, LocalTowerData, TowerModel, UnknownPlaceError


class UnderdeterminedFitError(ValueError):
    pass


@dataclass(frozen=True)
class BaseData:
    """Everything about the pair E -> E' over Q that the layer computations need."""
    degree: int
    omega_quotient: Fraction
    omega_star_quotient: Fraction
    local: dict                    # q -> (LocalReductionData of E, of E')
    torsion: tuple                 # (|E(Q)|, |E'(Q)|)
    discriminants: tuple           # minimal discriminants (Delta_E, Delta_E')
    j_invariant: Fraction


def base_data(phi: IsogenyDescriptor, digits: int = DEFAULT_DIGITS) -> BaseData:
    return _base_data_cached(phi.source.ainvs, phi.target.ainvs, phi.degree, digits)


@lru_cache(maxsize=64)
def _base_data_cached(a, a2, degree, digits) -> BaseData:
    E = minimal_model(curves.WeierstrassModel(*a))[0]
    E2 = minimal_model(curves.WeierstrassModel(*a2))[0]
    om, om_star = period_quotients(E, E2, digits)
    primes = sorted(set(curves.bad_primes(E)) | set(curves.bad_primes(E2)))
    local = {q: (tate_local_data(E, q), tate_local_data(E2, q)) for q in primes}
    return BaseData(degree, om, om_star, local, (curves.torsion_order(E), curves.torsion_order(E2)),
                    (E.discriminant, E2.discriminant), E.j_invariant)


@dataclass
class PlaceContribution:
    place: str
    e: int
    f: int
    count: int
    gamma: GammaExponent

    @property
    def total(self) -> ExactOrInterval:
        return self.gamma.total.scale(self.count)

    def to_json(self) -> dict:
        return {"place": self.place, "e": self.e, "f": self.f, "count": self.count,
                "per_place": self.gamma.to_json(), "total": self.total.to_json()}


@dataclass
class LayerResult:
    n: int
    exponent: ExactOrInterval
    torsion: ExactOrInterval
    omega_term: int
    omega_star_term: int
    places: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.exponent.is_exact

    def to_json(self) -> dict:
        return {"layer": self.n, "exponent_center": format_fraction(self.exponent.center),
                "exponent_halfwidth": format_fraction(self.exponent.halfwidth), "exact": self.exact,
                "breakdown": {"torsion": self.torsion.to_json(),
                              "omega": format_fraction(self.omega_term),
                              "omega_star": format_fraction(self.omega_star_term),
                              "places": [c.to_json() for c in self.places]},
                "assumptions": list(self.assumptions)}


def torsion_term(t: int, t2: int, p: int, degree: int) -> ExactOrInterval:
    """ord_p of |E[p^oo]||E^t[p^oo]| / |E'[p^oo]||E'^t[p^oo]| for elliptic curves (self-dual)."""
    a = valuation(t, p) - valuation(t2, p)
    k = valuation(degree, p)
    if not -k <= a <= k:
        raise ArithmeticError(f"torsion quotient exponent {a} outside [-{k}, {k}]")
    return ExactOrInterval.exact(2 * a)


def layer_breakdown(phi: IsogenyDescriptor, T: TowerModel, p: int, n: int,
                    torsion: Optional[tuple] = None, base: Optional[BaseData] = None) -> LayerResult:
    if not sympy.isprime(p):
        raise ValueError("p must be prime")
    if phi.degree % p:
        return LayerResult(n, ZERO, ZERO, 0, 0, assumptions=[f"{p} does not divide the degree: no {p}-part"])
    base = base or base_data(phi)
    notes = list(T.assumptions())
    if torsion is None:
        torsion = base.torsion
        notes.append("torsion over each layer taken equal to torsion over Q (assumed stabilised)")
    tors = torsion_term(*torsion, p, phi.degree)
    deg = T.degree_over_Q(n)
    cplx = T.complex_places(n)
    omega_term = deg * qvaluation(base.omega_quotient, p)
    archimedean = archimedean_gamma(cplx, qvaluation(base.omega_star_quotient, p))
    omega_star_term = archimedean.total.value
    total = tors + ExactOrInterval.exact(omega_term) + archimedean.total
    contributions = []
    for q, (dE, dE2) in base.local.items():
        if q in (2, 3) and dE.is_additive and not dE.tame:
            notes.append(f"{q}: potential reduction type read off from j mod {q} (wild additive place)")
        for pr in T.profiles_over_Q(q, n):
            g = gamma_exponent(dE, dE2, pr, p, degree=phi.degree, chain=phi.chain)
            c = PlaceContribution(str(q), pr.e, pr.f, pr.count, g)
            contributions.append(c)
            total = total + c.total
            for note in (g.tamagawa.note, g.omega_phi.note):
                if note and f"{q}: {note}" not in notes:
                    notes.append(f"{q}: {note}")
    return LayerResult(n, total, tors, omega_term, omega_star_term, contributions, notes)


def global_exponent_at_layer(phi: IsogenyDescriptor, T: TowerModel, p: int, n: int,
                             torsion: Optional[tuple] = None, base: Optional[BaseData] = None) -> ExactOrInterval:
    return layer_breakdown(phi, T, p, n, torsion, base).exponent


# --- mu invariants -----------------------------------------------------------

@dataclass(frozen=True)
class CyclotomicMu:
    mu: Fraction
    epsilon_bound: Fraction
    exact: bool


def asymptotic_mu_cyclotomic(phi: IsogenyDescriptor, l: int, p: int,
                             base: Optional[BaseData] = None) -> CyclotomicMu:
    if phi.degree % p:
        return CyclotomicMu(Fraction(0), Fraction(0), True)
    base = base or base_data(phi)
    mu = Fraction(qvaluation(base.omega_quotient, p))
    j = base.j_invariant
    if l == p and (j == 0 or qvaluation(j, p) >= 0):
        mu += Fraction(qvaluation(Fraction(base.discriminants[1]) / base.discriminants[0], p), 12)
    if l != p or phi.degree % l:
        return CyclotomicMu(mu, Fraction(0), True)
    bound = {2: Fraction(17, 2), 3: Fraction(3, 2)}.get(p, Fraction(2, 3))
    return CyclotomicMu(mu, bound, False)


@dataclass(frozen=True)
class ZlMu:
    mu: Fraction
    base_omega: Fraction
    per_place: dict            # place label -> mu_v
    exact: bool
    notes: tuple = ()


def _classified_places(T: TowerModel, q: int) -> list[tuple[LocalTowerData, str]]:
    if isinstance(T, CyclotomicTower):
        return [(LocalTowerData(q, q), "ramified" if q == T.l else "unramified")]
    if isinstance(T, GenericTower):
        return [(v, v.behaviour) for v in T.base_places_over(q)]
    raise UnknownPlaceError(f"places of a {T.kind} tower are not classified for the Z_l formula")


def _base_field_omega(T: TowerModel, base: BaseData, p: int) -> Fraction:
    """ord_p(Omega_{E'/K}/Omega_{E/K}) for the base field K of the tower."""
    if isinstance(T, GenericTower) and T.omega_quotient_over_base is not None:
        om, om_star = T.omega_quotient_over_base
        return Fraction(qvaluation(om, p) if om else 0) + (qvaluation(om_star, p) if om_star else 0)
    deg = T.base_degree
    cplx = getattr(T, "base_complex_places", 0)
    total = Fraction(deg * qvaluation(base.omega_quotient, p) + cplx * qvaluation(base.omega_star_quotient, p))
    if p in base.local and deg > 1:
        dE, dE2 = base.local[p]
        for v, _ in _classified_places(T, p):
            om = omega_phi(dE, dE2, v.e_base, degree=base.degree)
            total += om.center * v.f_base * v.count_base
    return total


def asymptotic_mu_Zl(phi: IsogenyDescriptor, T: TowerModel, p: int,
                     base: Optional[BaseData] = None) -> ZlMu:
    if T.d != 1:
        raise ValueError("the Z_l formula needs a one-dimensional tower")
    if phi.degree % p:
        return ZlMu(Fraction(0), Fraction(0), {}, True)
    base = base or base_data(phi)
    base_omega = _base_field_omega(T, base, p)
    mu = base_omega
    per_place, exact, notes = {}, True, []
    for q, (dE, dE2) in base.local.items():
        for v, behaviour in _classified_places(T, q):
            label = str(v.place)
            if behaviour == "split":
                t = tamagawa_quotient_layer(dE, dE2, v.e_base, v.f_base, p, phi.degree)
                if not t.is_exact:
                    exact = False
                    notes.append(f"{label}: Tamagawa quotient over K_v only bounded; centre used")
                mu_v = t.center
            elif (behaviour == "ramified" and T.l == p and q == p
                  and (base.j_invariant == 0 or qvaluation(base.j_invariant, p) >= 0)
                  and dE.potential != curves.POT_ORDINARY):
                dK = discriminant_base_change(dE.delta, dE.eth, v.e_base, dE.tame, v.e_base % q != 0, q,
                                              semistable=dE.is_semistable,
                                              conductor_base=dE.conductor_exponent)
                dK2 = discriminant_base_change(dE2.delta, dE2.eth, v.e_base, dE2.tame, v.e_base % q != 0, q,
                                               semistable=dE2.is_semistable,
                                               conductor_base=dE2.conductor_exponent)
                if not (dK.is_exact and dK2.is_exact):
                    exact = False
                    notes.append(f"{label}: discriminant over K_v only bounded; centre used")
                mu_v = Fraction(v.f_base, 12) * (dK2.center - dK.center)
            else:
                mu_v = Fraction(0)
            per_place[label] = mu_v * v.count_base
            mu += per_place[label]
    return ZlMu(mu, base_omega, per_place, exact, tuple(notes))


# --- polynomial fits in l^n ----------------------------------------------------

@dataclass
class LieFit:
    mu: Fraction
    coefficients: list          # mu_1 .. mu_d; each a Fraction or {"even": ., "odd": .}
    fluctuating: list           # indices (1-based) of fluctuating coefficients
    model: str                  # "polynomial", "period-2" or "unresolved"
    residual_ok: bool

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, dict):
                return {k: format_fraction(v) for k, v in c.items()}
            return format_fraction(c)
        return {"mu": format_fraction(self.mu), "coefficients": [enc(c) for c in self.coefficients],
                "fluctuating": self.fluctuating, "model": self.model}


def _solve(rows, rhs):
    M = sympy.Matrix(rows)
    b = sympy.Matrix(rhs)
    sol = M.LUsolve(b)
    return [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol]


def _fits(values: dict, predict) -> bool:
    return all(abs(predict(n) - v.center) <= v.halfwidth for n, v in values.items())


def lie_polynomial_fit(values: dict, l: int, d: int) -> LieFit:
    """Fit exponent(n) = mu l^{dn} + mu_1 l^{(d-1)n} + ... + mu_d over the supplied layers.

    `values` maps n to ExactOrInterval. A single polynomial is tried first; if it
    fails, lower coefficients are allowed to depend on the parity of n.
    """
    ns = sorted(values)
    if len(ns) < d + 2:
        raise UnderdeterminedFitError(f"need at least {d + 2} layers for a dimension {d} fit")
    powers = lambda n: [Fraction(l) ** ((d - i) * n) for i in range(d + 1)]

    top = ns[-(d + 1):]
    coeffs = _solve([powers(n) for n in top], [values[n].center for n in top])
    predict = lambda n: sum(c * x for c, x in zip(coeffs, powers(n)))
    if _fits(values, predict):
        return LieFit(coeffs[0], coeffs[1:], [], "polynomial", True)

    if len(ns) >= 2 * d + 1:
        top = ns[-(2 * d + 1):]

        def row(n):
            pw = powers(n)
            out = [pw[0]]
            for x in pw[1:]:
                out += [x, Fraction(0)] if n % 2 == 0 else [Fraction(0), x]
            return out

        sol = _solve([row(n) for n in top], [values[n].center for n in top])
        predict2 = lambda n: sum(c * x for c, x in zip(sol, row(n)))
        if _fits(values, predict2):
            coefficients, fluct = [], []
            for i in range(d):
                ev, od = sol[1 + 2 * i], sol[2 + 2 * i]
                if ev == od:
                    coefficients.append(ev)
                else:
                    coefficients.append({"even": ev, "odd": od})
                    fluct.append(i + 1)
            return LieFit(sol[0], coefficients, fluct, "period-2", True)

    n = ns[-1]
    mu = values[n].center / Fraction(l) ** (d * n)
    return LieFit(mu, [None] * d, list(range(1, d + 1)), "unresolved", False)


# --- Sha-only interval ---------------------------------------------------------

def sha_uncertainty_interval(layer_exponent: ExactOrInterval, rk_bound: int, degree: int, p: int,
                             torsion_exact: bool = True) -> ExactOrInterval:
    """ord_p of the Sha0 quotient alone, given a bound on the Z_p-corank of the Selmer group."""
    if rk_bound < 0:
        raise ValueError("corank bound must be non-negative")
    k = valuation(degree, p)
    out = layer_exponent.widen(rk_bound * k, "divisible Selmer part bounded by the corank" if rk_bound else "")
    if not torsion_exact:
        out = out.widen(2 * k, "torsion over the layer not known exactly")
    return out


# --- reports -------------------------------------------------------------------

@dataclass
class GrowthReport:
    p: int
    tower: str
    degree: int
    layers: list
    mu: Optional[Fraction]
    mu_source: str
    coefficients: list
    fluctuating: list
    constant_term: Optional[ExactOrInterval]
    sha_intervals: list
    assumptions: list

    def to_json(self) -> dict:
        return {
            "p": self.p, "tower": self.tower, "degree": self.degree,
            "mu": format_fraction(self.mu) if self.mu is not None else None,
            "mu_source": self.mu_source,
            "coefficients": [c if c is None else ({k: format_fraction(v) for k, v in c.items()}
                                                   if isinstance(c, dict) else format_fraction(c))
                             for c in self.coefficients],
            "fluctuating": self.fluctuating,
            "constant_term": self.constant_term.to_json() if self.constant_term else None,
            "layers": [r.to_json() for r in self.layers],
            "sha_intervals": [{"layer": r.n, **s.to_json()} for r, s in zip(self.layers, self.sha_intervals)],
            "assumptions": self.assumptions,
        }


def growth_report(phi: IsogenyDescriptor, T: TowerModel, p: int, layers, rk_bound: Optional[int] = None,
                  torsion_overrides: Optional[dict] = None, digits: int = DEFAULT_DIGITS,
                  torsion_known: bool = True) -> GrowthReport:
    layers = list(layers)
    if not layers:
        raise ValueError("empty layer range")
    base = base_data(phi, digits) if phi.degree % p == 0 else None
    torsion_overrides = torsion_overrides or {}
    results = [layer_breakdown(phi, T, p, n, torsion_overrides.get(n), base) for n in layers]
    assumptions = []
    for r in results:
        for a in r.assumptions:
            if a not in assumptions:
                assumptions.append(a)

    mu, source, coeffs, fluct = None, "", [], []
    l, d = T.l, T.d
    if phi.degree % p == 0 and isinstance(T, CyclotomicTower):
        mu, source = asymptotic_mu_cyclotomic(phi, T.l, p, base).mu, "cyclotomic formula"
    elif phi.degree % p == 0 and isinstance(T, GenericTower) and T.kind == "generic-Zl":
        try:
            mu, source = asymptotic_mu_Zl(phi, T, p, base).mu, "Z_l formula"
        except UnknownPlaceError as exc:
            assumptions.append(f"mu not available from the Z_l formula: {exc}")
    values = {r.n: r.exponent for r in results}
    if len(values) >= d + 2:
        fit = lie_polynomial_fit(values, l, d)
        if mu is None:
            mu, source = fit.mu, f"{fit.model} fit over layers {layers[0]}..{layers[-1]}"
        coeffs, fluct = fit.coefficients, fit.fluctuating
    elif mu is None:
        source = "not determined (too few layers for a fit)"

    constant = None
    if mu is not None:
        last = results[-1]
        growing = mu * Fraction(l) ** (d * last.n)
        # subtract the known mu_1 .. mu_{d-1} terms; whatever is left is the observed constant
        for i, c in enumerate(coeffs[:-1], start=1):
            if isinstance(c, dict):
                c = c["even" if last.n % 2 == 0 else "odd"]
            if c is not None:
                growing += c * Fraction(l) ** ((d - i) * last.n)
        rest = last.exponent - ExactOrInterval.exact(growing)
        constant = ExactOrInterval(rest.center, rest.halfwidth,
                                   f"observed at layer {last.n}, not an asymptotic claim")

    k_rank = rk_bound if rk_bound is not None else 0
    torsion_exact = torsion_known or all(n in torsion_overrides for n in layers)
    sha = [sha_uncertainty_interval(r.exponent, k_rank, phi.degree, p, torsion_exact) for r in results]
    if rk_bound is None:
        assumptions.append("Sha-only intervals assume Z_p-corank 0 over every layer")
    return GrowthReport(p, T.describe(), phi.degree, results, mu, source, coeffs, fluct, constant, sha,
                        assumptions)
