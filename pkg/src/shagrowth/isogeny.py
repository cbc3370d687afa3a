"""Isogeny descriptors and heuristic validation (matching conductors, traces and periods)."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Optional

import sympy

from .curves import WeierstrassModel, conductor, minimal_model, trace_of_frobenius
from .periods import NoRationalFound, period_quotients


@dataclass(frozen=True)
class IsogenyStep:
    source: WeierstrassModel
    target: WeierstrassModel
    degree: int


@dataclass(frozen=True)
class IsogenyDescriptor:
    source: WeierstrassModel
    target: WeierstrassModel
    degree: int
    chain: Optional[tuple] = None
    labels: tuple = ("E", "E'")

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("isogeny degree must be positive")
        if self.chain is not None:
            steps = tuple(self.chain)
            object.__setattr__(self, "chain", steps)
            if prod(s.degree for s in steps) != self.degree:
                raise ValueError("chain degrees do not multiply to the isogeny degree")
            if any(not sympy.isprime(s.degree) for s in steps):
                raise ValueError("chain steps must have prime degree")

    def dual(self) -> "IsogenyDescriptor":
        chain = None
        if self.chain is not None:
            chain = tuple(IsogenyStep(s.target, s.source, s.degree) for s in reversed(self.chain))
        return IsogenyDescriptor(self.target, self.source, self.degree, chain, self.labels[::-1])

    def divides_degree(self, p: int) -> bool:
        return self.degree % p == 0


@dataclass
class ValidationReport:
    ok: bool
    conductors: tuple
    failures: list = field(default_factory=list)
    checked_primes: list = field(default_factory=list)


def validate_isogeny(d: IsogenyDescriptor, good_prime_bound: int = 50) -> ValidationReport:
    E, E2 = minimal_model(d.source)[0], minimal_model(d.target)[0]
    failures = []
    N, N2 = conductor(E), conductor(E2)
    if N != N2:
        failures.append(f"conductor mismatch: {N} vs {N2}")
    checked = []
    for q in sympy.primerange(2, good_prime_bound + 1):
        if N % q == 0 or N2 % q == 0:
            continue
        checked.append(q)
        aq, aq2 = trace_of_frobenius(E, q), trace_of_frobenius(E2, q)
        if aq != aq2:
            failures.append(f"a_{q} mismatch: {aq} vs {aq2}")
    if not failures:
        try:
            om, om_star = period_quotients(E, E2)
        except NoRationalFound as exc:
            failures.append(f"period quotient not rational: {exc}")
        else:
            for q in set(sympy.primefactors(om.numerator * om.denominator
                                            * om_star.numerator * om_star.denominator)):
                if d.degree % q:
                    failures.append(f"period quotient has {q}-part but {q} does not divide the degree")
    return ValidationReport(not failures, (N, N2), failures, checked)
