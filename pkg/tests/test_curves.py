import random
from fractions import Fraction

import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from oracles import kodaira_p_ge_5, vp
from shagrowth import catalog
from shagrowth.curves import (ADDITIVE, NONSPLIT, POT_SUPERSINGULAR, SPLIT, SingularCurveError,
                              WeierstrassModel, _integer_roots_cubic, bad_primes, conductor, minimal_model,
                              tamagawa_unramified, tate_local_data, torsion_order, torsion_p_part,
                              trace_of_frobenius)


@pytest.mark.parametrize("label,N", [("11a1", 11), ("11a2", 11), ("11a3", 11), ("49a1", 49), ("49a2", 49),
                                     ("54a1", 54), ("54a2", 54), ("54a3", 54), ("64a1", 64), ("64a4", 64),
                                     ("75a1", 75), ("75a2", 75), ("243a1", 243), ("243a2", 243)])
def test_conductors_of_bundled_curves(label, N):
    assert conductor(minimal_model(catalog.curve(label))[0]) == N


def test_singular_model_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassModel(0, 0, 0, 0, 0)


def test_minimal_model_of_scaled_curve():
    # 11a3 scaled by u = 6: a_i -> u^i a_i
    u = 6
    E = WeierstrassModel(0, -1 * u ** 2, 1 * u ** 3, 0, 0)
    Emin, scale = minimal_model(E)
    assert Emin.discriminant == -11
    assert abs(scale) == u


def test_minimal_model_of_rational_model():
    E = WeierstrassModel(0, Fraction(-1, 4), Fraction(1, 8), 0, 0)
    assert minimal_model(E)[0].discriminant == -11


@pytest.mark.parametrize("label,p,symbol,c,red", [
    ("11a1", 11, "I5", 5, SPLIT), ("11a3", 11, "I1", 1, SPLIT), ("75a1", 3, "I1", 1, NONSPLIT),
    ("75a2", 3, "I5", 1, NONSPLIT), ("75a1", 5, "IV", 1, ADDITIVE), ("75a2", 5, "IV*", 1, ADDITIVE),
    ("54a1", 3, "IV*", 3, ADDITIVE), ("54a3", 3, "II", 1, ADDITIVE), ("64a1", 2, "I2*", 4, ADDITIVE),
    ("64a4", 2, "II", 1, ADDITIVE), ("49a1", 7, "III", 2, ADDITIVE), ("243a2", 3, "IV*", 3, ADDITIVE)])
def test_tate_types(local, label, p, symbol, c, red):
    d = local(label, p)
    assert (d.symbol, d.tamagawa, d.reduction) == (symbol, c, red)


def test_wild_supersingular_classification(local):
    d = local("243a1", 3)
    assert d.potential == POT_SUPERSINGULAR and not d.tame
    assert (d.delta, d.conductor_exponent) == (5, 5)


def test_tamagawa_over_unramified_extensions(local):
    # nonsplit I_5 becomes split over the quadratic unramified extension
    d = local("75a2", 3)
    assert tamagawa_unramified(d, 1) == 1
    assert tamagawa_unramified(d, 2) == 5


def test_frobenius_traces_of_11a():
    E = minimal_model(catalog.curve("11a1"))[0]
    assert [trace_of_frobenius(E, q) for q in (2, 3, 5, 7, 13)] == [-2, -1, 1, -2, 4]


@pytest.mark.parametrize("coeffs,order", [
    ([0, -1, 1, -10, -20], 5), ([0, -1, 1, -7820, -263580], 1), ([0, -1, 1, 0, 0], 5),
    ([1, -1, 0, -2, -1], 2), ([0, 0, 1, 0, -1], 1), ([0, 0, 1, 0, 20], 3), ([1, 0, 1, -19, 26], 12),
    ([1, 0, 0, -1070, 7812], 16), ([0, 0, 0, -4, 0], 4), ([1, 1, 1, -10, -10], 8), ([0, 0, 0, 0, 1], 6)])
def test_torsion_orders(coeffs, order):
    assert torsion_order(WeierstrassModel.from_list(coeffs)) == order


def test_torsion_p_part():
    assert torsion_p_part(catalog.curve("11a1"), 5) == 5
    assert torsion_p_part(catalog.curve("11a1"), 3) == 1


def test_integer_cubic_roots_against_brute_force():
    rng = random.Random(7)
    for _ in range(300):
        a, b, c = rng.randint(-60, 60), rng.randint(-600, 600), rng.randint(-3000, 3000)
        expected = [x for x in range(-700, 701) if ((x + a) * x + b) * x + c == 0]
        assert _integer_roots_cubic(a, b, c) == expected


coeff = st.integers(-40, 40)


@settings(max_examples=150, deadline=None)
@given(coeff, coeff, coeff, coeff, coeff)
@example(-29, 34, 22, -8, -35)  # I_1* at 5, with delta below 12
@example(25, -3, 9, -3, 9)  # reduction passes through sympy integer types
def test_kodaira_at_large_primes_matches_valuation_table(a1, a2, a3, a4, a6):
    try:
        E = WeierstrassModel(a1, a2, a3, a4, a6)
    except SingularCurveError:
        return
    Emin = minimal_model(E)[0]
    for p in bad_primes(Emin):
        if p < 5:
            continue
        d = tate_local_data(Emin, p)
        symbol, f = kodaira_p_ge_5(d.delta, vp(int(Emin.c4), p), p)
        assert (d.symbol, d.conductor_exponent) == (symbol, f)
