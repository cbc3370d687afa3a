from fractions import Fraction

import pytest

from shagrowth import catalog
from shagrowth.assembler import (UnderdeterminedFitError, asymptotic_mu_cyclotomic, asymptotic_mu_Zl,
                                 global_exponent_at_layer, growth_report, layer_breakdown, lie_polynomial_fit,
                                 sha_uncertainty_interval, torsion_term)
from shagrowth.exact import ExactOrInterval
from shagrowth.tower import CyclotomicTower, FalseTateTower, Z5SquaredQiTower, parse_tower


def exact_values(seq):
    return {n: ExactOrInterval.exact(v) for n, v in seq.items()}


def test_torsion_term_bounds():
    assert torsion_term(5, 5, 5, 5).value == 0
    assert torsion_term(5, 1, 5, 5).value == 2
    with pytest.raises(ArithmeticError):
        torsion_term(25, 1, 5, 5)


def test_false_tate_layers():
    phi = catalog.isogeny("11a1", "11a3")
    T = FalseTateTower(3, 7)
    for n in range(1, 5):
        assert global_exponent_at_layer(phi, T, 5, n).value == 3 ** (2 * n - 1) - 3 ** n


def test_false_tate_breakdown_parts():
    r = layer_breakdown(catalog.isogeny("11a1", "11a3"), FalseTateTower(3, 7), 5, 2)
    assert r.omega_term == 2 * 27 and r.omega_star_term == -27
    (place,) = r.places
    assert (place.count, place.total.value) == (9, -9)


def test_z5sq_layers():
    phi = catalog.isogeny("75a1", "75a2")
    for n in range(1, 4):
        expected = Fraction(-1, 3) * 25 ** n + (1 - Fraction(2, 3) * (-1) ** n) * 5 ** n
        assert global_exponent_at_layer(phi, Z5SquaredQiTower(), 5, n).value == expected


def test_cyclotomic_mu_values():
    assert asymptotic_mu_cyclotomic(catalog.isogeny("11a2", "11a3"), 7, 5).mu == 2
    m = asymptotic_mu_cyclotomic(catalog.isogeny("11a1", "11a3"), 5, 5)
    assert m.mu == 1 and m.epsilon_bound == Fraction(2, 3) and not m.exact
    m3 = asymptotic_mu_cyclotomic(catalog.isogeny("54a2", "54a3"), 3, 3)
    assert m3.mu == Fraction(4, 3) and m3.epsilon_bound == Fraction(3, 2)


def test_cyclotomic_mu_matches_layers_when_l_differs_from_p():
    phi = catalog.isogeny("11a2", "11a3")
    T = CyclotomicTower(3)
    mu = asymptotic_mu_cyclotomic(phi, 3, 5).mu
    e = {n: global_exponent_at_layer(phi, T, 5, n).value for n in range(0, 5)}
    # the growth is mu * 3^n plus a constant once the Tamagawa quotient has settled
    assert e[4] - e[3] == mu * (3 ** 4 - 3 ** 3)


def test_zl_mu_anticyclotomic():
    res = asymptotic_mu_Zl(catalog.isogeny("11a1", "11a3"), parse_tower("anticyclotomic-qi-5"), 5)
    assert res.per_place["11"] == -1 and res.base_omega == 1 and res.mu == 0


def test_zl_mu_rejects_lie_towers():
    with pytest.raises(ValueError):
        asymptotic_mu_Zl(catalog.isogeny("11a1", "11a3"), Z5SquaredQiTower(), 5)


def test_fit_recovers_polynomial():
    values = exact_values({n: 7 * 4 ** n - 3 * 2 ** n + 5 for n in range(1, 6)})
    fit = lie_polynomial_fit(values, 2, 2)
    assert fit.model == "polynomial" and fit.mu == 7 and fit.coefficients == [-3, 5]


def test_fit_detects_period_two():
    values = exact_values({n: Fraction(-1, 3) * 25 ** n + (1 - Fraction(2, 3) * (-1) ** n) * 5 ** n
                           for n in range(1, 6)})
    fit = lie_polynomial_fit(values, 5, 2)
    assert fit.mu == Fraction(-1, 3) and fit.fluctuating == [1] and fit.model == "period-2"
    assert fit.coefficients[0] == {"even": Fraction(1, 3), "odd": Fraction(5, 3)}


def test_fit_needs_enough_layers():
    with pytest.raises(UnderdeterminedFitError):
        lie_polynomial_fit(exact_values({1: 1, 2: 2}), 5, 1)


def test_fit_unresolved():
    fit = lie_polynomial_fit(exact_values({1: 0, 2: 1, 3: 0, 4: 7}), 3, 1)
    assert fit.model == "unresolved" and not fit.residual_ok


def test_sha_interval_widening():
    x = sha_uncertainty_interval(ExactOrInterval.exact(10), 2, 25, 5)
    assert (x.lo, x.hi) == (6, 14)
    y = sha_uncertainty_interval(ExactOrInterval.exact(10), 0, 5, 5, torsion_exact=False)
    assert (y.lo, y.hi) == (8, 12)


def test_negative_control_prime_not_dividing_degree():
    rep = growth_report(catalog.isogeny("11a1", "11a3"), FalseTateTower(3, 7), 3, range(1, 5))
    assert all(r.exponent.value == 0 for r in rep.layers)


def test_growth_report_json_shape():
    rep = growth_report(catalog.isogeny("75a1", "75a2"), Z5SquaredQiTower(), 5, range(1, 6))
    doc = rep.to_json()
    assert doc["mu"] == "-1/3" and doc["fluctuating"] == [1]
    assert [row["exponent_center"] for row in doc["layers"]] == ["0", "-200", "-5000", "-130000", "-3250000"]
    assert rep.constant_term.value == 0


def test_torsion_override_is_used():
    phi = catalog.isogeny("11a1", "11a3")
    rep = growth_report(phi, FalseTateTower(3, 7), 5, [1], torsion_overrides={1: (5, 1)})
    assert rep.layers[0].torsion.value == 2
