from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shagrowth.exact import ExactOrInterval, format_fraction, qvaluation, to_fraction, valuation

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)
halfwidths = st.fractions(min_value=0, max_value=100, max_denominator=12)


def test_parse_and_format_round_trip():
    for text in ("0", "-7", "13/2", "-1/3"):
        assert format_fraction(to_fraction(text)) == text


def test_valuations():
    assert valuation(1875, 5) == 4
    assert valuation(-243, 3) == 5
    assert qvaluation(Fraction(3, 25), 5) == -2
    with pytest.raises(ValueError):
        valuation(0, 5)


def test_hull_and_contains():
    x = ExactOrInterval.hull(-1, 1, note="n")
    assert (x.center, x.halfwidth) == (0, 1)
    assert x.contains(1) and x.contains(-1) and not x.contains(Fraction(3, 2))
    assert not x.is_exact
    with pytest.raises(ValueError):
        x.value


def test_negative_halfwidth_rejected():
    with pytest.raises(ValueError):
        ExactOrInterval(0, -1)


def test_json_round_trip():
    x = ExactOrInterval(Fraction(-2), Fraction(1, 2), "wild")
    assert ExactOrInterval.from_json(x.to_json()) == x
    assert str(x) == "-2 +- 1/2"


@given(fractions, halfwidths, fractions, halfwidths)
def test_addition_propagates_halfwidths(c1, h1, c2, h2):
    s = ExactOrInterval(c1, h1) + ExactOrInterval(c2, h2)
    assert s.center == c1 + c2 and s.halfwidth == h1 + h2
    # every sum of members is a member of the sum
    assert s.contains((c1 - h1) + (c2 + h2))


@given(fractions, halfwidths, fractions)
def test_scaling(c, h, k):
    x = ExactOrInterval(c, h).scale(k)
    assert x.center == c * k and x.halfwidth == h * abs(k)
