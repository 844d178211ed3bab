import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isogeo import surd
from isogeo.surd import CSurd, Surd

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
surds = st.builds(Surd, small, small, small, small)


@given(surds, surds)
def test_arithmetic_matches_floats(x, y):
    assert float(x + y) == pytest.approx(float(x) + float(y), abs=1e-9)
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-9, abs=1e-9)


@given(surds)
def test_inverse(x):
    if x.is_zero():
        return
    assert x * x.inverse() == Surd(1)


@given(surds)
def test_str_parses_back(x):
    assert surd.parse(str(x)) == x


@pytest.mark.parametrize("k", range(-24, 25))
def test_trig_twelfths(k):
    assert float(surd.cos12(k)) == pytest.approx(math.cos(k * math.pi / 12), abs=1e-14)
    assert float(surd.sin12(k)) == pytest.approx(math.sin(k * math.pi / 12), abs=1e-14)
    z = complex(surd.expi12(k))
    assert abs(z - complex(math.cos(k * math.pi / 12), math.sin(k * math.pi / 12))) < 1e-14


def test_sqrt_of_rationals():
    assert Surd.sqrt(Fraction(3, 2)) * Surd.sqrt(Fraction(3, 2)) == Surd(Fraction(3, 2))
    assert Surd.sqrt(Fraction(2, 3)) == Surd(0, 0, 0, Fraction(1, 3))
    with pytest.raises(ValueError):
        Surd.sqrt(5)


def test_parse_expressions():
    assert surd.parse("-2*sqrt(3/2)") == -2 * Surd.sqrt(Fraction(3, 2))
    assert surd.parse("3*sqrt(3)/2") == Surd(0, 0, Fraction(3, 2))
    with pytest.raises(ValueError):
        surd.parse("sqrt(3")


def test_complex_norm():
    z = CSurd(Surd(1), Surd.sqrt(3))
    assert z.norm2() == Surd(4)
    assert (z * z.inverse()) == CSurd(1)
