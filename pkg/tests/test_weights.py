import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdl.weights import LOG3, TWO, Weight, WeightedSize


def test_parse_grammar():
    assert Weight.parse("2") == TWO
    assert Weight.parse("log3") == LOG3
    assert Weight.parse("5/3").value == Fraction(5, 3)
    assert str(Weight.parse("3/2")) == "3/2"
    for bad in ("3", "1/2", "x", "1/0"):
        with pytest.raises(ValueError):
            Weight.parse(bad)


def test_log3_near_tie():
    # 2^19 = 524288 < 3^12 = 531441
    assert LOG3.sign(-19, 12) == 1
    assert LOG3.compare((19, 0), (0, 12)) == -1
    # 3^53 and 2^84 agree to about 1e-3 in the exponent
    assert LOG3.sign(84, -53) == (1 if 2 ** 84 > 3 ** 53 else -1)
    assert LOG3.sign(0, 0) == 0


def test_rational_compare_exact():
    a = Weight.rational(5, 3)
    assert a.compare((5, 0), (0, 3)) == 0
    assert a.compare((6, 0), (0, 3)) == 1
    assert TWO.compare((2, 1), (0, 2)) == 0


@given(st.integers(-200, 200), st.integers(-200, 200))
def test_log3_sign_matches_high_precision(dp, dq):
    with mpmath.workdps(80):
        x = dp + dq * mpmath.log(3, 2)
        want = 0 if dp == dq == 0 else (1 if x > 0 else -1)
    assert LOG3.sign(dp, dq) == want


@given(st.integers(-50, 50), st.integers(-50, 50), st.fractions(1, 2))
def test_rational_sign_matches_fraction(dp, dq, a):
    x = dp + a * dq
    assert Weight(a).sign(dp, dq) == (x > 0) - (x < 0)


@given(st.fractions(-20, 20), st.fractions(-20, 20))
def test_fractional_differences(dp, dq):
    with mpmath.workdps(60):
        x = mpmath.mpf(dp.numerator) / dp.denominator + mpmath.mpf(dq.numerator) / dq.denominator * mpmath.log(3, 2)
    want = 0 if x == 0 else (1 if x > 0 else -1)
    assert LOG3.sign(dp, dq) == want


def test_weighted_size_value():
    s = WeightedSize(3, 2)
    assert s.value(TWO) == 7
    assert math.isclose(s.value(LOG3), 3 + 2 * math.log2(3))
    assert (s + WeightedSize(1, 1)).as_pair() == (4, 3)
