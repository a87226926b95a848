from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlogic import expr as ex
from eqlogic.interval import DyadicInterval, UnboundedEnclosure, exp_interval, inv_e_bounds
from eqlogic.parse import parse_expression
from eqlogic.special import (
    InverseFunctionValue,
    OutOfBranchDomain,
    TargetOutsideRange,
    inverse_value,
    lambert_w,
)

mp.mp.dps = 50


def mpf(q):
    return mp.mpf(q.numerator) / q.denominator


def point(q, prec=96):
    return DyadicInterval.point(Fraction(q), prec)


@settings(max_examples=60, deadline=None)
@given(st.builds(Fraction, st.integers(-367, 10**5), st.integers(1000, 1000)))
def test_w0_matches_mpmath(z):
    r = lambert_w(0, point(z), 80)
    ref = mp.lambertw(mpf(z), 0).real
    assert mpf(r.lo) <= ref <= mpf(r.hi)
    assert r.width <= Fraction(1, 2**70)


@settings(max_examples=60, deadline=None)
@given(st.builds(Fraction, st.integers(-367, -1), st.just(1000)))
def test_wm1_matches_mpmath(z):
    r = lambert_w(-1, point(z), 80)
    ref = mp.lambertw(mpf(z), -1).real
    assert mpf(r.lo) <= ref <= mpf(r.hi)


def test_special_points():
    r = lambert_w(0, point(0))
    assert r.lo == r.hi == 0
    lo, hi = inv_e_bounds(300)
    r = lambert_w(-1, DyadicInterval(-hi, -lo, 300), 64)
    assert r.contains(-1) and r.width < Fraction(1, 2**40)


def test_domain_errors():
    with pytest.raises(OutOfBranchDomain):
        lambert_w(0, point(Fraction(-1, 2)))
    with pytest.raises(OutOfBranchDomain):
        lambert_w(-1, point(Fraction(1, 2)))
    with pytest.raises(UnboundedEnclosure):
        lambert_w(-1, DyadicInterval(Fraction(-1, 10), 0))


def test_interval_argument_is_monotone_hull():
    r0 = lambert_w(0, DyadicInterval(Fraction(1), Fraction(2), 64))
    assert mpf(r0.lo) <= mp.lambertw(1).real and mp.lambertw(2).real <= mpf(r0.hi)
    r1 = lambert_w(-1, DyadicInterval(Fraction(-3, 10), Fraction(-1, 10), 64))
    assert mpf(r1.lo) <= mp.lambertw(-0.1, -1).real and mp.lambertw(-0.3, -1).real <= mpf(r1.hi)


class TestInverseValue:
    def test_quintic(self):
        v = InverseFunctionValue(parse_expression("x^5 - x - 1"), ex.Interval(Fraction(1), None), Fraction(0))
        assert v.direction == 1
        r = inverse_value(v, 60)
        assert r.width <= Fraction(1, 2**60)
        assert mpf(r.lo) <= mp.findroot(lambda x: x**5 - x - 1, 1.2) <= mpf(r.hi)

    def test_decreasing(self):
        v = InverseFunctionValue(parse_expression("exp(-x)"), ex.Interval(None, None), Fraction(1, 3))
        assert v.direction == -1
        r = inverse_value(v, 50)
        assert mpf(r.lo) <= mp.log(3) <= mpf(r.hi)

    def test_target_outside_range(self):
        v = InverseFunctionValue(parse_expression("sqrt(x)"), ex.Interval(Fraction(0), None, True), Fraction(-1))
        with pytest.raises(TargetOutsideRange):
            inverse_value(v, 20)

    def test_non_monotone_is_refused(self):
        with pytest.raises(ValueError):
            InverseFunctionValue(parse_expression("x^2"), ex.Interval(None, None), Fraction(1))

    def test_hashable_value_identity(self):
        f = parse_expression("x^3")
        a = InverseFunctionValue(f, ex.Interval(None, None), Fraction(2), 1)
        b = InverseFunctionValue(f, ex.Interval(None, None), Fraction(2), 1, seed=(Fraction(1), Fraction(2)))
        assert a == b and hash(a) == hash(b)


def test_w_times_exp_w_round_trip():
    for k in range(1, 30):
        z = Fraction(k, 7)
        w = lambert_w(0, point(z, 128), 100)
        back = w * exp_interval(w)
        assert back.contains(z)
