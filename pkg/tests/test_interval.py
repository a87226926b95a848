from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eqlogic import expr as ex
from eqlogic.interval import (
    DyadicInterval,
    Sign,
    UnboundedEnclosure,
    certified_sign_const,
    cos_interval,
    eval_const,
    eval_interval,
    exp_interval,
    inv_e_bounds,
    ln_interval,
    pi_bounds,
    refine_bracket,
    root_interval,
    sign_at,
    sin_interval,
    structural_sign,
)
from eqlogic.parse import parse_expression

mp.mp.dps = 60

fracs = st.builds(Fraction, st.integers(-4000, 4000), st.integers(1, 997))


def mpf(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def encloses(iv: DyadicInterval, v) -> bool:
    return mpf(iv.lo) <= v <= mpf(iv.hi)


@settings(max_examples=150)
@given(fracs, st.integers(0, 40))
def test_exp_encloses(a, w):
    x = DyadicInterval(a / 100, a / 100 + Fraction(w, 1000), 80)
    r = exp_interval(x)
    assert encloses(r, mp.exp(mpf(x.lo))) and encloses(r, mp.exp(mpf(x.hi)))


@settings(max_examples=150)
@given(st.builds(Fraction, st.integers(1, 10**6), st.integers(1, 997)))
def test_ln_encloses(a):
    r = ln_interval(DyadicInterval.point(a, 80))
    assert encloses(r, mp.log(mpf(a)))
    assert r.width <= Fraction(1, 2**60)


@settings(max_examples=150)
@given(fracs)
def test_trig_encloses(a):
    x = DyadicInterval.point(a / 10, 80)
    assert encloses(sin_interval(x), mp.sin(mpf(x.lo)))
    assert encloses(cos_interval(x), mp.cos(mpf(x.lo)))


@settings(max_examples=100)
@given(st.builds(Fraction, st.integers(0, 10**5), st.integers(1, 97)), st.integers(2, 7))
def test_root_encloses(a, n):
    r = root_interval(DyadicInterval.point(a, 80), n)
    assert encloses(r, mp.root(mpf(a), n))


def test_constants():
    lo, hi = pi_bounds(200)
    assert mpf(lo) <= mp.pi <= mpf(hi)
    lo, hi = inv_e_bounds(200)
    assert mpf(lo) <= mp.exp(-1) <= mpf(hi) and hi - lo < Fraction(1, 2**190)


@settings(max_examples=200)
@given(fracs, fracs, fracs, fracs)
def test_arithmetic_is_inclusion_monotone(a, b, c, d):
    x = DyadicInterval(min(a, b), max(a, b), 64)
    y = DyadicInterval(min(c, d), max(c, d), 64)
    for t in (x.lo, x.mid, x.hi):
        for s in (y.lo, y.mid, y.hi):
            assert (x + y).contains(t + s)
            assert (x - y).contains(t - s)
            assert (x * y).contains(t * s)
            if not y.contains_zero():
                assert (x / y).contains(t / s)


def test_division_by_zero_interval():
    with pytest.raises(UnboundedEnclosure):
        DyadicInterval(-1, 1).reciprocal()


def test_even_power_of_straddling_interval():
    assert (DyadicInterval(-2, 1) ** 2) == DyadicInterval(0, 4)


@settings(max_examples=80, deadline=None)
@given(fracs)
def test_eval_interval_matches_mpmath(a):
    x = a / 1000
    assume(x > 0)
    e = parse_expression("sqrt(x) + exp(-x)*ln(x + 1) - x^3/(1 + x^2)")
    r = eval_interval(e, DyadicInterval.point(x, 128), 128)
    t = mpf(x)
    assert encloses(r, mp.sqrt(t) + mp.exp(-t) * mp.log(t + 1) - t**3 / (1 + t**2))


def test_signs():
    assert sign_at(parse_expression("x^2 - 2"), Fraction(3, 2)) == Sign.POSITIVE
    assert sign_at(parse_expression("x^2 - 4"), Fraction(2)) == Sign.ZERO
    assert sign_at(parse_expression("exp(x) - 3"), Fraction(1)) == Sign.NEGATIVE
    assert certified_sign_const(parse_expression("pi - 3.1416")) == Sign.NEGATIVE
    assert certified_sign_const(parse_expression("exp(-2) - 1/e^2")) in (Sign.ZERO, Sign.UNKNOWN)


def test_structural_sign():
    assert structural_sign(parse_expression("exp(x) + x^2")) == ">0"
    assert structural_sign(parse_expression("-sqrt(x)")) == "<=0"
    assert structural_sign(parse_expression("x")) is None


def test_refine_bracket_shrinks_to_width():
    e = parse_expression("x^3 - 2")

    def probe(t):
        v = ex.try_exact(e, t)
        return (Sign.ZERO if v == 0 else Sign.POSITIVE if v > 0 else Sign.NEGATIVE), float(v)

    lo, hi = refine_bracket(probe, Fraction(1), Fraction(2), Sign.NEGATIVE, Fraction(1, 2**80))
    assert hi - lo <= Fraction(1, 2**80)
    assert lo**3 < 2 < hi**3


def test_eval_const_width():
    iv = eval_const(parse_expression("ln(1/2)"), 128)
    assert iv.width <= Fraction(1, 2**120)
    assert encloses(iv, mp.log(0.5))
