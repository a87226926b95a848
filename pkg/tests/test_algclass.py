from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eqlogic import algclass as ac
from eqlogic import expr as ex
from eqlogic import poly as pl
from eqlogic.interval import DyadicInterval
from eqlogic.parse import parse_equation, parse_expression

from strategies import int_polys

x, y = pl.BiPoly.x(), pl.BiPoly.y()


def C(n):
    return pl.BiPoly.const(n)


@settings(max_examples=100, deadline=None)
@given(int_polys)
def test_integer_polynomials_are_algebraic(cs):
    p = pl.UniPoly(cs)
    cert = ac.classify(p.to_expr())
    assert isinstance(cert, ac.Algebraic)
    assert cert.annihilator == y - pl.BiPoly.from_uni_x(p)


class TestAnnihilators:
    def test_surd_sum(self):
        e = parse_expression("sqrt(x) + sqrt(2*x + 1)")
        P = ac.annihilator(e)
        assert P.to_text() == "y^4 - (6*x + 2)*y^2 + (x^2 + 2*x + 1)"
        assert ac.annihilator_verify(e, P) == ac.Verdict.VERIFIED

    def test_cube_root_plus_sqrt5(self):
        e = parse_expression("root(3, 2*x) + sqrt(5)")
        P = ac.annihilator(e)
        factored = (y**3 + C(15) * y - C(2) * x) ** 2 - C(5) * (C(3) * y**2 + C(5)) ** 2
        assert P == factored
        assert ac.annihilator_verify(e, P) == ac.Verdict.VERIFIED

    def test_wrong_annihilator_is_refuted(self):
        e = parse_expression("sqrt(x)")
        assert ac.annihilator_verify(e, y - x) == ac.Verdict.REFUTED

    def test_inverse_closure(self):
        # y - x^2 annihilates x^2; the swap annihilates sqrt(x) on [0, inf)
        P = ac.inverse_annihilator(y - x * x)
        assert P == x - y * y or P == y * y - x
        assert ac.annihilator_verify(parse_expression("sqrt(x)"), P) == ac.Verdict.VERIFIED

    def test_coefficient_form_round_trip(self):
        P = ac.annihilator(parse_expression("sqrt(x) + 1/x"))
        cf = ac.to_coefficient_form(P)
        assert ac.from_coefficient_form(cf) == P
        with pytest.raises(pl.ZeroPolynomial.__bases__[0]):
            ac.to_coefficient_form(pl.BiPoly())

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5), st.integers(-4, 4), st.integers(2, 4), st.integers(-3, 3))
    def test_generated_annihilators_vanish(self, a, b, n, c):
        e = ex.Add(ex.Root(n, ex.Add(ex.Mul(ex.RationalLit(a), ex.Var()), ex.RationalLit(abs(b)))), ex.RationalLit(c))
        P = ac.annihilator(e)
        assert P is not None and not P.is_zero()
        assert ac.annihilator_verify(e, P, samples=8) == ac.Verdict.VERIFIED


class TestTranscendental:
    @pytest.mark.parametrize(
        "text, rule",
        [
            ("exp(x)", "R2"),
            ("exp(2*x + 1)", "R1"),
            ("ln(x)", "R3"),
            ("ln(x + 1)", "R1"),
            ("exp(sqrt(x))", "R1"),
            ("W(0, x)", "R4"),
        ],
    )
    def test_rule_tags(self, text, rule):
        cert = ac.classify(parse_expression(text))
        assert isinstance(cert, ac.Transcendental) and cert.rule == rule

    def test_power_with_flagged_base(self):
        cert = ac.classify(ac.power_function(ex.ConstPi()))
        assert isinstance(cert, ac.Transcendental) and cert.rule == "R2"

    def test_power_with_unflagged_base_is_unknown(self):
        assert isinstance(ac.classify(ac.power_function(ex.RationalLit(2))), ac.Unknown)
        flagged = ac.classify(ac.power_function(ex.RationalLit(2)), transcendental_constants=[ex.RationalLit(2)])
        assert isinstance(flagged, ac.Transcendental)

    def test_pivot_at_one(self):
        assert ac.pivot_at_one(ac.power_function(ex.ConstE())) == ex.ConstE()

    def test_mixed_sum_is_unknown(self):
        assert isinstance(ac.classify(parse_expression("sqrt(x) + exp(x)")), ac.Unknown)

    def test_point_domain_is_algebraic(self):
        cert = ac.classify(parse_expression("exp(x)"), ex.Domain.point(0))
        assert isinstance(cert, ac.Algebraic)

    def test_equation_class(self):
        assert ac.classify_equation(parse_equation("exp(x) = exp(x)")) == ac.EquationClass.TRANSCENDENTAL
        assert ac.classify_equation(parse_equation("sqrt(x) = 3")) == ac.EquationClass.ALGEBRAIC


class TestEnumeration:
    def test_first_three(self):
        vals = [r.lo for _, r in ac.enumerate_algebraic(3)]
        assert vals == [0, -1, 1]
        assert all(r.exact for _, r in ac.enumerate_algebraic(3))

    def test_restartable(self):
        a = ac.enumerate_algebraic(12)
        b = ac.enumerate_algebraic(12)
        assert [(str(p), r.lo, r.hi) for p, r in a] == [(str(p), r.lo, r.hi) for p, r in b]

    def test_negative_count(self):
        with pytest.raises(ValueError):
            ac.enumerate_algebraic(-1)
