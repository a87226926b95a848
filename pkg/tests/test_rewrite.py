import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import falsify
from eqlogic import expr as ex
from eqlogic import rewrite as rw
from eqlogic.interval import Sign
from eqlogic.parse import parse_domain, parse_equation, parse_expression

R = rw.SolutionRelation
relations = st.sampled_from(list(R))


class TestComposition:
    @given(relations)
    def test_identity(self, a):
        assert rw.compose_relations(R.EQUIVALENT, a) == a == rw.compose_relations(a, R.EQUIVALENT)

    @given(relations, relations, relations)
    def test_associativity(self, a, b, c):
        assert rw.compose_relations(rw.compose_relations(a, b), c) == rw.compose_relations(
            a, rw.compose_relations(b, c)
        )

    @given(st.lists(st.sampled_from([R.EQUIVALENT, R.SUPERSET]), min_size=1))
    def test_superset_absorbs(self, rels):
        expected = R.SUPERSET if R.SUPERSET in rels else R.EQUIVALENT
        out = R.EQUIVALENT
        for r in rels:
            out = rw.compose_relations(out, r)
        assert out == expected

    def test_mixed_directions_are_unknown(self):
        assert rw.compose_relations(R.SUPERSET, R.SUBSET) == R.UNKNOWN

    def test_broken_chain(self):
        eq = parse_equation("x + 1 = 2")
        s1 = rw.apply_step(eq, "SubBoth", ex.RationalLit(1))
        s2 = rw.apply_step(parse_equation("x = 5"), "AddBoth", ex.RationalLit(1))
        with pytest.raises(rw.BrokenChain):
            rw.compose([s1, s2])


class TestRules:
    def test_squaring_chain_of_the_radical_equation(self):
        eq = parse_equation("sqrt(x) + sqrt(2*x + 1) = 3", "[0,inf)")
        s1 = rw.apply_step(eq, "SquareBoth")
        assert s1.relation == R.EQUIVALENT
        s2 = rw.apply_step(s1.output, "IsolateRadical")
        s3 = rw.apply_step(s2.output, "SquareBoth")
        assert s3.relation == R.SUPERSET
        assert [str(c) for c in s3.side_conditions] == ["3*x - 8 <= 0"]
        assert rw.compose([s1, s2, s3]) == R.SUPERSET

    def test_multiply_by_possibly_zero_factor(self):
        step = rw.apply_step(parse_equation("x = 1"), "MulBoth", parse_expression("x - 2"))
        assert step.relation == R.SUPERSET and str(step.side_conditions[0]) == "x - 2 != 0"

    def test_multiply_by_positive_factor(self):
        step = rw.apply_step(parse_equation("x = 1"), "MulBoth", parse_expression("x^2 + 1"))
        assert step.relation == R.EQUIVALENT

    def test_lossy_division_needs_marker(self):
        eq = parse_equation("x^2 = x")
        with pytest.raises(rw.RuleNotApplicable):
            rw.apply_step(eq, "DivBoth", ex.Var())
        step = rw.apply_step(eq, "DivBoth", ex.Var(), lossy=True)
        assert step.relation == R.SUBSET and step.lossy

    def test_subset_without_marker_is_refused(self):
        eq = parse_equation("x = 1")
        with pytest.raises(ValueError):
            rw.Step("DivBoth", eq, eq, R.SUBSET)

    def test_add_term_undefined_on_domain(self):
        with pytest.raises(rw.DomainMismatch):
            rw.apply_step(parse_equation("x = 1"), "AddBoth", parse_expression("sqrt(x)"))

    def test_ln_needs_positive_sides(self):
        step = rw.apply_step(parse_equation("exp(x) = 1/2"), "ApplyInjective", f="ln")
        assert step.output.lhs == ex.Var() and step.relation == R.EQUIVALENT
        with pytest.raises(rw.RuleNotApplicable):
            rw.apply_step(parse_equation("x = 1"), "ApplyInjective", f="ln")

    def test_even_power_is_not_injective(self):
        with pytest.raises(rw.RuleNotApplicable):
            rw.apply_step(parse_equation("x = 1"), "ApplyInjective", f="pow", k=2)

    def test_substitution(self):
        step = rw.apply_step(parse_equation("x^6 - x^3 - 1 = 0"), "Substitute", k=3)
        assert step.rule == "Substitute(y = x^3)"
        assert step.output_text() == "y^2 - y - 1 = 0"

    def test_lambert_form(self):
        step = rw.apply_step(parse_equation("exp(x) = x + 2"), "LambertForm")
        assert step.output_text() == "-exp(-2) = -(x + 2)*exp(-(x + 2))"
        assert step.relation == R.EQUIVALENT


class TestRadicalForm:
    def test_square_of_sum(self):
        rf = rw.radical_form(parse_expression("sqrt(x) + sqrt(2*x + 1)"))
        assert ex.to_text((rf**2).to_expr()) == "3*x + 1 + 2*sqrt(2*x^2 + x)"

    def test_outside_fragment(self):
        assert rw.radical_form(parse_expression("exp(x)")) is None

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 5), st.integers(1, 4), st.integers(-3, 3))
    def test_to_expr_preserves_value(self, a, b, c):
        e = parse_expression(f"(sqrt(x + {a}) + {c})*(root(3, x) - {b})")
        back = rw.radical_form(e).to_expr()
        for t in (Fraction(0), Fraction(1), Fraction(4), Fraction(8)):
            assert ex.try_exact(back, t) == ex.try_exact(e, t)


class TestSignAnalysis:
    def test_rational_on_domain(self):
        assert rw.sign_on_domain(parse_expression("x - 1"), parse_domain("(1,inf)")) == ">0"
        assert rw.sign_on_domain(parse_expression("x - 1"), parse_domain("[1,inf)")) == ">=0"

    def test_interval_fallback(self):
        assert rw.sign_on_domain(parse_expression("exp(x) - x - 1/2"), parse_domain("[-2,2]")) == ">0"

    def test_side_condition_holds(self):
        c = rw.SideCondition(parse_expression("3*x - 8"), "<=0")
        assert c.holds(Sign.ZERO) and not c.holds(Sign.POSITIVE) and c.holds(Sign.UNKNOWN) is None
        assert c.strict().predicate == "<0"


def test_falsifier_finds_mislabeled_steps(monkeypatch):
    """A squaring step relabelled as Equivalent must be caught on the grid."""
    real = rw.apply_step

    def lying(eq, rule, *a, **k):
        step = real(eq, rule, *a, **k)
        if step.relation == R.SUPERSET:
            return dataclasses.replace(step, relation=R.EQUIVALENT, side_conditions=())
        return step

    monkeypatch.setattr(rw, "apply_step", lying)
    report = falsify.run(300, seed=3)
    assert report.violations


def test_falsifier_smoke():
    report = falsify.run(400, seed=11)
    assert report.applications == 400 and report.checked_points > 1000
    assert report.violations == []
