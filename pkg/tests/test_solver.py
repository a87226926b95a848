from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from eqlogic import expr as ex
from eqlogic import poly as pl
from eqlogic import rewrite as rw
from eqlogic import solver as sv
from eqlogic.interval import eval_interval
from eqlogic.parse import parse_domain, parse_equation, parse_expression

TOL = Fraction(1, 10**12)


def solve(text, domain=None):
    return sv.solve(parse_equation(text, domain))


def close(rep, ref, tol=TOL):
    iv = rep.enclosure(60)
    return iv.lo - tol <= ref <= iv.hi + tol and iv.width <= tol


def test_oracles_match_mpmath():
    values = oracles.mpmath_values()
    for name, v in values.items():
        frozen = getattr(oracles, name)
        assert abs(mp.mpf(frozen.numerator) / frozen.denominator - v) < mp.mpf(10) ** -35, name


class TestStrategies:
    def test_identity(self):
        assert solve("x = x")[0].kind == "identity"
        assert solve("exp(x) = exp(x)")[0].kind == "identity"
        assert solve("(x + 1)^2 = x^2 + 2*x + 1")[0].kind == "identity"

    def test_linear(self):
        ss, _ = solve("3*x + 1 = 2")
        assert [s.value for s in ss.solutions] == [Fraction(1, 3)]

    def test_polynomial_with_mixed_roots(self):
        ss, _ = solve("(x - 1)*(x^2 - 2) = 0")
        assert [s.describe() for s in ss.solutions] == ["-sqrt(2)", "1", "sqrt(2)"]

    def test_domain_filters(self):
        ss, _ = solve("x^2 = 4", "[0,inf)")
        assert [s.value for s in ss.solutions] == [2]
        assert ss.rejected[0].candidate.value == -2

    def test_rational(self):
        ss, tr = solve("(x^2 - 1)/(x - 1) = 2")
        assert ss.kind == "empty"
        assert tr.steps[0].relation == rw.SolutionRelation.SUPERSET

    def test_rational_keeps_good_root(self):
        ss, _ = solve("1/x = x")
        assert [s.value for s in ss.solutions] == [-1, 1]

    def test_radical_extraneous(self):
        ss, _ = solve("sqrt(x + 1) = x - 1")
        assert [s.value for s in ss.solutions] == [3]
        assert "violated" in ss.rejected[0].reason

    def test_radical_no_solution(self):
        assert solve("sqrt(x) = -1")[0].kind == "empty"

    def test_cube_root(self):
        ss, tr = solve("root(3, x) = x - 1")
        assert len(ss.solutions) == 1
        assert abs(ss.solutions[0].approx() - 2.324717957244746) < 1e-12

    def test_exp_negative_target(self):
        assert solve("exp(x) = -1")[0].kind == "empty"

    def test_exp_linear(self):
        ss, _ = solve("exp(2*x + 1) = 3")
        ref = Fraction(mp.nstr((mp.log(3) - 1) / 2, 30))
        assert close(ss.solutions[0], ref)

    def test_x_exp_x(self):
        ss, _ = solve("x*exp(x) = 1")
        assert close(ss.solutions[0], oracles.OMEGA)

    def test_lambert_branch_point(self):
        ss, _ = solve("exp(x) = x + 1")
        assert [s.describe() for s in ss.solutions] == ["0"]

    def test_lambert_single_branch(self):
        ss, _ = solve("exp(x) = -x + 2")
        assert len(ss.solutions) == 1
        assert "W(0" in ss.solutions[0].describe()

    def test_lambert_no_solution(self):
        assert solve("exp(x) = x")[0].kind == "empty"

    def test_monotone_fallback(self):
        ss, _ = solve("x + exp(x) = 2")
        assert close(ss.solutions[0], oracles.X_PLUS_EXP_2)
        ss, _ = solve("ln(x) = 1/x")
        assert close(ss.solutions[0], oracles.LN_EQ_RECIPROCAL)

    def test_unsolved(self):
        ss, tr = solve("sin(x) = x/2")
        assert ss.kind == "unsolved" and ss.reason

    def test_empty_domain(self):
        assert solve("sqrt(-1 - x^2) = 1")[0].kind == "empty"


class TestMonotone:
    def test_prove(self):
        M = sv.Monotonicity
        assert sv.prove_monotone(parse_expression("x^5 + x"), ex.Domain.real_line()) == M.INCREASING
        assert sv.prove_monotone(parse_expression("x^3"), ex.Domain.real_line()) == M.INCREASING
        assert sv.prove_monotone(parse_expression("-exp(x)"), ex.Domain.real_line()) == M.DECREASING
        assert sv.prove_monotone(parse_expression("x^2"), ex.Domain.real_line()) == M.UNKNOWN
        assert sv.prove_monotone(parse_expression("x^2"), parse_domain("[0,inf)")) == M.INCREASING

    def test_multi_interval_domain(self):
        with pytest.raises(sv.MultiIntervalDomain):
            sv.prove_monotone(parse_expression("x"), parse_domain("[0,1] U [2,3]"))

    def test_count_needs_constant_rhs(self):
        with pytest.raises(sv.PreconditionViolated):
            sv.count_solutions_monotone(parse_equation("x = x^2"))

    def test_attained_endpoint_counts(self):
        r = sv.count_solutions_monotone(parse_equation("sqrt(x) + sqrt(2*x + 1) = 1", "[0,inf)"))
        assert r.kind == sv.CountKind.EXACTLY_ONE and r.solution == sv.ExactRational(0)

    def test_open_endpoint_is_not_attained(self):
        r = sv.count_solutions_monotone(parse_equation("sqrt(x) + sqrt(2*x + 1) = 1", "(0,inf)"))
        assert r.kind == sv.CountKind.NONE

    def test_bounded_decreasing_tail(self):
        # decreasing from 2/5 towards 0; root is 2 + sqrt(3)
        r = sv.count_solutions_monotone(parse_equation("x/(x^2 + 1) = 1/4", "[2,inf)"))
        assert r.kind == sv.CountKind.EXACTLY_ONE
        iv = r.enclosure(80)
        assert iv.lo <= Fraction(mp.nstr(2 + mp.sqrt(3), 30)) <= iv.hi
        r = sv.count_solutions_monotone(parse_equation("x/(x^2 + 1) = 1/2", "[2,inf)"))
        assert r.kind == sv.CountKind.NONE


class TestVerification:
    def test_exact_surd_rejection(self):
        eq = parse_equation("sqrt(x) + sqrt(2*x + 1) = 3", "[0,inf)")
        ss, tr = sv.solve(eq)
        bad = pl.QuadraticSurd(26, 6, 17)
        v = sv.verify_candidate(eq, bad, tr)
        assert v.status == sv.VerifyStatus.REJECTED

    def test_good_surd_verified(self):
        eq = parse_equation("sqrt(x) + sqrt(2*x + 1) = 3", "[0,inf)")
        ss, tr = sv.solve(eq)
        v = sv.verify_candidate(eq, pl.QuadraticSurd(26, -6, 17), tr)
        assert v.status == sv.VerifyStatus.VERIFIED

    def test_outside_domain(self):
        eq = parse_equation("x^2 = 4", "[0,inf)")
        assert sv.verify_candidate(eq, sv.ExactRational(-2), rw.Trace()).status == sv.VerifyStatus.REJECTED


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True))
def test_planted_integer_roots_are_found(roots):
    p = pl.UniPoly([1])
    for r in roots:
        p = p * pl.UniPoly([-r, 1])
    ss, _ = sv.solve(ex.Equation(p.to_expr(), ex.RationalLit(0)))
    assert [s.value for s in ss.solutions] == sorted(roots)


@settings(max_examples=25, deadline=None)
@given(st.integers(-5, 5), st.integers(1, 5), st.integers(-9, 9))
def test_monotone_quintic_root_is_enclosed(a, b, c):
    eq = parse_equation(f"x^5 + {b}*x + {c} = {a}")
    ss, _ = sv.solve(eq)
    assert len(ss.solutions) == 1
    s = ss.solutions[0]
    iv = s.enclosure(80)
    assert eval_interval(ex.Sub(eq.lhs, eq.rhs), iv, 120).contains_zero()


CORPUS = [
    ("sqrt(x) + sqrt(2*x + 1) = 3", "[0,inf)"),
    ("sqrt(x) + sqrt(2*x + 1) = 1", "[0,inf)"),
    ("exp(x) = x + 2", None),
    ("exp(x) = 1/2", None),
    ("x^5 - x - 1 = 0", None),
    ("x^6 - x^3 - 1 = 0", None),
    ("exp(x) = exp(x)", None),
    ("x*exp(x) = 1", None),
    ("x + exp(x) = 2", None),
    ("ln(x) = 1/x", None),
    ("sqrt(x + 1) = x - 1", None),
    ("(x^2 - 1)/(x - 1) = 2", None),
]


@pytest.mark.parametrize("text, dom", CORPUS)
def test_corpus_soundness(text, dom):
    from soundness import Report, check_equation

    report = Report()
    check_equation(parse_equation(text, dom), report)
    assert not report.problems


def test_random_equations_against_grid_oracle():
    from soundness import run

    report = run(1000, seed=3)
    assert report.equations == 1000
    assert report.kinds.get("finite", 0) > 500
    assert not report.problems, report.problems[:5]
