"""Brute-force oracle for solver soundness and completeness.

Solutions must keep lhs - rhs enclosing 0; rejected candidates must be
outside the domain or have lhs - rhs certified nonzero. For equations
without division, every sign change of lhs - rhs on a fine grid (with the
whole gap inside the domain) must contain a reported solution.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

import falsify
from eqlogic import expr as ex
from eqlogic import solver as sv
from eqlogic.interval import EmptyIntersection, Sign, UnboundedEnclosure, eval_interval, sign_at

GRID = [Fraction(k, 16) for k in range(-64, 193)]


@dataclass
class Report:
    equations: int = 0
    kinds: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)


def _text(eq: ex.Equation) -> str:
    return f"{ex.to_text(eq.lhs)} = {ex.to_text(eq.rhs)}"


def _sign_changes(eq: ex.Equation, g: ex.Expr):
    prev = None
    for t in GRID:
        if not eq.domain.contains(t):
            prev = None
            continue
        try:
            s = sign_at(g, t)
        except (ex.DomainViolation, EmptyIntersection, UnboundedEnclosure):
            prev = None
            continue
        if s == Sign.ZERO:
            yield t, t
            prev = None
            continue
        if s not in (Sign.POSITIVE, Sign.NEGATIVE):
            prev = None
            continue
        if prev is not None and prev[1] != s:
            lo = prev[0]
            if all(eq.domain.contains(lo + (t - lo) * k / 8) for k in range(9)):
                yield lo, t
        prev = (t, s)


def check_equation(eq: ex.Equation, report: Report) -> None:
    ss, _ = sv.solve(eq)
    report.equations += 1
    report.kinds[ss.kind] = report.kinds.get(ss.kind, 0) + 1
    g = ex.Sub(eq.lhs, eq.rhs)
    encl = [s.enclosure(60) for s in ss.solutions]
    for s in ss.solutions:
        if not eval_interval(g, s.enclosure(80), 160).contains_zero():
            report.problems.append(("unsound solution", _text(eq), s.describe()))
    for c in ss.rejected:
        iv = c.candidate.enclosure(80)
        if not all(eq.domain.contains(t) for t in (iv.lo, iv.hi)):
            continue
        try:
            ok = not eval_interval(g, iv, 160).contains_zero()
        except (EmptyIntersection, UnboundedEnclosure):
            ok = True
        if not ok:
            report.problems.append(("rejected a solution", _text(eq), c.candidate.describe()))
    if ss.kind not in ("finite", "empty") or any(isinstance(n, ex.Div) for n in g.walk()):
        return
    for lo, hi in _sign_changes(eq, g):
        if not any(iv.lo <= hi and lo <= iv.hi for iv in encl):
            report.problems.append(("missed root", _text(eq), (lo, hi)))


def run(n: int, seed: int = 0) -> Report:
    rng = random.Random(seed)
    report = Report()
    while report.equations < n:
        eq = falsify.random_equation(rng)
        if eq.domain.is_empty():
            continue
        check_equation(eq, report)
    return report
