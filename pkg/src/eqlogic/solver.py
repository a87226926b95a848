"""Strategy orchestration, candidate verification and monotonicity certificates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import expr as ex
from . import poly as pl
from . import rewrite as rw
from .interval import (
    DyadicInterval,
    EmptyIntersection,
    Sign,
    UnboundedEnclosure,
    certified_sign_const,
    eval_const,
    eval_interval,
    sign_at,
)
from .poly import IsolatedRoot, QuadraticSurd, UniPoly
from .special import InverseFunctionValue, TargetOutsideRange, inverse_bracket, inverse_value


class MultiIntervalDomain(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    precision: int = 128
    max_precision: int = 4096
    # cap for refutation attempts at irrational candidates; a true root never resolves
    check_precision: int = 512
    grid_size: int = 64
    identity: bool = True
    polynomial: bool = True
    rational: bool = True
    radical: bool = True
    lambert: bool = True
    monotone: bool = True
    verbosity: int = 1


# ---------------------------------------------------------------------------
# solution representations
# ---------------------------------------------------------------------------


def _q_json(v: Fraction) -> dict:
    return {"num": str(v.numerator), "den": str(v.denominator)}


@dataclass(frozen=True)
class ExactRational:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def enclosure(self, prec: int = 64) -> DyadicInterval:
        return DyadicInterval(self.value, self.value, prec + 64)

    def approx(self) -> float:
        return float(self.value)

    def describe(self) -> str:
        return ex.to_text(ex.RationalLit(self.value))

    def json_fields(self) -> dict:
        return {"rep": "exact", "value": _q_json(self.value)}


@dataclass(frozen=True)
class ClosedForm:
    expr: ex.Expr

    def enclosure(self, prec: int = 64) -> DyadicInterval:
        target = Fraction(1, 1 << prec)
        p = prec + 8
        iv = eval_const(self.expr, p)
        while iv.width > target and p < 16 * prec:
            p *= 2
            iv = eval_const(self.expr, p)
        return iv

    def approx(self) -> float:
        return float(self.enclosure(64).mid)

    def describe(self) -> str:
        return ex.to_text(self.expr)

    def json_fields(self) -> dict:
        return {"rep": "closed_form", "expr": ex.to_text(self.expr)}


@dataclass(frozen=True)
class CertifiedRoot:
    source: Union[IsolatedRoot, InverseFunctionValue]
    note: str = ""

    def enclosure(self, prec: int = 64) -> DyadicInterval:
        if isinstance(self.source, IsolatedRoot):
            return self.source.enclosure(prec)
        return inverse_value(self.source, prec)

    def bracket(self, width: Fraction) -> tuple[Fraction, Fraction]:
        if isinstance(self.source, IsolatedRoot):
            r = self.source.refine(width)
            return r.lo, r.hi
        return inverse_bracket(self.source, width)

    def approx(self) -> float:
        return float(self.enclosure(64).mid)

    def describe(self) -> str:
        s = self.source
        if isinstance(s, InverseFunctionValue):
            return f"Z({ex.to_text(s.target_expr)}) with Z the inverse of {ex.to_text(s.function)} on {s.branch_domain}"
        return str(s)

    def json_fields(self) -> dict:
        s = self.source
        out: dict = {"rep": "certified_root"}
        if isinstance(s, InverseFunctionValue):
            iv = s.branch_domain
            out["inverse"] = {
                "function": ex.to_text(s.function),
                "branch_domain": str(iv),
                "target": ex.to_text(s.target_expr),
            }
        else:
            out["polynomial"] = str(s.poly)
        if self.note:
            out["note"] = self.note
        return out


SolutionRep = Union[ExactRational, QuadraticSurd, ClosedForm, CertifiedRoot]


@dataclass(frozen=True)
class Candidate:
    candidate: SolutionRep
    reason: str


@dataclass(frozen=True)
class SolutionSet:
    kind: str  # finite | empty | identity | unsolved
    solutions: tuple = ()
    rejected: tuple = ()
    inconclusive: tuple = ()
    reason: Optional[str] = None
    notes: tuple = ()

    @staticmethod
    def finite(sols, rejected=(), inconclusive=(), notes=()) -> "SolutionSet":
        sols = tuple(sorted(sols, key=lambda s: s.approx()))
        kind = "finite" if sols else "empty"
        return SolutionSet(kind, sols, tuple(rejected), tuple(inconclusive), None, tuple(notes))


# ---------------------------------------------------------------------------
# helpers on representations
# ---------------------------------------------------------------------------


def _surd_value(e: ex.Expr, s: QuadraticSurd) -> Optional[QuadraticSurd]:
    p = pl.from_expr(e)
    return None if p is None else s.eval_poly(p)


def _sign_of_rep(e: ex.Expr, rep: SolutionRep, max_precision: int) -> Sign:
    """Certified sign of e at the value represented by rep."""
    if isinstance(rep, ExactRational):
        try:
            return sign_at(e, rep.value, max_precision)
        except ex.DomainViolation:
            return Sign.UNKNOWN
    if isinstance(rep, QuadraticSurd):
        v = _surd_value(e, rep)
        if v is not None:
            s = v.sign()
            return Sign.ZERO if s == 0 else Sign.POSITIVE if s > 0 else Sign.NEGATIVE
    if isinstance(rep, CertifiedRoot) and isinstance(rep.source, IsolatedRoot) and rep.source.exact:
        return sign_at(e, rep.source.lo, max_precision)
    p = 64
    while p <= max_precision:
        try:
            s = eval_interval(e, rep.enclosure(p), p).sign()
        except (EmptyIntersection, UnboundedEnclosure):
            s = Sign.UNKNOWN
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            return s
        p *= 2
    return Sign.UNKNOWN


def _cmp_rational(rep: SolutionRep, q: Fraction, max_precision: int) -> Optional[int]:
    """Certified sign of (rep - q)."""
    s = _sign_of_rep(ex.Sub(ex.Var(), ex.RationalLit(q)), rep, max_precision)
    return {Sign.POSITIVE: 1, Sign.NEGATIVE: -1, Sign.ZERO: 0}.get(s)


def _in_domain(rep: SolutionRep, dom: ex.Domain, max_precision: int) -> Optional[bool]:
    if isinstance(rep, ExactRational):
        return dom.contains(rep.value)
    undecided = False
    for iv in dom.intervals:
        ok = True
        if iv.lo is not None:
            c = _cmp_rational(rep, iv.lo, max_precision)
            if c is None:
                undecided = True
                continue
            ok = c > 0 or (c == 0 and iv.lo_closed)
        if ok and iv.hi is not None:
            c = _cmp_rational(rep, iv.hi, max_precision)
            if c is None:
                undecided = True
                continue
            ok = c < 0 or (c == 0 and iv.hi_closed)
        if ok:
            return True
    return None if undecided else False


def _as_rep(v: Union[Fraction, QuadraticSurd]) -> SolutionRep:
    return ExactRational(v) if isinstance(v, Fraction) else v


# ---------------------------------------------------------------------------
# monotonicity
# ---------------------------------------------------------------------------


class Monotonicity(enum.Enum):
    INCREASING = "StrictlyIncreasing"
    DECREASING = "StrictlyDecreasing"
    UNKNOWN = "Unknown"


def _const_sign(e: ex.Expr) -> int:
    s = certified_sign_const(e)
    return {Sign.POSITIVE: 1, Sign.NEGATIVE: -1}.get(s, 0)


def _struct_mono(e: ex.Expr) -> Optional[int]:
    """+1 increasing, -1 decreasing, 0 constant; strict unless 0. None: no rule."""
    if not e.has_var():
        return 0
    if isinstance(e, ex.Var):
        return 1
    if isinstance(e, ex.Neg):
        m = _struct_mono(e.arg)
        return None if m is None else -m
    if isinstance(e, (ex.Add, ex.Sub)):
        a = _struct_mono(e.left)
        b = _struct_mono(e.right)
        if a is None or b is None:
            return None
        if isinstance(e, ex.Sub):
            b = -b
        if a == 0 or b == 0 or a == b:
            return a or b
        return None
    if isinstance(e, (ex.Mul, ex.Div)):
        if isinstance(e, ex.Mul) and not e.left.has_var():
            c, f = e.left, e.right
        elif not e.right.has_var():
            c, f = e.right, e.left
        else:
            return None
        s = _const_sign(c)
        m = _struct_mono(f)
        if m is None or s == 0:
            return None
        return m * s
    if isinstance(e, ex.IntPow):
        if e.exponent > 0 and e.exponent % 2 == 1:
            return _struct_mono(e.base)
        return None
    if isinstance(e, (ex.Root, ex.Exp, ex.Ln)):
        return _struct_mono(e.arg)
    if isinstance(e, ex.LambertW):
        m = _struct_mono(e.arg)
        return None if m is None else (m if e.branch == 0 else -m)
    return None


def prove_monotone(e: ex.Expr, d: ex.Domain) -> Monotonicity:
    """Strict monotonicity of e on a single interval: structural rules, then e'."""
    if len(d.intervals) != 1:
        if not d.intervals:
            return Monotonicity.UNKNOWN
        raise MultiIntervalDomain("prove_monotone needs a single interval")
    m = _struct_mono(e)
    if m == 1:
        return Monotonicity.INCREASING
    if m == -1:
        return Monotonicity.DECREASING
    if m == 0:
        return Monotonicity.UNKNOWN
    try:
        de = ex.differentiate(e)
    except ex.UnsupportedNode:
        return Monotonicity.UNKNOWN
    s = rw.sign_on_domain(de, d)
    if s == ">0":
        return Monotonicity.INCREASING
    if s == "<0":
        return Monotonicity.DECREASING
    # a nonzero rational derivative of fixed sign vanishes at isolated points only
    rf = pl.rational_from_expr(de)
    if rf is not None and not rf[0].is_zero() and s in (">=0", "<=0"):
        return Monotonicity.INCREASING if s == ">=0" else Monotonicity.DECREASING
    return Monotonicity.UNKNOWN


# ---------------------------------------------------------------------------
# range analysis and counting
# ---------------------------------------------------------------------------


def _limit(e: ex.Expr, end: int) -> Optional[int]:
    """Behaviour of e as x -> end*inf: +1 / -1 divergence, 0 bounded, None unknown."""
    if not e.has_var():
        return 0
    p = pl.from_expr(e)
    if p is not None:
        return p.sign_at_infinity(end)
    if isinstance(e, ex.Var):
        return end
    if isinstance(e, ex.Neg):
        d = _limit(e.arg, end)
        return None if d is None else -d
    if isinstance(e, (ex.Add, ex.Sub)):
        a = _limit(e.left, end)
        b = _limit(e.right, end)
        if a is None or b is None:
            return None
        if isinstance(e, ex.Sub):
            b = -b
        if a == 0 or b == 0 or a == b:
            return a or b
        return None
    if isinstance(e, (ex.Mul, ex.Div)):
        if isinstance(e, ex.Mul) and not e.left.has_var():
            c, f = e.left, e.right
        elif not e.right.has_var():
            c, f = e.right, e.left
        else:
            return None
        s = _const_sign(c)
        d = _limit(f, end)
        return None if d is None or s == 0 else d * s
    if isinstance(e, ex.Root):
        d = _limit(e.arg, end)
        if d == 1 or (d == -1 and e.index % 2 == 1):
            return d
        return None
    if isinstance(e, ex.IntPow) and e.exponent > 0:
        d = _limit(e.base, end)
        if d is None or d == 0:
            return d
        return 1 if e.exponent % 2 == 0 else d
    if isinstance(e, (ex.Sin, ex.Cos)):
        return 0
    if isinstance(e, ex.Exp):
        d = _limit(e.arg, end)
        return None if d is None else max(d, 0)
    if isinstance(e, ex.Ln) or (isinstance(e, ex.LambertW) and e.branch == 0):
        return 1 if _limit(e.arg, end) == 1 else None
    return None


def _diverges(e: ex.Expr, end: int) -> Optional[int]:
    """+1 / -1 when e -> +inf / -inf as x -> end*inf, by structural rules only."""
    d = _limit(e, end)
    return d if d in (1, -1) else None


class CountKind(enum.Enum):
    EXACTLY_ONE = "ExactlyOne"
    NONE = "None"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CountResult:
    kind: CountKind
    solution: Optional[SolutionRep] = None
    reason: str = ""

    def enclosure(self, prec: int = 64) -> Optional[DyadicInterval]:
        return None if self.solution is None else self.solution.enclosure(prec)


def _endpoint_cmp(f: ex.Expr, a: ex.Expr, t: Fraction) -> Optional[int]:
    """sign(f(t) - a) when f is defined at t, else None."""
    try:
        s = sign_at(ex.Sub(f, a), t)
    except (ex.DomainViolation, EmptyIntersection, UnboundedEnclosure):
        return None
    return {Sign.POSITIVE: 1, Sign.NEGATIVE: -1, Sign.ZERO: 0}.get(s)


def _probe_towards(f: ex.Expr, a: ex.Expr, iv: ex.Interval, end: int, direction: int) -> Optional[int]:
    """Look for a point near one end where the residual has the sign that end needs.

    A hit is enough for the intermediate value argument; a miss proves nothing.
    """
    want = end * direction
    t0 = iv.lo if end < 0 else iv.hi
    other = iv.hi if end < 0 else iv.lo
    if t0 is not None and other is not None:
        base = (t0 + other) / 2
    elif t0 is not None:
        base = t0 - end
    elif other is not None:
        base = other + end
    else:
        base = Fraction(0)
    for k in range(0, 64 if t0 is not None else 11):
        t = t0 + (base - t0) / (1 << k) if t0 is not None else base + end * ((1 << k) - 1)
        s = _endpoint_cmp(f, a, t)
        if s == want:
            return end
    return None


def count_solutions_monotone(eq: ex.Equation) -> CountResult:
    """Zero or one solution of f(x) = a for certified-monotone f on one interval."""
    if eq.rhs.has_var():
        raise PreconditionViolated("right-hand side must be constant")
    dom = eq.domain
    if dom.is_empty():
        return CountResult(CountKind.NONE, reason="empty domain")
    if len(dom.intervals) != 1:
        raise MultiIntervalDomain("count_solutions_monotone needs a single interval")
    f, a = eq.lhs, eq.rhs
    mono = prove_monotone(f, dom)
    if mono == Monotonicity.UNKNOWN:
        raise PreconditionViolated("left-hand side is not certified monotone")
    direction = 1 if mono == Monotonicity.INCREASING else -1
    iv = dom.intervals[0]
    nat = ex.natural_domain(f)

    def side(t: Optional[Fraction], closed: bool, end: int) -> tuple[Optional[int], bool]:
        """(sign of lim f - a at this end, attained?)"""
        if t is None:
            d = _diverges(f, end)
            return (d, False) if d is not None else (None, False)
        if nat.contains(t):
            return _endpoint_cmp(f, a, t), closed
        return None, False

    lo_s, lo_att = side(iv.lo, iv.lo_closed, -1)
    hi_s, hi_att = side(iv.hi, iv.hi_closed, 1)
    if direction < 0:
        lo_s, hi_s = (None if lo_s is None else -lo_s), (None if hi_s is None else -hi_s)
    # now the (orientation-corrected) residual increases from lo_s to hi_s
    if lo_s is None:
        lo_s = _probe_towards(f, a, iv, -1, direction)
    if hi_s is None:
        hi_s = _probe_towards(f, a, iv, 1, direction)
    if lo_s == 0 and lo_att:
        return CountResult(CountKind.EXACTLY_ONE, ExactRational(iv.lo), "attained at the left endpoint")
    if hi_s == 0 and hi_att:
        return CountResult(CountKind.EXACTLY_ONE, ExactRational(iv.hi), "attained at the right endpoint")
    if lo_s is not None and lo_s >= 0:
        return CountResult(CountKind.NONE, reason="target below the range")
    if hi_s is not None and hi_s <= 0:
        return CountResult(CountKind.NONE, reason="target above the range")
    if lo_s == -1 and hi_s == 1:
        target = a if not isinstance(a, ex.RationalLit) else a.value
        v = InverseFunctionValue(f, iv, target, direction)
        return CountResult(CountKind.EXACTLY_ONE, CertifiedRoot(v), "intermediate value theorem")
    return CountResult(CountKind.UNKNOWN, reason="range endpoints not decided")


# ---------------------------------------------------------------------------
# identity check
# ---------------------------------------------------------------------------


class IdentityResult(enum.Enum):
    IDENTITY = "Identity"
    NOT_IDENTITY = "NotIdentity"
    UNKNOWN = "Unknown"


def identity_check(eq: ex.Equation) -> IdentityResult:
    d = ex.Sub(eq.lhs, eq.rhs)
    if ex.fold_constants(eq.lhs) == ex.fold_constants(eq.rhs):
        return IdentityResult.IDENTITY
    r = pl.rational_parts(d)
    if r is not None:
        return IdentityResult.IDENTITY if r[0].is_zero() else IdentityResult.NOT_IDENTITY
    a, b = rw.radical_form(eq.lhs), rw.radical_form(eq.rhs)
    if a is not None and b is not None and not (a - b).terms:
        return IdentityResult.IDENTITY
    for t in eq.domain.sample_points(4):
        try:
            s = sign_at(d, t)
        except (ex.DomainViolation, EmptyIntersection, UnboundedEnclosure):
            continue
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            return IdentityResult.NOT_IDENTITY
    return IdentityResult.UNKNOWN


# ---------------------------------------------------------------------------
# candidate verification
# ---------------------------------------------------------------------------


class VerifyStatus(enum.Enum):
    VERIFIED = "Verified"
    REJECTED = "Rejected"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VerifyResult:
    status: VerifyStatus
    reason: str = ""


def verify_candidate(eq: ex.Equation, c: SolutionRep, trace: rw.Trace, max_precision: int = 512) -> VerifyResult:
    """Check a candidate against the ORIGINAL equation and the trace's side conditions."""
    inside = _in_domain(c, eq.domain, max_precision)
    if inside is False:
        return VerifyResult(VerifyStatus.REJECTED, f"outside the domain {eq.domain}")
    all_hold = True
    for cond in trace.side_conditions():
        s = _sign_of_rep(cond.expr, c, max_precision)
        ok = cond.holds(s)
        if ok is False:
            return VerifyResult(VerifyStatus.REJECTED, f"side condition {cond} violated")
        if ok is None:
            all_hold = False
    d = ex.Sub(eq.lhs, eq.rhs)
    s = _sign_of_rep(d, c, max_precision)
    if s in (Sign.POSITIVE, Sign.NEGATIVE):
        return VerifyResult(VerifyStatus.REJECTED, "lhs - rhs is certified nonzero")
    if inside is None:
        return VerifyResult(VerifyStatus.INCONCLUSIVE, "domain membership undecided")
    if trace.overall == rw.SolutionRelation.EQUIVALENT or all_hold:
        return VerifyResult(VerifyStatus.VERIFIED, "exact root of the final equation; side conditions hold")
    return VerifyResult(VerifyStatus.INCONCLUSIVE, "side condition undecided (verified numerically only)")


# ---------------------------------------------------------------------------
# polynomial pipeline
# ---------------------------------------------------------------------------


def _exact_real_roots(p: UniPoly) -> Optional[list[Union[Fraction, QuadraticSurd]]]:
    """All real roots exactly when they are rational or quadratic surds."""
    rs = pl.rational_roots(p)
    q = pl.squarefree_part(pl.deflate(p, rs))
    if q.degree <= 0:
        return list(rs)
    if q.degree <= 2:
        return list(rs) + pl.quadratic_solve(q)
    return None


def _kth_root_reps(y: Union[Fraction, QuadraticSurd], k: int) -> list[SolutionRep]:
    if isinstance(y, Fraction):
        sgn = (y > 0) - (y < 0)
        yexpr: ex.Expr = ex.RationalLit(y) if y >= 0 else ex.Neg(ex.RationalLit(-y))
    else:
        sgn = y.sign()
        yexpr = y.to_expr()
    if sgn == 0:
        return [ExactRational(0)]
    if k % 2 == 0 and sgn < 0:
        return []
    root = ex.Root(k, yexpr)
    exact = ex.try_exact(root, 0) if isinstance(y, Fraction) else None
    pos: SolutionRep = ExactRational(exact) if exact is not None else ClosedForm(root)
    if k % 2 == 1:
        return [pos]
    neg: SolutionRep = ExactRational(-exact) if exact is not None else ClosedForm(ex.Neg(root))
    return [neg, pos]


def _monotone_branch(g: UniPoly, r: IsolatedRoot) -> tuple[ex.Interval, int, IsolatedRoot]:
    """Open interval with simple rational ends around r on which g is strictly monotone."""
    dg = g.derivative()
    crits = pl.sturm_isolate(dg) if dg.degree >= 1 else []

    def apart(c: IsolatedRoot) -> bool:
        return c.hi <= r.lo or c.lo >= r.hi

    while not all(apart(c) for c in crits):
        w = (r.hi - r.lo) / 4
        r = r.refine(w)
        crits = [c.refine(w) for c in crits]
    lo = hi = None
    left = [c.hi for c in crits if c.hi <= r.lo]
    right = [c.lo for c in crits if c.lo >= r.hi]
    if left:
        b = max(left)
        lo = Fraction(math.ceil(b)) if math.ceil(b) <= r.lo else b
    if right:
        b = min(right)
        hi = Fraction(math.floor(b)) if math.floor(b) >= r.hi else b
    direction = 1 if dg((r.lo + r.hi) / 2) > 0 else -1
    return ex.Interval(lo, hi, False, False), direction, r


def solve_polynomial(p: UniPoly, eq: ex.Equation, trace: rw.Trace) -> tuple[list[SolutionRep], rw.Trace]:
    """Real roots of p, exactly when possible, else as inverse-function values."""
    if p.degree <= 0:
        return [], trace
    # substitution y = x^k when the reduced polynomial is exactly solvable
    sub = pl.substitution_reduce(p) if p.degree > 2 else None
    if sub is not None and eq.domain.is_real_line() and pl.from_expr(ex.Sub(eq.lhs, eq.rhs)) == p:
        k, r = sub
        ys = _exact_real_roots(r)
        if ys is not None:
            step = rw.apply_step(eq, "Substitute", k=k)
            trace = trace.then(step)
            reps: list[SolutionRep] = []
            for y in ys:
                reps.extend(_kth_root_reps(y, k))
            return reps, trace
    rs = pl.rational_roots(p)
    reps = [ExactRational(v) for v in rs]
    q = pl.squarefree_part(pl.deflate(p, rs))
    if q.degree <= 0:
        return reps, trace
    if q.degree <= 2:
        reps += [_as_rep(v) for v in pl.quadratic_solve(q)]
        return reps, trace
    f = eq.lhs if not eq.rhs.has_var() else ex.Sub(eq.lhs, eq.rhs)
    target = Fraction(0)
    if not eq.rhs.has_var():
        tv = ex.try_exact(eq.rhs, 0)
        if tv is None:
            f, tv = ex.Sub(eq.lhs, eq.rhs), Fraction(0)
        target = tv
    fp = pl.from_expr(f)
    if fp is None or pl.squarefree_part(fp).degree != fp.degree:
        fp, f, target = q, q.to_expr(), Fraction(0)
    for r in pl.sturm_isolate(q):
        if r.exact:
            reps.append(ExactRational(r.lo))
            continue
        while any(r.lo <= v <= r.hi for v in rs):
            r = r.refine((r.hi - r.lo) / 4)
        branch, direction, r = _monotone_branch(fp, r)
        v = InverseFunctionValue(f, branch, target, direction, seed=(r.lo, r.hi))
        reps.append(CertifiedRoot(v, note="no radical form produced"))
    return reps, trace


def _filter_domain(reps, eq: ex.Equation, cfg: SolveConfig):
    keep, rejected, inconclusive = [], [], []
    for rep in reps:
        inside = _in_domain(rep, eq.domain, cfg.check_precision)
        if inside:
            keep.append(rep)
        elif inside is False:
            rejected.append(Candidate(rep, f"outside the domain {eq.domain}"))
        else:
            inconclusive.append(Candidate(rep, "domain membership undecided"))
    return keep, rejected, inconclusive


def _polynomial_strategy(eq: ex.Equation, cfg: SolveConfig):
    p = pl.from_expr(ex.Sub(eq.lhs, eq.rhs))
    if p is None:
        return None
    trace = rw.Trace()
    if p.is_zero():
        return SolutionSet("identity"), trace
    reps, trace = solve_polynomial(p, eq, trace)
    keep, rej, inc = _filter_domain(reps, eq, cfg)
    notes = []
    if any(isinstance(r, CertifiedRoot) for r in keep):
        notes.append("no radical form produced")
    return SolutionSet.finite(keep, rej, inc, notes), trace


# ---------------------------------------------------------------------------
# rational pipeline:  N_f = N_num minus N_den
# ---------------------------------------------------------------------------


def _rational_strategy(eq: ex.Equation, cfg: SolveConfig):
    r = pl.rational_parts(ex.Sub(eq.lhs, eq.rhs))
    if r is None:
        return None
    num, den, forbid = r
    bad = den * forbid
    if bad.degree <= 0:
        return None
    trace = rw.Trace()
    step = rw.Step(
        "MulBoth",
        eq,
        ex.Equation(num.to_expr(), ex.RationalLit(0), eq.domain),
        rw.SolutionRelation.SUPERSET,
        (rw.SideCondition(pl.squarefree_part(bad).primitive().to_expr(), "!=0"),),
    )
    trace = trace.then(step)
    if num.is_zero():
        return SolutionSet("identity"), trace
    reps, _ = solve_polynomial(num, ex.Equation(num.to_expr(), ex.RationalLit(0)), rw.Trace())
    keep, rejected, inconclusive = [], [], []
    for rep in reps:
        vr = verify_candidate(eq, rep, trace, cfg.check_precision)
        if vr.status == VerifyStatus.VERIFIED:
            keep.append(rep)
        elif vr.status == VerifyStatus.REJECTED:
            rejected.append(Candidate(rep, vr.reason))
        else:
            inconclusive.append(Candidate(rep, vr.reason))
    return SolutionSet.finite(keep, rejected, inconclusive), trace


# ---------------------------------------------------------------------------
# radical pipeline
# ---------------------------------------------------------------------------


def _pure_radical(rf: rw.RadicalForm) -> bool:
    return bool(rf.terms) and all(k != () for k, _ in rf.terms)


def _power_for(rf: rw.RadicalForm) -> int:
    return math.lcm(*(n for n, _ in rf.atoms()))


def _power_step(cur: ex.Equation, n: int) -> rw.Step:
    if n == 2:
        return rw.apply_step(cur, "SquareBoth")
    if n % 2 == 1:
        return rw.apply_step(cur, "ApplyInjective", f="pow", k=n)
    return rw.apply_step(cur, "SquareBoth")


RADICAL_SIZE_LIMIT = 64


def _form_size(f: rw.RadicalForm) -> int:
    return sum(len(k) + c.degree + 1 for k, c in f.terms)


def _radical_strategy(eq: ex.Equation, cfg: SolveConfig):
    a, b = rw.radical_form(eq.lhs), rw.radical_form(eq.rhs)
    if a is None or b is None or (a.is_radical_free() and b.is_radical_free()):
        return None
    trace = rw.Trace()
    cur = eq
    budget = 4 * len(a.atoms() | b.atoms()) + 2
    while budget > 0:
        budget -= 1
        a, b = rw.radical_form(cur.lhs), rw.radical_form(cur.rhs)
        if a is None or b is None:
            return None
        if a.is_radical_free() and b.is_radical_free():
            break
        if _form_size(a) + _form_size(b) > RADICAL_SIZE_LIMIT:
            return None  # elimination is not converging (several independent odd roots)
        if (_pure_radical(a) and b.is_radical_free()) or (_pure_radical(b) and a.is_radical_free()) or (
            _pure_radical(b) and len(b.terms) == 1
        ):
            rad = a if not a.is_radical_free() and (b.is_radical_free() or len(b.terms) != 1) else b
            n = _power_for(rad)
            if (_form_size(a) + _form_size(b)) * (2 if n % 2 == 0 else n) > 2 * RADICAL_SIZE_LIMIT:
                return None
            step = _power_step(cur, n)
        else:
            step = rw.apply_step(cur, "IsolateRadical")
        trace = trace.then(step)
        cur = step.output
    else:
        return None
    p = (rw.radical_form(cur.lhs) - rw.radical_form(cur.rhs)).polynomial()
    if p is None:
        return None
    if p.is_zero():
        return None
    reps, _ = solve_polynomial(p, ex.Equation(p.to_expr(), ex.RationalLit(0)), rw.Trace())
    keep, rejected, inconclusive = [], [], []
    for rep in reps:
        vr = verify_candidate(eq, rep, trace, cfg.check_precision)
        if vr.status == VerifyStatus.VERIFIED:
            keep.append(rep)
        elif vr.status == VerifyStatus.REJECTED:
            rejected.append(Candidate(rep, vr.reason))
        else:
            inconclusive.append(Candidate(rep, vr.reason))
    return SolutionSet.finite(keep, rejected, inconclusive), trace


# ---------------------------------------------------------------------------
# exp / Lambert pipeline
# ---------------------------------------------------------------------------


def _exp_linear(eq: ex.Equation):
    """(a, b, c) when one side is exp(a*x + b) and the other a constant c."""
    for s1, s2 in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
        if isinstance(s1, ex.Exp) and not s2.has_var():
            u = pl.from_expr(s1.arg)
            if u is not None and u.degree == 1:
                return u.coeffs[1], u.coeffs[0], s2
    return None


def _xexp(eq: ex.Equation):
    xe = (ex.Mul(ex.Var(), ex.Exp(ex.Var())), ex.Mul(ex.Exp(ex.Var()), ex.Var()))
    for s1, s2 in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
        if s1 in xe and not s2.has_var():
            return s2
    return None


def _lambert_solutions(z: ex.Expr, shift: Optional[Fraction]) -> tuple[list[SolutionRep], str]:
    """Solutions x = -W_k(z) - shift (shift None: x = W_k(z)) for k in {0, -1}."""

    def form(k: int) -> ex.Expr:
        w = ex.LambertW(k, z)
        if shift is None:
            return w
        neg = ex.Neg(w)
        if shift == 0:
            return neg
        return ex.Sub(neg, ex.RationalLit(shift)) if shift > 0 else ex.Add(neg, ex.RationalLit(-shift))

    branch_value = ExactRational(-1 if shift is None else 1 - shift)
    if ex.is_branch_point(z):
        return [branch_value], "argument is the branch point -1/e"
    zs = certified_sign_const(z)
    if zs == Sign.ZERO:
        return [ExactRational(0 if shift is None else -shift)], "W(0) = 0"
    if zs == Sign.POSITIVE:
        return [ClosedForm(form(0))], "argument positive: principal branch only"
    if zs == Sign.UNKNOWN:
        return [], "sign of the Lambert argument undecided"
    gap = certified_sign_const(ex.Add(z, ex.Exp(ex.RationalLit(-1))))
    if gap == Sign.NEGATIVE:
        return [], "argument below -1/e: no real solution"
    if gap == Sign.ZERO:
        return [branch_value], "argument is the branch point -1/e"
    if gap == Sign.UNKNOWN:
        return [], "position relative to -1/e undecided"
    return [ClosedForm(form(0)), ClosedForm(form(-1))], "two real branches"


def _lambert_strategy(eq: ex.Equation, cfg: SolveConfig):
    trace = rw.Trace()
    el = _exp_linear(eq)
    if el is not None:
        a, b, c = el
        cs = certified_sign_const(c)
        if cs in (Sign.NEGATIVE, Sign.ZERO):
            return SolutionSet("empty", notes=("exp is positive",)), trace.with_note("exp is positive")
        if cs != Sign.POSITIVE:
            return None
        lhs_exp = eq.lhs if isinstance(eq.lhs, ex.Exp) else eq.rhs
        oriented = ex.Equation(lhs_exp, c, eq.domain)
        if oriented != eq:
            return _lambert_after_orient(eq, a, b, c, cfg)
        step = rw.apply_step(eq, "ApplyInjective", f="ln")
        trace = trace.then(step)
        return _finish_log(eq, a, b, c, trace, cfg)
    pat = rw.lambert_pattern(eq)
    if pat is not None:
        a, b = pat
        step = rw.apply_step(eq, "LambertForm")
        trace = trace.then(step)
        c, z = rw.lambert_target(a, b)
        reps, why = _lambert_solutions(z, c.value)
        keep, rej, inc = _filter_domain(reps, eq, cfg)
        return SolutionSet.finite(keep, rej, inc, (why,)), trace.with_note(why)
    c = _xexp(eq)
    if c is not None:
        reps, why = _lambert_solutions(c, None)
        keep, rej, inc = _filter_domain(reps, eq, cfg)
        return SolutionSet.finite(keep, rej, inc, (why,)), trace.with_note(why)
    return None


def _lambert_after_orient(eq, a, b, c, cfg):
    # constant on the left: swap sides first (pure rearrangement is Equivalent)
    swapped = ex.Equation(eq.rhs, eq.lhs, eq.domain)
    trace = rw.Trace()
    step = rw.apply_step(swapped, "ApplyInjective", f="ln")
    trace = trace.then(step).with_note("sides swapped")
    return _finish_log(swapped, a, b, c, trace, cfg)


def _finish_log(eq, a, b, c, trace, cfg):
    x: ex.Expr = ex.Ln(c)
    if b != 0:
        x = ex.Sub(x, ex.RationalLit(b)) if b > 0 else ex.Add(x, ex.RationalLit(-b))
    if a != 1:
        x = ex.Div(x, ex.RationalLit(a)) if a > 0 else ex.Neg(ex.Div(x, ex.RationalLit(-a)))
    keep, rej, inc = _filter_domain([ClosedForm(x)], eq, cfg)
    return SolutionSet.finite(keep, rej, inc), trace


# ---------------------------------------------------------------------------
# monotone fallback
# ---------------------------------------------------------------------------


def _monotone_strategy(eq: ex.Equation, cfg: SolveConfig):
    f, a = eq.lhs, eq.rhs
    if a.has_var():
        f, a = ex.Sub(eq.lhs, eq.rhs), ex.RationalLit(0)
    if f.has_var() is False:
        return None
    sols: list[SolutionRep] = []
    for iv in eq.domain.intervals:
        sub = ex.Equation(f, a, ex.Domain((iv,)))
        if len(sub.domain.intervals) != 1:
            return None
        try:
            res = count_solutions_monotone(sub)
        except PreconditionViolated:
            return None
        if res.kind == CountKind.UNKNOWN:
            return None
        if res.solution is not None:
            sols.append(res.solution)
    note = "strictly monotone: at most one solution per interval"
    return SolutionSet.finite(sols, notes=(note,)), rw.Trace(notes=(note,))


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def solve(eq: ex.Equation, config: Optional[SolveConfig] = None) -> tuple[SolutionSet, rw.Trace]:
    cfg = config or SolveConfig()
    if eq.domain.is_empty():
        return SolutionSet("empty", notes=("empty domain",)), rw.Trace(notes=("empty domain",))
    if cfg.identity and identity_check(eq) == IdentityResult.IDENTITY:
        return SolutionSet("identity"), rw.Trace(notes=("identity: both sides agree on the domain",))
    strategies = (
        (cfg.polynomial, _polynomial_strategy),
        (cfg.rational, _rational_strategy),
        (cfg.radical, _radical_strategy),
        (cfg.lambert, _lambert_strategy),
        (cfg.monotone, _monotone_strategy),
    )
    partial = rw.Trace()
    for enabled, strat in strategies:
        if not enabled:
            continue
        try:
            out = strat(eq, cfg)
        except (rw.RuleNotApplicable, rw.DomainMismatch, MultiIntervalDomain, TargetOutsideRange) as err:
            partial = partial.with_note(f"{strat.__name__.strip('_')}: {err}")
            continue
        if out is not None:
            return out
    reason = "no strategy applies"
    return SolutionSet("unsolved", reason=reason), partial.with_note(reason)
