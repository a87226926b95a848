"""Tagged rewriting steps: every transformation records how solution sets relate."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import expr as ex
from . import poly as pl
from .interval import (
    DyadicInterval,
    EmptyIntersection,
    Sign,
    UnboundedEnclosure,
    eval_interval,
    sign_at,
    structural_sign,
)


class RuleNotApplicable(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


class BrokenChain(ValueError):
    pass


class SolutionRelation(enum.Enum):
    EQUIVALENT = "equivalent"
    SUPERSET = "superset"
    SUBSET = "subset"
    UNKNOWN = "unknown"


def compose_relations(a: SolutionRelation, b: SolutionRelation) -> SolutionRelation:
    R = SolutionRelation
    if a == R.EQUIVALENT:
        return b
    if b == R.EQUIVALENT:
        return a
    if a == b and a != R.UNKNOWN:
        return a
    return R.UNKNOWN


# ---------------------------------------------------------------------------
# side conditions
# ---------------------------------------------------------------------------

_PRED_TEXT = {">=0": ">= 0", "<=0": "<= 0", "!=0": "!= 0", ">0": "> 0", "<0": "< 0"}


@dataclass(frozen=True)
class SideCondition:
    expr: ex.Expr
    predicate: str  # one of >=0 <=0 !=0 >0 <0

    def __post_init__(self):
        if self.predicate not in _PRED_TEXT:
            raise ValueError(f"unknown predicate {self.predicate!r}")

    def holds(self, sign: Sign) -> Optional[bool]:
        """Decide the predicate from a certified sign; None when undecided."""
        if sign == Sign.UNKNOWN or sign == Sign.CONTAINS_ZERO:
            return None
        ok = {
            ">=0": (Sign.POSITIVE, Sign.ZERO),
            "<=0": (Sign.NEGATIVE, Sign.ZERO),
            "!=0": (Sign.POSITIVE, Sign.NEGATIVE),
            ">0": (Sign.POSITIVE,),
            "<0": (Sign.NEGATIVE,),
        }[self.predicate]
        return sign in ok

    def check_at(self, t: Fraction) -> Optional[bool]:
        return self.holds(sign_at(self.expr, Fraction(t)))

    def strict(self) -> "SideCondition":
        """The strict form used to upgrade a candidate to a proof."""
        p = {">=0": ">0", "<=0": "<0"}.get(self.predicate, self.predicate)
        return SideCondition(self.expr, p)

    def __str__(self) -> str:
        return f"{ex.to_text(self.expr)} {_PRED_TEXT[self.predicate]}"


# ---------------------------------------------------------------------------
# steps and traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    rule: str
    input: ex.Equation
    output: ex.Equation
    relation: SolutionRelation
    side_conditions: tuple[SideCondition, ...] = ()
    lossy: bool = False
    var: str = "x"
    note: str = ""

    def __post_init__(self):
        if self.relation == SolutionRelation.SUBSET and not self.lossy:
            raise ValueError("a Subset step must carry the lossy marker")

    def output_text(self) -> str:
        return f"{ex.to_text(self.output.lhs, self.var)} = {ex.to_text(self.output.rhs, self.var)}"

    def __str__(self) -> str:
        conds = "; ".join(str(c) for c in self.side_conditions)
        tail = f"  [side condition: {conds}]" if conds else ""
        return f"{self.rule}: {self.output_text()}  ({self.relation.value}){tail}"


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def overall(self) -> SolutionRelation:
        return compose(self)

    def then(self, step: Step) -> "Trace":
        return Trace(self.steps + (step,), self.notes)

    def with_note(self, note: str) -> "Trace":
        return Trace(self.steps, self.notes + (note,))

    def side_conditions(self) -> list[SideCondition]:
        return [c for s in self.steps for c in s.side_conditions]

    def render(self) -> str:
        lines = [f"{i + 1}. {s}" for i, s in enumerate(self.steps)]
        lines.append(f"overall relation: {self.overall.value}")
        return "\n".join(lines)


def compose(trace: Union[Trace, Sequence[Step]]) -> SolutionRelation:
    steps = trace.steps if isinstance(trace, Trace) else tuple(trace)
    rel = SolutionRelation.EQUIVALENT
    for a, b in zip(steps, steps[1:]):
        if a.output != b.input:
            raise BrokenChain(f"step {b.rule!r} does not start from the previous output")
    for s in steps:
        rel = compose_relations(rel, s.relation)
    return rel


# ---------------------------------------------------------------------------
# radical normal form: sum of poly(x) * product of root(n, base(x))^e
# ---------------------------------------------------------------------------

Key = tuple  # sorted tuple of (n, base UniPoly, e)


def _key_mul(a: Key, b: Key) -> tuple[Key, pl.UniPoly]:
    exps: dict = {}
    for n, base, e in a + b:
        exps[(n, base)] = exps.get((n, base), 0) + e
    coeff = pl.UniPoly.const(1)
    out = []
    for (n, base), e in exps.items():
        q, r = divmod(e, n)
        if q:
            coeff = coeff * base**q
        if r:
            out.append((n, base, r))
    out.sort(key=lambda t: (t[0], t[1].coeffs, t[2]))
    return tuple(out), coeff


@dataclass(frozen=True)
class RadicalForm:
    terms: tuple[tuple[Key, pl.UniPoly], ...]

    @staticmethod
    def make(d: dict) -> "RadicalForm":
        items = [(k, v) for k, v in d.items() if not v.is_zero()]
        items.sort(key=lambda kv: (len(kv[0]), [(n, b.coeffs, e) for n, b, e in kv[0]]))
        return RadicalForm(tuple(items))

    @staticmethod
    def poly(p: pl.UniPoly) -> "RadicalForm":
        return RadicalForm.make({(): p})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, o: "RadicalForm") -> "RadicalForm":
        d = self.as_dict()
        for k, v in o.terms:
            d[k] = d.get(k, pl.UniPoly()) + v
        return RadicalForm.make(d)

    def __neg__(self) -> "RadicalForm":
        return RadicalForm(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, o: "RadicalForm") -> "RadicalForm":
        return self + (-o)

    def __mul__(self, o: "RadicalForm") -> "RadicalForm":
        d: dict = {}
        for ka, va in self.terms:
            for kb, vb in o.terms:
                k, c = _key_mul(ka, kb)
                d[k] = d.get(k, pl.UniPoly()) + va * vb * c
        return RadicalForm.make(d)

    def __pow__(self, k: int) -> "RadicalForm":
        out = RadicalForm.poly(pl.UniPoly.const(1))
        for _ in range(k):
            out = out * self
        return out

    def is_radical_free(self) -> bool:
        return all(k == () for k, _ in self.terms)

    def polynomial(self) -> Optional[pl.UniPoly]:
        if not self.is_radical_free():
            return None
        return self.as_dict().get((), pl.UniPoly())

    def atoms(self) -> set:
        return {(n, b) for k, _ in self.terms for n, b, _ in k}

    def keys(self) -> list[Key]:
        return [k for k, _ in self.terms if k != ()]

    def split(self, key: Key) -> tuple["RadicalForm", "RadicalForm"]:
        d = self.as_dict()
        g = {key: d.pop(key)}
        return RadicalForm.make(d), RadicalForm.make(g)

    def to_expr(self) -> ex.Expr:
        if not self.terms:
            return ex.RationalLit(0)
        out: Optional[ex.Expr] = None
        for key, coeff in self.terms:
            rad = _radical_expr(key)
            negative = coeff.lc < 0
            mag = -coeff if negative else coeff
            if rad is None:
                term = mag.to_expr()
            elif mag.degree == 0 and mag.coeffs[0] == 1:
                term = rad
            else:
                c = mag.to_expr()
                term = ex.Mul(c, rad)
            if out is None:
                out = ex.Neg(term) if negative else term
            else:
                out = ex.Sub(out, term) if negative else ex.Add(out, term)
        return out


def _radical_expr(key: Key) -> Optional[ex.Expr]:
    if not key:
        return None
    by_index: dict = {}
    for n, base, e in key:
        by_index[n] = by_index.get(n, pl.UniPoly.const(1)) * base**e
    parts = [ex.Root(n, by_index[n].to_expr()) for n in sorted(by_index)]
    out = parts[0]
    for p in parts[1:]:
        out = ex.Mul(out, p)
    return out


def radical_form(e: ex.Expr) -> Optional[RadicalForm]:
    """Expand e over Q[x] adjoined with radicals of polynomials; None if outside."""
    if isinstance(e, ex.RationalLit):
        return RadicalForm.poly(pl.UniPoly.const(e.value))
    if isinstance(e, ex.Var):
        return RadicalForm.poly(pl.UniPoly.x())
    if isinstance(e, ex.Neg):
        a = radical_form(e.arg)
        return None if a is None else -a
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul)):
        a = radical_form(e.left)
        b = radical_form(e.right) if a is not None else None
        if b is None:
            return None
        return a + b if isinstance(e, ex.Add) else a - b if isinstance(e, ex.Sub) else a * b
    if isinstance(e, ex.Div):
        b = pl.from_expr(e.right)
        if b is None or b.degree != 0:
            return None
        a = radical_form(e.left)
        return None if a is None else a * RadicalForm.poly(pl.UniPoly.const(1 / b.coeffs[0]))
    if isinstance(e, ex.IntPow) and e.exponent >= 0:
        a = radical_form(e.base)
        return None if a is None else a**e.exponent
    if isinstance(e, ex.Root):
        a = radical_form(e.arg)
        p = None if a is None else a.polynomial()
        if p is None:
            return None
        if p.is_zero():
            return RadicalForm.poly(pl.UniPoly())
        if p.degree == 0:
            exact = ex.try_exact(e, Fraction(0))
            if exact is not None:
                return RadicalForm.poly(pl.UniPoly.const(exact))
        return RadicalForm.make({((e.index, p, 1),): pl.UniPoly.const(1)})
    return None


def radical_count(e: ex.Expr) -> int:
    return len({n for n in e.walk() if isinstance(n, ex.Root)})


# ---------------------------------------------------------------------------
# sign analysis on a domain
# ---------------------------------------------------------------------------


def _rational_sign_on(e: ex.Expr, dom: ex.Domain) -> Optional[str]:
    rf = pl.rational_from_expr(e)
    if rf is None:
        return None
    num, den = rf
    if num.is_zero():
        return ">=0"
    for rel, tag, n in ((">", ">0", num), (">", "<0", -num), (">=", ">=0", num), (">=", "<=0", -num)):
        if dom.is_subset_of(pl.sign_condition_set(n, den, rel)):
            return tag
    return None


def _combine(signs: list[Sign]) -> Optional[str]:
    if all(s == Sign.POSITIVE for s in signs):
        return ">0"
    if all(s == Sign.NEGATIVE for s in signs):
        return "<0"
    return None


def _interval_sign_on(e: ex.Expr, dom: ex.Domain, depth: int = 12, budget: int = 4000) -> Optional[str]:
    leaves: list[Sign] = []
    count = [0]

    def visit(lo: Fraction, hi: Fraction, d: int) -> bool:
        count[0] += 1
        if count[0] > budget:
            return False
        try:
            s = eval_interval(e, DyadicInterval(lo, hi, 64), 64).sign()
        except (EmptyIntersection, UnboundedEnclosure):
            s = Sign.UNKNOWN
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            leaves.append(s)
            return True
        if d == 0:
            return False
        mid = (lo + hi) / 2
        return visit(lo, mid, d - 1) and visit(mid, hi, d - 1)

    for iv in dom.intervals:
        if iv.lo is None or iv.hi is None:
            return None
        if not visit(iv.lo, iv.hi, depth):
            return None
    if not leaves:
        return None
    return _combine(leaves)


def sign_on_domain(e: ex.Expr, dom: ex.Domain) -> Optional[str]:
    """'>0' '<0' '>=0' '<=0' when proven on all of dom, else None."""
    if dom.is_empty():
        return ">0"
    s = structural_sign(e)
    if s in (">0", "<0"):
        return s
    r = _rational_sign_on(e, dom)
    if r in (">0", "<0"):
        return r
    i = _interval_sign_on(e, dom) if dom.intervals and all(
        iv.lo is not None and iv.hi is not None for iv in dom.intervals
    ) else None
    return i or r or s


def _strict(s: Optional[str]) -> bool:
    return s in (">0", "<0")


def _nonneg(s: Optional[str]) -> bool:
    return s in (">0", ">=0")


def _nonpos(s: Optional[str]) -> bool:
    return s in ("<0", "<=0")


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------


def _expand(e: ex.Expr) -> ex.Expr:
    rf = radical_form(e)
    return e if rf is None else rf.to_expr()


def _require_defined(t: ex.Expr, dom: ex.Domain) -> None:
    if not dom.is_subset_of(ex.natural_domain(t)):
        raise DomainMismatch(f"{ex.to_text(t)} is not defined on all of {dom}")


def _same_sign_squared(eq: ex.Equation, power: int) -> tuple[SolutionRelation, tuple[SideCondition, ...]]:
    ls = sign_on_domain(eq.lhs, eq.domain)
    rs = sign_on_domain(eq.rhs, eq.domain)
    if (_nonneg(ls) and _nonneg(rs)) or (_nonpos(ls) and _nonpos(rs)):
        return SolutionRelation.EQUIVALENT, ()
    if _nonpos(rs):
        cond = SideCondition(eq.lhs, "<=0")
    elif _nonneg(rs):
        cond = SideCondition(eq.lhs, ">=0")
    elif _nonpos(ls):
        cond = SideCondition(eq.rhs, "<=0")
    elif _nonneg(ls):
        cond = SideCondition(eq.rhs, ">=0")
    else:
        cond = SideCondition(ex.Mul(eq.lhs, eq.rhs), ">=0")
    return SolutionRelation.SUPERSET, (cond,)


def _simplify_ln_exp(e: ex.Expr) -> ex.Expr:
    if isinstance(e, ex.Ln) and isinstance(e.arg, ex.Exp):
        return e.arg.arg
    return e


def apply_step(eq: ex.Equation, rule: str, t: Optional[ex.Expr] = None, *, k: int = 0, lossy: bool = False,
               f: Union[str, ex.Expr, None] = None, key: Optional[Key] = None) -> Step:
    """Apply one named rule; the returned Step carries its relation tag."""
    R = SolutionRelation
    dom = eq.domain
    if rule in ("AddBoth", "SubBoth"):
        if t is None:
            raise RuleNotApplicable(f"{rule} needs a term")
        _require_defined(t, dom)
        op = ex.Add if rule == "AddBoth" else ex.Sub
        out = ex.Equation(op(eq.lhs, t), op(eq.rhs, t), dom)
        return Step(rule, eq, out, R.EQUIVALENT)
    if rule == "MulBoth":
        if t is None:
            raise RuleNotApplicable("MulBoth needs a factor")
        _require_defined(t, dom)
        out = ex.Equation(ex.Mul(eq.lhs, t), ex.Mul(eq.rhs, t), dom)
        if _strict(sign_on_domain(t, dom)):
            return Step(rule, eq, out, R.EQUIVALENT)
        return Step(rule, eq, out, R.SUPERSET, (SideCondition(t, "!=0"),))
    if rule == "DivBoth":
        if t is None:
            raise RuleNotApplicable("DivBoth needs a divisor")
        _require_defined(t, dom)
        if _strict(sign_on_domain(t, dom)):
            out = ex.Equation(ex.Div(eq.lhs, t), ex.Div(eq.rhs, t), dom)
            return Step(rule, eq, out, R.EQUIVALENT)
        if not lossy:
            raise RuleNotApplicable(f"dividing by {ex.to_text(t)} may lose solutions; pass lossy=True")
        out = ex.Equation(ex.Div(eq.lhs, t), ex.Div(eq.rhs, t), dom)
        return Step(rule, eq, out, R.SUBSET, (SideCondition(t, "!=0"),), lossy=True)
    if rule == "SquareBoth":
        rel, conds = _same_sign_squared(eq, 2)
        out = ex.Equation(_square(eq.lhs), _square(eq.rhs), dom)
        return Step(rule, eq, out, rel, conds)
    if rule == "ApplyInjective":
        return _apply_injective(eq, f, k)
    if rule == "Substitute":
        return _substitute(eq, k)
    if rule == "IsolateRadical":
        return _isolate(eq, key)
    if rule == "LambertForm":
        return _lambert_form(eq)
    raise RuleNotApplicable(f"unknown rule {rule!r}")


def _square(e: ex.Expr) -> ex.Expr:
    rf = radical_form(e)
    if rf is None:
        return ex.IntPow(e, 2)
    if rf.is_radical_free() and not _is_literal(e):
        return ex.IntPow(e, 2)
    return (rf**2).to_expr()


def _is_literal(e: ex.Expr) -> bool:
    return isinstance(e, ex.RationalLit) or (isinstance(e, ex.Neg) and isinstance(e.arg, ex.RationalLit))


def _apply_injective(eq: ex.Equation, f, k: int) -> Step:
    R = SolutionRelation
    dom = eq.domain
    if f == "exp":
        out = ex.Equation(ex.Exp(eq.lhs), ex.Exp(eq.rhs), dom)
        return Step("ApplyInjective(exp)", eq, out, R.EQUIVALENT)
    if f == "ln":
        if sign_on_domain(eq.lhs, dom) != ">0" or sign_on_domain(eq.rhs, dom) != ">0":
            raise RuleNotApplicable("ln needs both sides certified positive")
        out = ex.Equation(_simplify_ln_exp(ex.Ln(eq.lhs)), _simplify_ln_exp(ex.Ln(eq.rhs)), dom)
        return Step("ApplyInjective(ln)", eq, out, R.EQUIVALENT)
    if f == "pow":
        if k < 1 or k % 2 == 0:
            raise RuleNotApplicable("only odd powers are injective on all of R")

        def pw(e):
            rf = radical_form(e)
            return ex.IntPow(e, k) if rf is None or rf.is_radical_free() else (rf**k).to_expr()

        out = ex.Equation(pw(eq.lhs), pw(eq.rhs), dom)
        return Step(f"ApplyInjective(^{k})", eq, out, R.EQUIVALENT)
    if isinstance(f, ex.Expr):
        from .solver import Monotonicity, prove_monotone

        # g must be strictly monotone on a set containing both sides' ranges; require all of R
        if not ex.natural_domain(f).is_real_line() or prove_monotone(f, ex.Domain.real_line()) == Monotonicity.UNKNOWN:
            raise RuleNotApplicable("function not certified strictly monotone on R")
        out = ex.Equation(ex.substitute(f, eq.lhs), ex.substitute(f, eq.rhs), dom)
        return Step(f"ApplyInjective({ex.to_text(f)})", eq, out, R.EQUIVALENT)
    raise RuleNotApplicable(f"unsupported injective function {f!r}")


def _substitute(eq: ex.Equation, k: int) -> Step:
    p = pl.from_expr(ex.Sub(eq.lhs, eq.rhs))
    if p is None or p.is_zero():
        raise RuleNotApplicable("substitution needs a nonzero polynomial equation")
    red = pl.substitution_reduce(p)
    if red is None or (k and red[0] % k):
        raise RuleNotApplicable("polynomial is not a polynomial in x^k")
    kk = k or red[0]
    r = pl.UniPoly(p.coeffs[i] for i in range(0, len(p.coeffs), kk))
    dom = ex.Domain.real_line()
    if not eq.domain.is_real_line():
        raise RuleNotApplicable("substitution is implemented for equations on all of R")
    if kk % 2 == 0:
        dom = ex.Domain((ex.Interval(Fraction(0), None, True, False),))
    out = ex.Equation(r.to_expr(), ex.RationalLit(0), dom)
    return Step(f"Substitute(y = x^{kk})", eq, out, SolutionRelation.EQUIVALENT, var="y",
                note=f"back-substitute x = root({kk}, y)")


def _pick_key(keys: list[Key]) -> Key:
    return max(keys, key=lambda k: (len(k), max(n for n, _, _ in k), [(n, b.coeffs, e) for n, b, e in k]))


def _isolate(eq: ex.Equation, key: Optional[Key]) -> Step:
    a, b = radical_form(eq.lhs), radical_form(eq.rhs)
    if a is None or b is None:
        raise RuleNotApplicable("sides are not in the radical fragment")
    d = a - b
    keys = d.keys()
    if not keys:
        raise RuleNotApplicable("no radical to isolate")
    key = key if key is not None else _pick_key(keys)
    rest, group = d.split(key)
    out = ex.Equation(rest.to_expr(), (-group).to_expr(), eq.domain)
    return Step("IsolateRadical", eq, out, SolutionRelation.EQUIVALENT)


def lambert_pattern(eq: ex.Equation) -> Optional[tuple[Fraction, Fraction]]:
    """(a, b) when eq reads exp(x) = a*x + b (either side), a != 0."""
    for s1, s2 in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
        if s1 == ex.Exp(ex.Var()):
            p = pl.from_expr(s2)
            if p is not None and p.degree == 1:
                return p.coeffs[1], p.coeffs[0]
    return None


def lambert_target(a: Fraction, b: Fraction) -> tuple[ex.Expr, ex.Expr]:
    """(c, z) with x = -W(z) - c, where c = b/a and z = -exp(-c)/a."""
    c = b / a
    if c == 0:
        return ex.RationalLit(0), ex.s_neg(ex.RationalLit(1 / a))
    e = ex.Exp(ex.s_neg(ex.RationalLit(c)))
    if a == 1:
        z: ex.Expr = ex.Neg(e)
    elif a == -1:
        z = e
    elif a > 0:
        z = ex.Div(ex.Neg(e), ex.RationalLit(a))
    else:
        z = ex.Div(e, ex.RationalLit(-a))
    return ex.RationalLit(c), z


def _lambert_form(eq: ex.Equation) -> Step:
    pat = lambert_pattern(eq)
    if pat is None:
        raise RuleNotApplicable("not of the form exp(x) = a*x + b")
    a, b = pat
    c, z = lambert_target(a, b)
    u = ex.s_neg(ex.s_add(ex.Var(), c)) if c != 0 else ex.Neg(ex.Var())
    inner = ex.Add(ex.Var(), c) if c != 0 else ex.Var()
    lhs = ex.Mul(ex.Neg(inner), ex.Exp(ex.Neg(inner)))
    out = ex.Equation(z, lhs, eq.domain)
    return Step(
        "LambertForm",
        eq,
        out,
        SolutionRelation.EQUIVALENT,
        note=f"multiplied by the nonzero factor -exp(-(x + {ex.to_text(c)}))/{ex.to_text(ex.RationalLit(a))}; u = {ex.to_text(u)} solves u*exp(u) = {ex.to_text(z)}",
    )
