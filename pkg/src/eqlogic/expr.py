"""Expression trees over a single real variable ``x``.

Every node is an immutable dataclass, so structural equality and hashing come
for free. Scalars are exact :class:`fractions.Fraction` values; floating point
never enters a tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

Rational = Fraction


class UnsupportedNode(TypeError):
    pass


class DomainViolation(ValueError):
    pass


class NotExact(Exception):
    """Raised internally when an exact evaluation would need an irrational value."""


# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------


class Expr:
    __slots__ = ()

    def children(self) -> tuple["Expr", ...]:
        return ()

    def walk(self) -> Iterator["Expr"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def has_var(self) -> bool:
        return any(isinstance(n, Var) for n in self.walk())

    def __str__(self) -> str:
        return to_text(self)

    # convenience constructors, no simplification
    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k: int):
        return IntPow(self, int(k))


@dataclass(frozen=True, eq=True)
class RationalLit(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True)
class ConstE(Expr):
    pass


@dataclass(frozen=True, eq=True)
class ConstPi(Expr):
    pass


@dataclass(frozen=True, eq=True)
class _Unary(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class Neg(_Unary):
    pass


@dataclass(frozen=True, eq=True)
class Exp(_Unary):
    pass


@dataclass(frozen=True, eq=True)
class Ln(_Unary):
    pass


@dataclass(frozen=True, eq=True)
class Sin(_Unary):
    pass


@dataclass(frozen=True, eq=True)
class Cos(_Unary):
    pass


@dataclass(frozen=True, eq=True)
class _Binary(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Add(_Binary):
    pass


@dataclass(frozen=True, eq=True)
class Sub(_Binary):
    pass


@dataclass(frozen=True, eq=True)
class Mul(_Binary):
    pass


@dataclass(frozen=True, eq=True)
class Div(_Binary):
    pass


@dataclass(frozen=True, eq=True)
class IntPow(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)


@dataclass(frozen=True, eq=True)
class Root(Expr):
    index: int
    arg: Expr

    def __post_init__(self):
        if self.index < 2:
            raise ValueError(f"root index must be >= 2, got {self.index}")

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class LambertW(Expr):
    branch: int
    arg: Expr

    def __post_init__(self):
        if self.branch not in (0, -1):
            raise ValueError(f"Lambert W branch must be 0 or -1, got {self.branch}")

    def children(self):
        return (self.arg,)


X = Var()
E = ConstE()
PI = ConstPi()


def lit(q) -> RationalLit:
    return RationalLit(Fraction(q))


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return RationalLit(Fraction(v))
    raise TypeError(f"cannot convert {v!r} to Expr")


def sqrt(e) -> Root:
    return Root(2, as_expr(e))


def rebuild(e: Expr, children: Sequence[Expr]) -> Expr:
    """Return a node of the same kind as ``e`` with new children."""
    if isinstance(e, _Unary):
        return type(e)(children[0])
    if isinstance(e, _Binary):
        return type(e)(children[0], children[1])
    if isinstance(e, IntPow):
        return IntPow(children[0], e.exponent)
    if isinstance(e, Root):
        return Root(e.index, children[0])
    if isinstance(e, LambertW):
        return LambertW(e.branch, children[0])
    return e


def substitute(e: Expr, value: Expr) -> Expr:
    """Replace every occurrence of ``x`` by ``value``."""
    if isinstance(e, Var):
        return value
    ch = e.children()
    if not ch:
        return e
    return rebuild(e, [substitute(c, value) for c in ch])


# ---------------------------------------------------------------------------
# constant folding smart constructors
# ---------------------------------------------------------------------------


def _litval(e: Expr) -> Optional[Fraction]:
    return e.value if isinstance(e, RationalLit) else None


def s_add(a: Expr, b: Expr) -> Expr:
    va, vb = _litval(a), _litval(b)
    if va is not None and vb is not None:
        return RationalLit(va + vb)
    if va == 0:
        return b
    if vb == 0:
        return a
    if vb is not None and vb < 0:
        return Sub(a, RationalLit(-vb))
    if isinstance(b, Neg):
        return Sub(a, b.arg)
    return Add(a, b)


def s_sub(a: Expr, b: Expr) -> Expr:
    va, vb = _litval(a), _litval(b)
    if va is not None and vb is not None:
        return RationalLit(va - vb)
    if vb == 0:
        return a
    if va == 0:
        return s_neg(b)
    if isinstance(b, Neg):
        return Add(a, b.arg)
    return Sub(a, b)


def s_neg(a: Expr) -> Expr:
    va = _litval(a)
    if va is not None:
        return RationalLit(-va) if va <= 0 else Neg(a)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def s_mul(a: Expr, b: Expr) -> Expr:
    va, vb = _litval(a), _litval(b)
    if va is not None and vb is not None:
        return RationalLit(va * vb)
    if va == 0 or vb == 0:
        return RationalLit(0)
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return s_neg(b)
    if vb == -1:
        return s_neg(a)
    return Mul(a, b)


def s_div(a: Expr, b: Expr) -> Expr:
    va, vb = _litval(a), _litval(b)
    if vb == 0:
        return Div(a, b)
    if va is not None and vb is not None:
        return RationalLit(va / vb)
    if vb == 1:
        return a
    if va == 0:
        return RationalLit(0)
    return Div(a, b)


def s_pow(a: Expr, k: int) -> Expr:
    va = _litval(a)
    if k == 1:
        return a
    if k == 0:
        return RationalLit(1)
    if va is not None and (va != 0 or k > 0):
        return RationalLit(va**k)
    return IntPow(a, k)


def fold_constants(e: Expr) -> Expr:
    """Bottom-up constant folding over rational literals."""
    ch = e.children()
    if not ch:
        return e
    new = [fold_constants(c) for c in ch]
    if isinstance(e, Add):
        return s_add(*new)
    if isinstance(e, Sub):
        return s_sub(*new)
    if isinstance(e, Mul):
        return s_mul(*new)
    if isinstance(e, Div):
        return s_div(*new)
    if isinstance(e, Neg):
        return s_neg(new[0])
    if isinstance(e, IntPow):
        return s_pow(new[0], e.exponent)
    return rebuild(e, new)


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class Interval:
    """A real interval; ``None`` endpoints stand for -inf / +inf (always open)."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is None and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)
        if self.lo is not None and not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", Fraction(self.lo))
        if self.hi is not None and not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", Fraction(self.hi))

    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, q: Fraction) -> bool:
        if self.lo is not None and (q < self.lo or (q == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (q > self.hi or (q == self.hi and not self.hi_closed)):
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval":
        lo, loc = self.lo, self.lo_closed
        if other.lo is not None and (lo is None or other.lo > lo):
            lo, loc = other.lo, other.lo_closed
        elif other.lo is not None and other.lo == lo:
            loc = loc and other.lo_closed
        hi, hic = self.hi, self.hi_closed
        if other.hi is not None and (hi is None or other.hi < hi):
            hi, hic = other.hi, other.hi_closed
        elif other.hi is not None and other.hi == hi:
            hic = hic and other.hi_closed
        return Interval(lo, hi, loc, hic)

    def sample_points(self, n: int) -> list[Fraction]:
        """``n`` rational points inside the interval (deterministic)."""
        if self.is_empty():
            return []
        lo, hi = self.lo, self.hi
        if lo is None and hi is None:
            lo, hi = Fraction(-8), Fraction(8)
        elif lo is None:
            lo = hi - 16
        elif hi is None:
            hi = lo + 16
        if lo == hi:
            return [lo]
        pts = [lo + (hi - lo) * Fraction(2 * i + 1, 2 * n) for i in range(n)]
        return [p for p in pts if self.contains(p)]

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = "-inf" if self.lo is None else _fmt_q(self.lo)
        hi = "inf" if self.hi is None else _fmt_q(self.hi)
        return f"{left}{lo}, {hi}{right}"


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _lo_key(iv: Interval):
    # sorts -inf first; closed before open at equal endpoint
    return (0, 0, 0) if iv.lo is None else (1, iv.lo, 0 if iv.lo_closed else 1)


def _touch_or_overlap(a: Interval, b: Interval) -> bool:
    """True when ``a`` (lower start) and ``b`` together form one interval."""
    if a.hi is None or b.lo is None:
        return True
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return False


def _hull_hi(a: Interval, b: Interval):
    if a.hi is None or b.hi is None:
        return None, False
    if a.hi > b.hi:
        return a.hi, a.hi_closed
    if b.hi > a.hi:
        return b.hi, b.hi_closed
    return a.hi, a.hi_closed or b.hi_closed


@dataclass(frozen=True)
class Domain:
    """A finite union of disjoint, sorted, maximally merged intervals.

    ``approximate`` marks a domain that is a certified *subset* of the set it
    stands for (used when a boundary is irrational).
    """

    intervals: tuple[Interval, ...] = ()
    approximate: bool = False

    @staticmethod
    def normalize(intervals, approximate: bool = False) -> "Domain":
        ivs = sorted((iv for iv in intervals if not iv.is_empty()), key=_lo_key)
        out: list[Interval] = []
        for iv in ivs:
            if out and _touch_or_overlap(out[-1], iv):
                prev = out[-1]
                hi, hic = _hull_hi(prev, iv)
                out[-1] = Interval(prev.lo, hi, prev.lo_closed, hic)
            else:
                out.append(iv)
        return Domain(tuple(out), approximate)

    @staticmethod
    def real_line() -> "Domain":
        return Domain((Interval(None, None),))

    @staticmethod
    def empty(approximate: bool = False) -> "Domain":
        return Domain((), approximate)

    @staticmethod
    def point(q) -> "Domain":
        q = Fraction(q)
        return Domain((Interval(q, q, True, True),))

    def is_empty(self) -> bool:
        return not self.intervals

    def is_real_line(self) -> bool:
        return self.intervals == (Interval(None, None),)

    def contains(self, q) -> bool:
        q = Fraction(q)
        return any(iv.contains(q) for iv in self.intervals)

    def intersect(self, other: "Domain") -> "Domain":
        parts = [a.intersect(b) for a in self.intervals for b in other.intervals]
        return Domain.normalize(parts, self.approximate or other.approximate)

    def union(self, other: "Domain") -> "Domain":
        return Domain.normalize(self.intervals + other.intervals, self.approximate or other.approximate)

    def complement(self) -> "Domain":
        out = []
        cur, cur_closed = None, False
        for iv in self.intervals:
            if iv.lo is not None:
                out.append(Interval(cur, iv.lo, cur_closed, not iv.lo_closed))
            if iv.hi is None:
                return Domain.normalize(out)
            cur, cur_closed = iv.hi, not iv.hi_closed
        out.append(Interval(cur, None, cur_closed, False))
        return Domain.normalize(out)

    def is_subset_of(self, other: "Domain") -> bool:
        return self.intersect(other.complement()).is_empty()

    def sample_points(self, per_interval: int = 8) -> list[Fraction]:
        pts: list[Fraction] = []
        for iv in self.intervals:
            pts.extend(iv.sample_points(per_interval))
        return pts

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " U ".join(str(iv) for iv in self.intervals)


# ---------------------------------------------------------------------------
# equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    """``lhs = rhs`` over ``domain``; the domain is clipped to both natural domains."""

    lhs: Expr
    rhs: Expr
    domain: Domain = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        nat = natural_domain(self.lhs).intersect(natural_domain(self.rhs))
        dom = nat if self.domain is None else self.domain.intersect(nat)
        object.__setattr__(self, "domain", dom)

    def difference(self) -> Expr:
        if _litval(self.rhs) == 0:
            return self.lhs
        return Sub(self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


# ---------------------------------------------------------------------------
# natural domain
# ---------------------------------------------------------------------------


def _sign_set(g: Expr, relation: str) -> Domain:
    """Subset of R where ``g(x) <relation> 0`` holds; relation in >=, >, !=.

    ``g`` is assumed to be defined on the returned set only after
    intersecting with natural_domain(g), which the caller does.
    """
    from . import poly  # local import: poly depends on expr

    if not g.has_var():
        from .interval import Sign, certified_sign_const

        s = certified_sign_const(g)
        ok = {
            ">=": {Sign.POSITIVE, Sign.ZERO},
            ">": {Sign.POSITIVE},
            "!=": {Sign.POSITIVE, Sign.NEGATIVE},
        }[relation]
        if s in ok:
            return Domain.real_line()
        if s == Sign.UNKNOWN:
            return Domain.empty(approximate=True)
        return Domain.empty()

    rf = poly.rational_from_expr(g)
    if rf is None:
        return _structural_sign_set(g, relation)
    num, den = rf
    return poly.sign_condition_set(num, den, relation)


def _structural_sign_set(g: Expr, relation: str) -> Domain:
    from .interval import structural_sign

    s = structural_sign(g)
    if s == ">0" or (s == ">=0" and relation == ">="):
        return Domain.real_line()
    return Domain.empty(approximate=True)


def natural_domain(e: Expr) -> Domain:
    """Largest subset of R on which every subterm of ``e`` is real-valued."""
    if isinstance(e, (RationalLit, Var, ConstE, ConstPi)):
        return Domain.real_line()
    dom = Domain.real_line()
    for c in e.children():
        dom = dom.intersect(natural_domain(c))
        if dom.is_empty():
            return dom
    if isinstance(e, Div):
        dom = dom.intersect(_sign_set(e.right, "!="))
    elif isinstance(e, IntPow) and e.exponent < 0:
        dom = dom.intersect(_sign_set(e.base, "!="))
    elif isinstance(e, Root) and e.index % 2 == 0:
        dom = dom.intersect(_sign_set(e.arg, ">="))
    elif isinstance(e, Ln):
        dom = dom.intersect(_sign_set(e.arg, ">"))
    elif isinstance(e, LambertW):
        dom = dom.intersect(_lambert_domain(e))
    return dom


def is_branch_point(e: Expr) -> bool:
    """Structural recognition of the constant -1/e."""
    return e in (
        Neg(Exp(RationalLit(-1))),
        Neg(Exp(Neg(RationalLit(1)))),
        Neg(Div(RationalLit(1), ConstE())),
        Neg(IntPow(ConstE(), -1)),
        Div(RationalLit(-1), ConstE()),
    )


def _lambert_domain(e: LambertW) -> Domain:
    from . import poly
    from .interval import inv_e_bounds

    arg = e.arg
    if is_branch_point(arg):
        return Domain.real_line()
    if not arg.has_var():
        shifted = Add(arg, Exp(RationalLit(-1)))
        lower_ok = _sign_set(shifted, ">=")
        if e.branch == 0:
            return lower_ok
        return lower_ok.intersect(_sign_set(Neg(arg), ">"))
    rf = poly.rational_from_expr(arg)
    if rf is None:
        return Domain.empty(approximate=True)
    num, den = rf
    # -1/e <= -inv_lo, so arg >= -inv_lo is a certified subset of arg >= -1/e
    inv_lo, _ = inv_e_bounds(64)
    shifted_num = num - den * poly.UniPoly.const(-inv_lo)
    dom = poly.sign_condition_set(shifted_num, den, ">=")
    dom = Domain(dom.intervals, True)
    if e.branch == -1:
        dom = dom.intersect(poly.sign_condition_set(-num, den, ">"))
    return dom


# ---------------------------------------------------------------------------
# derivative
# ---------------------------------------------------------------------------


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx, folded over rational constants only."""
    if isinstance(e, Var):
        return RationalLit(1)
    if isinstance(e, (RationalLit, ConstE, ConstPi)):
        return RationalLit(0)
    if not e.has_var():
        return RationalLit(0)
    if isinstance(e, Neg):
        return s_neg(differentiate(e.arg))
    if isinstance(e, Add):
        return s_add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return s_sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        a, b = e.left, e.right
        return s_add(s_mul(differentiate(a), b), s_mul(a, differentiate(b)))
    if isinstance(e, Div):
        a, b = e.left, e.right
        num = s_sub(s_mul(differentiate(a), b), s_mul(a, differentiate(b)))
        return s_div(num, s_pow(b, 2))
    if isinstance(e, IntPow):
        k = e.exponent
        return s_mul(s_mul(RationalLit(k), s_pow(e.base, k - 1)), differentiate(e.base))
    if isinstance(e, Root):
        # d/dx u^(1/n) = u' / (n * root(n, u)^(n-1))
        n = e.index
        return s_div(differentiate(e.arg), s_mul(RationalLit(n), s_pow(e, n - 1)))
    if isinstance(e, Exp):
        return s_mul(e, differentiate(e.arg))
    if isinstance(e, Ln):
        return s_div(differentiate(e.arg), e.arg)
    if isinstance(e, Sin):
        return s_mul(Cos(e.arg), differentiate(e.arg))
    if isinstance(e, Cos):
        return s_mul(s_neg(Sin(e.arg)), differentiate(e.arg))
    if isinstance(e, LambertW):
        # W'(z) = W(z) / (z (1 + W(z)))
        z = e.arg
        outer = s_div(e, s_mul(z, s_add(RationalLit(1), e)))
        return s_mul(outer, differentiate(z))
    raise UnsupportedNode(type(e).__name__)


# ---------------------------------------------------------------------------
# exact evaluation
# ---------------------------------------------------------------------------


def _exact_root(q: Fraction, n: int) -> Fraction:
    from .poly import integer_nth_root

    neg = q < 0
    if neg:
        if n % 2 == 0:
            raise DomainViolation("even root of a negative number")
        q = -q
    a = integer_nth_root(q.numerator, n)
    b = integer_nth_root(q.denominator, n)
    if a**n != q.numerator or b**n != q.denominator:
        raise NotExact
    r = Fraction(a, b)
    return -r if neg else r


def _eval(e: Expr, x0: Fraction) -> Fraction:
    if isinstance(e, RationalLit):
        return e.value
    if isinstance(e, Var):
        return x0
    if isinstance(e, (ConstE, ConstPi)):
        raise NotExact
    if isinstance(e, Neg):
        return -_eval(e.arg, x0)
    if isinstance(e, Add):
        return _eval(e.left, x0) + _eval(e.right, x0)
    if isinstance(e, Sub):
        return _eval(e.left, x0) - _eval(e.right, x0)
    if isinstance(e, Mul):
        a = _eval(e.left, x0)
        return a * _eval(e.right, x0)
    if isinstance(e, Div):
        b = _eval(e.right, x0)
        if b == 0:
            raise DomainViolation("division by zero")
        return _eval(e.left, x0) / b
    if isinstance(e, IntPow):
        b = _eval(e.base, x0)
        if b == 0 and e.exponent < 0:
            raise DomainViolation("zero to a negative power")
        return b**e.exponent
    if isinstance(e, Root):
        return _exact_root(_eval(e.arg, x0), e.index)
    if isinstance(e, Exp):
        if _eval(e.arg, x0) == 0:
            return Fraction(1)
        raise NotExact
    if isinstance(e, Ln):
        a = _eval(e.arg, x0)
        if a <= 0:
            raise DomainViolation("logarithm of a non-positive number")
        if a == 1:
            return Fraction(0)
        raise NotExact
    if isinstance(e, Sin):
        if _eval(e.arg, x0) == 0:
            return Fraction(0)
        raise NotExact
    if isinstance(e, Cos):
        if _eval(e.arg, x0) == 0:
            return Fraction(1)
        raise NotExact
    if isinstance(e, LambertW):
        a = _eval(e.arg, x0)
        if a == 0:
            return Fraction(0)
        if e.branch == -1 and a >= 0:
            raise DomainViolation("W(-1, z) needs z < 0")
        raise NotExact
    raise UnsupportedNode(type(e).__name__)


def evaluate_exact(e: Expr, x0) -> Union[Fraction, type[NotExact]]:
    """Exact value of ``e`` at rational ``x0``, or the ``NotExact`` marker.

    Raises DomainViolation when x0 lies outside the natural domain.
    """
    x0 = Fraction(x0)
    try:
        return _eval(e, x0)
    except NotExact:
        pass
    # an irrational subterm was hit; the point may still lie outside the domain
    if not natural_domain(e).contains(x0) and not natural_domain(e).approximate:
        raise DomainViolation(f"{x0} is outside the natural domain")
    return NotExact


def try_exact(e: Expr, x0) -> Optional[Fraction]:
    """Like evaluate_exact but returns None for both NotExact and domain errors."""
    try:
        return _eval(e, Fraction(x0))
    except (NotExact, DomainViolation):
        return None


# ---------------------------------------------------------------------------
# text rendering (grammar-compatible)
# ---------------------------------------------------------------------------

_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _lit_text(q: Fraction) -> tuple[str, int]:
    if q < 0:
        s, _ = _lit_text(-q)
        return "-" + s, _PREC_UNARY
    if q.denominator == 1:
        return str(q.numerator), _PREC_ATOM
    return f"{q.numerator}/{q.denominator}", _PREC_PROD


def _render(e: Expr, var: str = "x") -> tuple[str, int]:
    if isinstance(e, RationalLit):
        return _lit_text(e.value)
    if isinstance(e, Var):
        return var, _PREC_ATOM
    if isinstance(e, ConstE):
        return "e", _PREC_ATOM
    if isinstance(e, ConstPi):
        return "pi", _PREC_ATOM
    if isinstance(e, Neg):
        s, p = _render(e.arg, var)
        if p < _PREC_UNARY:
            s = f"({s})"
        return "-" + s, _PREC_UNARY
    if isinstance(e, (Add, Sub, Mul, Div)):
        op, prec = {Add: ("+", _PREC_SUM), Sub: ("-", _PREC_SUM), Mul: ("*", _PREC_PROD), Div: ("/", _PREC_PROD)}[
            type(e)
        ]
        ls, lp = _render(e.left, var)
        rs, rp = _render(e.right, var)
        if lp < prec:
            ls = f"({ls})"
        if rp <= prec:
            rs = f"({rs})"
        # a fraction literal on the left of * or / would re-parse differently
        if isinstance(e.left, RationalLit) and e.left.value.denominator != 1 and prec == _PREC_PROD:
            ls = f"({ls})" if not ls.startswith("(") else ls
        sep = f" {op} " if prec == _PREC_SUM else op
        return f"{ls}{sep}{rs}", prec
    if isinstance(e, IntPow):
        bs, bp = _render(e.base, var)
        if bp < _PREC_ATOM:
            bs = f"({bs})"
        return f"{bs}^{e.exponent}", _PREC_POW
    if isinstance(e, Root):
        inner, _ = _render(e.arg, var)
        if e.index == 2:
            return f"sqrt({inner})", _PREC_ATOM
        return f"root({e.index}, {inner})", _PREC_ATOM
    if isinstance(e, LambertW):
        inner, _ = _render(e.arg, var)
        return f"W({e.branch}, {inner})", _PREC_ATOM
    name = {Exp: "exp", Ln: "ln", Sin: "sin", Cos: "cos"}[type(e)]
    inner, _ = _render(e.arg, var)
    return f"{name}({inner})", _PREC_ATOM


def to_text(e: Expr, var: str = "x") -> str:
    return _render(e, var)[0]
