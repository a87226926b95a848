"""Exact polynomial algebra over Q: univariate root isolation and bivariate resultants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import expr as ex
from .interval import DyadicInterval, Sign, refine_bracket


class ZeroPolynomial(ValueError):
    pass


class DegreeOutOfRange(ValueError):
    pass


class ZeroInput(ValueError):
    pass


class NoOccurrence(ValueError):
    pass


def integer_nth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


def _trim(cs: Iterable) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class UniPoly:
    """Coefficients low to high; the zero polynomial has no coefficients."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @staticmethod
    def const(c) -> "UniPoly":
        return UniPoly([c])

    @staticmethod
    def x() -> "UniPoly":
        return UniPoly([0, 1])

    @staticmethod
    def monomial(k: int, c=1) -> "UniPoly":
        return UniPoly([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        acc = DyadicInterval.point(0, t.prec) if isinstance(t, DyadicInterval) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, o: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, o: "UniPoly") -> "UniPoly":
        return self + (-o)

    def __mul__(self, o) -> "UniPoly":
        if not isinstance(o, UniPoly):
            return UniPoly(c * o for c in self.coeffs)
        if self.is_zero() or o.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, d: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(r) - len(d.coeffs) + 1)
        dl = d.lc
        for i in range(len(r) - len(d.coeffs), -1, -1):
            c = r[i + d.degree] / dl
            q[i] = c
            if c:
                for j, dc in enumerate(d.coeffs):
                    r[i + j] -= c * dc
        return UniPoly(q), UniPoly(r[: d.degree] if d.degree > 0 else [])

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __mod__(self, d):
        return self.divmod(d)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        return self * (1 / self.lc) if self.coeffs else self

    def primitive(self) -> "UniPoly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return UniPoly(Fraction(i // g) for i in ints)

    def integer_coeffs(self) -> list[int]:
        return [int(c) for c in self.primitive().coeffs]

    def compose_power(self, k: int) -> "UniPoly":
        """p(x^k)."""
        out = [Fraction(0)] * (self.degree * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return UniPoly(out)

    def sign_at_infinity(self, direction: int) -> int:
        if self.is_zero():
            return 0
        s = 1 if self.lc > 0 else -1
        if direction < 0 and self.degree % 2 == 1:
            s = -s
        return s

    def to_expr(self) -> ex.Expr:
        """Descending-degree sum; e.g. 9*x^2 - 48*x + 64."""
        if self.is_zero():
            return ex.RationalLit(0)
        out: Optional[ex.Expr] = None
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                term: ex.Expr = ex.RationalLit(mag)
            else:
                mono: ex.Expr = ex.Var() if k == 1 else ex.IntPow(ex.Var(), k)
                term = mono if mag == 1 else ex.Mul(ex.RationalLit(mag), mono)
            if out is None:
                out = ex.Neg(term) if c < 0 else term
            else:
                out = ex.Sub(out, term) if c < 0 else ex.Add(out, term)
        return out

    def __str__(self) -> str:
        return ex.to_text(self.to_expr())

    def __repr__(self) -> str:
        return f"UniPoly({self})"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def remove_common_factors(p: UniPoly, q: UniPoly) -> UniPoly:
    """Divide every factor shared with q out of p (so N_p minus N_q = N_result)."""
    while True:
        g = poly_gcd(p, q)
        if g.degree <= 0:
            return p
        p = p // g


# ---------------------------------------------------------------------------
# Expr -> polynomial / rational function
# ---------------------------------------------------------------------------


def from_expr(e: ex.Expr) -> Optional[UniPoly]:
    """Expand e to a UniPoly, or None when e is not a polynomial expression."""
    if isinstance(e, ex.RationalLit):
        return UniPoly.const(e.value)
    if isinstance(e, ex.Var):
        return UniPoly.x()
    if isinstance(e, ex.Neg):
        a = from_expr(e.arg)
        return None if a is None else -a
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul)):
        a = from_expr(e.left)
        if a is None:
            return None
        b = from_expr(e.right)
        if b is None:
            return None
        if isinstance(e, ex.Add):
            return a + b
        if isinstance(e, ex.Sub):
            return a - b
        return a * b
    if isinstance(e, ex.Div):
        b = from_expr(e.right)
        if b is None or b.degree != 0:
            return None
        a = from_expr(e.left)
        return None if a is None else a * (1 / b.coeffs[0])
    if isinstance(e, ex.IntPow) and e.exponent >= 0:
        a = from_expr(e.base)
        return None if a is None else a**e.exponent
    return None


def rational_parts(e: ex.Expr) -> Optional[tuple[UniPoly, UniPoly, UniPoly]]:
    """(num, den, forbid) with e = num/den wherever e is defined.

    ``forbid`` collects every polynomial divided by along the way, so the
    natural domain of e is exactly the complement of its zero set.
    """
    if isinstance(e, ex.RationalLit):
        return UniPoly.const(e.value), UniPoly.const(1), UniPoly.const(1)
    if isinstance(e, ex.Var):
        return UniPoly.x(), UniPoly.const(1), UniPoly.const(1)
    if isinstance(e, ex.Neg):
        r = rational_parts(e.arg)
        return None if r is None else (-r[0], r[1], r[2])
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul, ex.Div)):
        a = rational_parts(e.left)
        if a is None:
            return None
        b = rational_parts(e.right)
        if b is None:
            return None
        (an, ad, af), (bn, bd, bf) = a, b
        forbid = af * bf
        if isinstance(e, ex.Add):
            return an * bd + bn * ad, ad * bd, forbid
        if isinstance(e, ex.Sub):
            return an * bd - bn * ad, ad * bd, forbid
        if isinstance(e, ex.Mul):
            return an * bn, ad * bd, forbid
        if bn.is_zero():
            return None
        return an * bd, ad * bn, forbid * bn * bd
    if isinstance(e, ex.IntPow):
        r = rational_parts(e.base)
        if r is None:
            return None
        n, d, f = r
        k = e.exponent
        if k >= 0:
            return n**k, d**k, f
        if n.is_zero():
            return None
        return d ** (-k), n ** (-k), f * n
    return None


def rational_from_expr(e: ex.Expr) -> Optional[tuple[UniPoly, UniPoly]]:
    """(num, den) where the zeros of den are exactly the excluded points."""
    r = rational_parts(e)
    if r is None:
        return None
    num, den, forbid = r
    g = poly_gcd(num, den) if not num.is_zero() else den.monic()
    if g.degree > 0:
        num, den = num // g, den // g
    # keep the excluded points: multiply both by the forbidden factors not in den
    extra = squarefree_part(forbid)
    extra = remove_common_factors(extra, den)
    if extra.degree > 0:
        num, den = num * extra, den * extra
    return num, den


# ---------------------------------------------------------------------------
# Sturm sequences and isolation
# ---------------------------------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return [s for s in seq if not s.is_zero()]


def _variations(signs: Iterable[int]) -> int:
    v, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def sign_variations(seq: Sequence[UniPoly], t: Union[Fraction, str]) -> int:
    if t == "+inf":
        return _variations(p.sign_at_infinity(1) for p in seq)
    if t == "-inf":
        return _variations(p.sign_at_infinity(-1) for p in seq)
    vals = (p(t) for p in seq)
    return _variations((v > 0) - (v < 0) for v in vals)


def count_real_roots(p: UniPoly, a="-inf", b="+inf") -> int:
    """Distinct real roots in (a, b]; pass '-inf'/'+inf' for unbounded ends."""
    seq = sturm_sequence(squarefree_part(p))
    return sign_variations(seq, a) - sign_variations(seq, b)


def cauchy_bound(p: UniPoly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class IsolatedRoot:
    """The unique root of the square-free ``poly`` in the open interval (lo, hi).

    ``lo == hi`` marks an exactly known (dyadic) root.
    """

    poly: UniPoly
    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def _probe(self, t):
        v = self.poly(t)
        return (Sign.ZERO if v == 0 else Sign.POSITIVE if v > 0 else Sign.NEGATIVE), v

    def refine(self, width) -> "IsolatedRoot":
        width = Fraction(width)
        if self.exact or self.hi - self.lo <= width:
            return self
        s_lo, _ = self._probe(self.lo)
        lo, hi = refine_bracket(self._probe, self.lo, self.hi, s_lo, width)
        return IsolatedRoot(self.poly, lo, hi)

    def enclosure(self, prec: int = 64) -> DyadicInterval:
        r = self.refine(Fraction(1, 1 << prec))
        return DyadicInterval(r.lo, r.hi, prec + 64)

    @property
    def interval(self) -> DyadicInterval:
        return DyadicInterval(self.lo, self.hi, 4096)

    def approx(self) -> float:
        r = self.refine(Fraction(1, 1 << 60))
        return float((r.lo + r.hi) / 2)

    def __str__(self) -> str:
        return f"root of {self.poly} in ({float(self.lo):.12g}, {float(self.hi):.12g})"


def _pow2_ceiling(q: Fraction) -> Fraction:
    k = max(0, math.ceil(q).bit_length())
    return Fraction(1 << k)


def sturm_isolate(p: UniPoly) -> list[IsolatedRoot]:
    """One isolating interval per distinct real root, sorted ascending."""
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    sq = squarefree_part(p)
    if sq.degree <= 0:
        return []
    seq = sturm_sequence(sq)
    b = _pow2_ceiling(cauchy_bound(sq))
    out: list[IsolatedRoot] = []
    stack = [(-b, b, sign_variations(seq, -b), sign_variations(seq, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            # (lo, hi] holds one root; hi itself may be the root
            if sq(hi) == 0:
                out.append(IsolatedRoot(sq, hi, hi))
            else:
                out.append(IsolatedRoot(sq, lo, hi))
            continue
        mid = (lo + hi) / 2
        vm = sign_variations(seq, mid)
        stack.append((lo, mid, vlo, vm))
        stack.append((mid, hi, vm, vhi))
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def exact_isolate(p: UniPoly) -> list[IsolatedRoot]:
    """Like sturm_isolate, but rational roots come out exact and other brackets avoid them."""
    sq = squarefree_part(p)
    rs = rational_roots(sq)
    out = [IsolatedRoot(sq, r, r) for r in rs]
    rest = deflate(sq, rs)
    if rest.degree > 0:
        for r in sturm_isolate(rest):
            while not r.exact and any(r.lo <= q <= r.hi for q in rs):
                r = r.refine((r.hi - r.lo) / 4)
            out.append(r)
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def isolate_in(p: UniPoly, lo: Optional[Fraction], hi: Optional[Fraction]) -> list[IsolatedRoot]:
    """Roots of p strictly inside (lo, hi), refined so the brackets sit inside."""
    res = []
    for r in sturm_isolate(p):
        while True:
            if (lo is not None and r.hi <= lo) or (hi is not None and r.lo >= hi):
                break
            inside_lo = lo is None or r.lo >= lo
            inside_hi = hi is None or r.hi <= hi
            if inside_lo and inside_hi:
                if not (r.exact and ((lo is not None and r.lo == lo) or (hi is not None and r.hi == hi))):
                    res.append(r)
                break
            r = r.refine((r.hi - r.lo) / 4)
    return res


# ---------------------------------------------------------------------------
# exact roots
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots (sorted, without multiplicity), each checked exactly."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has every number as a root")
    cs = p.integer_coeffs()
    roots = set()
    while cs and cs[0] == 0:
        roots.add(Fraction(0))
        cs = cs[1:]
    if len(cs) == 2:
        roots.add(Fraction(-cs[0], cs[1]))
    elif len(cs) > 2 and max(abs(cs[0]), abs(cs[-1])) <= 10**8:
        q = UniPoly(cs)
        for num in _divisors(cs[0]):
            for den in _divisors(cs[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if cand not in roots and q(cand) == 0:
                        roots.add(cand)
    elif len(cs) > 2:
        # a rational root a/b has b | lc; at distance < 1/(2 lc^2) it is the
        # closest fraction with denominator <= |lc|
        q = UniPoly(cs)
        lc = abs(cs[-1])
        for r in sturm_isolate(q):
            r = r.refine(Fraction(1, 4 * lc * lc))
            cand = ((r.lo + r.hi) / 2).limit_denominator(lc)
            if q(cand) == 0:
                roots.add(cand)
    return sorted(roots)


def deflate(p: UniPoly, roots: Iterable[Fraction]) -> UniPoly:
    for r in roots:
        lin = UniPoly([-r, 1])
        while True:
            q, rem = p.divmod(lin)
            if not rem.is_zero():
                break
            p = q
    return p


def substitution_reduce(p: UniPoly) -> Optional[tuple[int, UniPoly]]:
    """Largest k >= 2 with p(x) = r(x^k), returned as (k, r); None if only k = 1."""
    if p.is_zero():
        raise ZeroPolynomial("substitution on the zero polynomial")
    exps = [i for i, c in enumerate(p.coeffs) if c and i]
    if not exps:
        return None
    k = math.gcd(*exps)
    if k < 2:
        return None
    return k, UniPoly(p.coeffs[i] for i in range(0, len(p.coeffs), k))


def squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree (n > 0)."""
    s, d = 1, 1
    m = n
    p = 2
    while p * p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            d *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(m)
    if r * r == m:
        s *= r
    else:
        d *= m
    return s, d


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number a + b*sqrt(d), d > 1 squarefree."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _lift(self, o) -> "QuadraticSurd":
        if isinstance(o, QuadraticSurd):
            if o.d != self.d:
                raise ValueError("surds over different fields")
            return o
        return QuadraticSurd(Fraction(o), Fraction(0), self.d)

    def __add__(self, o):
        o = self._lift(o)
        return QuadraticSurd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return QuadraticSurd(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def eval_poly(self, p: UniPoly) -> "QuadraticSurd":
        acc = QuadraticSurd(0, 0, self.d)
        for c in reversed(p.coeffs):
            acc = acc * self + c
        return acc

    def enclosure(self, prec: int = 64) -> DyadicInterval:
        from .interval import root_interval

        r = root_interval(DyadicInterval.point(self.d, prec + 16), 2)
        v = r * self.b + self.a
        return DyadicInterval(v.lo, v.hi, prec + 16)

    def to_expr(self) -> ex.Expr:
        """(p + q*sqrt(d))/r in lowest common terms, e.g. 26 - 6*sqrt(17)."""
        den = math.lcm(self.a.denominator, self.b.denominator)
        an, bn = int(self.a * den), int(self.b * den)
        root = ex.Root(2, ex.RationalLit(self.d))
        mag = abs(bn)
        rad: ex.Expr = root if mag == 1 else ex.Mul(ex.RationalLit(mag), root)
        if an == 0:
            body: ex.Expr = ex.Neg(rad) if bn < 0 else rad
        else:
            body = ex.Sub(ex.RationalLit(an), rad) if bn < 0 else ex.Add(ex.RationalLit(an), rad)
            if an < 0:
                body = ex.Sub(ex.Neg(ex.RationalLit(-an)), rad) if bn < 0 else ex.Add(ex.Neg(ex.RationalLit(-an)), rad)
        return body if den == 1 else ex.Div(body, ex.RationalLit(den))

    def approx(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def json_fields(self) -> dict:
        def q(v: Fraction) -> dict:
            return {"num": str(v.numerator), "den": str(v.denominator)}

        return {"rep": "quadratic_surd", "a": q(self.a), "b": q(self.b), "d": str(self.d), "expr": str(self)}

    def describe(self) -> str:
        return str(self)

    def __str__(self) -> str:
        return ex.to_text(self.to_expr())


def quadratic_solve(p: UniPoly) -> list[Union[Fraction, QuadraticSurd]]:
    """Exact real roots of a degree-1 or degree-2 polynomial, ascending."""
    if p.is_zero() or not 1 <= p.degree <= 2:
        raise DegreeOutOfRange(f"degree {p.degree} is not 1 or 2")
    if p.degree == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    c, b, a = p.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        return [-b / (2 * a)]
    # sqrt(num/den) = sqrt(num*den)/den
    s, d = squarefree_split(disc.numerator * disc.denominator)
    half = s / (Fraction(disc.denominator) * 2 * a)
    centre = -b / (2 * a)
    if d == 1:
        roots = [centre - half, centre + half]
        return sorted(roots)
    roots = [QuadraticSurd(centre, -abs(half), d), QuadraticSurd(centre, abs(half), d)]
    return roots


# ---------------------------------------------------------------------------
# sign-condition sets (used for natural domains)
# ---------------------------------------------------------------------------


def sign_condition_set(num: UniPoly, den: UniPoly, relation: str):
    """Subset of R where num/den <relation> 0 and den != 0; relation in >=, >, !=."""
    from .expr import Domain, Interval

    ok = {">=": (1, 0), ">": (1,), "!=": (1, -1)}[relation]

    def sgn(v: Fraction) -> int:
        return (v > 0) - (v < 0)

    def value_sign(t: Fraction) -> Optional[int]:
        d = den(t)
        if d == 0:
            return None
        return sgn(num(t)) * sgn(d)

    if num.is_zero():
        nz = den.degree <= 0
        if 0 in ok and nz:
            return Domain.real_line()
        if 0 not in ok:
            return Domain.empty()
    both = squarefree_part(num * den) if not num.is_zero() else squarefree_part(den)
    roots = exact_isolate(both) if both.degree > 0 else []
    roots = [r.refine(Fraction(1, 1 << 32)) for r in roots]
    pieces = []
    approx = False
    prev_hi: Optional[Fraction] = None
    prev_closed = False
    for r in roots:
        left_hi = r.lo
        sample = (prev_hi + left_hi) / 2 if prev_hi is not None else left_hi - 1
        s_region = value_sign(sample)
        region_ok = s_region in ok
        if r.exact:
            if region_ok:
                pieces.append(Interval(prev_hi, r.lo, prev_closed, False))
            pt = value_sign(r.lo)
            if pt is not None and pt in ok:
                pieces.append(Interval(r.lo, r.lo, True, True))
            prev_hi, prev_closed = r.lo, False
        else:
            right_sample = r.hi + (Fraction(1, 1 << 40))
            s_right = value_sign(right_sample)
            point_ok = _irrational_root_ok(num, den, r, ok)
            if region_ok and s_right in ok and point_ok:
                # the whole isolating gap satisfies the condition
                pieces.append(Interval(prev_hi, r.hi, prev_closed, False))
            else:
                if region_ok:
                    pieces.append(Interval(prev_hi, r.lo, prev_closed, True))
                approx = True
            prev_hi, prev_closed = r.hi, True
    sample = prev_hi + 1 if prev_hi is not None else Fraction(0)
    if value_sign(sample) in ok:
        pieces.append(Interval(prev_hi, None, prev_closed, False))
    dom = Domain.normalize(pieces, approx)
    return dom


def _irrational_root_ok(num: UniPoly, den: UniPoly, r: IsolatedRoot, ok) -> bool:
    """Does the condition hold at the (irrational) root enclosed by r?"""
    # r is a root of num*den; it cannot be a root of both after the gcd step
    on_den = count_real_roots(den, r.lo, r.hi) > 0 if den.degree > 0 else False
    if on_den:
        return False
    return 0 in ok


# ---------------------------------------------------------------------------
# multivariate helpers and resultants
# ---------------------------------------------------------------------------

MPoly = dict  # exponent tuple -> Fraction


def mp_add(a: MPoly, b: MPoly) -> MPoly:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def mp_mul(a: MPoly, b: MPoly) -> MPoly:
    out: MPoly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def mp_scale(a: MPoly, c) -> MPoly:
    return {k: v * c for k, v in a.items()} if c else {}


def mp_pow(a: MPoly, k: int, nvars: int) -> MPoly:
    out: MPoly = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        out = mp_mul(out, a)
    return out


def _deg(p: MPoly, var: int) -> int:
    return max((k[var] for k in p), default=0)


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def sylvester_det(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    """Resultant of two univariate coefficient lists (low to high, formal degrees)."""
    m, l = len(p) - 1, len(q) - 1
    size = m + l
    if size == 0:
        return Fraction(1)
    rows = []
    ph, qh = list(reversed(p)), list(reversed(q))
    for i in range(l):
        rows.append([Fraction(0)] * i + ph + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qh + [Fraction(0)] * (size - l - 1 - i))
    return _det(rows)


def _interp(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (low to high) of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    deg = 0
    for i in range(n - 2, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(deg + 1):
            new[k + 1] += poly[k]
            new[k] -= poly[k] * xs[i]
        new[0] += coef[i]
        poly = new
        deg += 1
    return poly


def mp_resultant(P: MPoly, Q: MPoly, var: int, nvars: int) -> MPoly:
    """Sylvester resultant w.r.t. variable ``var`` by evaluation and interpolation."""
    if not P or not Q:
        raise ZeroInput("resultant of a zero polynomial")
    m, l = _deg(P, var), _deg(Q, var)
    if m == 0 or l == 0:
        raise NoOccurrence("eliminated variable does not occur in both inputs")
    others = [v for v in range(nvars) if v != var]
    bounds = [l * _deg(P, v) + m * _deg(Q, v) for v in others]

    def coeff_list(poly: MPoly, deg: int, point: dict[int, int]) -> list[Fraction]:
        cs = [Fraction(0)] * (deg + 1)
        for k, c in poly.items():
            term = Fraction(c)
            for v in others:
                term *= point[v] ** k[v]
            cs[k[var]] += term
        return cs

    values = {}
    for pt in itertools.product(*(range(b + 1) for b in bounds)):
        point = dict(zip(others, pt))
        values[pt] = sylvester_det(coeff_list(P, m, point), coeff_list(Q, l, point))

    # interpolate one dimension at a time; coordinates become exponents
    for dim, b in enumerate(bounds):
        xs = list(range(b + 1))
        groups: dict[tuple, list[Fraction]] = {}
        for pt in itertools.product(*(range(bb + 1) for bb in bounds)):
            key = pt[:dim] + pt[dim + 1 :]
            groups.setdefault(key, [None] * (b + 1))[pt[dim]] = values[pt]
        new = {}
        for key, ys in groups.items():
            cs = _interp(xs, ys)
            for e, c in enumerate(cs):
                new[key[:dim] + (e,) + key[dim:]] = c
        values = new

    out: MPoly = {}
    for pt, c in values.items():
        if c:
            full = [0] * nvars
            for v, e in zip(others, pt):
                full[v] = e
            out[tuple(full)] = c
    return out


# ---------------------------------------------------------------------------
# bivariate integer polynomials
# ---------------------------------------------------------------------------


class BiPoly:
    """Integer polynomial in (x, y); ``terms`` maps (deg_x, deg_y) to a nonzero int."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            if v:
                fv = Fraction(v)
                if fv.denominator != 1:
                    raise ValueError("BiPoly coefficients must be integers; clear denominators first")
                clean[(int(k[0]), int(k[1]))] = int(fv)
        self.terms = clean

    @staticmethod
    def from_rational(terms: MPoly) -> "BiPoly":
        """Clear denominators and content; make the leading term positive."""
        terms = {k: Fraction(v) for k, v in terms.items() if v}
        if not terms:
            return BiPoly()
        den = math.lcm(*(v.denominator for v in terms.values()))
        ints = {k: int(v * den) for k, v in terms.items()}
        g = math.gcd(*ints.values())
        lead = max(ints, key=lambda k: (k[1], k[0]))
        if ints[lead] < 0:
            g = -g
        return BiPoly({k: v // g for k, v in ints.items()})

    @staticmethod
    def x() -> "BiPoly":
        return BiPoly({(1, 0): 1})

    @staticmethod
    def y() -> "BiPoly":
        return BiPoly({(0, 1): 1})

    @staticmethod
    def const(c: int) -> "BiPoly":
        return BiPoly({(0, 0): c})

    @staticmethod
    def from_uni_y(p: UniPoly) -> "BiPoly":
        return BiPoly.from_rational({(0, j): c for j, c in enumerate(p.coeffs)})

    @staticmethod
    def from_uni_x(p: UniPoly) -> "BiPoly":
        return BiPoly({(i, 0): c for i, c in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o) -> bool:
        return isinstance(o, BiPoly) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, o: "BiPoly") -> "BiPoly":
        return BiPoly(mp_add(self.terms, o.terms))

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, o: "BiPoly") -> "BiPoly":
        return self + (-o)

    def __mul__(self, o) -> "BiPoly":
        if isinstance(o, int):
            return BiPoly({k: v * o for k, v in self.terms.items()})
        return BiPoly(mp_mul(self.terms, o.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BiPoly":
        return BiPoly(mp_pow(self.terms, k, 2))

    @property
    def deg_x(self) -> int:
        return _deg(self.terms, 0)

    @property
    def deg_y(self) -> int:
        return _deg(self.terms, 1)

    def __call__(self, x, y):
        acc = None
        for (i, j), c in self.terms.items():
            t = (x**i) * (y**j) * c
            acc = t if acc is None else acc + t
        if acc is None:
            return 0 * x
        return acc

    def swap(self) -> "BiPoly":
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()})

    def coefficient_list(self) -> list[UniPoly]:
        """[p_0, ..., p_n] with self = sum p_k(x) y^k."""
        n = self.deg_y
        rows = [[Fraction(0)] * (self.deg_x + 1) for _ in range(n + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = Fraction(c)
        return [UniPoly(r) for r in rows]

    @staticmethod
    def from_coefficient_list(ps: Sequence[UniPoly]) -> "BiPoly":
        terms = {}
        for j, p in enumerate(ps):
            for i, c in enumerate(p.coeffs):
                if c:
                    terms[(i, j)] = c
        return BiPoly(terms)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for j, p in reversed(list(enumerate(self.coefficient_list()))):
            if p.is_zero():
                continue
            ypow = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
            sign = "-" if p.lc < 0 else "+"
            q = -p if p.lc < 0 else p
            nonzero = sum(1 for c in q.coeffs if c)
            body = str(q)
            if ypow:
                if q.degree == 0 and q.coeffs[0] == 1:
                    body = ypow
                elif nonzero > 1:
                    body = f"({body})*{ypow}"
                else:
                    body = f"{body}*{ypow}"
            elif nonzero > 1 and parts:
                body = f"({body})"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"BiPoly({self.to_text()})"


def resultant(P: BiPoly, Q: BiPoly, eliminate: str = "y") -> UniPoly:
    """Res_{eliminate}(P, Q) as a polynomial in the remaining variable."""
    if P.is_zero() or Q.is_zero():
        raise ZeroInput("resultant of a zero polynomial")
    var = {"x": 0, "y": 1}[eliminate]
    r = mp_resultant(P.terms, Q.terms, var, 2)
    keep = 1 - var
    out = [Fraction(0)] * (max((k[keep] for k in r), default=0) + 1)
    for k, c in r.items():
        out[k[keep]] += c
    return UniPoly(out)


def pseudo_remainder_y(P: BiPoly, A: BiPoly) -> list[UniPoly]:
    """prem_y(P, A) as coefficient list over Q[x]."""
    r = P.coefficient_list()
    a = A.coefficient_list()
    da = len(a) - 1
    lc = a[-1]
    while len(r) - 1 >= da and any(not c.is_zero() for c in r):
        dr = len(r) - 1
        lr = r[-1]
        new = [c * lc for c in r]
        for i, ac in enumerate(a):
            new[i + dr - da] = new[i + dr - da] - lr * ac
        while new and new[-1].is_zero():
            new.pop()
        r = new
        if not r:
            break
    return r
