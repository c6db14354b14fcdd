"""Dense univariate integer polynomials and the exact algorithms on them.

Factorization over the integers, gcd, and resultants are delegated to
sympy (well-tested Zassenhaus / subresultant code); Sturm chains, root
counting, root isolation, and the various explicit root bounds are
implemented here directly because their certified behaviour is what the
rest of the package is built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import sympy

from .intervals import ComplexInterval, Interval

_Z = sympy.Symbol("_z_")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients ascending: coeffs[i] multiplies z**i.

    Normalized on construction (trailing zeros stripped). The zero
    polynomial is the empty tuple with degree -1; most callers require
    nonzero input and say so.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- basics --------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> "IntPolynomial":
        """Divide out content and normalize leading coefficient positive."""
        if self.is_zero():
            return self
        g = self.content()
        sign = 1 if self.lc > 0 else -1
        return IntPolynomial([c * sign // g for c in self.coeffs])

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def length(self) -> int:
        """Sum of absolute values of the coefficients."""
        return sum(abs(c) for c in self.coeffs)

    # -- evaluation -----------------------------------------------------

    def __call__(self, x):
        """Exact Horner evaluation at an int or Fraction."""
        acc = Fraction(0) if isinstance(x, Fraction) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, x: Interval) -> Interval:
        acc = Interval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * x + Interval.point(c)
        return acc

    def eval_cinterval(self, z: ComplexInterval) -> ComplexInterval:
        acc = ComplexInterval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * z + ComplexInterval.point(c)
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def shift_arg_neg(self) -> "IntPolynomial":
        """p(-z)."""
        return IntPolynomial([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def reverse(self) -> "IntPolynomial":
        """z**deg * p(1/z); requires nonzero constant term for root use."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"


# ---------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------


def to_sympy(p: IntPolynomial, gen=_Z) -> sympy.Poly:
    return sympy.Poly(list(reversed(p.coeffs)) or [0], gen, domain="ZZ")


def from_sympy(sp) -> IntPolynomial:
    poly = sp if isinstance(sp, sympy.Poly) else sympy.Poly(sp, _Z)
    return IntPolynomial(list(reversed([int(c) for c in poly.all_coeffs()])))


@lru_cache(maxsize=4096)
def factor_int(p: IntPolynomial) -> tuple[tuple[IntPolynomial, int], ...]:
    """Irreducible factors over Z, primitive with positive lc, sorted
    by (degree, coefficients) so the order is reproducible."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree < 1:
        return ()
    _, factors = to_sympy(p).factor_list()
    out = []
    for f, mult in factors:
        q = IntPolynomial(list(reversed([int(c) for c in f.all_coeffs()]))).primitive()
        if q.degree >= 1:
            out.append((q, int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return tuple(out)


def is_irreducible(p: IntPolynomial) -> bool:
    if p.is_zero() or p.degree < 1:
        return False
    facs = factor_int(p)
    return len(facs) == 1 and facs[0][1] == 1 and facs[0][0].degree == p.degree


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """Product of the distinct irreducible factors, primitive, lc > 0."""
    prod = IntPolynomial((1,))
    for f, _ in factor_int(p):
        prod = prod * f
    if prod.degree < 1 and p.degree >= 1:
        raise ValueError("squarefree part lost all factors")
    return prod.primitive()


def resultant_int(p: IntPolynomial, q: IntPolynomial) -> int:
    return int(to_sympy(p).resultant(to_sympy(q)))


def discriminant(p: IntPolynomial) -> int:
    return int(to_sympy(p).discriminant())


# ---------------------------------------------------------------------
# Newton power sums (exact traces for monic polynomials)
# ---------------------------------------------------------------------


def power_sums(p: IntPolynomial, count: int) -> list[int]:
    """Power sums of the roots of a monic integer polynomial.

    Returns [p_0, ..., p_count] with p_k = sum over roots of root**k,
    via Newton's identities; all values are exact integers.
    """
    if not p.is_monic():
        raise ValueError("power sums need a monic polynomial")
    n = p.degree
    # b[i] = coefficient of z**(n-i)
    b = [p.coeffs[n - i] for i in range(n + 1)]
    ps = [n]
    for k in range(1, count + 1):
        acc = 0
        for i in range(1, min(k - 1, n) + 1):
            acc += b[i] * ps[k - i]
        if k <= n:
            acc += k * b[k]
        ps.append(-acc)
    return ps


# ---------------------------------------------------------------------
# root bounds
# ---------------------------------------------------------------------


def cauchy_bound(p: IntPolynomial) -> Fraction:
    """All roots satisfy |root| < this bound."""
    if p.is_zero() or p.degree < 1:
        raise ValueError("need degree >= 1")
    lead = abs(p.lc)
    return 1 + max(Fraction(abs(c), lead) for c in p.coeffs[:-1]) if p.degree >= 1 else Fraction(1)


def min_nonzero_root_bound(p: IntPolynomial) -> Fraction:
    """Every nonzero root r of p satisfies |r| >= the returned value.

    Works on the polynomial with z**k stripped when the constant term
    vanishes (the bound then covers the remaining nonzero roots).
    """
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    if not cs:
        raise ValueError("zero polynomial")
    if len(cs) == 1:
        return Fraction(1)  # no roots at all; any positive value is valid
    c0 = abs(cs[0])
    m = max(abs(c) for c in cs[1:])
    return Fraction(c0, c0 + m)


def root_separation_lower(p: IntPolynomial) -> Fraction:
    """Positive rational below the minimal distance between distinct
    roots of a squarefree polynomial (Mahler's bound, rounded down)."""
    d = p.degree
    if d < 2:
        return Fraction(1)
    disc = abs(discriminant(p))
    if disc == 0:
        raise ValueError("separation bound needs a squarefree polynomial")
    norm2_sq = sum(c * c for c in p.coeffs)
    # sep > sqrt(3*|D|) * d**(-(d+2)/2) * ||p||_2**(-(d-1))
    num = _sqrt_int_lower(3 * disc, 64)
    den = _pow_half_upper(d, d + 2) * _pow_half_upper(norm2_sq, d - 1)
    return num / den


def _sqrt_int_lower(n: int, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(isqrt(n * scale * scale), scale)


def _pow_half_upper(base: int, twice_expo: int) -> Fraction:
    """Upper bound for base**(twice_expo/2) with integer base >= 1."""
    if twice_expo % 2 == 0:
        return Fraction(base ** (twice_expo // 2))
    whole = base ** (twice_expo // 2)
    r = isqrt(base)
    if r * r < base:
        r += 1
    return Fraction(whole * r)


def iroot_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, exact."""
    if n < 0 or k < 1:
        raise ValueError("iroot_floor needs n >= 0, k >= 1")
    if n == 0 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def iroot_ceil(n: int, k: int) -> int:
    r = iroot_floor(n, k)
    return r if r ** k == n else r + 1


# ---------------------------------------------------------------------
# Sturm machinery (over Fractions; exact)
# ---------------------------------------------------------------------


def _frac_coeffs(p: IntPolynomial) -> list[Fraction]:
    return [Fraction(c) for c in p.coeffs]


def _fp_degree(c: list[Fraction]) -> int:
    return len(c) - 1


def _fp_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_neg(c: list[Fraction]) -> list[Fraction]:
    return [-x for x in c]


def _fp_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db, lb = _fp_degree(b), b[-1]
    while _fp_degree(a) >= db and a:
        k = _fp_degree(a) - db
        f = a[-1] / lb
        for i in range(db + 1):
            a[i + k] -= f * b[i]
        a.pop()
        _fp_trim(a)
    return a


def _fp_eval(c: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for v in reversed(c):
        acc = acc * x + v
    return acc


def sturm_chain(p: IntPolynomial) -> list[list[Fraction]]:
    """Sturm chain of a squarefree polynomial, as Fraction coefficient lists."""
    c0 = _frac_coeffs(p)
    c1 = _frac_coeffs(p.derivative())
    chain = [c0, c1]
    while _fp_degree(chain[-1]) > 0:
        r = _fp_neg(_fp_rem(chain[-2], chain[-1]))
        if not r:
            raise ValueError("Sturm chain collapsed; input not squarefree")
        chain.append(r)
    return chain


def _variations(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for c in chain:
        v = _fp_eval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: IntPolynomial, lo: Fraction | None = None,
                     hi: Fraction | None = None) -> int:
    """Number of distinct real roots of p in (lo, hi] (whole line by default)."""
    q = squarefree_part(p)
    if q.degree < 1:
        return 0
    m = cauchy_bound(q)
    a = lo if lo is not None else -m
    b = hi if hi is not None else m
    if a >= b:
        return 0
    chain = sturm_chain(q)
    return _variations(chain, a) - _variations(chain, b)


def isolate_real_roots(p: IntPolynomial) -> list[Interval]:
    """Disjoint closed rational intervals, one distinct real root each,
    ascending. Rational roots come back as exact point intervals."""
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    points: list[Fraction] = []
    nonlin = IntPolynomial((1,))
    for f, _ in factor_int(p):
        if f.degree == 1:
            points.append(Fraction(-f.coeffs[0], f.coeffs[1]))
        else:
            nonlin = nonlin * f

    boxes: list[Interval] = []
    if nonlin.degree >= 1:
        chain = sturm_chain(nonlin)
        m = cauchy_bound(nonlin)
        m = Fraction(int(m) + 1)
        stack = [(-m, m, _variations(chain, -m), _variations(chain, m))]
        while stack:
            a, b, va, vb = stack.pop()
            cnt = va - vb
            if cnt == 0:
                continue
            if cnt == 1:
                boxes.append(Interval(a, b))
                continue
            mid = (a + b) / 2
            vm = _variations(chain, mid)  # nonlin has no rational roots
            stack.append((a, mid, va, vm))
            stack.append((mid, b, vm, vb))

        # shrink until no interval contains (or touches) a rational root
        for i, box in enumerate(boxes):
            while any(box.lo <= r <= box.hi for r in points):
                box = _bisect_by_chain(chain, box)
            boxes[i] = box

        # adjacent bisection cells share an endpoint; shrink until the
        # closed intervals are pairwise disjoint
        boxes.sort(key=lambda iv: (iv.lo, iv.hi))
        done = False
        while not done:
            done = True
            for i in range(len(boxes) - 1):
                if boxes[i].hi >= boxes[i + 1].lo:
                    boxes[i] = _bisect_by_chain(chain, boxes[i])
                    boxes[i + 1] = _bisect_by_chain(chain, boxes[i + 1])
                    done = False

    out = boxes + [Interval.point(r) for r in points]
    out.sort(key=lambda iv: (iv.lo, iv.hi))
    return out


def _bisect_by_chain(chain: list[list[Fraction]], box: Interval) -> Interval:
    mid = box.mid
    va, vm = _variations(chain, box.lo), _variations(chain, mid)
    if va - vm == 1:
        return Interval(box.lo, mid)
    return Interval(mid, box.hi)


def refine_real_root(q: IntPolynomial, box: Interval, eps: Fraction) -> Interval:
    """Bisection refinement of an isolating interval for a simple real
    root of q with q nonzero at rational points inside (true for any
    irreducible q of degree >= 2)."""
    if box.is_point():
        return box
    slo = 1 if q(box.lo) > 0 else -1
    shi = 1 if q(box.hi) > 0 else -1
    if slo == shi:
        raise ValueError("interval endpoints do not bracket a sign change")
    lo, hi = box.lo, box.hi
    while hi - lo > eps:
        mid = (lo + hi) / 2
        v = q(mid)
        if v == 0:
            raise ValueError("rational root hit; caller must deflate first")
        if (1 if v > 0 else -1) == slo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)
