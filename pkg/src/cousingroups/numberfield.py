"""Algebraic numbers as (irreducible minimal polynomial, isolating box).

A value is pinned by an axis-aligned rational rectangle containing
exactly one root of its minimal polynomial; every operation keeps that
invariant. Real roots refine by exact sign bisection, complex roots by
a Krawczyk interval-Newton step whose containment test doubles as the
isolation certificate. Sums and products go through resultant-built
annihilating polynomials; the right irreducible factor and the right
root of it are selected by shrinking the input boxes until only one
candidate survives, which terminates because distinct algebraic numbers
are separated.

Equality is decidable in O(1) on canonical data: two values are equal
only if their minimal polynomials coincide, after which box matching
settles which root each one is.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import mpmath
import sympy

from .intervals import ComplexInterval, Interval
from .polynomials import (
    IntPolynomial,
    factor_int,
    from_sympy,
    is_irreducible,
    isolate_real_roots,
    min_nonzero_root_bound,
    refine_real_root,
    root_separation_lower,
)

RealScalar = Union[Fraction, "AlgebraicNumber"]

#: default starting width for adaptive refinement; each escalation
#: squares the width (doubling the working precision in bits)
START_WIDTH = Fraction(1, 2 ** 32)

_MAX_ESCALATIONS = 40


class PrecisionError(ArithmeticError):
    """Adaptive refinement hit its escalation cap without deciding."""


def _shrink(eps: Fraction) -> Fraction:
    return eps * eps if eps < Fraction(1, 4) else eps / 16


class AlgebraicNumber:
    """Root of an irreducible integer polynomial of degree >= 2.

    Rational values never appear as AlgebraicNumber: every constructor
    in this module demotes degree-1 results to Fraction.
    """

    __slots__ = ("minpoly", "box", "is_real")

    def __init__(self, minpoly: IntPolynomial, box: ComplexInterval, is_real: bool):
        self.minpoly = minpoly
        self.box = box
        self.is_real = is_real

    def refine(self, eps) -> ComplexInterval:
        """Shrink the isolating box to width <= eps (monotone, cached)."""
        eps = Fraction(eps)
        if self.box.width <= eps:
            return self.box
        if self.is_real:
            iv = refine_real_root(self.minpoly, self.box.re, eps)
            self.box = ComplexInterval(iv, Interval.point(0))
        else:
            self.box = _refine_complex(self.minpoly, self.box, eps)
        return self.box

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def approx(self) -> complex:
        self.refine(Fraction(1, 2 ** 40))
        return self.box.approx()

    # -- operators (exact; see the alg_* functions) --------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_add(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return alg_neg(self)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_add(self, alg_neg(_coerce(other)))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_add(_coerce(other), alg_neg(self))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return alg_div(_coerce(other), self)
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, int):
            return alg_pow(self, k)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return False  # degree >= 2 is never rational
        if isinstance(other, AlgebraicNumber):
            return equal_exact(self, other)
        return NotImplemented

    __hash__ = None  # semantic equality is not hash-compatible with Fraction

    def __repr__(self):
        z = self.approx()
        return f"AlgebraicNumber({list(self.minpoly.coeffs)}, ~{z.real:.6g}{z.imag:+.6g}j)"


def _coerce(x) -> RealScalar:
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar here: {x!r}")


def box_of(x, eps) -> ComplexInterval:
    """Isolating/enclosing box of a Fraction or AlgebraicNumber."""
    if isinstance(x, AlgebraicNumber):
        return x.refine(eps)
    return ComplexInterval.point(Fraction(x))


# ---------------------------------------------------------------------
# Krawczyk machinery for complex boxes
# ---------------------------------------------------------------------


def _dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(x * scale), scale)


def _krawczyk(p: IntPolynomial, x: ComplexInterval, bits: int) -> ComplexInterval | None:
    dp = p.derivative()
    w = x.width
    mre, mim = x.mid()
    centers = [(mre, mim), (mre + w / 8, mim), (mre, mim + w / 8)]
    for cre, cim in centers:
        cre = min(max(_dyadic(cre, bits), x.re.lo), x.re.hi)
        cim = min(max(_dyadic(cim, bits), x.im.lo), x.im.hi)
        y = ComplexInterval.point(cre, cim)
        dpy = dp.eval_cinterval(y)
        if dpy.contains_zero():
            continue
        big_y = dpy.recip()
        k = (y - big_y * p.eval_cinterval(y)) + \
            (ComplexInterval.point(1) - big_y * dp.eval_cinterval(x)) * (x - y)
        return k
    return None


def _certifies(p: IntPolynomial, x: ComplexInterval, bits: int = 96) -> bool:
    """Krawczyk containment: proves x holds exactly one root of p."""
    k = _krawczyk(p, x, bits)
    return (k is not None
            and k.re.lo > x.re.lo and k.re.hi < x.re.hi
            and k.im.lo > x.im.lo and k.im.hi < x.im.hi)


def _refine_complex(p: IntPolynomial, x: ComplexInterval, eps: Fraction) -> ComplexInterval:
    bits = max(96, (1 / eps).numerator.bit_length() + 32)
    stall = 0
    while x.width > eps:
        k = _krawczyk(p, x, bits)
        x2 = x
        if k is not None:
            try:
                x2 = k.intersect(x)
            except ValueError as exc:  # pragma: no cover - invariant guard
                raise ArithmeticError("isolating box lost its root") from exc
        x2 = x2.round_out(bits)
        x2 = x2.intersect(x)
        if x2.width > x.width * Fraction(3, 4):
            stall += 1
            bits *= 2
            if stall > 16:
                raise PrecisionError("complex refinement stalled")
        else:
            stall = 0
        x = x2
    return x


# ---------------------------------------------------------------------
# root isolation for irreducible polynomials (cached)
# ---------------------------------------------------------------------

_ROOT_CACHE: dict[tuple[int, ...], list] = {}


def roots_of_irreducible(f: IntPolynomial) -> list:
    """All representative roots of an irreducible polynomial, in the
    canonical order: real roots ascending, then one root per conjugate
    pair from the open upper half-plane by (real part, imaginary part)
    ascending. Degree-1 input yields the Fraction root."""
    key = f.coeffs
    if key in _ROOT_CACHE:
        return _ROOT_CACHE[key]
    if f.degree < 1:
        raise ValueError("constant polynomial has no roots")
    if f.degree == 1:
        vals = [Fraction(-f.coeffs[0], f.coeffs[1])]
    else:
        real_boxes = isolate_real_roots(f)
        reals = [AlgebraicNumber(f, ComplexInterval(b, Interval.point(0)), True)
                 for b in real_boxes]
        pairs = (f.degree - len(reals)) // 2
        uppers = _isolate_upper_roots(f, pairs) if pairs else []
        vals = reals + _order_uppers(f, uppers)
    _ROOT_CACHE[key] = vals
    return vals


_REAL_ROOT_CACHE: dict[tuple[int, ...], list] = {}


def _real_roots_only(f: IntPolynomial) -> list:
    """Real roots of irreducible f, ascending, without touching the
    complex ones (cheaper, and breaks recursion through real-part
    extraction of complex roots)."""
    key = f.coeffs
    if key in _ROOT_CACHE:
        return [r for r in _ROOT_CACHE[key]
                if isinstance(r, Fraction) or r.is_real]
    if key not in _REAL_ROOT_CACHE:
        if f.degree == 1:
            vals = [Fraction(-f.coeffs[0], f.coeffs[1])]
        else:
            vals = [AlgebraicNumber(f, ComplexInterval(b, Interval.point(0)), True)
                    for b in isolate_real_roots(f)]
        _REAL_ROOT_CACHE[key] = vals
    return _REAL_ROOT_CACHE[key]


def _isolate_upper_roots(f: IntPolynomial, count: int) -> list[AlgebraicNumber]:
    sep = root_separation_lower(f)
    half = sep / 4
    dps = 40
    for attempt in range(10):
        mpmath.mp.dps = dps
        try:
            approx = mpmath.polyroots([int(c) for c in reversed(f.coeffs)],
                                      maxsteps=200, extraprec=4 * dps)
        except mpmath.libmp.NoConvergence:
            dps *= 2
            continue
        upper = [z for z in approx if z.imag > 0]
        if len(upper) != count:
            dps *= 2
            continue
        bits = max(96, 8 + (1 / half).__ceil__().bit_length() * 2)
        boxes = []
        ok = True
        for z in upper:
            cre = _dyadic(_mpf_to_frac(z.real), bits)
            cim = _dyadic(_mpf_to_frac(z.imag), bits)
            box = ComplexInterval(Interval(cre - half, cre + half),
                                  Interval(cim - half, cim + half))
            if box.im.lo <= 0 or not _certifies(f, box, bits):
                ok = False
                break
            boxes.append(box)
        if ok and _pairwise_disjoint(boxes):
            return [AlgebraicNumber(f, b, False) for b in boxes]
        dps *= 2
        if attempt >= 3:
            half = half / 2
    raise PrecisionError(f"could not certify complex roots of {list(f.coeffs)}")


def _mpf_to_frac(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    man = int(man)
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _pairwise_disjoint(boxes: list[ComplexInterval]) -> bool:
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].overlaps(boxes[j]):
                return False
    return True


@lru_cache(maxsize=512)
def _pair_sum_poly(f: IntPolynomial) -> IntPolynomial:
    """Squarefree polynomial vanishing on all sums of two roots of f
    (including a root plus its conjugate, i.e. twice each real part)."""
    y, s = sympy.symbols("_y_ _s_")
    fy = sympy.Poly(list(reversed(f.coeffs)), y).as_expr()
    fsy = fy.subs(y, s - y)
    res = sympy.resultant(fy, fsy, y)
    p = from_sympy(sympy.Poly(res, s))
    from .polynomials import squarefree_part
    return squarefree_part(p)


def _order_uppers(f: IntPolynomial, uppers: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    """Sort upper-half roots of one irreducible f by (Re, Im) ascending,
    exact: real-part ties are decided through exact real parts."""
    if len(uppers) <= 1:
        return uppers
    out = list(uppers)
    _insertion_sort(out, _upper_less)
    return out


def _upper_less(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    """Strict (Re, Im)-lexicographic order for distinct upper-half values."""
    cmp = _compare_re_exact(a, b)
    if cmp != 0:
        return cmp < 0
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        ba, bb = a.refine(eps), b.refine(eps)
        if ba.im.hi < bb.im.lo:
            return True
        if bb.im.hi < ba.im.lo:
            return False
        eps = _shrink(eps)
    raise PrecisionError("imaginary-part ordering did not resolve")


# ---------------------------------------------------------------------
# isolate_roots over arbitrary nonzero polynomials
# ---------------------------------------------------------------------


class RootBox:
    """One distinct root of a polynomial: exact value plus multiplicity."""

    __slots__ = ("value", "multiplicity")

    def __init__(self, value, multiplicity: int):
        self.value = value
        self.multiplicity = multiplicity

    @property
    def box(self) -> ComplexInterval:
        return box_of(self.value, Fraction(1))

    @property
    def is_real(self) -> bool:
        return isinstance(self.value, Fraction) or self.value.is_real

    def __repr__(self):
        return f"RootBox({self.value!r}, mult={self.multiplicity})"


def isolate_roots(p: IntPolynomial) -> list[RootBox]:
    """Distinct roots of nonzero p in the canonical order (real roots
    ascending, then upper-half conjugate representatives by ascending
    real part, ties by ascending imaginary part), with multiplicities.
    Boxes of distinct roots are disjoint after this returns."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    groups = []
    for f, mult in factor_int(p):
        for v in roots_of_irreducible(f):
            groups.append(RootBox(v, mult))
    _sort_rootboxes(groups)
    _separate_rootboxes(groups)
    return groups


def _sort_rootboxes(roots: list[RootBox]) -> None:
    reals = [r for r in roots if r.is_real]
    uppers = [r for r in roots if not r.is_real]

    # distinct real values: refinement alone separates them
    def real_less(a: RootBox, b: RootBox) -> bool:
        va, vb = a.value, b.value
        if isinstance(va, Fraction) and isinstance(vb, Fraction):
            return va < vb
        eps = START_WIDTH
        for _ in range(_MAX_ESCALATIONS):
            ba, bb = box_of(va, eps), box_of(vb, eps)
            if ba.re.hi < bb.re.lo:
                return True
            if bb.re.hi < ba.re.lo:
                return False
            eps = _shrink(eps)
        raise PrecisionError("real root ordering did not resolve")

    _insertion_sort(reals, real_less)

    _insertion_sort(uppers, lambda a, b: _upper_less(a.value, b.value))
    roots[:] = reals + uppers


def _insertion_sort(items: list, less) -> None:
    for i in range(1, len(items)):
        j = i
        while j > 0 and less(items[j], items[j - 1]):
            items[j], items[j - 1] = items[j - 1], items[j]
            j -= 1


def _compare_re_exact(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Certified comparison of real parts of two (complex) algebraic
    numbers; 0 means exactly equal. Interval refinement decides fast
    when the parts differ; the exact real-part extraction settles ties."""
    eps = START_WIDTH
    for _ in range(4):
        ra, rb = a.refine(eps).re, b.refine(eps).re
        if ra.hi < rb.lo:
            return -1
        if rb.hi < ra.lo:
            return 1
        eps = _shrink(eps)
    return compare_real(alg_real_part(a), alg_real_part(b))


def _separate_rootboxes(roots: list[RootBox]) -> None:
    """Refine until all boxes are pairwise disjoint (values are distinct)."""
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        boxes = [box_of(r.value, eps) for r in roots]
        clash = False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes[i].overlaps(boxes[j]):
                    clash = True
        if not clash:
            return
        eps = _shrink(eps)
    raise PrecisionError("root boxes would not separate")


# ---------------------------------------------------------------------
# annihilating polynomials via resultants (sympy)
# ---------------------------------------------------------------------

_Y, _W = sympy.symbols("_rsy_ _rsw_")


def _expr_of(p: IntPolynomial, var) -> sympy.Expr:
    return sympy.Poly(list(reversed(p.coeffs)), var).as_expr()


@lru_cache(maxsize=2048)
def _ann_add(pa: IntPolynomial, pb: IntPolynomial) -> IntPolynomial:
    a = _expr_of(pa, _Y).subs(_Y, _W - _Y)
    b = _expr_of(pb, _Y)
    return from_sympy(sympy.Poly(sympy.resultant(a, b, _Y), _W)).primitive()


@lru_cache(maxsize=2048)
def _ann_mul(pa: IntPolynomial, pb: IntPolynomial) -> IntPolynomial:
    da = pa.degree
    a = sum(c * _W ** i * _Y ** (da - i) for i, c in enumerate(pa.coeffs))
    b = _expr_of(pb, _Y)
    return from_sympy(sympy.Poly(sympy.resultant(a, b, _Y), _W)).primitive()


@lru_cache(maxsize=2048)
def _ann_pow(pa: IntPolynomial, k: int) -> IntPolynomial:
    a = _expr_of(pa, _Y)
    return from_sympy(sympy.Poly(sympy.resultant(a, _W - _Y ** k, _Y), _W)).primitive()


@lru_cache(maxsize=2048)
def _ann_int_poly(pa: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Annihilator of g(alpha) for integer g and alpha a root of pa."""
    a = _expr_of(pa, _Y)
    return from_sympy(sympy.Poly(sympy.resultant(a, _W - _expr_of(g, _Y), _Y), _W)).primitive()


@lru_cache(maxsize=2048)
def _ann_pair_diff(pa: IntPolynomial) -> IntPolynomial:
    """Polynomial vanishing on differences of roots of pa, zero roots stripped."""
    a = _expr_of(pa, _Y)
    b = _expr_of(pa, _Y).subs(_Y, _W + _Y)
    p = from_sympy(sympy.Poly(sympy.resultant(a, b, _Y), _W)).primitive()
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    return IntPolynomial(cs)


def _imag_annihilator(pa: IntPolynomial) -> IntPolynomial:
    """Real polynomial vanishing on Im(root) for every root of pa."""
    diff = _ann_pair_diff(pa)  # roots: nonzero z_i - z_j, symmetric under negation
    even = [c for i, c in enumerate(diff.coeffs) if i % 2 == 0]
    odd = [c for i, c in enumerate(diff.coeffs) if i % 2 == 1]
    if any(odd) and any(even):
        raise ArithmeticError("difference polynomial lost its symmetry")
    if any(odd):
        # w * E(w^2) shape: strip one w
        even = odd
    # E(t) with t = w^2; substitute t = -4 u^2 for w = 2i*u
    e = even
    out = [0] * (2 * len(e) - 1)
    for i, c in enumerate(e):
        out[2 * i] = c * (-4) ** i
    return IntPolynomial(out).primitive()


# ---------------------------------------------------------------------
# building values from annihilators
# ---------------------------------------------------------------------


def _tracked(compute: Callable[..., ComplexInterval], sources) -> Callable[[Fraction], ComplexInterval]:
    """Tracker closure: eps -> enclosing box of compute(*boxes) of width <= eps."""

    def tracker(eps: Fraction) -> ComplexInterval:
        e = eps
        for _ in range(_MAX_ESCALATIONS):
            try:
                x = compute(*[box_of(s, e) for s in sources])
            except ZeroDivisionError:
                e = _shrink(e)
                continue
            if x.width <= eps:
                return x
            e = _shrink(e)
        raise PrecisionError("tracker could not reach the requested width")

    return tracker


def from_annihilator(ann: IntPolynomial, tracker: Callable[[Fraction], ComplexInterval]):
    """Exact value from a nonzero annihilating polynomial and a tracker
    producing ever-tighter enclosures. Returns Fraction or AlgebraicNumber."""
    if ann.is_zero():
        raise ValueError("zero annihilator")
    facs = [f for f, _ in factor_int(ann)]
    if not facs:
        raise ValueError("annihilator has no roots")
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        x = tracker(eps)
        cands = [f for f in facs if f.eval_cinterval(x).contains_zero()]
        if not cands:
            raise ArithmeticError("enclosure excludes every root of the annihilator")
        if len(cands) == 1:
            f = cands[0]
            if f.degree == 1:
                return Fraction(-f.coeffs[0], f.coeffs[1])
            return _pin_to_root(f, tracker, eps)
        eps = _shrink(eps)
    raise PrecisionError("could not select an irreducible factor")


def _pin_to_root(f: IntPolynomial, tracker, eps: Fraction) -> AlgebraicNumber:
    if tracker(eps).is_real_line():
        # a real-line enclosure proves the value real: match among real
        # roots only, skipping complex isolation entirely
        views = [(r, False) for r in _real_roots_only(f)]
    else:
        reps = roots_of_irreducible(f)
        views = [(r, False) for r in reps]
        views += [(r, True) for r in reps
                  if isinstance(r, AlgebraicNumber) and not r.is_real]
    for _ in range(_MAX_ESCALATIONS):
        x = tracker(eps)
        hit = []
        for r, conj in views:
            b = r.refine(eps) if isinstance(r, AlgebraicNumber) else box_of(r, eps)
            if conj:
                b = b.conj()
            if b.overlaps(x):
                hit.append((r, conj, b))
        if not hit:
            raise ArithmeticError("enclosure excludes every root of the factor")
        if len(hit) == 1:
            r, conj, b = hit[0]
            box = b.intersect(x)
            is_real = isinstance(r, AlgebraicNumber) and r.is_real
            return AlgebraicNumber(f, box, is_real)
        eps = _shrink(eps)
    raise PrecisionError("could not pin the value to a single root")


# ---------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------


def _shift_minpoly(p: IntPolynomial, r: Fraction) -> IntPolynomial:
    """Minimal polynomial of (root + r): p(z - r) cleared to integers."""
    z = _W
    num, den = r.numerator, r.denominator
    expr = sum(c * (den * z - num) ** i * den ** (p.degree - i)
               for i, c in enumerate(p.coeffs))
    return from_sympy(sympy.Poly(sympy.expand(expr), z)).primitive()


def _scale_minpoly(p: IntPolynomial, r: Fraction) -> IntPolynomial:
    """Minimal polynomial of (root * r) for r != 0."""
    num, den = r.numerator, r.denominator
    d = p.degree
    return IntPolynomial([c * den ** i * num ** (d - i)
                          for i, c in enumerate(p.coeffs)]).primitive()


def alg_neg(a):
    a = _coerce(a)
    if isinstance(a, Fraction):
        return -a
    return AlgebraicNumber(a.minpoly.shift_arg_neg().primitive(), -a.box, a.is_real)


def alg_conj(a):
    a = _coerce(a)
    if isinstance(a, Fraction) or a.is_real:
        return a
    return AlgebraicNumber(a.minpoly, a.box.conj(), False)


def alg_add(a, b):
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if isinstance(a, Fraction):
        a, b = b, a
    if isinstance(b, Fraction):
        if b == 0:
            return a
        return AlgebraicNumber(_shift_minpoly(a.minpoly, b),
                               a.box + ComplexInterval.point(b), a.is_real)
    ann = _ann_add(a.minpoly, b.minpoly)
    return from_annihilator(ann, _tracked(lambda x, y: x + y, [a, b]))


def alg_sub(a, b):
    return alg_add(a, alg_neg(b))


def alg_mul(a, b):
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if isinstance(a, Fraction):
        a, b = b, a
    if isinstance(b, Fraction):
        if b == 0:
            return Fraction(0)
        if b == 1:
            return a
        return AlgebraicNumber(_scale_minpoly(a.minpoly, b),
                               a.box * ComplexInterval.point(b), a.is_real)
    ann = _ann_mul(a.minpoly, b.minpoly)
    return from_annihilator(ann, _tracked(lambda x, y: x * y, [a, b]))


def alg_inv(a):
    a = _coerce(a)
    if isinstance(a, Fraction):
        return 1 / a
    rev = a.minpoly.reverse().primitive()
    return _pin_to_root(rev, _tracked(lambda x: x.recip(), [a]), START_WIDTH)


def alg_div(a, b):
    b = _coerce(b)
    if isinstance(b, Fraction):
        return alg_mul(a, 1 / b)
    return alg_mul(_coerce(a), alg_inv(b))


def alg_pow(a, k: int):
    a = _coerce(a)
    if k < 0:
        return alg_inv(alg_pow(a, -k))
    if k == 0:
        return Fraction(1)
    if k == 1:
        return a
    if isinstance(a, Fraction):
        return a ** k
    ann = _ann_pow(a.minpoly, k)
    return from_annihilator(ann, _tracked(lambda x: x.pow_int(k), [a]))


def alg_eval_int_poly(a, g: IntPolynomial):
    """g(a) for integer g, in one resultant instead of an op chain."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        return g(a)
    if g.is_zero():
        return Fraction(0)
    if g.degree == 0:
        return Fraction(g.coeffs[0])
    ann = _ann_int_poly(a.minpoly, g)
    return from_annihilator(ann, _tracked(g.eval_cinterval, [a]))


def alg_real_part(a):
    a = _coerce(a)
    if isinstance(a, Fraction) or a.is_real:
        return a
    g = _pair_sum_poly(a.minpoly)  # vanishes on 2*Re(a)
    twice = from_annihilator(g, _tracked(lambda x: ComplexInterval(x.re + x.re, Interval.point(0)), [a]))
    return alg_mul(twice, Fraction(1, 2))


def alg_imag_part(a):
    a = _coerce(a)
    if isinstance(a, Fraction) or a.is_real:
        return Fraction(0)
    g = _imag_annihilator(a.minpoly)
    return from_annihilator(g, _tracked(lambda x: ComplexInterval(x.im, Interval.point(0)), [a]))


def alg_abs2(a):
    """|a|^2 as a real scalar."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        return a * a
    if a.is_real:
        return alg_mul(a, a)
    return alg_mul(a, alg_conj(a))


# ---------------------------------------------------------------------
# exact decisions
# ---------------------------------------------------------------------


def is_zero_exact(a) -> bool:
    """Exact zero test. For an AlgebraicNumber the minimal polynomial is
    irreducible of degree >= 2, hence never z itself; the refinement run
    below both confirms that and validates the stored box."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        return a == 0
    bound = min_nonzero_root_bound(a.minpoly)
    eps = min(START_WIDTH, bound / 4)
    for _ in range(_MAX_ESCALATIONS):
        b = a.refine(eps)
        if not b.contains_zero():
            return False
        eps = _shrink(eps)
    raise PrecisionError("zero test failed to exclude zero")


def annihilated_is_zero(ann: IntPolynomial, tracker) -> bool:
    """Decide value == 0 for a value known to be a root of nonzero ann,
    without factoring: either the enclosure escapes zero, or it fits
    inside the separation radius below every nonzero root of ann."""
    cs = list(ann.coeffs)
    k = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        k += 1
    if k == 0:
        return False  # zero is not a root at all
    if not cs or len(cs) == 1:
        return True  # ann = c*z**k: only root is zero
    stripped = IntPolynomial(cs)
    bound = min_nonzero_root_bound(stripped)
    eps = min(START_WIDTH, bound / 4)
    for _ in range(_MAX_ESCALATIONS):
        x = tracker(eps)
        if not x.contains_zero():
            return False
        if (abs(x.re.lo) < bound and abs(x.re.hi) < bound
                and abs(x.im.lo) < bound and abs(x.im.hi) < bound):
            return True
        eps = _shrink(eps)
    raise PrecisionError("annihilator zero test did not resolve")


def equal_exact(a, b) -> bool:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a == b
        return False  # canonical: degree >= 2 never equals a rational
    if a.minpoly.coeffs != b.minpoly.coeffs:
        return False  # equal values share one minimal polynomial
    if a is b:
        return True
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        ba, bb = a.refine(eps), b.refine(eps)
        if not ba.overlaps(bb):
            return False
        ia, ib = root_index(a), root_index(b)
        if ia == ib:
            return True
        eps = _shrink(eps)
    raise PrecisionError("equality test did not resolve")


def sign_real(a) -> int:
    """Certified sign of a real scalar (Fraction or real AlgebraicNumber)."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        return (a > 0) - (a < 0)
    if not a.is_real:
        raise ValueError("sign of a non-real value")
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        b = a.refine(eps)
        s = b.re.sign()
        if s != 0:
            return s
        eps = _shrink(eps)
    raise PrecisionError("sign did not resolve (value may be zero?)")


def compare_real(a, b) -> int:
    """-1, 0, +1 for real scalars, exact."""
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    d = alg_sub(a, b)
    if is_zero_exact(d):
        return 0
    return sign_real(d)


def nearest_int(a, tie_even: bool = True) -> int:
    """Nearest integer to a real scalar; exact half-integer ties go to
    the even integer (only rationals can tie)."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        f = a.numerator // a.denominator  # floor
        frac = a - f
        if frac < Fraction(1, 2):
            return f
        if frac > Fraction(1, 2):
            return f + 1
        if not tie_even:
            return f + 1
        return f if f % 2 == 0 else f + 1
    if not a.is_real:
        raise ValueError("nearest integer of a non-real value")
    eps = Fraction(1, 8)
    for _ in range(_MAX_ESCALATIONS):
        iv = a.refine(eps).re
        lo_n = nearest_int(iv.lo)
        hi_n = nearest_int(iv.hi)
        if lo_n == hi_n:
            # an irrational never sits exactly on a half-integer edge,
            # so once both endpoints round the same way we are done
            mid = Fraction(2 * lo_n + 1, 2)
            if iv.hi < mid and iv.lo > mid - 1:
                return lo_n
        eps = _shrink(eps)
    raise PrecisionError("nearest integer did not resolve")


# ---------------------------------------------------------------------
# field-level queries
# ---------------------------------------------------------------------


def field_signature(p: IntPolynomial) -> tuple[int, int]:
    """(real embeddings, conjugate pairs) of the field defined by an
    irreducible polynomial."""
    if not is_irreducible(p):
        raise ValueError("signature needs an irreducible polynomial")
    from .polynomials import count_real_roots
    r = count_real_roots(p)
    return r, (p.degree - r) // 2


def coefficient_length(a) -> int:
    """Sum of absolute values of the minimal polynomial coefficients."""
    a = _coerce(a)
    if isinstance(a, Fraction):
        return abs(a.numerator) + a.denominator
    return a.minpoly.length()


def degree_of(a) -> int:
    a = _coerce(a)
    return 1 if isinstance(a, Fraction) else a.minpoly.degree


def degree_of_generated_field(gens) -> int:
    """Degree over Q of the field generated by the given scalars,
    certified by the primitive-element argument: among any
    deg(a)*(deg(b)-1)+1 distinct shifts a + k*b at least one is
    primitive, so the maximal degree seen is the compositum degree."""
    prim = None
    for g in gens:
        g = _coerce(g)
        if isinstance(g, Fraction):
            continue
        if prim is None:
            prim = g
            continue
        na, nb = prim.minpoly.degree, g.minpoly.degree
        need = na * (nb - 1) + 1
        best, bestdeg = None, 0
        for k in range(1, min(need, 32) + 1):
            cand = alg_add(prim, alg_mul(g, Fraction(k)))
            d = degree_of(cand)
            if d > bestdeg:
                best, bestdeg = cand, d
            if d == na * nb:
                break
        else:
            if need > 32 and bestdeg < na * nb:
                raise PrecisionError(
                    "primitive-element search capped at 32 shifts without a certificate")
        prim = best
    return 1 if prim is None else degree_of(prim)


def root_index(a: AlgebraicNumber) -> int:
    """Index of a within the canonical root order of its minimal
    polynomial; conjugates of upper-half representatives get indices
    after the representatives, in the same order."""
    reps = roots_of_irreducible(a.minpoly)
    n_reps = len(reps)
    uppers = [i for i, r in enumerate(reps)
              if isinstance(r, AlgebraicNumber) and not r.is_real]
    eps = START_WIDTH
    for _ in range(_MAX_ESCALATIONS):
        b = a.refine(eps)
        hits = []
        for i, r in enumerate(reps):
            rb = r.refine(eps)
            if rb.overlaps(b):
                hits.append(i)
        conj_hits = []
        for pos, i in enumerate(uppers):
            rb = reps[i].refine(eps).conj()
            if rb.overlaps(b):
                conj_hits.append(n_reps + pos)
        all_hits = hits + conj_hits
        if len(all_hits) == 1:
            return all_hits[0]
        eps = _shrink(eps)
    raise PrecisionError("root index did not resolve")


def nth_root_value(p: IntPolynomial, k: int):
    """The k-th root of p in the canonical order (the inverse of
    root_index, extended past the representatives to conjugates)."""
    boxes = isolate_roots(p)
    n_reps = len(boxes)
    if 0 <= k < n_reps:
        return boxes[k].value
    uppers = [r.value for r in boxes if not r.is_real]
    j = k - n_reps
    if 0 <= j < len(uppers):
        return alg_conj(uppers[j])
    raise IndexError(f"root index {k} out of range for {list(p.coeffs)}")


def fresh_root(a: AlgebraicNumber) -> AlgebraicNumber:
    """New object for the same root with a from-scratch enclosure.

    The shared objects handed out by roots_of_irreducible refine
    monotonically and keep the tighter box forever, so any enclosure
    read off them depends on what ran earlier.  The object returned
    here is re-isolated, making refine(eps) on it a pure function of
    (value, eps); reproducible reports want exactly that."""
    p = a.minpoly
    k = root_index(a)
    real_boxes = isolate_real_roots(p)
    n_real = len(real_boxes)
    if k < n_real:
        return AlgebraicNumber(p, ComplexInterval(real_boxes[k], Interval.point(0)), True)
    pairs = (p.degree - n_real) // 2
    uppers = _order_uppers(p, _isolate_upper_roots(p, pairs))
    j = k - n_real
    if j < len(uppers):
        return uppers[j]
    flipped = uppers[j - len(uppers)].box.conj()
    return AlgebraicNumber(p, flipped, False)
