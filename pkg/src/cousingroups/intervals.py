"""Exact interval arithmetic over rational endpoints.

Real intervals and complex rectangles carry Fraction endpoints, so the
ring operations (+, -, *) are exact: no rounding happens unless it is
asked for explicitly (`round_out`, used to cap denominator growth) or a
transcendental enclosure is requested, in which case mpmath's certified
interval functions supply directed-rounded endpoints that are converted
back to Fractions outward.

Containment is the only contract: every operation returns an interval
that contains the exact image of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

import mpmath
from mpmath import libmp

RatLike = Union[int, Fraction]


def _frac(x: RatLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: RatLike) -> "Interval":
        x = _frac(x)
        return Interval(x, x)

    @staticmethod
    def of(a: RatLike, b: RatLike) -> "Interval":
        a, b = _frac(a), _frac(b)
        return Interval(a, b) if a <= b else Interval(b, a)

    # -- queries ------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: RatLike) -> bool:
        x = _frac(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def sign(self) -> int:
        """Certified sign: +1 if the whole interval is > 0, -1 if < 0, else 0.

        0 means undecided (straddles zero) unless the interval is the
        exact point 0.
        """
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    # -- exact ring ops ----------------------------------------------

    def __add__(self, other):
        other = _coerce_interval(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _coerce_interval(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        other = _coerce_interval(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_interval(other)
        if other is NotImplemented:
            return NotImplemented
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def square(self) -> "Interval":
        # tighter than self * self when the interval straddles 0
        a, b = self.lo * self.lo, self.hi * self.hi
        lo = Fraction(0) if self.contains_zero() else min(a, b)
        return Interval(lo, max(a, b))

    def recip(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint intervals")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- controlled rounding -----------------------------------------

    def round_out(self, bits: int) -> "Interval":
        """Widen outward to endpoints with denominator 2**bits."""
        scale = 1 << bits
        lo = Fraction(_floor_div(self.lo.numerator * scale, self.lo.denominator), scale)
        hi = Fraction(_ceil_div(self.hi.numerator * scale, self.hi.denominator), scale)
        return Interval(lo, hi)

    def sqrt(self, bits: int = 64) -> "Interval":
        """Outward enclosure of sqrt; requires hi >= 0, clips lo at 0."""
        if self.hi < 0:
            raise ValueError("sqrt of a negative interval")
        lo = max(self.lo, Fraction(0))
        return Interval(_sqrt_lower(lo, bits), _sqrt_upper(self.hi, bits))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def approx(self) -> float:
        try:
            return float(self.mid)
        except OverflowError:
            return float("inf") if self.mid > 0 else float("-inf")


def _coerce_interval(x):
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, Fraction)):
        return Interval.point(x)
    return NotImplemented


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _sqrt_lower(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    scale = 1 << bits
    # sqrt(p/q) = sqrt(p*q)/q; isqrt floors, so this rounds down
    return Fraction(isqrt(p * q * scale * scale), q * scale)


def _sqrt_upper(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    scale = 1 << bits
    r = isqrt(p * q * scale * scale)
    if r * r < p * q * scale * scale:
        r += 1
    return Fraction(r, q * scale)


@dataclass(frozen=True)
class ComplexInterval:
    """Axis-aligned rectangle in the complex plane."""

    re: Interval
    im: Interval

    @staticmethod
    def point(re: RatLike, im: RatLike = 0) -> "ComplexInterval":
        return ComplexInterval(Interval.point(re), Interval.point(im))

    @staticmethod
    def box(re_lo, re_hi, im_lo, im_hi) -> "ComplexInterval":
        return ComplexInterval(Interval.of(re_lo, re_hi), Interval.of(im_lo, im_hi))

    # -- queries ------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def mid(self) -> tuple[Fraction, Fraction]:
        return self.re.mid, self.im.mid

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def is_point(self) -> bool:
        return self.re.is_point() and self.im.is_point()

    def overlaps(self, other: "ComplexInterval") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def is_real_line(self) -> bool:
        return self.im.lo == 0 == self.im.hi

    # -- exact ring ops ----------------------------------------------

    def __add__(self, other):
        other = _coerce_complex(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce_complex(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_complex(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_complex(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def mag2(self) -> Interval:
        return self.re.square() + self.im.square()

    def mag(self, bits: int = 64) -> Interval:
        return self.mag2().sqrt(bits)

    def recip(self) -> "ComplexInterval":
        m = self.mag2()
        if m.contains_zero():
            raise ZeroDivisionError("complex interval may contain zero")
        return self.conj() * m.recip()

    def __truediv__(self, other):
        other = _coerce_complex(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.recip()

    def pow_int(self, k: int) -> "ComplexInterval":
        if k < 0:
            return self.recip().pow_int(-k)
        out = ComplexInterval.point(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def intersect(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.re.intersect(other.re), self.im.intersect(other.im))

    def round_out(self, bits: int) -> "ComplexInterval":
        return ComplexInterval(self.re.round_out(bits), self.im.round_out(bits))

    def approx(self) -> complex:
        return complex(self.re.approx(), self.im.approx())

    def __repr__(self):
        return f"ComplexInterval(re={self.re!r}, im={self.im!r})"


def _coerce_complex(x):
    if isinstance(x, ComplexInterval):
        return x
    if isinstance(x, Interval):
        return ComplexInterval(x, Interval.point(0))
    if isinstance(x, (int, Fraction)):
        return ComplexInterval.point(x)
    return NotImplemented


# ---------------------------------------------------------------------
# Certified transcendental enclosures via mpmath.iv.
# Fractions convert to directed-rounded mpf endpoints; results convert
# back outward, so the Fraction interval always contains the true image.
# ---------------------------------------------------------------------


def _frac_to_mpf(x: Fraction, prec: int, rnd) -> mpmath.mpf:
    t = libmp.from_rational(x.numerator, x.denominator, prec, rnd)
    return mpmath.mp.make_mpf(t)


def _raw_to_frac(t) -> Fraction:
    sign, man, exp, _ = t
    man = int(man)
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ValueError(f"non-finite interval endpoint {t!r}")
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _iv_from_interval(x: Interval, prec: int):
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        lo = _frac_to_mpf(x.lo, prec, libmp.round_floor)
        hi = _frac_to_mpf(x.hi, prec, libmp.round_ceiling)
        return mpmath.iv.mpf([lo, hi])
    finally:
        mpmath.iv.prec = old


def _iv_to_interval(v) -> Interval:
    lo, hi = v._mpi_
    return Interval(_raw_to_frac(lo), _raw_to_frac(hi))


def _iv_call(fn_name: str, x: Interval, prec: int) -> Interval:
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        arg = _iv_from_interval(x, prec)
        return _iv_to_interval(getattr(mpmath.iv, fn_name)(arg))
    finally:
        mpmath.iv.prec = old


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(Fraction(x))


def log_interval(x, prec: int = 96) -> Interval:
    """Enclosure of log over a strictly positive interval."""
    x = _as_interval(x)
    if x.lo <= 0:
        raise ValueError("log needs a strictly positive interval")
    return _iv_call("log", x, prec)


def exp_interval(x, prec: int = 96) -> Interval:
    return _iv_call("exp", _as_interval(x), prec)


def cis2pi_interval(x, prec: int = 96) -> ComplexInterval:
    """Enclosure of exp(2*pi*i*x) for a real interval or rational x."""
    x = _as_interval(x)
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        arg = mpmath.iv.pi * 2 * _iv_from_interval(x, prec)
        return ComplexInterval(_iv_to_interval(mpmath.iv.cos(arg)),
                               _iv_to_interval(mpmath.iv.sin(arg)))
    finally:
        mpmath.iv.prec = old
