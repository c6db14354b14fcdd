"""The exact scalar tower: Fraction, GaussianRational, AlgebraicNumber.

Every scalar is kept in its lowest level: operations demote a result
whenever its minimal polynomial allows (degree 1 back to Fraction,
conjugate quadratics with rational real and imaginary parts back to
GaussianRational). Mixed operations promote only as far as needed;
rational-by-algebraic shortcuts never build a resultant.

Text syntax (no internal whitespace):

    3/4            -1/2+-2/3*i        alg([-2,0,1];1)

with alg([c0,...,cd];k) the k-th root of c0 + c1 z + ... + cd z**d in
the canonical root order (reals ascending, then upper-half conjugate
representatives, then their conjugates).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

from .intervals import ComplexInterval, Interval
from .numberfield import (
    AlgebraicNumber,
    alg_abs2,
    alg_add,
    alg_conj,
    alg_div,
    alg_imag_part,
    alg_mul,
    alg_neg,
    alg_pow,
    alg_real_part,
    box_of,
    equal_exact,
    is_zero_exact,
    nth_root_value,
    root_index,
)
from .polynomials import IntPolynomial

Scalar = Union[Fraction, "GaussianRational", AlgebraicNumber]


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational re + im*i."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        if isinstance(other, AlgebraicNumber):
            return s_add(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        out = self.__add__(-other if not isinstance(other, AlgebraicNumber) else alg_neg(other))
        return out

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re * other.re - self.im * other.im,
                                    self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, AlgebraicNumber):
            return s_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            d = other.abs2()
            if d == 0:
                raise ZeroDivisionError("division by zero")
            return self * other.conj() / d
        if isinstance(other, AlgebraicNumber):
            return s_div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        d = self.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return (self.conj() / d) * other

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, AlgebraicNumber):
            return s_equal(self, other)
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I_UNIT = GaussianRational(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------
# promotion / demotion
# ---------------------------------------------------------------------


def promote_to_alg(x: Scalar):
    """Lift a Gaussian rational into the AlgebraicNumber layer (point
    box, conjugate-quadratic minimal polynomial); other levels pass
    through unchanged."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return x.re
        # z**2 - 2 re z + |x|^2, cleared to integers
        two_re, n = -2 * x.re, x.abs2()
        den = _lcm(two_re.denominator, n.denominator)
        mp = IntPolynomial([int(n * den), int(two_re * den), den]).primitive()
        box = ComplexInterval.point(x.re, x.im)
        return AlgebraicNumber(mp, box, False)
    if isinstance(x, int):
        return Fraction(x)
    return x


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b)


def demote(x) -> Scalar:
    """Push a scalar down the tower when its minimal polynomial allows."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, GaussianRational):
        return x.re if x.im == 0 else x
    if isinstance(x, AlgebraicNumber) and x.degree == 2 and not x.is_real:
        a, b, c = x.minpoly.coeffs[2], x.minpoly.coeffs[1], x.minpoly.coeffs[0]
        d2 = 4 * a * c - b * b  # positive: the roots are a conjugate pair
        s = isqrt(d2)
        if s * s == d2:
            re = Fraction(-b, 2 * a)
            im = Fraction(s, 2 * a)
            # the box tells the two conjugates apart
            eps = Fraction(1, 2 ** 8)
            while True:
                bx = x.refine(eps)
                if bx.im.lo > 0:
                    return GaussianRational(re, im)
                if bx.im.hi < 0:
                    return GaussianRational(re, -im)
                eps = eps * eps
    return x


# ---------------------------------------------------------------------
# generic operations
# ---------------------------------------------------------------------


def _pair(a: Scalar, b: Scalar):
    a = demote(a) if isinstance(a, int) else a
    b = demote(b) if isinstance(b, int) else b
    if isinstance(a, AlgebraicNumber) or isinstance(b, AlgebraicNumber):
        return "alg", promote_to_alg(a), promote_to_alg(b)
    if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
        ga = a if isinstance(a, GaussianRational) else GaussianRational(Fraction(a), Fraction(0))
        gb = b if isinstance(b, GaussianRational) else GaussianRational(Fraction(b), Fraction(0))
        return "gauss", ga, gb
    return "frac", Fraction(a), Fraction(b)


def s_add(a, b) -> Scalar:
    kind, a, b = _pair(a, b)
    if kind == "alg":
        return demote(alg_add(a, b))
    return demote(a + b)


def s_sub(a, b) -> Scalar:
    return s_add(a, s_neg(b))


def s_neg(a) -> Scalar:
    if isinstance(a, AlgebraicNumber):
        return alg_neg(a)
    if isinstance(a, GaussianRational):
        return -a
    return -Fraction(a)


def s_mul(a, b) -> Scalar:
    kind, a, b = _pair(a, b)
    if kind == "alg":
        return demote(alg_mul(a, b))
    return demote(a * b)


def s_div(a, b) -> Scalar:
    kind, a, b = _pair(a, b)
    if kind == "alg":
        return demote(alg_div(a, b))
    if kind == "gauss":
        return demote(a / b)
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return a / b


def s_pow(a, k: int) -> Scalar:
    if isinstance(a, AlgebraicNumber):
        return demote(alg_pow(a, k))
    if isinstance(a, GaussianRational):
        if k < 0:
            return s_pow(s_div(Fraction(1), a), -k)
        out = GaussianRational(Fraction(1), Fraction(0))
        for _ in range(k):
            out = out * a
        return demote(out)
    return Fraction(a) ** k


def s_conj(a) -> Scalar:
    if isinstance(a, AlgebraicNumber):
        return alg_conj(a)
    if isinstance(a, GaussianRational):
        return demote(a.conj())
    return Fraction(a)


def s_abs2(a) -> Scalar:
    """|a|^2, always a real scalar."""
    if isinstance(a, AlgebraicNumber):
        return demote(alg_abs2(a))
    if isinstance(a, GaussianRational):
        return a.abs2()
    return Fraction(a) ** 2


def s_re(a) -> Scalar:
    if isinstance(a, AlgebraicNumber):
        return demote(alg_real_part(a))
    if isinstance(a, GaussianRational):
        return a.re
    return Fraction(a)


def s_im(a) -> Scalar:
    if isinstance(a, AlgebraicNumber):
        return demote(alg_imag_part(a))
    if isinstance(a, GaussianRational):
        return a.im
    return Fraction(0)


def s_is_zero(a) -> bool:
    if isinstance(a, AlgebraicNumber):
        return is_zero_exact(a)
    if isinstance(a, GaussianRational):
        return a.re == 0 and a.im == 0
    return Fraction(a) == 0


def s_equal(a, b) -> bool:
    return s_is_zero(s_sub(a, b))


def s_is_real(a) -> bool:
    if isinstance(a, AlgebraicNumber):
        return a.is_real
    if isinstance(a, GaussianRational):
        return a.im == 0
    return True


def s_box(a, eps) -> ComplexInterval:
    """Enclosing box of any scalar at the requested width."""
    if isinstance(a, GaussianRational):
        return ComplexInterval.point(a.re, a.im)
    return box_of(a, eps)


def s_approx(a) -> complex:
    if isinstance(a, AlgebraicNumber):
        return a.approx()
    if isinstance(a, GaussianRational):
        return complex(a.re, a.im)
    return complex(Fraction(a))


# ---------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------


def parse_scalar(text: str) -> Scalar:
    t = text.strip()
    if not t:
        raise ValueError("empty scalar")
    if t.startswith("alg(") and t.endswith(")"):
        inner = t[4:-1]
        if ";" not in inner:
            raise ValueError(f"missing root index in {text!r}")
        coeff_part, _, k_part = inner.rpartition(";")
        coeff_part = coeff_part.strip()
        if not (coeff_part.startswith("[") and coeff_part.endswith("]")):
            raise ValueError(f"expected [c0,...,cd] in {text!r}")
        coeffs = [int(c) for c in coeff_part[1:-1].split(",")]
        k = int(k_part)
        return demote(nth_root_value(IntPolynomial(coeffs), k))
    if t.endswith("*i"):
        body = t[:-2]
        cut = body.find("+", 1)
        if cut == -1:
            return demote(GaussianRational(Fraction(0), Fraction(body)))
        return demote(GaussianRational(Fraction(body[:cut]), Fraction(body[cut + 1:])))
    return Fraction(t)


def format_scalar(a: Scalar) -> str:
    a = demote(a)
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, GaussianRational):
        return f"{a.re}+{a.im}*i"
    k = root_index(a)
    return f"alg([{','.join(str(c) for c in a.minpoly.coeffs)}];{k})"
