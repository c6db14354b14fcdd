"""Certified lower bounds for integer forms in algebraic numbers.

The central estimate: a nonzero integer-coefficient polynomial P,
evaluated at algebraic numbers (a_1 .. a_m), satisfies

    |P(a)| >= L(P)^(1 - d*n) * prod_k L(a_k)^(-d * N_k * n / n_k)

where L is the coefficient length (sum of absolute values), n_k and
L(a_k) come from the k-th minimal polynomial, N_k is the partial degree
of P in variable k, n bounds the degree of the field the point
generates, and d is 1 when every a_k is real, 1/2 otherwise.  All
exponents are non-positive, so any upper bound on n keeps the bound
valid.  The bound doubles as a zero test: an interval evaluation thinner
than the bound that still straddles zero forces the value to be exactly
zero, which is then confirmed symbolically.

Everything returned here is an exact Fraction; real powers with
half-integer exponents are bracketed through integer square roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .intervals import ComplexInterval, Interval
from .numberfield import AlgebraicNumber, degree_of_generated_field
from .polynomials import iroot_ceil, iroot_floor
from .scalars import (
    GaussianRational,
    Scalar,
    demote,
    promote_to_alg,
    s_add,
    s_box,
    s_is_real,
    s_is_zero,
    s_mul,
)


class UnsupportedEntry(TypeError):
    """A matrix entry is not an exact algebraic scalar."""


# ---------------------------------------------------------------------
# rational bracketing of x^(p/2)
# ---------------------------------------------------------------------


def pow_upper(x: Fraction, e: Fraction) -> Fraction:
    """Rational upper bound for x**e; needs x >= 1 and e >= 0.

    x^(a/b) = (x^a)^(1/b) and for P/Q >= 1 the b-th root is bracketed by
    integer roots: (P/Q)^(1/b) = (P*Q^(b-1))^(1/b) / Q."""
    if x < 1 or e < 0:
        raise ValueError("pow_upper needs x >= 1 and e >= 0")
    x = Fraction(x)
    e = Fraction(e)
    y = x ** e.numerator
    b = e.denominator
    if b == 1:
        return y
    return Fraction(iroot_ceil(y.numerator * y.denominator ** (b - 1), b),
                    y.denominator)


def pow_lower_pos(x: Fraction, e: Fraction) -> Fraction:
    """Rational lower bound for x**e; needs x >= 1 and e >= 0."""
    if x < 1 or e < 0:
        raise ValueError("pow_lower_pos needs x >= 1 and e >= 0")
    x = Fraction(x)
    e = Fraction(e)
    y = x ** e.numerator
    b = e.denominator
    if b == 1:
        return y
    return Fraction(iroot_floor(y.numerator * y.denominator ** (b - 1), b),
                    y.denominator)


def pow_lower(x: Fraction, e: Fraction) -> Fraction:
    """Rational lower bound for x**e with e <= 0 (and x >= 1)."""
    if e > 0:
        raise ValueError("pow_lower handles non-positive exponents")
    return 1 / pow_upper(x, -e)


# ---------------------------------------------------------------------
# sparse multivariate integer polynomials
# ---------------------------------------------------------------------


class MultiPolynomial:
    """Integer polynomial in a fixed number of variables, sparse terms."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], int]):
        self.nvars = nvars
        clean = {}
        for expo, c in terms.items():
            if len(expo) != nvars:
                raise ValueError(f"exponent tuple {expo} has wrong arity")
            if any(e < 0 for e in expo):
                raise ValueError("negative exponent")
            if c:
                clean[tuple(expo)] = int(c)
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def linear(cls, mu: Sequence[int], nu: int) -> "MultiPolynomial":
        n = len(mu)
        terms: dict[tuple[int, ...], int] = {}
        for i, c in enumerate(mu):
            expo = tuple(int(i == j) for j in range(n))
            terms[expo] = int(c)
        terms[(0,) * n] = int(nu)
        return cls(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def length(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def partial_degrees(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(e[k] for e in self.terms) for k in range(self.nvars))

    def eval_boxes(self, boxes: Sequence[ComplexInterval]) -> ComplexInterval:
        acc = ComplexInterval.point(Fraction(0))
        for expo, c in self.terms.items():
            term = ComplexInterval.point(Fraction(c))
            for b, e in zip(boxes, expo):
                if e:
                    term = term * b.pow_int(e)
            acc = acc + term
        return acc

    def eval_exact(self, values: Sequence[Scalar]) -> Scalar:
        acc: Scalar = Fraction(0)
        for expo, c in self.terms.items():
            term: Scalar = Fraction(c)
            for v, e in zip(values, expo):
                for _ in range(e):
                    term = s_mul(term, v)
            acc = s_add(acc, term)
        return acc

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self.terms.items():
            vs = "*".join(f"z{k + 1}^{e}" if e > 1 else f"z{k + 1}"
                          for k, e in enumerate(expo) if e)
            parts.append(f"{c}*{vs}" if vs else str(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPolynomial({self.describe()})"


# ---------------------------------------------------------------------
# per-point data
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class PointData:
    degree: int            # n_k
    length: int            # L(a_k)
    real: bool
    value: Scalar


def _point_data(x: Scalar) -> PointData:
    x = demote(x)
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        # minimal polynomial q*z - p
        return PointData(1, abs(x.numerator) + x.denominator, True, x)
    if isinstance(x, GaussianRational):
        alg = promote_to_alg(x)
        return PointData(2, sum(abs(c) for c in alg.minpoly.coeffs), False, x)
    if isinstance(x, AlgebraicNumber):
        return PointData(x.minpoly.degree,
                         sum(abs(c) for c in x.minpoly.coeffs),
                         x.is_real, x)
    raise UnsupportedEntry(f"not an exact algebraic scalar: {x!r}")


def _compositum_degree(data: list[PointData], mode: str) -> tuple[int, bool]:
    if mode == "safe_upper":
        n = 1
        for d in data:
            n *= d.degree
        return n, False
    if mode != "exact":
        raise ValueError(f"unknown degree mode {mode!r}")
    gens = [d.value for d in data if d.degree > 1]
    gens = [g if isinstance(g, AlgebraicNumber) else promote_to_alg(g) for g in gens]
    if not gens:
        return 1, True
    return degree_of_generated_field(gens), True


# ---------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundCertificate:
    form: str
    form_length: int
    lengths: tuple[int, ...]
    degrees: tuple[int, ...]
    partial_degrees: tuple[int, ...]
    compositum_degree: int
    degree_is_exact: bool
    realness: Fraction                       # 1 or 1/2
    status: str                              # nonzero_with_bound | exact_zero
    bound: Fraction | None
    branch: str | None = None                # affine | dominant_constant
    envelope: tuple[Fraction, Fraction] | None = None   # (C', p): bound >= C'*|mu|_1^p

    @property
    def ok(self) -> bool:
        return self.status == "nonzero_with_bound"


def _theorem_bound(form_length: int, data: list[PointData],
                   partial: Sequence[int], n: int, delta: Fraction) -> Fraction:
    bound = pow_lower(Fraction(form_length), 1 - delta * n)
    for d, nk in zip(data, partial):
        if nk:
            bound *= pow_lower(Fraction(d.length), Fraction(-delta * nk * n, d.degree))
    return bound


START_WIDTH = Fraction(1, 2 ** 32)


def poly_lower_bound(p: MultiPolynomial, alphas: Sequence[Scalar],
                     degree_mode: str = "safe_upper") -> LowerBoundCertificate:
    """Bound |p(alphas)| from below, or certify the value is exactly 0."""
    if p.is_zero():
        raise ValueError("zero polynomial has no lower bound")
    if p.nvars != len(alphas):
        raise ValueError(f"{p.nvars} variables but {len(alphas)} values")
    data = [_point_data(a) for a in alphas]
    n, exact = _compositum_degree(data, degree_mode)
    delta = Fraction(1) if all(d.real for d in data) else Fraction(1, 2)
    partial = p.partial_degrees()
    bound = _theorem_bound(p.length(), data, partial, n, delta)

    base = LowerBoundCertificate(
        form=p.describe(), form_length=p.length(),
        lengths=tuple(d.length for d in data),
        degrees=tuple(d.degree for d in data),
        partial_degrees=partial, compositum_degree=n, degree_is_exact=exact,
        realness=delta, status="nonzero_with_bound", bound=bound)

    eps = START_WIDTH
    while True:
        boxes = [s_box(d.value, eps) for d in data]
        val = p.eval_boxes(boxes)
        if not val.contains_zero():
            return base
        if val.width < bound / 2:
            # a nonzero value would have to exceed the bound; confirm
            if s_is_zero(p.eval_exact([d.value for d in data])):
                return LowerBoundCertificate(
                    form=base.form, form_length=base.form_length,
                    lengths=base.lengths, degrees=base.degrees,
                    partial_degrees=base.partial_degrees,
                    compositum_degree=n, degree_is_exact=exact,
                    realness=delta, status="exact_zero", bound=None)
        eps = eps * eps if eps > Fraction(1, 2 ** 512) else eps / 2 ** 64


def _interval_abs2(box: ComplexInterval) -> Interval:
    return box.mag2()


def linear_form_certificate(s_column: Sequence[Scalar], mu: Sequence[int],
                            nu: int, degree_mode: str = "safe_upper") -> LowerBoundCertificate:
    """Certified lower bound for |mu . s + nu| with the two-branch split:
    when the constant is at most twice the homogeneous part the affine
    form is bounded directly and re-expressed as an envelope in |mu|_1;
    otherwise the reverse triangle inequality reduces to the homogeneous
    bound (or to |nu| >= 1 when the homogeneous part vanishes)."""
    mu = [int(c) for c in mu]
    nu = int(nu)
    if len(mu) != len(s_column):
        raise ValueError("mu length mismatch")
    if not any(mu) and nu == 0:
        raise ValueError("mu and nu cannot both vanish")
    entries = [demote(x) for x in s_column]
    data = [_point_data(x) for x in entries]

    # branch predicate: |nu| <= 2 |mu . s|, intervals first, exact fallback
    hom_is_zero = None
    branch_a = None
    eps = START_WIDTH
    for _ in range(6):
        boxes = [s_box(x, eps) for x in entries]
        acc = ComplexInterval.point(Fraction(0))
        for c, b in zip(mu, boxes):
            if c:
                acc = acc + b * ComplexInterval.point(Fraction(c))
        m2 = _interval_abs2(acc)
        if 4 * m2.lo > nu * nu:
            branch_a = True
            break
        if 4 * m2.hi < nu * nu:
            branch_a = False
            break
        eps = eps * eps
    if branch_a is None:
        hom = Fraction(0)
        for c, x in zip(mu, entries):
            if c:
                hom = s_add(hom, s_mul(Fraction(c), x))
        hom_is_zero = s_is_zero(hom)
        from .scalars import s_abs2
        h2 = s_abs2(hom)
        from .numberfield import compare_real
        branch_a = compare_real(s_mul(Fraction(4), h2), Fraction(nu * nu)) >= 0

    if branch_a:
        form = MultiPolynomial.linear(mu, nu)
        cert = poly_lower_bound(form, entries, degree_mode)
        if cert.status == "exact_zero":
            return cert
        # envelope: L(P) = |mu|_1 + |nu| <= |mu|_1 * (1 + 2M) with
        # M >= max |s_i|, so bound >= C' * |mu|_1 ^ p
        n, delta = cert.compositum_degree, cert.realness
        p_exp = 1 - delta * n
        m_up = _sup_abs_bound(entries)
        c_prime = pow_lower(1 + 2 * m_up, p_exp)
        for d in data:
            c_prime *= pow_lower(Fraction(d.length), Fraction(-delta * n, d.degree))
        return LowerBoundCertificate(
            form=cert.form, form_length=cert.form_length, lengths=cert.lengths,
            degrees=cert.degrees, partial_degrees=cert.partial_degrees,
            compositum_degree=n, degree_is_exact=cert.degree_is_exact,
            realness=delta, status=cert.status, bound=cert.bound,
            branch="affine", envelope=(c_prime, p_exp))

    # branch B: |nu| > 2 |hom| gives |form| >= |nu| - |hom| >= max(|hom|, |nu|/2)
    if hom_is_zero is None:
        hom = Fraction(0)
        for c, x in zip(mu, entries):
            if c:
                hom = s_add(hom, s_mul(Fraction(c), x))
        hom_is_zero = s_is_zero(hom)
    if hom_is_zero:
        # the form equals nu, a nonzero integer
        n, _ = _compositum_degree(data, degree_mode)
        delta = Fraction(1) if all(d.real for d in data) else Fraction(1, 2)
        return LowerBoundCertificate(
            form=MultiPolynomial.linear(mu, nu).describe(),
            form_length=sum(abs(c) for c in mu) + abs(nu),
            lengths=tuple(d.length for d in data),
            degrees=tuple(d.degree for d in data),
            partial_degrees=tuple(int(c != 0) for c in mu),
            compositum_degree=n, degree_is_exact=degree_mode == "exact",
            realness=delta, status="nonzero_with_bound", bound=Fraction(1),
            branch="dominant_constant", envelope=(Fraction(1), Fraction(0)))
    hom_form = MultiPolynomial.linear(mu, 0)
    cert = poly_lower_bound(hom_form, entries, degree_mode)
    n, delta = cert.compositum_degree, cert.realness
    p_exp = 1 - delta * n
    k_const = Fraction(1)
    for d in data:
        k_const *= pow_lower(Fraction(d.length), Fraction(-delta * n, d.degree))
    return LowerBoundCertificate(
        form=MultiPolynomial.linear(mu, nu).describe(),
        form_length=sum(abs(c) for c in mu) + abs(nu),
        lengths=cert.lengths, degrees=cert.degrees,
        partial_degrees=cert.partial_degrees,
        compositum_degree=n, degree_is_exact=cert.degree_is_exact,
        realness=delta, status="nonzero_with_bound", bound=cert.bound,
        branch="dominant_constant", envelope=(k_const, p_exp))


def _sup_abs_bound(entries: Sequence[Scalar]) -> Fraction:
    """Rational M with M >= max |s_i|, rounded up to the 2^-16 grid so
    certificate constants stay small."""
    m = Fraction(0)
    for x in entries:
        b = s_box(x, Fraction(1, 2 ** 16))
        m = max(m, b.mag(64).hi)
    grid = 2 ** 16
    return Fraction(-((-m.numerator * grid) // m.denominator), grid)


# ---------------------------------------------------------------------
# condition-2 certificates
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnCertificate:
    column: int
    c_value: Fraction
    a_value: Fraction
    affine_constant: Fraction
    homogeneous_constant: Fraction
    power: Fraction                   # p = 1 - delta*n, the envelope exponent
    compositum_degree: int
    degree_is_exact: bool
    realness: Fraction
    lengths: tuple[int, ...]
    degrees: tuple[int, ...]
    sup_bound: Fraction


@dataclass(frozen=True)
class Condition2Certificate:
    columns: tuple[ColumnCertificate, ...]
    c_overall: Fraction
    a_overall: Fraction

    def to_dict(self) -> dict:
        return {
            "c": str(self.c_overall),
            "a": str(self.a_overall),
            "columns": [
                {
                    "column": c.column,
                    "c": str(c.c_value),
                    "a": str(c.a_value),
                    "affine_constant": str(c.affine_constant),
                    "homogeneous_constant": str(c.homogeneous_constant),
                    "power": str(c.power),
                    "compositum_degree": c.compositum_degree,
                    "degree_is_exact": c.degree_is_exact,
                    "realness": str(c.realness),
                    "lengths": list(c.lengths),
                    "degrees": list(c.degrees),
                    "sup_bound": str(c.sup_bound),
                }
                for c in self.columns
            ],
        }


def condition2_certificate(s_matrix: Sequence[Sequence[Scalar]],
                           degree_mode: str = "safe_upper") -> Condition2Certificate:
    """Per-column constants (C_k, a_k) with, for every integer (mu, nu),
    mu != 0:  |mu . S_col + nu| >= C_k * exp(-a_k * |mu|_1) whenever the
    left side is nonzero.  Exact hits are lattice violations; they are
    ruled out by the cousin check / scan, not by this certificate.

    Derivation: the affine branch gives C'_A * |mu|_1^p with p = 1-dn,
    the dominant-constant branch gives the homogeneous constant times
    |mu|_1^p (or the bound 1 when the homogeneous part vanishes), and
    x^p >= exp(p*x) for x >= 1 turns the power envelope into the
    exponential one.  Constants: C_k = min of the branch constants and
    1, a_k = max(dn - 1, 0)."""
    rows = [[demote(x) for x in row] for row in s_matrix]
    if not rows or not rows[0]:
        raise ValueError("empty matrix")
    ncols = len(rows[0])
    cols = []
    for k in range(ncols):
        entries = [row[k] for row in rows]
        data = [_point_data(x) for x in entries]
        n, exact = _compositum_degree(data, degree_mode)
        delta = Fraction(1) if all(d.real for d in data) else Fraction(1, 2)
        p_exp = 1 - delta * n
        k_const = Fraction(1)
        for d in data:
            k_const *= pow_lower(Fraction(d.length), Fraction(-delta * n, d.degree))
        m_up = _sup_abs_bound(entries)
        c_affine = pow_lower(1 + 2 * m_up, p_exp) * k_const
        c_k = min(c_affine, k_const, Fraction(1))
        a_k = max(delta * n - 1, Fraction(0))
        cols.append(ColumnCertificate(
            column=k, c_value=c_k, a_value=a_k,
            affine_constant=c_affine, homogeneous_constant=k_const,
            power=p_exp, compositum_degree=n, degree_is_exact=exact,
            realness=delta,
            lengths=tuple(d.length for d in data),
            degrees=tuple(d.degree for d in data),
            sup_bound=m_up))
    return Condition2Certificate(
        columns=tuple(cols),
        c_overall=min(c.c_value for c in cols),
        a_overall=max(c.a_value for c in cols))
