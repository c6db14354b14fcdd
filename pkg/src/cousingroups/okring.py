"""Arithmetic in a monogenic order Z[alpha] of a number field.

The context fixes a monic irreducible integer polynomial; elements are
integer coordinate vectors in the power basis 1, alpha, ..., alpha^(n-1).
On top of the exact ring come the certified embeddings into R^s x C^t,
unit detection through integer resultants, the weighted logarithm map,
and a rank check for subgroups of totally positive units.

Everything computed here lives in Z[alpha], which may sit with finite
index inside the ring of integers; reports carry the flag "Z[alpha]" so
downstream consumers know which lattice was actually used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .intervals import ComplexInterval, Interval, log_interval
from .numberfield import AlgebraicNumber, PrecisionError, roots_of_irreducible
from .polynomials import IntPolynomial, factor_int, power_sums, resultant_int

ORDER_FLAG = "Z[alpha]"

_EPS0 = Fraction(1, 2 ** 48)


@dataclass(frozen=True)
class FieldContext:
    """Degree-n field presented by a monic irreducible polynomial.

    roots holds the s real embeddings ascending, then one representative
    per conjugate pair from the upper half-plane; that fixed order is
    what every embedding-indexed vector in this module refers to."""

    minpoly: IntPolynomial
    s: int
    t: int
    roots: tuple

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def m(self) -> int:
        return self.s + self.t

    def element(self, coords: Iterable[int]) -> "OKElement":
        return OKElement(self, tuple(int(c) for c in coords))

    def zero(self) -> "OKElement":
        return self.element([0] * self.degree)

    def one(self) -> "OKElement":
        return self.element([1] + [0] * (self.degree - 1))

    def generator(self) -> "OKElement":
        if self.degree < 2:
            raise ValueError("degree-1 context has no generator besides 1")
        return self.element([0, 1] + [0] * (self.degree - 2))


def field_context(minpoly, *, mixed_signature: bool = False) -> FieldContext:
    """Build a context; mixed_signature demands s >= 1 and t >= 1."""
    p = minpoly if isinstance(minpoly, IntPolynomial) else IntPolynomial(minpoly)
    if p.degree < 1:
        raise ValueError("context needs a polynomial of degree >= 1")
    if not p.is_monic():
        raise ValueError("monogenic order needs a monic polynomial")
    factors = factor_int(p)
    if len(factors) != 1 or factors[0][1] != 1 or factors[0][0].degree != p.degree:
        raise ValueError(f"{list(p.coeffs)} is not irreducible")
    roots = roots_of_irreducible(p)
    s = sum(1 for r in roots if isinstance(r, Fraction) or r.is_real)
    t = len(roots) - s
    if mixed_signature and (s == 0 or t == 0):
        raise ValueError(f"signature ({s},{t}) has no mixed embeddings")
    return FieldContext(p, s, t, tuple(roots))


def _reduce_mod(coeffs: list[int], minpoly: IntPolynomial) -> tuple[int, ...]:
    # division by a monic polynomial keeps everything integral
    n = minpoly.degree
    work = list(coeffs)
    for i in range(len(work) - 1, n - 1, -1):
        c = work[i]
        if c:
            for j in range(n):
                work[i - n + j] -= c * minpoly.coeffs[j]
            work[i] = 0
    out = work[:n]
    out += [0] * (n - len(out))
    return tuple(out)


@dataclass(frozen=True)
class OKElement:
    ctx: FieldContext
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.ctx.degree:
            raise ValueError("coordinate length does not match the context")

    def coordinate_poly(self) -> IntPolynomial:
        return IntPolynomial(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other: "OKElement") -> "OKElement":
        self._same_ctx(other)
        return OKElement(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "OKElement") -> "OKElement":
        self._same_ctx(other)
        return OKElement(self.ctx, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "OKElement":
        return OKElement(self.ctx, tuple(-a for a in self.coords))

    def __mul__(self, other: "OKElement") -> "OKElement":
        self._same_ctx(other)
        n = self.ctx.degree
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        return OKElement(self.ctx, _reduce_mod(prod, self.ctx.minpoly))

    def __pow__(self, e: int) -> "OKElement":
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.ctx.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self) -> "OKElement":
        """Inverse inside Z[alpha]; defined exactly for units."""
        if abs(norm(self)) != 1:
            raise ValueError("only units have an inverse in the order")
        inv = _poly_inverse_mod(self.coordinate_poly(), self.ctx.minpoly)
        return OKElement(self.ctx, inv)

    def _same_ctx(self, other: "OKElement") -> None:
        if self.ctx.minpoly != other.ctx.minpoly:
            raise ValueError("elements from different contexts")


def _poly_inverse_mod(g: IntPolynomial, p: IntPolynomial) -> tuple[int, ...]:
    # extended Euclid over Q[z]; the unit inverse lands back in Z[alpha],
    # so the rational coefficients must clear to integers
    r0 = [Fraction(c) for c in p.coeffs]
    r1 = [Fraction(c) for c in g.coeffs]
    s0, s1 = [Fraction(0)], [Fraction(1)]

    def deg(v):
        d = len(v) - 1
        while d >= 0 and v[d] == 0:
            d -= 1
        return d

    while deg(r1) > 0:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    d1 = deg(r1)
    if d1 < 0:
        raise ArithmeticError("element shares a factor with the minimal polynomial")
    lead = r1[d1]
    inv = [c / lead for c in s1]
    out = []
    for c in inv[:p.degree] + [Fraction(0)] * p.degree:
        if len(out) == p.degree:
            break
        if c.denominator != 1:
            raise ArithmeticError("inverse left the order")
        out.append(int(c))
    return tuple(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    db = len(b) - 1
    while db >= 0 and b[db] == 0:
        db -= 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        c = a[i] / b[db]
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# ---------------------------------------------------------------------
# norms, traces, embeddings
# ---------------------------------------------------------------------


def norm(a: OKElement) -> int:
    """Field norm, exact: product of a over all embeddings."""
    if a.is_zero():
        return 0
    return resultant_int(a.ctx.minpoly, a.coordinate_poly())


def trace(a: OKElement) -> int:
    """Field trace, exact: sum of a over all embeddings."""
    sums = power_sums(a.ctx.minpoly, a.ctx.degree - 1)
    return sum(c * sums[k] for k, c in enumerate(a.coords))


def _root_box(root, eps: Fraction) -> ComplexInterval:
    if isinstance(root, AlgebraicNumber):
        return root.refine(eps)
    return ComplexInterval.point(Fraction(root))


def embed(a: OKElement, eps: Fraction = _EPS0) -> tuple[ComplexInterval, ...]:
    """Certified image of a under the s+t ordered embeddings."""
    g = a.coordinate_poly()
    return tuple(g.eval_cinterval(_root_box(r, eps)) for r in a.ctx.roots)


def is_totally_positive_unit(a: OKElement) -> bool:
    if abs(norm(a)) != 1:
        return False
    g = a.coordinate_poly()
    for j in range(a.ctx.s):
        eps = _EPS0
        for _ in range(24):
            iv = g.eval_cinterval(_root_box(a.ctx.roots[j], eps)).re
            if iv.lo > 0:
                break
            if iv.hi < 0:
                return False
            eps = eps * _EPS0
        else:  # pragma: no cover - a unit's embedding cannot be zero
            raise PrecisionError("sign of a real embedding did not resolve")
    return True


def log_map(a: OKElement, target_width: Fraction = Fraction(1, 2 ** 40)) -> tuple[Interval, ...]:
    """Weighted logs of the embedding moduli: weight 1 on the s real
    components, 2 on the t complex ones.  For a unit the components sum
    to an interval around 0 no wider than m * target_width."""
    if a.is_zero():
        raise ValueError("the log map needs a nonzero element")
    g = a.coordinate_poly()
    out = []
    for j, root in enumerate(a.ctx.roots):
        weight = Fraction(1 if j < a.ctx.s else 2, 2)
        eps = _EPS0
        prec = 96
        for _ in range(24):
            mag2 = g.eval_cinterval(_root_box(root, eps)).mag2()
            if mag2.lo > 0:
                comp = log_interval(mag2, prec) * weight
                if comp.width <= target_width:
                    out.append(comp)
                    break
            eps = eps * _EPS0
            prec *= 2
        else:  # pragma: no cover - nonzero values separate at finite eps
            raise PrecisionError("embedding modulus did not separate from 0")
    return tuple(out)


# ---------------------------------------------------------------------
# unit subgroups and admissibility
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class UnitSubgroup:
    generators: tuple[OKElement, ...]

    def __post_init__(self):
        ctxs = {g.ctx.minpoly for g in self.generators}
        if len(ctxs) > 1:
            raise ValueError("generators from different contexts")


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the rank-s check on the projected log vectors.

    status is one of admissible / inadmissible / indeterminate; rank
    deficiency is only ever asserted from exact multiplicative
    relations, never from intervals that merely look small, so an
    unresolved rank surfaces as indeterminate."""

    status: str
    rank_needed: int
    pr_rank_certified: int
    log_rank_lower: int
    log_rank_upper: int
    notes: tuple[str, ...]
    order: str = ORDER_FLAG

    @property
    def ok(self) -> bool:
        return self.status == "admissible"


_RELATION_EXP = 6


def _power_relations(gens: Sequence[OKElement]) -> tuple[list[str], list[int]]:
    """Exact small-exponent relations g_i^a = g_j^b; returns notes and a
    union-find parent table over the generator indices."""
    parent = list(range(len(gens)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    notes = []
    powers = [{e: g ** e for e in range(1, _RELATION_EXP + 1)} for g in gens]
    for i, j in itertools.combinations(range(len(gens)), 2):
        done = False
        for ei in range(1, _RELATION_EXP + 1):
            for ej in range(1, _RELATION_EXP + 1):
                if powers[i][ei].coords == powers[j][ej].coords:
                    notes.append(f"generator {i}^{ei} = generator {j}^{ej}")
                    parent[find(i)] = find(j)
                    done = True
                    break
            if done:
                break
    return notes, [find(i) for i in range(len(gens))]


def _interval_rank(cols: list[list[Interval]], need: int) -> bool:
    """True iff some need x need minor certifiably has nonzero determinant."""
    if need == 0:
        return True
    if len(cols) < need or (cols and len(cols[0]) < need):
        return False
    rows = len(cols[0])
    for rsel in itertools.combinations(range(rows), need):
        for csel in itertools.combinations(range(len(cols)), need):
            det = _interval_det([[cols[c][r] for c in csel] for r in rsel])
            if det.lo > 0 or det.hi < 0:
                return True
    return False


def _interval_det(m: list[list[Interval]]) -> Interval:
    if len(m) == 1:
        return m[0][0]
    acc = Interval.point(0)
    sign = 1
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _interval_det(minor)
        acc = acc + (term if sign > 0 else -term)
        sign = -sign
    return acc


def check_admissible(group: UnitSubgroup) -> AdmissibilityReport:
    """Decide whether the projected log vectors of the generators span
    rank s; exactness rules: positive rank comes from interval minors,
    rank deficits only from exact relations."""
    gens = list(group.generators)
    for i, g in enumerate(gens):
        if not is_totally_positive_unit(g):
            raise ValueError(f"generator {i} is not a totally positive unit")
    if not gens:
        raise ValueError("empty generator list")
    ctx = gens[0].ctx
    s, m = ctx.s, ctx.m

    notes = []
    live = []
    for i, g in enumerate(gens):
        if g.is_rational():
            notes.append(f"generator {i} is rational, log vector is zero")
        else:
            live.append((i, g))

    rel_notes, roots_table = _power_relations([g for _, g in live])
    notes.extend(rel_notes)
    classes = len(set(roots_table))

    log_rank_upper = min(classes, len(live))
    if m > 1:
        log_rank_upper = min(log_rank_upper, m - 1)

    if classes < s:
        notes.append(f"at most {classes} independent generators for rank {s}")
        return AdmissibilityReport("inadmissible", s, 0, 0,
                                   log_rank_upper, tuple(notes))

    pr_ok = False
    log_rank_lower = 0
    width = Fraction(1, 2 ** 40)
    for _ in range(4):
        logs = [log_map(g, target_width=width) for _, g in live]
        pr_cols = [[row[k] for k in range(s)] for row in logs]
        full_cols = [list(row) for row in logs]
        pr_ok = _interval_rank(pr_cols, s)
        log_rank_lower = 0
        for r in range(min(m, len(live)), 0, -1):
            if _interval_rank(full_cols, r):
                log_rank_lower = r
                break
        if pr_ok:
            break
        width = width * width
    if s == 0:
        pr_ok = True

    if pr_ok:
        status = "admissible"
    else:
        # intervals could not certify rank s and no exact deficit exists
        status = "indeterminate"
        notes.append("rank not separated from a deficit at maximum precision")
    return AdmissibilityReport(status, s, s if pr_ok else 0,
                               log_rank_lower, log_rank_upper, tuple(notes))


# ---------------------------------------------------------------------
# brute-force unit search
# ---------------------------------------------------------------------


def unit_search(ctx: FieldContext, height: int) -> list[OKElement]:
    """Totally positive units with coordinates in [-height, height]^n,
    in lexicographic coordinate order.  Float norms over the coordinate
    grid nominate candidates; integer resultants decide."""
    if height < 1:
        raise ValueError("height bound must be >= 1")
    n = ctx.degree
    root_vals = np.array([complex(_root_box(r, Fraction(1, 2 ** 60)).mid()[0],
                                  _root_box(r, Fraction(1, 2 ** 60)).mid()[1])
                          for r in ctx.roots])
    # power table: vandermonde in the embeddings
    powers = np.vander(root_vals, n, increasing=True)          # (m, n)

    axis = np.arange(-height, height + 1)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)       # (G, n)

    out = []
    for start in range(0, len(coords), 200_000):
        chunk = coords[start:start + 200_000]
        emb = chunk.astype(np.float64) @ powers.T               # (g, m)
        normf = np.ones(len(chunk))
        for j in range(ctx.m):
            col = emb[:, j]
            if j < ctx.s:
                normf = normf * col.real
            else:
                normf = normf * (col.real ** 2 + col.imag ** 2)
        near = np.abs(np.abs(normf) - 1.0) < 0.45
        for row in chunk[near]:
            cand = ctx.element(row)
            if is_totally_positive_unit(cand):
                out.append(cand)
    out.sort(key=lambda e: e.coords)
    return out
