"""Automorphy data over Cousin-group lattices, handled on the Fourier side.

A summand over a lattice in the split normal form is stored as one finite
frequency table per generator.  Everything in this module is coefficient
algebra: axiom checks against sampled evaluations, the compatibility
relation tying the tables of two generators together, and the scaling rule
that extends a table from whole lattice steps to rational multiples of the
generators.

Frequencies are integer vectors pairing against the trailing block of
coordinates.  Whether such a pairing is an integer is always decided
exactly on the scalar representation, never by a floating comparison; the
two-branch scaling rule and the vanishing side of the compatibility
relation both hinge on that decision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .intervals import ComplexInterval, cis2pi_interval
from .numberfield import AlgebraicNumber
from .scalars import (
    GaussianRational,
    Scalar,
    demote,
    format_scalar,
    parse_scalar,
    s_add,
    s_box,
    s_im,
    s_is_real,
    s_is_zero,
    s_mul,
    s_re,
)

TRUNCATION_DEFAULT = 16
DEFECT_THRESHOLD = 1e-10
DECOMPOSITION_ORDER = "generator index ascending"

Sigma = tuple[int, ...]
Coef = tuple[Fraction, Fraction]
Evaluator = Callable[[Sequence[int], Sequence[Scalar]], complex]

__all__ = [
    "TRUNCATION_DEFAULT",
    "DEFECT_THRESHOLD",
    "DECOMPOSITION_ORDER",
    "SummandFourier",
    "CocycleReport",
    "AxiomReport",
    "ExtensionReport",
    "cocycle_parametrization",
    "frequency_pairing",
    "one_minus_cis",
    "fourier_cocycle_check",
    "extension_coefficient",
    "extend_summand",
    "extend_summand_report",
    "check_summand_axioms",
    "check_factor_axioms",
]


def _scalar(v) -> Scalar:
    if isinstance(v, (Fraction, GaussianRational, AlgebraicNumber)):
        return v
    if isinstance(v, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, complex):
        return demote(GaussianRational(Fraction(v.real), Fraction(v.imag)))
    if isinstance(v, str):
        return parse_scalar(v)
    raise TypeError(f"cannot interpret {v!r} as a scalar")


def _coef(v) -> Coef:
    if isinstance(v, (tuple, list)) and len(v) == 2:
        return (Fraction(v[0]), Fraction(v[1]))
    if isinstance(v, complex):
        return (Fraction(v.real), Fraction(v.imag))
    if isinstance(v, (int, float, Fraction, str)):
        return (Fraction(v), Fraction(0))
    if isinstance(v, GaussianRational):
        return (v.re, v.im)
    raise TypeError(f"cannot interpret {v!r} as a table coefficient")


def _coef_complex(c: Coef) -> complex:
    return complex(float(c[0]), float(c[1]))


def _is_integer(v: Scalar) -> bool:
    v = demote(v)
    return isinstance(v, Fraction) and v.denominator == 1


def frequency_pairing(sigma: Sequence[int], coords: Sequence[Scalar]) -> Scalar:
    """Exact value of the integer pairing sum(sigma[k] * coords[k])."""
    acc: Scalar = Fraction(0)
    for s, x in zip(sigma, coords, strict=True):
        if s:
            acc = s_add(acc, s_mul(Fraction(s), _scalar(x)))
    return demote(acc)


def _real_fraction(x: Scalar) -> Fraction:
    # the rational cases stay exact; algebraic values pass through a
    # certified box and lose nothing that a float could have kept
    x = demote(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, GaussianRational):
        return x.re
    return s_box(x, Fraction(1, 2**64)).re.mid


def _one_minus_cis_float(u: Fraction) -> complex:
    # 1 - e^{2i pi u} = -2i sin(pi u) e^{i pi u}; reducing u into
    # [-1/2, 1/2) first keeps relative accuracy near the zeros
    u = u - math.floor(u)
    if 2 * u >= 1:
        u -= 1
    t = math.pi * float(u)
    return -2j * math.sin(t) * cmath.exp(1j * t)


def _phase_factor(p: Scalar) -> complex:
    """Float value of e^{2 i pi p} with the real part reduced exactly mod 1.

    The exact reduction is what makes evaluations strictly periodic under
    integer shifts of the trailing coordinates when the sample point is
    rational: the reduced fraction is identical, so the float result is.
    """
    re = _real_fraction(s_re(p))
    im = _real_fraction(s_im(p))
    re = re - math.floor(re)
    return cmath.exp(2j * math.pi * complex(float(re), float(im)))


def one_minus_cis(x: Scalar, prec: int = 96) -> ComplexInterval:
    """Certified box around 1 - e^{2 i pi x} for a real scalar x.

    Integer x is decided exactly and returns the zero point box, so the
    vanishing side of the compatibility relation never rests on rounding.
    """
    if not s_is_real(x):
        raise ValueError("pairing must be real to exponentiate on the circle")
    if _is_integer(x):
        return ComplexInterval.point(0)
    x = demote(x)
    arg = x if isinstance(x, Fraction) else s_box(x, Fraction(1, 2**64)).re
    return ComplexInterval.point(1) - cis2pi_interval(arg, prec)


# ---------------------------------------------------------------------
# the table type
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class SummandFourier:
    """Per-generator frequency tables over a rank n+m lattice.

    ``columns`` holds the n+m generator vectors, each of length ``n``.
    The block split sits at coordinate ``m``: the leading ``m`` entries
    are the torus directions, the trailing ``n - m`` entries pair with
    the tables' integer frequencies.  A generator whose column lies in
    the pure integer block (zero head, integer tail) must carry an empty
    table; ``build`` enforces this.

    Tables map frequency vectors to exact (re, im) rational pairs.  Zero
    coefficients are dropped on construction, so emptiness checks and
    equality are meaningful.
    """

    n: int
    m: int
    columns: tuple[tuple[Scalar, ...], ...]
    tables: tuple[dict[Sigma, Coef], ...]
    truncation: int = TRUNCATION_DEFAULT

    @classmethod
    def build(
        cls,
        n: int,
        m: int,
        columns: Iterable[Sequence],
        tables: Sequence[Mapping],
        truncation: int = TRUNCATION_DEFAULT,
    ) -> "SummandFourier":
        if not 1 <= m < n:
            raise ValueError("block split needs 1 <= m < n")
        if truncation < 1:
            raise ValueError("truncation must be positive")
        cols = tuple(tuple(_scalar(x) for x in col) for col in columns)
        if len(cols) != n + m:
            raise ValueError(f"expected {n + m} generators, got {len(cols)}")
        if any(len(c) != n for c in cols):
            raise ValueError("every generator must have n coordinates")
        if len(tables) != len(cols):
            raise ValueError("one table per generator")
        width = n - m
        norm: list[dict[Sigma, Coef]] = []
        for tab in tables:
            out: dict[Sigma, Coef] = {}
            for key, val in tab.items():
                sig = tuple(int(s) for s in key)
                if len(sig) != width:
                    raise ValueError(f"frequency {sig} must have {width} entries")
                if any(abs(s) > truncation for s in sig):
                    raise ValueError(f"frequency {sig} exceeds truncation {truncation}")
                c = _coef(val)
                if c != (0, 0):
                    out[sig] = c
            norm.append(out)
        made = cls(n, m, cols, tuple(norm), truncation)
        for j in range(len(cols)):
            if made.in_integer_block(j) and norm[j]:
                raise ValueError(
                    f"generator {j} lies in the integer block; its table must vanish"
                )
        return made

    @property
    def rank(self) -> int:
        return len(self.columns)

    def trailing_coords(self, j: int) -> tuple[Scalar, ...]:
        """The last n-m coordinates of generator j (what frequencies pair with)."""
        return self.columns[j][self.m:]

    def in_integer_block(self, j: int) -> bool:
        col = self.columns[j]
        if not all(s_is_zero(x) for x in col[: self.m]):
            return False
        return all(_is_integer(x) for x in col[self.m:])

    def value(self, ratios: Sequence, z: Sequence) -> complex:
        return extend_summand(self, ratios, z)

    def to_json(self) -> dict:
        tabs: dict[str, list] = {}
        for j, tab in enumerate(self.tables):
            rows = [
                {"sigma": list(sig), "re": str(c[0]), "im": str(c[1])}
                for sig, c in sorted(tab.items())
            ]
            if rows:
                tabs[str(j)] = rows
        return {
            "n": self.n,
            "m": self.m,
            "truncation": self.truncation,
            "columns": [[format_scalar(x) for x in col] for col in self.columns],
            "tables": tabs,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SummandFourier":
        cols = data["columns"]
        raw: list[dict] = [{} for _ in cols]
        for key, rows in data.get("tables", {}).items():
            j = int(key)
            raw[j] = {
                tuple(int(s) for s in row["sigma"]): (
                    _json_fraction(row["re"]),
                    _json_fraction(row["im"]),
                )
                for row in rows
            }
        return cls.build(
            int(data["n"]),
            int(data["m"]),
            cols,
            raw,
            int(data.get("truncation", TRUNCATION_DEFAULT)),
        )


def _json_fraction(v) -> Fraction:
    # string coefficients are exact rationals; bare numbers are floats
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(float(v))


def cocycle_parametrization(
    n: int,
    m: int,
    columns: Iterable[Sequence],
    shared: Mapping,
    truncation: int = TRUNCATION_DEFAULT,
) -> SummandFourier:
    """Tables induced by one shared family of frequency constants.

    Generator j receives coefficient shared[sigma] * (1 - e^{2 i pi x})
    where x is the pairing of sigma with j's trailing coordinates.  Built
    this way, any two generators satisfy the compatibility relation
    identically, and integer-block generators come out with vanishing
    tables because their pairings are integers.
    """
    cols = [tuple(_scalar(x) for x in col) for col in columns]
    tables: list[dict[Sigma, complex]] = []
    for col in cols:
        trail = col[m:]
        tab: dict[Sigma, complex] = {}
        for key, val in shared.items():
            sig = tuple(int(s) for s in key)
            x = frequency_pairing(sig, trail)
            if not s_is_real(x):
                raise ValueError("pairing must be real")
            if _is_integer(x):
                continue
            tab[sig] = _coef_complex(_coef(val)) * _one_minus_cis_float(_real_fraction(x))
        tables.append(tab)
    return SummandFourier.build(n, m, cols, tables, truncation)


# ---------------------------------------------------------------------
# coefficient compatibility between two generators
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class CocycleReport:
    generator_pair: tuple[int, int]
    defects: tuple[tuple[Sigma, float], ...]
    max_defect: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.threshold


def fourier_cocycle_check(
    a: SummandFourier,
    i: int,
    j: int,
    *,
    threshold: float = DEFECT_THRESHOLD,
) -> CocycleReport:
    """Check the two generators' tables against each other, frequency by frequency.

    For every frequency in either table the two cross products
    coefficient_i * (1 - e^{2 i pi <sigma, trailing_j>}) and
    coefficient_j * (1 - e^{2 i pi <sigma, trailing_i>}) must agree.  The
    exponential factors are enclosed with interval arithmetic (exact zero
    when the pairing is an integer), so each reported defect is a proven
    upper bound on the modulus of the difference.
    """
    if not (0 <= i < a.rank and 0 <= j < a.rank):
        raise ValueError("generator index out of range")
    ti, tj = a.tables[i], a.tables[j]
    trail_i, trail_j = a.trailing_coords(i), a.trailing_coords(j)
    defects: list[tuple[Sigma, float]] = []
    worst = 0.0
    for sig in sorted(set(ti) | set(tj)):
        ci = ComplexInterval.point(*ti.get(sig, (Fraction(0), Fraction(0))))
        cj = ComplexInterval.point(*tj.get(sig, (Fraction(0), Fraction(0))))
        cross_i = ci * one_minus_cis(frequency_pairing(sig, trail_j))
        cross_j = cj * one_minus_cis(frequency_pairing(sig, trail_i))
        d = float((cross_i - cross_j).mag(96).hi)
        defects.append((sig, d))
        worst = max(worst, d)
    return CocycleReport((i, j), tuple(defects), worst, threshold)


# ---------------------------------------------------------------------
# extension to rational multiples of the generators
# ---------------------------------------------------------------------


def extension_coefficient(sigma: Sequence[int], ratio, trailing: Sequence) -> complex:
    """Scaling factor turning a whole-step coefficient into an r-step one.

    Two branches, chosen by the exact integrality of the pairing x of
    ``sigma`` with the generator's trailing coordinates: the generic value
    (1 - e^{2 i pi r x}) / (1 - e^{2 i pi x}), or its limit r when x is an
    integer.  Ratio 1 returns exactly 1 and ratio 0 exactly 0.  Values can
    be large in modulus when x sits near (but not at) an integer; no bound
    is asserted, callers inspect the modulus where it matters.
    """
    r = Fraction(ratio)
    x = frequency_pairing(tuple(int(s) for s in sigma), tuple(_scalar(v) for v in trailing))
    if not s_is_real(x):
        raise ValueError("pairing must be real")
    if _is_integer(x):
        return complex(r)
    if r == 1:
        return complex(1)
    if r == 0:
        return complex(0)
    num = _one_minus_cis_float(_real_fraction(s_mul(r, x)))
    den = _one_minus_cis_float(_real_fraction(x))
    return num / den


@dataclass(frozen=True)
class ExtensionReport:
    value: complex
    order: str
    truncation: int
    scaling_peak: float


def extend_summand_report(a: SummandFourier, ratios: Sequence, z: Sequence) -> ExtensionReport:
    """Evaluate the extension of ``a`` at x = sum(ratios[j] * generator[j]).

    The point x splits into scaled generator steps in a fixed order
    (ascending generator index, echoed in the report); each step is the
    truncated frequency sum of its own table, scaled per frequency by
    extension_coefficient and taken at the sample point shifted by all
    later steps.  The report also carries the largest scaling modulus
    seen, since no a-priori bound on it is asserted.
    """
    rr = tuple(Fraction(r) for r in ratios)
    if len(rr) != a.rank:
        raise ValueError("one ratio per generator")
    zz = tuple(_scalar(v) for v in z)
    if len(zz) != a.n:
        raise ValueError("sample point must have n coordinates")
    width = a.n - a.m

    # shifts[j] = trailing part of sum(ratios[k] * generator[k] for k > j)
    shifts: list[tuple[Scalar, ...]] = [()] * a.rank
    acc: tuple[Scalar, ...] = tuple(Fraction(0) for _ in range(width))
    for jj in reversed(range(a.rank)):
        shifts[jj] = acc
        if rr[jj]:
            trail = a.trailing_coords(jj)
            acc = tuple(s_add(t, s_mul(rr[jj], x)) for t, x in zip(acc, trail))

    base = zz[a.m:]
    total = 0j
    peak = 0.0
    for jj in range(a.rank):
        if not rr[jj] or not a.tables[jj]:
            continue
        point = tuple(s_add(zc, sh) for zc, sh in zip(base, shifts[jj]))
        trail = a.trailing_coords(jj)
        for sig in sorted(a.tables[jj]):
            scale = extension_coefficient(sig, rr[jj], trail)
            peak = max(peak, abs(scale))
            coeff = _coef_complex(a.tables[jj][sig])
            total += coeff * scale * _phase_factor(frequency_pairing(sig, point))
    return ExtensionReport(total, DECOMPOSITION_ORDER, a.truncation, peak)


def extend_summand(a: SummandFourier, ratios: Sequence, z: Sequence) -> complex:
    return extend_summand_report(a, ratios, z).value


# ---------------------------------------------------------------------
# sampled axiom checks
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    kind: str
    samples: int
    cocycle_defect: float
    identity_defect: float
    threshold: float

    @property
    def passed(self) -> bool:
        return max(self.cocycle_defect, self.identity_defect) <= self.threshold


def _lattice_vector(cols: Sequence[tuple[Scalar, ...]], coeffs: Sequence[int]) -> tuple[Scalar, ...]:
    vec: list[Scalar] = [Fraction(0)] * len(cols[0])
    for c, col in zip(coeffs, cols, strict=True):
        if c:
            vec = [s_add(v, s_mul(Fraction(c), x)) for v, x in zip(vec, col)]
    return tuple(vec)


def check_summand_axioms(
    a: Evaluator,
    columns: Iterable[Sequence],
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]],
    points: Sequence[Sequence],
    *,
    threshold: float = DEFECT_THRESHOLD,
) -> AxiomReport:
    """Sampled test of the additive transformation rules.

    ``a`` is any callable taking (integer generator coefficients, sample
    point) to a complex value.  Checked over the supplied pairs and
    points: the step rule a(c + c', z) = a(c, z + step(c')) + a(c', z),
    where step(c') realizes c' against ``columns``, and the vanishing of
    a at the zero coefficient vector.
    """
    cols = tuple(tuple(_scalar(x) for x in col) for col in columns)
    rank = len(cols)
    zero = (0,) * rank
    pts = [tuple(_scalar(v) for v in p) for p in points]
    worst_cocycle = 0.0
    worst_identity = 0.0
    count = 0
    for p in pts:
        worst_identity = max(worst_identity, abs(a(zero, p)))
        count += 1
    for raw1, raw2 in pairs:
        c1 = tuple(int(v) for v in raw1)
        c2 = tuple(int(v) for v in raw2)
        step = _lattice_vector(cols, c2)
        csum = tuple(u + v for u, v in zip(c1, c2))
        for p in pts:
            shifted = tuple(s_add(zc, sv) for zc, sv in zip(p, step))
            defect = abs(a(csum, p) - a(c1, shifted) - a(c2, p))
            worst_cocycle = max(worst_cocycle, defect)
            count += 1
    return AxiomReport("summand", count, worst_cocycle, worst_identity, threshold)


def check_factor_axioms(
    alpha: Evaluator,
    columns: Iterable[Sequence],
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]],
    points: Sequence[Sequence],
    *,
    threshold: float = DEFECT_THRESHOLD,
) -> AxiomReport:
    """Multiplicative analogue of check_summand_axioms.

    Checked: alpha(c + c', z) = alpha(c, z + step(c')) * alpha(c', z) and
    alpha(0, z) = 1.
    """
    cols = tuple(tuple(_scalar(x) for x in col) for col in columns)
    rank = len(cols)
    zero = (0,) * rank
    pts = [tuple(_scalar(v) for v in p) for p in points]
    worst_cocycle = 0.0
    worst_identity = 0.0
    count = 0
    for p in pts:
        worst_identity = max(worst_identity, abs(alpha(zero, p) - 1))
        count += 1
    for raw1, raw2 in pairs:
        c1 = tuple(int(v) for v in raw1)
        c2 = tuple(int(v) for v in raw2)
        step = _lattice_vector(cols, c2)
        csum = tuple(u + v for u, v in zip(c1, c2))
        for p in pts:
            shifted = tuple(s_add(zc, sv) for zc, sv in zip(p, step))
            defect = abs(alpha(csum, p) - alpha(c1, shifted) * alpha(c2, p))
            worst_cocycle = max(worst_cocycle, defect)
            count += 1
    return AxiomReport("factor", count, worst_cocycle, worst_identity, threshold)
