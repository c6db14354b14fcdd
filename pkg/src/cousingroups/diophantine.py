"""Bounded scans of the distance from t(sigma)S to the integer lattice.

For each integer vector sigma the quantity of interest is

    delta(sigma) = || t(sigma) S + tau* ||

where tau* is the componentwise nearest integer to -t(sigma)S (ties to
even).  A scan walks 0 < |sigma|_inf <= B over canonical representatives
(delta is even in sigma), keeps the running minima as gap records, fits
exponential and polynomial envelopes, and can cross-check the envelope
certificates produced by the bound module.

The heavy loop runs in numpy with explicit error radii; floats only ever
nominate candidates, every reported number is re-derived in exact
arithmetic.  Shards partition the candidate search; the exact post-pass
makes the final report byte-identical for any shard count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .intervals import ComplexInterval, Interval
from .liouville import Condition2Certificate, pow_lower_pos
from .numberfield import AlgebraicNumber, compare_real, fresh_root, nearest_int
from .scalars import Scalar, demote, s_abs2, s_add, s_box, s_mul, s_re

# e truncated to 18 places: a certified lower bracket of the base
_E_LOWER = Fraction(2718281828459045235, 10 ** 18)


def exp_neg_upper(x: Fraction) -> Fraction:
    """Rational upper bound for exp(-x), x >= 0."""
    if x < 0:
        raise ValueError("need x >= 0")
    return 1 / pow_lower_pos(_E_LOWER, Fraction(x))


@dataclass(frozen=True)
class GapRecord:
    sigma: tuple[int, ...]
    tau_star: tuple[int, ...]
    delta: Interval
    norm_kind: str

    @property
    def is_zero(self) -> bool:
        return self.delta.hi == 0


@dataclass(frozen=True)
class ScanReport:
    """Shard count is deliberately not recorded: reports are required to
    be identical for any shard split of the same scan."""
    bound: int
    norm_kind: str
    records: tuple[GapRecord, ...]
    violation: tuple[int, ...] | None
    sigma_scanned: int
    l1_lower: dict[int, Fraction]          # certified per-|sigma|_1 minima
    env_c: Fraction | None
    env_a: Fraction | None
    poly_c: Fraction | None
    poly_p: Fraction | None

    @property
    def ok(self) -> bool:
        return self.violation is None


# ---------------------------------------------------------------------
# exact gap evaluation
# ---------------------------------------------------------------------


class _GapWorkspace:
    """Holds the matrix, snapshot entry boxes per refinement level, and
    exact per-coordinate pairings for one scan.

    The interval side reads only the level snapshots, which are built
    from freshly re-isolated roots in increasing level order; certified
    output is therefore a pure function of the matrix values, no matter
    what else refined the shared root objects (repeat runs, other shard
    counts, exact side trips)."""

    def __init__(self, rows: Sequence[Sequence[Scalar]], norm_kind: str):
        if norm_kind not in ("inf", "euclid"):
            raise ValueError(f"unknown norm {norm_kind!r}")
        self.rows = [[demote(x) for x in row] for row in rows]
        if not self.rows or not self.rows[0]:
            raise ValueError("empty matrix")
        self.n = len(self.rows)
        self.m = len(self.rows[0])
        if any(len(r) != self.m for r in self.rows):
            raise ValueError("ragged matrix")
        self.norm_kind = norm_kind
        self._fresh = [[fresh_root(x) if isinstance(x, AlgebraicNumber) else x
                        for x in row] for row in self.rows]
        self._levels: list[list[list[ComplexInterval]]] = []

    def boxes(self, level: int) -> list[list[ComplexInterval]]:
        while len(self._levels) <= level:
            eps = Fraction(1, 2 ** (48 * (len(self._levels) + 1)))
            self._levels.append([[s_box(x, eps) for x in row]
                                 for row in self._fresh])
        return self._levels[level]

    def pairing_box(self, sigma, k, level: int) -> ComplexInterval:
        bx = self.boxes(level)
        acc = ComplexInterval.point(Fraction(0))
        for i, s in enumerate(sigma):
            if s:
                acc = acc + bx[i][k] * ComplexInterval.point(Fraction(s))
        return acc

    def pairing_exact(self, sigma, k) -> Scalar:
        acc: Scalar = Fraction(0)
        for i, s in enumerate(sigma):
            if s:
                acc = s_add(acc, s_mul(Fraction(s), self.rows[i][k]))
        return acc

    def tau_star(self, sigma) -> tuple[int, ...]:
        """Componentwise nearest integer to -t(sigma)S, ties to even.
        Interval separation first, exact tie-break as fallback."""
        out = []
        for k in range(self.m):
            for level in range(4):
                re = self.pairing_box(sigma, k, level).re
                lo_n = _nearest_float(re.lo)
                hi_n = _nearest_float(re.hi)
                if lo_n == hi_n and not _touches_half(re):
                    out.append(-lo_n)
                    break
            else:
                out.append(-nearest_int(s_re(self.pairing_exact(sigma, k))))
        return tuple(out)

    def delta_interval(self, sigma, tau, level: int) -> Interval:
        mags = []
        for k in range(self.m):
            c = self.pairing_box(sigma, k, level) + ComplexInterval.point(Fraction(tau[k]))
            mags.append(c.mag2())
        if self.norm_kind == "inf":
            m2 = Interval.of(max(m.lo for m in mags), max(m.hi for m in mags))
        else:
            lo = sum(m.lo for m in mags)
            hi = sum(m.hi for m in mags)
            m2 = Interval.of(lo, hi)
        return m2.sqrt(96)

    def delta_abs2_exact(self, sigma, tau) -> Scalar:
        """Exact squared gap (max-coordinate for inf, sum for euclid)."""
        coords = []
        for k in range(self.m):
            c = s_add(self.pairing_exact(sigma, k), Fraction(tau[k]))
            coords.append(s_abs2(c))
        if self.norm_kind == "euclid":
            acc: Scalar = Fraction(0)
            for c in coords:
                acc = s_add(acc, c)
            return acc
        best = coords[0]
        for c in coords[1:]:
            if compare_real(c, best) > 0:
                best = c
        return best

    def is_violation(self, sigma) -> bool:
        return all(_is_integer(self.pairing_exact(sigma, k)) for k in range(self.m))


def _is_integer(v: Scalar) -> bool:
    v = demote(v)
    return isinstance(v, Fraction) and v.denominator == 1


def _nearest_float(x: Fraction) -> int:
    # round-half-even on an exact rational
    q, r = divmod(x.numerator, x.denominator)
    twice = 2 * r
    if twice < x.denominator:
        return q
    if twice > x.denominator:
        return q + 1
    return q if q % 2 == 0 else q + 1


def _touches_half(iv: Interval) -> bool:
    # does the interval contain a half-integer (odd multiple of 1/2)?
    lo2, hi2 = 2 * iv.lo, 2 * iv.hi
    k = math.ceil(lo2)
    if k % 2 == 0:
        k += 1
    return Fraction(k) <= hi2


def gap(s_matrix: Sequence[Sequence[Scalar]], sigma: Sequence[int],
        norm_kind: str = "inf") -> GapRecord:
    """Certified gap for one sigma: positive interval, or the exact-zero
    record that marks a cousin violation."""
    sigma = tuple(int(s) for s in sigma)
    if not any(sigma):
        raise ValueError("sigma must be nonzero")
    ws = _GapWorkspace(s_matrix, norm_kind)
    return _certify(ws, sigma)


def _certify(ws: _GapWorkspace, sigma: tuple[int, ...]) -> GapRecord:
    tau = ws.tau_star(sigma)
    for level in range(6):
        iv = ws.delta_interval(sigma, tau, level)
        if iv.lo > 0:
            return GapRecord(sigma, tau, iv, ws.norm_kind)
    if ws.is_violation(sigma):
        return GapRecord(sigma, tau, Interval.point(Fraction(0)), ws.norm_kind)
    # nonzero but tiny: keep tightening until the interval clears zero
    level = 6
    while True:
        iv = ws.delta_interval(sigma, tau, level)
        if iv.lo > 0:
            return GapRecord(sigma, tau, iv, ws.norm_kind)
        level += 1


# ---------------------------------------------------------------------
# shell enumeration (numpy)
# ---------------------------------------------------------------------


def _shell(n: int, t: int) -> np.ndarray:
    """All sigma with |sigma|_inf == t, canonical (first nonzero > 0),
    in lexicographic order."""
    faces = []
    for axis in range(n):
        inner = [np.arange(-(t - 1), t) for _ in range(axis)]
        outer = [np.arange(-t, t + 1) for _ in range(n - 1 - axis)]
        grids = inner + [np.array([-t, t])] + outer
        mesh = np.meshgrid(*grids, indexing="ij")
        faces.append(np.stack([g.ravel() for g in mesh], axis=1))
    sig = np.concatenate(faces, axis=0)
    # canonical representatives
    sign = np.zeros(len(sig), dtype=np.int64)
    for i in range(n):
        undecided = sign == 0
        sign[undecided] = np.sign(sig[undecided, i])
    sig = sig[sign > 0]
    order = np.lexsort(tuple(sig[:, i] for i in reversed(range(n))))
    return sig[order]


# ---------------------------------------------------------------------
# the scan
# ---------------------------------------------------------------------


def scan(s_matrix: Sequence[Sequence[Scalar]], bound: int,
         norm_kind: str = "inf", shards: int = 1) -> ScanReport:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    ws = _GapWorkspace(s_matrix, norm_kind)
    n, m = ws.n, ws.m

    vals = np.empty((n, m), dtype=np.complex128)
    errs = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        for k in range(m):
            b = s_box(ws.rows[i][k], Fraction(1, 2 ** 52))
            vals[i, k] = complex(float(b.re.lo + b.re.hi) / 2,
                                 float(b.im.lo + b.im.hi) / 2)
            errs[i, k] = float(b.width) + 1e-13 * (1 + abs(vals[i, k]))

    max_l1 = n * bound
    table_f = np.full(max_l1 + 1, np.inf)
    etmax = np.zeros(max_l1 + 1)
    # running minimum opens at the trivial scale 1: a gap only counts as
    # a record once it beats that (real pairings always do, delta <= 1/2)
    running_hi = np.full(shards, 1.0)
    viol_rows: list[np.ndarray] = []
    rec_rows: list[np.ndarray] = []
    scanned = 0

    def shard_deltas(sig):
        v = sig.astype(np.float64) @ vals
        fr = v.real - np.rint(v.real)
        cm = np.sqrt(fr * fr + v.imag * v.imag)
        if norm_kind == "inf":
            d = cm.max(axis=1)
        else:
            d = np.sqrt((cm * cm).sum(axis=1))
        e = np.abs(sig).astype(np.float64) @ errs
        et = e.max(axis=1) if norm_kind == "inf" else e.sum(axis=1)
        et = et + 1e-12 * (1 + d)
        return d, et

    # phase 1: float minima per |sigma|_1, violation and record candidates
    offset = 0
    for t in range(1, bound + 1):
        sig = _shell(n, t)
        scanned += len(sig)
        idx = offset + np.arange(len(sig))
        offset += len(sig)
        for j in range(shards):
            part = sig[idx % shards == j]
            if not len(part):
                continue
            d, et = shard_deltas(part)
            l1 = np.abs(part).sum(axis=1)
            np.minimum.at(table_f, l1, d - et)
            np.maximum.at(etmax, l1, et)
            viol_rows.append(part[d <= et])
            hi = d + et
            prefix = np.minimum.accumulate(np.concatenate(([running_hi[j]], hi[:-1])))
            rec_rows.append(part[d - et < prefix])
            running_hi[j] = min(running_hi[j], hi.min())

    # phase 2: candidates for the certified per-l1 minima (class-wide
    # error radius, so the true class minimum always gets nominated)
    l1_rows: list[np.ndarray] = []
    for t in range(1, bound + 1):
        sig = _shell(n, t)
        d, et = shard_deltas(sig)
        l1 = np.abs(sig).sum(axis=1)
        l1_rows.append(sig[d - et <= table_f[l1] + 2 * etmax[l1] + 1e-12])

    # exact post-pass ------------------------------------------------
    def as_tuples(chunks):
        out = set()
        for c in chunks:
            for row in c:
                out.add(tuple(int(x) for x in row))
        return out

    violation = None
    for sigma in sorted(as_tuples(viol_rows), key=_scan_key):
        if ws.is_violation(sigma):
            violation = sigma
            break

    cache: dict[tuple[int, ...], GapRecord] = {}

    def certified(sigma) -> GapRecord:
        if sigma not in cache:
            cache[sigma] = _certify(ws, sigma)
        return cache[sigma]

    records: list[GapRecord] = []
    if violation is None:
        cur: GapRecord | None = None
        for sigma in sorted(as_tuples(rec_rows), key=_scan_key):
            rec = certified(sigma)
            take = _delta_below_one(ws, rec) if cur is None \
                else _delta_less(ws, rec, cur)
            if take:
                records.append(rec)
                cur = rec

    l1_lower: dict[int, Fraction] = {}
    if violation is None:
        for sigma in sorted(as_tuples(l1_rows), key=_scan_key):
            rec = certified(sigma)
            l1 = sum(abs(s) for s in sigma)
            lo = rec.delta.lo
            if l1 not in l1_lower or lo < l1_lower[l1]:
                l1_lower[l1] = lo

    env_c = env_a = poly_c = poly_p = None
    if violation is None:
        env_c, env_a, poly_c, poly_p = _fit_envelopes(records, l1_lower)

    return ScanReport(bound=bound, norm_kind=norm_kind,
                      records=tuple(records), violation=violation,
                      sigma_scanned=scanned, l1_lower=l1_lower,
                      env_c=env_c, env_a=env_a, poly_c=poly_c, poly_p=poly_p)


def _scan_key(sigma: tuple[int, ...]):
    return (max(abs(s) for s in sigma), sigma)


def _delta_less(ws: _GapWorkspace, a: GapRecord, b: GapRecord) -> bool:
    """Exact strict comparison delta(a) < delta(b)."""
    if a.delta.hi < b.delta.lo:
        return True
    if a.delta.lo > b.delta.hi:
        return False
    if a.delta.hi == 0:
        return b.delta.lo > 0
    x = ws.delta_abs2_exact(a.sigma, a.tau_star)
    y = ws.delta_abs2_exact(b.sigma, b.tau_star)
    return compare_real(x, y) < 0


def _delta_below_one(ws: _GapWorkspace, a: GapRecord) -> bool:
    if a.delta.hi < 1:
        return True
    if a.delta.lo >= 1:
        return False
    x = ws.delta_abs2_exact(a.sigma, a.tau_star)
    return compare_real(x, Fraction(1)) < 0


# ---------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------


def fit_envelopes(report: ScanReport) -> tuple[tuple[Fraction, Fraction],
                                               tuple[Fraction, Fraction]]:
    """Envelope constants ((env_C, a), (C', p)) recomputed from a clean
    report; scan() already embeds the same values."""
    if report.violation is not None:
        raise ValueError("cannot fit envelopes on a violated scan")
    env_c, env_a, poly_c, poly_p = _fit_envelopes(report.records,
                                                  report.l1_lower)
    return (env_c, env_a), (poly_c, poly_p)


def _fit_envelopes(records: Sequence[GapRecord],
                   l1_lower: dict[int, Fraction]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(env_C, a) with a = 0, and (C', p): every scanned sigma satisfies
    delta >= env_C * exp(-a |sigma|_1) and delta >= C' * |sigma|_1^p.

    The exponent p is a least-squares slope of log delta against
    log |sigma|_1 over the records (clamped to p <= 0, 1/16 grid); both
    constants are then the exact minima that make the envelopes hold for
    every entry of the certified table, so the result is sound by
    construction and re-verifiable."""
    if not l1_lower:
        raise ValueError("empty scan")
    env_c = min(l1_lower.values())
    env_a = Fraction(0)

    pts = [(math.log(sum(abs(s) for s in r.sigma)), math.log(float(r.delta.mid)))
           for r in records if sum(abs(s) for s in r.sigma) >= 2 and r.delta.lo > 0]
    if len(pts) >= 2:
        xbar = sum(x for x, _ in pts) / len(pts)
        ybar = sum(y for _, y in pts) / len(pts)
        den = sum((x - xbar) ** 2 for x, _ in pts)
        slope = sum((x - xbar) * (y - ybar) for x, y in pts) / den if den else 0.0
        poly_p = Fraction(round(slope * 16), 16)
    else:
        poly_p = Fraction(0)
    poly_p = min(poly_p, Fraction(0))

    poly_c = None
    for l1, lo in l1_lower.items():
        cand = lo * pow_lower_pos(Fraction(l1), -poly_p)
        if poly_c is None or cand < poly_c:
            poly_c = cand
    return env_c, env_a, poly_c, poly_p


def check_against_certificate(report: ScanReport,
                              cert: Condition2Certificate) -> bool:
    """True iff every certified scan minimum clears the theoretical
    envelope from the certificate: for each |sigma|_1 class, the table's
    lower end must be >= max_k C_k exp(-a_k |sigma|_1) (the gap dominates
    each coordinate, so the strongest column applies)."""
    if report.violation is not None:
        return False
    for l1, lo in report.l1_lower.items():
        theory = max(col.c_value * exp_neg_upper(col.a_value * l1)
                     for col in cert.columns)
        if lo < theory:
            return False
    return True
