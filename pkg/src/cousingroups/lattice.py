"""Period matrices, lattice-density criteria, and both normal forms.

A period matrix is an n x r array of exact scalars whose columns
generate a rank-r lattice in C^n. The two criteria decide, up to a
bound, whether the quotient has dense "irrational winding" in every
direction; the two normal forms reshape a basis to (I_n | S) and to the
torus/real block form. All rank and membership decisions are exact:
floating point appears only as a screening step whose rejections carry
a rigorous error bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .numberfield import PrecisionError, compare_real
from .scalars import (
    Scalar,
    demote,
    format_scalar,
    parse_scalar,
    s_add,
    s_approx,
    s_box,
    s_conj,
    s_div,
    s_im,
    s_is_real,
    s_is_zero,
    s_mul,
    s_neg,
    s_re,
    s_sub,
)


class DegenerateLattice(ValueError):
    """Columns fail to span C^n over C."""


class IndeterminateRank(ArithmeticError):
    """A rank decision did not resolve at maximum refinement."""


# ---------------------------------------------------------------------
# exact linear algebra over the scalar tower
# ---------------------------------------------------------------------


def _rref(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form with exact zero tests; returns the
    reduced rows and the pivot column indices."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if not s_is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = s_div(Fraction(1), rows[r][c])
        rows[r] = [s_mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not s_is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [s_sub(x, s_mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def exact_rank(rows: list[list[Scalar]]) -> int:
    return len(_rref(rows)[1])


def solve_exact(basis_cols: list[list[Scalar]], targets: list[list[Scalar]]) -> list[list[Scalar]]:
    """Solve B x = t column-wise for square invertible B given by
    columns; returns solution columns."""
    n = len(basis_cols)
    if any(len(c) != len(basis_cols[0]) for c in basis_cols):
        raise ValueError("ragged basis")
    rows = []
    for i in range(len(basis_cols[0])):
        rows.append([c[i] for c in basis_cols] + [t[i] for t in targets])
    red, pivots = _rref(rows)
    if pivots[:n] != list(range(n)):
        raise DegenerateLattice("basis columns are linearly dependent")
    out = []
    for j in range(len(targets)):
        out.append([red[i][n + j] for i in range(n)])
    return out


def _det(rows: list[list[Scalar]]) -> Scalar:
    """Exact determinant by Laplace expansion (matrices here are tiny)."""
    k = len(rows)
    if k == 0:
        return Fraction(1)
    if k == 1:
        return rows[0][0]
    total: Scalar = Fraction(0)
    for j, x in enumerate(rows[0]):
        if s_is_zero(x):
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = s_mul(x, _det(minor))
        total = s_add(total, term if j % 2 == 0 else s_neg(term))
    return total


def gram_volume_sq(cols: list[list[Scalar]]) -> Scalar:
    """det of the Hermitian Gram matrix of the columns: the squared
    volume of the parallelotope they span (real, >= 0)."""
    g = []
    for a in cols:
        row = []
        for b in cols:
            acc: Scalar = Fraction(0)
            for x, y in zip(a, b):
                acc = s_add(acc, s_mul(s_conj(x), y))
            row.append(acc)
        g.append(row)
    return _det(g)


# ---------------------------------------------------------------------
# period matrices
# ---------------------------------------------------------------------


class PeriodMatrix:
    """n x r exact matrix whose columns generate the lattice."""

    __slots__ = ("rows", "n", "r")

    def __init__(self, rows: Sequence[Sequence[Scalar]]):
        rows = [[demote(x) for x in row] for row in rows]
        if not rows or not rows[0]:
            raise ValueError("empty period matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged period matrix")
        self.rows = rows
        self.n = len(rows)
        self.r = width

    def column(self, j: int) -> list[Scalar]:
        return [self.rows[i][j] for i in range(self.n)]

    def columns(self) -> list[list[Scalar]]:
        return [self.column(j) for j in range(self.r)]

    def approx(self) -> list[list[complex]]:
        return [[s_approx(x) for x in row] for row in self.rows]

    def __repr__(self):
        return f"PeriodMatrix(n={self.n}, r={self.r})"


def parse_matrix_text(text: str) -> PeriodMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    try:
        fields = dict(kv.split("=", 1) for kv in head)
        n, r = int(fields["n"]), int(fields["r"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"bad header {lines[0]!r}: expected 'n=<int> r=<int>'") from exc
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} rows, found {len(body)}")
    rows = []
    for ln in body:
        entries = [parse_scalar(tok) for tok in ln.split()]
        if len(entries) != r:
            raise ValueError(f"expected {r} entries per row, got {len(entries)} in {ln!r}")
        rows.append(entries)
    return PeriodMatrix(rows)


def format_matrix_text(p: PeriodMatrix) -> str:
    out = [f"n={p.n} r={p.r}"]
    for row in p.rows:
        out.append(" ".join(format_scalar(x) for x in row))
    return "\n".join(out) + "\n"


def real_rank(p: PeriodMatrix) -> int:
    """Rank over R of the 2n x r real-imaginary expansion, exact."""
    rows: list[list[Scalar]] = []
    for row in p.rows:
        rows.append([s_re(x) for x in row])
    for row in p.rows:
        rows.append([s_im(x) for x in row])
    try:
        return exact_rank(rows)
    except PrecisionError as exc:  # pragma: no cover - algebraic entries decide exactly
        raise IndeterminateRank(str(exc)) from exc


# ---------------------------------------------------------------------
# lattice-density criteria (bounded scans)
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    bound: int
    violation: tuple[int, ...] | None
    sigma_checked: int

    @property
    def ok(self) -> bool:
        return self.violation is None


def _is_integer_scalar(v: Scalar) -> bool:
    # exact: scalar ops demote, so an integral value always lands as a
    # Fraction with denominator 1
    v = demote(v)
    return isinstance(v, Fraction) and v.denominator == 1


def _float_view(rows: list[list[Scalar]]) -> tuple[list[list[complex]], list[list[float]]]:
    """Approximations plus per-entry error radii for screening."""
    vals, errs = [], []
    eps = Fraction(1, 2 ** 60)
    for row in rows:
        vrow, erow = [], []
        for x in row:
            b = s_box(x, eps)
            vrow.append(complex(float(b.re.lo + b.re.hi) / 2, float(b.im.lo + b.im.hi) / 2))
            erow.append(float(b.width) + 2.0 ** -50)
        vals.append(vrow)
        errs.append(erow)
    return vals, errs


def _sigma_box(n: int, bound: int) -> Iterable[tuple[int, ...]]:
    """All integer vectors in [-B, B]^n except zero, lexicographic."""
    def rec(prefix: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
        if len(prefix) == n:
            if any(prefix):
                yield prefix
            return
        for v in range(-bound, bound + 1):
            yield from rec(prefix + (v,))
    return rec(())


def _cousin_scan(rows: list[list[Scalar]], bound: int) -> CheckOutcome:
    """First sigma (lexicographic) whose pairing with every column is
    integral; rejections are screened in floats with rigorous error."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    n = len(rows)
    m = len(rows[0]) if rows and rows[0] else 0
    vals, errs = _float_view(rows)
    checked = 0
    for sigma in _sigma_box(n, bound):
        checked += 1
        if m == 0:
            # empty criterion: the all-integral condition is vacuous,
            # so the very first sigma is already a violation
            return CheckOutcome(bound, sigma, checked)
        candidate = True
        for k in range(m):
            z = sum(s * vals[i][k] for i, s in enumerate(sigma))
            err = sum(abs(s) * errs[i][k] for i, s in enumerate(sigma))
            if abs(z.imag) > err or abs(z.real - round(z.real)) > err:
                candidate = False
                break
        if not candidate:
            continue
        # exact confirmation
        if all(_is_integer_scalar(_pair(rows, sigma, k)) for k in range(m)):
            return CheckOutcome(bound, sigma, checked)
    return CheckOutcome(bound, None, checked)


def _pair(rows: list[list[Scalar]], sigma: Sequence[int], k: int) -> Scalar:
    acc: Scalar = Fraction(0)
    for i, s in enumerate(sigma):
        if s:
            acc = s_add(acc, s_mul(Fraction(s), rows[i][k]))
    return acc


def cousin_check_form1(s_matrix: Sequence[Sequence[Scalar]], bound: int) -> CheckOutcome:
    """Tests t(sigma) S not in Z^m over 0 < |sigma|_inf <= bound."""
    rows = [[demote(x) for x in row] for row in s_matrix]
    return _cousin_scan(rows, bound)


def cousin_check_form2(r_matrix: Sequence[Sequence[Scalar]], bound: int) -> CheckOutcome:
    """Same contract over the real block: sigma in Z^(n-m), columns 2m."""
    rows = [[demote(x) for x in row] for row in r_matrix]
    for row in rows:
        for x in row:
            if not s_is_real(x):
                raise ValueError("form-2 block must be real")
    if not rows:
        # n = m: empty quantifier, vacuously no violation
        return CheckOutcome(bound, None, 0)
    return _cousin_scan(rows, bound)


# ---------------------------------------------------------------------
# normal form 1: (I_n | S)
# ---------------------------------------------------------------------


@dataclass
class NormalForm1:
    s_matrix: list[list[Scalar]]          # n x m
    basis_change: list[list[Scalar]]      # n x n, applied on the left
    unimodular: list[list[int]]           # r x r column permutation
    chosen: tuple[int, ...]               # column indices forming the C-basis


def _greedy_basis(columns: list[list[Scalar]], n: int) -> tuple[int, ...]:
    """Greedy column choice maximizing the certified squared volume,
    ties broken by lowest index."""
    chosen: list[int] = []
    for _ in range(n):
        best_j, best_vol = None, Fraction(0)
        for j in range(len(columns)):
            if j in chosen:
                continue
            vol = gram_volume_sq([columns[c] for c in chosen] + [columns[j]])
            if compare_real(_as_real(vol), _as_real(best_vol)) > 0:
                best_j, best_vol = j, vol
        if best_j is None:
            raise DegenerateLattice("no C-spanning column subset")
        chosen.append(best_j)
    return tuple(sorted(chosen))


def _as_real(v: Scalar):
    # Gram volumes are real by construction; strip a Gaussian wrapper
    if not s_is_real(v):
        raise ArithmeticError("volume came out non-real")
    return s_re(v)


def _permutation_matrix(order: Sequence[int]) -> list[list[int]]:
    r = len(order)
    u = [[0] * r for _ in range(r)]
    for new_pos, old_idx in enumerate(order):
        u[old_idx][new_pos] = 1
    return u


def _mat_mul_scalar(a: list[list[Scalar]], b: list[list[Scalar]]) -> list[list[Scalar]]:
    out = []
    for row in a:
        out_row = []
        for col in zip(*b):
            acc: Scalar = Fraction(0)
            for x, y in zip(row, col):
                acc = s_add(acc, s_mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def normal_form_1(p: PeriodMatrix) -> NormalForm1:
    cols = p.columns()
    chosen = _greedy_basis(cols, p.n)
    rest = [j for j in range(p.r) if j not in chosen]
    basis = [cols[j] for j in chosen]
    # basis_change = B^(-1): solve B X = I_n
    eye = [[Fraction(int(i == k)) for i in range(p.n)] for k in range(p.n)]
    binv_cols = solve_exact(basis, eye)
    basis_change = [[binv_cols[j][i] for j in range(p.n)] for i in range(p.n)]
    s_cols = solve_exact(basis, [cols[j] for j in rest])
    s_matrix = [[s_cols[j][i] for j in range(len(rest))] for i in range(p.n)]
    unimodular = _permutation_matrix(list(chosen) + rest)
    return NormalForm1(s_matrix, basis_change, unimodular, chosen)


def apply_transforms(p: PeriodMatrix, basis_change: list[list[Scalar]],
                     unimodular: list[list[int]]) -> list[list[Scalar]]:
    """basis_change @ P @ unimodular, exact."""
    u_scalar = [[Fraction(x) for x in row] for row in unimodular]
    return _mat_mul_scalar(_mat_mul_scalar(basis_change, p.rows), u_scalar)


# ---------------------------------------------------------------------
# normal form 2: ((0, T), (I_{n-m}, R))
# ---------------------------------------------------------------------


@dataclass
class NormalForm2:
    torus: list[list[Scalar]]             # m x 2m, shape (I_m | S')
    r_matrix: list[list[Scalar]]          # (n-m) x 2m, real entries
    basis_change: list[list[Scalar]]      # n x n
    unimodular: list[list[int]]           # r x r permutation
    m: int
    chosen_f: tuple[int, ...]             # columns mapped to (0; I_{n-m})
    chosen_torus: tuple[int, ...]         # columns whose V-parts give I_m


def _column_to_real(col: list[Scalar]) -> list[Scalar]:
    return [s_re(x) for x in col] + [s_im(x) for x in col]


def _real_to_complex(vec: list[Scalar], n: int) -> list[Scalar]:
    from .scalars import I_UNIT
    return [s_add(vec[i], s_mul(vec[n + i], I_UNIT)) for i in range(n)]


def _max_subspace_basis(real_cols: list[list[Scalar]], n: int) -> list[list[Scalar]]:
    """Basis (complex n-vectors) of the largest complex subspace inside
    the real span of the columns: V = span_R(cols) intersect J(span_R)."""
    # J acts on R^(2n) as (x, y) -> (-y, x)
    j_cols = [[s_neg(v) for v in col[n:]] + list(col[:n]) for col in real_cols]
    k = len(real_cols)
    # solve A u = J A w: stack [A | -JA], kernel gives (u, w)
    rows = []
    for i in range(2 * n):
        rows.append([real_cols[c][i] for c in range(k)]
                    + [s_neg(j_cols[c][i]) for c in range(k)])
    red, pivots = _rref(rows)
    free = [c for c in range(2 * k) if c not in pivots]
    basis_real: list[list[Scalar]] = []
    for fc in free:
        sol: list[Scalar] = [Fraction(0)] * (2 * k)
        sol[fc] = Fraction(1)
        for rrow, pc in zip(red, pivots):
            sol[pc] = s_neg(rrow[fc])
        u = sol[:k]
        vec = [Fraction(0)] * (2 * n)
        for c in range(k):
            if not s_is_zero(u[c]):
                vec = [s_add(v, s_mul(u[c], real_cols[c][i])) for i, v in enumerate(vec)]
        basis_real.append(vec)
    # kernel elements with u = 0 give the zero vector; drop and reduce
    cvecs = [_real_to_complex(v, n) for v in basis_real]
    red2, piv2 = _rref([list(r) for r in zip(*cvecs)]) if cvecs else ([], [])
    return [cvecs[j] for j in piv2]


def normal_form_2(p: PeriodMatrix) -> NormalForm2:
    n, r = p.n, p.r
    m = r - n
    if not 1 <= m <= n:
        raise DegenerateLattice(f"corank {m} outside [1, {n}]")
    cols = p.columns()
    real_cols = [_column_to_real(c) for c in cols]
    if exact_rank([list(row) for row in zip(*real_cols)]) != r:
        raise DegenerateLattice("columns are not R-independent")
    v_basis = _max_subspace_basis(real_cols, n)
    if len(v_basis) != m:
        raise IndeterminateRank(
            f"maximal complex subspace has dimension {len(v_basis)}, expected {m}")

    # pick n-m lattice columns independent modulo V (greedy by index)
    chosen_f: list[int] = []
    base_rank = exact_rank([list(row) for row in zip(*v_basis)])
    span = list(v_basis)
    for j in range(r):
        if len(chosen_f) == n - m:
            break
        cand = span + [cols[j]]
        if exact_rank([list(row) for row in zip(*cand)]) == base_rank + len(chosen_f) + 1:
            chosen_f.append(j)
            span = cand
    if len(chosen_f) != n - m:
        raise DegenerateLattice("could not complete the transverse block")
    torus_idx = [j for j in range(r) if j not in chosen_f]

    # V-coordinates of the torus columns: lambda = Vb @ c + mu @ d
    mixed_basis = v_basis + [cols[j] for j in chosen_f]
    coords = solve_exact(mixed_basis, [cols[j] for j in torus_idx])
    v_parts = [c[:m] for c in coords]

    # choose m torus columns whose V-parts form a basis (greedy volume)
    sub = _greedy_basis([list(vp) for vp in v_parts], m)
    chosen_torus = tuple(torus_idx[i] for i in sub)
    # new V-basis: the V-components (as vectors in C^n) of those columns
    new_v_basis = []
    for i in sub:
        vec = [Fraction(0)] * n
        for a in range(m):
            vec = [s_add(x, s_mul(v_parts[i][a], v_basis[a][row])) for row, x in enumerate(vec)]
        new_v_basis.append(vec)

    full_basis = new_v_basis + [cols[j] for j in chosen_f]
    # basis_change: inverse of the basis matrix
    eye = [[Fraction(int(i == k)) for i in range(n)] for k in range(n)]
    ginv_cols = solve_exact(full_basis, eye)
    basis_change = [[ginv_cols[j][i] for j in range(n)] for i in range(n)]

    order = list(chosen_f) + list(chosen_torus) + [j for j in torus_idx if j not in chosen_torus]
    unimodular = _permutation_matrix(order)
    transformed = apply_transforms(p, basis_change, unimodular)

    # blocks: first n-m columns must be (0; I); remaining 2m split T / R
    torus_block = [row[n - m:] for row in transformed[:m]]
    r_block = [row[n - m:] for row in transformed[m:]]
    for row in r_block:
        for x in row:
            if not s_is_real(x):
                raise ArithmeticError("transverse block has a non-real entry")
    return NormalForm2(torus_block, r_block, basis_change, unimodular, m,
                       tuple(chosen_f), chosen_torus)
