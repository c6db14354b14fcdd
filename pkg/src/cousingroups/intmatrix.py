"""Exact integer matrix utilities: HNF, kernels, unimodular completion.

Everything here is plain list-of-lists over Python ints; numpy floats
never enter. Matrices are row-major; "row HNF" means U @ A = H with U
unimodular, H in row echelon form with positive pivots and entries
above each pivot reduced to [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def mat_vec(a: IntMatrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*a)] if a else []


def hnf_row(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns (H, U) with U @ A = H and
    det U = +-1. Zero rows of H sink to the bottom."""
    m = len(a)
    n = len(a[0]) if m else 0
    h = [[int(x) for x in row] for row in a]
    u = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # euclidean elimination below position (r, c)
        while True:
            below = [i for i in range(r, m) if h[i][c] != 0]
            if not below:
                break
            i0 = min(below, key=lambda i: abs(h[i][c]))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            done = True
            for i in range(r + 1, m):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if h[r][c] != 0:
            # reduce entries above the pivot into [0, pivot)
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    return h, u


def rank_int(a: IntMatrix) -> int:
    h, _ = hnf_row(a)
    return sum(1 for row in h if any(row))


def kernel_int(a: IntMatrix) -> IntMatrix:
    """Basis of the saturated integer kernel {x : A @ x = 0}, as rows.

    Rows of the HNF transform that map A^T to zero rows span exactly
    the lattice of integer relations, so the result is saturated by
    construction (an integer multiple in the kernel implies the vector
    itself is)."""
    at = transpose(a)
    if not at:
        return identity(len(a[0]) if a else 0)
    h, u = hnf_row(at)
    out = [u[i] for i in range(len(h)) if not any(h[i])]
    return out


def det_int(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    m = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix (still integer)."""
    n = len(u)
    d = det_int(u)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    # Gauss-Jordan over Fraction, then the result is integral
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(u)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = [[x for x in row[n:]] for row in aug]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


def is_unimodular(a: IntMatrix) -> bool:
    return len(a) > 0 and len(a) == len(a[0]) and det_int(a) in (1, -1)


def unimodular_complete(rows: IntMatrix, n: int) -> IntMatrix:
    """Extend k primitive, saturated rows to an n x n unimodular matrix
    whose first k rows are exactly the input."""
    k = len(rows)
    if k == 0:
        return identity(n)
    if any(len(r) != n for r in rows):
        raise ValueError("row length mismatch")
    h, u = hnf_row(transpose(rows))  # u: n x n, u @ rows^T = [t; 0]
    t = [r[:k] for r in h[:k]]
    if det_int(t) not in (1, -1):
        raise ValueError("rows do not span a saturated sublattice")
    w0 = transpose(inverse_unimodular(u))
    # first k rows of w0 span the same lattice as the input; fix them up
    tt = transpose(t)
    top = mat_mul(tt, w0[:k])
    out = top + w0[k:]
    if out[:k] != [list(map(int, r)) for r in rows]:
        raise AssertionError("completion failed to reproduce the input rows")
    return out
