from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cousingroups.intmatrix import (
    det_int,
    hnf_row,
    identity,
    inverse_unimodular,
    is_unimodular,
    kernel_int,
    mat_mul,
    mat_vec,
    rank_int,
    transpose,
    unimodular_complete,
)

small_mats = st.lists(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=3),
    min_size=2, max_size=4)


def test_hnf_known_example():
    a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    h, u = hnf_row(a)
    assert mat_mul(u, a) == h
    assert det_int(u) in (1, -1)
    # pivots positive, echelon shape
    assert h[0][0] > 0


@settings(max_examples=60)
@given(small_mats)
def test_hnf_invariants(a):
    h, u = hnf_row(a)
    assert mat_mul(u, a) == h
    assert det_int(u) in (1, -1)
    # echelon: pivot columns strictly increase
    pivots = []
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            pivots.append(nz[0])
            assert row[nz[0]] > 0
    assert pivots == sorted(pivots)
    for p, j in enumerate(pivots):
        col = [h[i][j] for i in range(p)]
        assert all(0 <= x < h[p][j] for x in col)


def test_rank_matches_numpy():
    a = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_int(a) == np.linalg.matrix_rank(np.array(a, dtype=float))


def test_kernel_simple():
    a = [[2, 1]]
    k = kernel_int(a)
    assert len(k) == 1
    v = k[0]
    assert 2 * v[0] + 1 * v[1] == 0
    # saturated: the generator is primitive
    from math import gcd
    assert gcd(v[0], v[1]) == 1


def test_kernel_is_saturated():
    # x + 2y + 4z = 0, 3x + 6y + 12z = 0 (dependent): kernel rank 2
    a = [[1, 2, 4], [3, 6, 12]]
    k = kernel_int(a)
    assert len(k) == 2
    for v in k:
        assert mat_vec(a, v) == [0, 0]
    # (2, -1, 0) is in the kernel and must be an integer combination
    target = [2, -1, 0]
    assert mat_vec(a, target) == [0, 0]
    # solve c1*k0 + c2*k1 = target over Q and demand integrality
    m = transpose(k)
    sols = np.linalg.lstsq(np.array(m, dtype=float),
                           np.array(target, dtype=float), rcond=None)[0]
    assert np.allclose(sols, np.round(sols), atol=1e-9)


@settings(max_examples=60)
@given(small_mats)
def test_kernel_property(a):
    k = kernel_int(a)
    for v in k:
        assert all(x == 0 for x in mat_vec(a, v))
    assert len(k) == len(a[0]) - rank_int(a)


def test_det_against_numpy():
    a = [[3, 1, -2], [0, 4, 5], [7, -1, 2]]
    assert det_int(a) == round(np.linalg.det(np.array(a, dtype=float)))
    assert det_int(identity(4)) == 1
    assert det_int([[2, 4], [1, 2]]) == 0


def test_inverse_unimodular():
    u = [[1, 2], [1, 3]]
    v = inverse_unimodular(u)
    assert mat_mul(u, v) == identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular([[2, 0], [0, 1]])


def test_unimodular_complete_basic():
    rows = [[1, 2, 3]]
    w = unimodular_complete(rows, 3)
    assert w[0] == [1, 2, 3]
    assert is_unimodular(w)


def test_unimodular_complete_two_rows():
    rows = [[1, 0, 2, 0], [0, 1, 3, 1]]
    w = unimodular_complete(rows, 4)
    assert w[:2] == rows
    assert is_unimodular(w)


def test_unimodular_complete_rejects_imprimitive():
    with pytest.raises(ValueError):
        unimodular_complete([[2, 4, 6]], 3)
