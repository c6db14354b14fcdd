"""Lower-bound certificates for integer forms in algebraic numbers.

Expected bounds below were computed by hand from the length/degree
formula (lengths from the minimal polynomials, exponents written out),
then sanity-checked against interval evaluations of the forms.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cousingroups import liouville as lv
from cousingroups import polynomials as poly
from cousingroups import numberfield as nf
from cousingroups.scalars import parse_scalar, s_box, s_is_zero, s_sub

SQRT2 = parse_scalar("alg([-2,0,1];1)")
I_UNIT = parse_scalar("0+1*i")


# -- rational power bracketing -------------------------------------------


def test_pow_integer_exponents_exact():
    assert lv.pow_upper(Fraction(3), Fraction(2)) == 9
    assert lv.pow_lower(Fraction(3), Fraction(-2)) == Fraction(1, 9)
    assert lv.pow_lower(Fraction(5, 2), Fraction(0)) == 1


def test_pow_half_exponent_brackets():
    up = lv.pow_upper(Fraction(2), Fraction(1, 2))
    assert float(up) >= 2 ** 0.5
    lo = lv.pow_lower(Fraction(2), Fraction(-3, 2))
    assert 0 < float(lo) <= 2 ** -1.5


@given(st.fractions(min_value=1, max_value=50), st.integers(min_value=0, max_value=6))
def test_pow_upper_dominates(x, twice_e):
    e = Fraction(twice_e, 2)
    assert float(lv.pow_upper(x, e)) >= float(x) ** float(e) - 1e-9


def test_pow_rejects_bad_domain():
    with pytest.raises(ValueError):
        lv.pow_upper(Fraction(1, 2), Fraction(1))
    with pytest.raises(ValueError):
        lv.pow_lower(Fraction(2), Fraction(1))


# -- multivariate terms ---------------------------------------------------


def test_multipoly_basics():
    p = lv.MultiPolynomial(2, {(1, 0): 3, (0, 2): -4, (0, 0): 0})
    assert p.length() == 7
    assert p.partial_degrees() == (1, 2)
    assert not p.is_zero()
    assert lv.MultiPolynomial(1, {(0,): 0}).is_zero()


def test_multipoly_exact_eval():
    p = lv.MultiPolynomial(1, {(2,): 1, (0,): -2})
    assert s_is_zero(p.eval_exact([SQRT2]))


# -- the headline bound ----------------------------------------------------


def test_bound_linear_at_sqrt2():
    p = lv.MultiPolynomial(1, {(1,): 1, (0,): -1})
    c = lv.poly_lower_bound(p, [SQRT2])
    assert c.status == "nonzero_with_bound"
    assert c.bound == Fraction(1, 6)
    assert (c.realness, c.compositum_degree) == (1, 2)
    assert abs(2 ** 0.5 - 1) >= c.bound


def test_bound_detects_minimal_polynomial_zero():
    p = lv.MultiPolynomial(1, {(2,): 1, (0,): -2})
    c = lv.poly_lower_bound(p, [SQRT2])
    assert c.status == "exact_zero"
    assert c.bound is None


def test_bound_mixed_real_complex_point():
    p = lv.MultiPolynomial(2, {(1, 0): 1, (0, 1): 1})
    c = lv.poly_lower_bound(p, [SQRT2, I_UNIT])
    assert c.bound == Fraction(1, 12)
    assert c.realness == Fraction(1, 2)
    assert c.compositum_degree == 4
    assert abs(2 ** 0.5 + 1j) >= c.bound


def test_exact_degree_mode_never_weaker():
    sqrt8 = parse_scalar("alg([-8,0,1];1)")
    p = lv.MultiPolynomial(2, {(1, 0): 1, (0, 1): 1, (0, 0): 1})
    safe = lv.poly_lower_bound(p, [SQRT2, sqrt8], "safe_upper")
    exact = lv.poly_lower_bound(p, [SQRT2, sqrt8], "exact")
    assert exact.compositum_degree == 2
    assert exact.degree_is_exact and not safe.degree_is_exact
    assert safe.bound <= exact.bound


def test_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        lv.poly_lower_bound(lv.MultiPolynomial(1, {}), [SQRT2])


# -- linear forms ----------------------------------------------------------


def test_linear_affine_branch():
    c = lv.linear_form_certificate([SQRT2], [1], -1)
    assert c.branch == "affine"
    assert c.bound == Fraction(1, 6)
    c_prime, p_exp = c.envelope
    assert p_exp == -1
    # the envelope evaluated at |mu|_1 = 1 must sit below the bound
    assert c_prime <= c.bound


def test_linear_constructed_cancellation():
    one_minus = nf.alg_sub(Fraction(1), SQRT2)
    c = lv.linear_form_certificate([SQRT2, one_minus], [1, 1], -1)
    assert c.status == "exact_zero"


def test_linear_dominant_constant_branch():
    c = lv.linear_form_certificate([SQRT2], [1], 10 ** 6)
    assert c.branch == "dominant_constant"
    assert c.bound == Fraction(1, 3)
    assert 2 ** 0.5 >= float(c.bound)


def test_linear_vanishing_homogeneous_part():
    minus = nf.alg_neg(SQRT2)
    c = lv.linear_form_certificate([SQRT2, minus], [1, 1], 7)
    assert c.branch == "dominant_constant"
    assert c.bound == 1


def test_linear_rejects_all_zero():
    with pytest.raises(ValueError):
        lv.linear_form_certificate([SQRT2], [0], 0)


# -- soundness over random forms -------------------------------------------


_POOL_POLYS = [
    [-2, 0, 1], [-3, 0, 1], [1, 0, 1], [-1, -1, 0, 1],
    [1, -1, 1], [-1, -1, 1], [-2, 0, 0, 0, 1], [7, -10, 1],
]


def _pool():
    values = [Fraction(1, 3), Fraction(-7, 2)]
    for coeffs in _POOL_POLYS:
        p = poly.IntPolynomial(coeffs)
        for box in nf.isolate_roots(p):
            values.append(box.value)
    return values


def _assert_not_below(p, alphas, bound):
    eps = Fraction(1, 2 ** 48)
    m2 = p.eval_boxes([s_box(a, eps) for a in alphas]).mag2()
    assert not m2.hi < bound * bound, \
        f"{p!r} at {alphas!r} certified below bound {bound}"


def test_soundness_sample():
    rng = random.Random(20240817)
    pool = _pool()
    for _ in range(40):
        m = rng.randint(1, 2)
        alphas = [rng.choice(pool) for _ in range(m)]
        terms = {}
        for _ in range(rng.randint(1, 4)):
            expo = tuple(rng.randint(0, 2) for _ in range(m))
            terms[expo] = rng.randint(-10, 10)
        p = lv.MultiPolynomial(m, terms)
        if p.is_zero():
            continue
        cert = lv.poly_lower_bound(p, alphas)
        if cert.status == "exact_zero":
            assert s_is_zero(p.eval_exact(alphas))
        else:
            _assert_not_below(p, alphas, cert.bound)


# -- condition-2 constants ---------------------------------------------------


def test_condition2_vogt_column():
    cert = lv.condition2_certificate([[SQRT2], [parse_scalar("0+-1*i")]])
    assert len(cert.columns) == 1
    col = cert.columns[0]
    assert col.a_value == 1
    assert col.power == -1
    assert col.compositum_degree == 4
    assert col.realness == Fraction(1, 2)
    assert col.homogeneous_constant == Fraction(1, 6)
    assert 0 < cert.c_overall <= Fraction(1, 6)
    assert cert.a_overall == 1


def test_condition2_column_bound_holds_on_samples():
    # spot-check the envelope against direct certificates
    cert = lv.condition2_certificate([[SQRT2], [parse_scalar("0+-1*i")]])
    col = cert.columns[0]
    column = [SQRT2, parse_scalar("0+-1*i")]
    for mu, nu in [((1, 0), 0), ((1, 0), -1), ((2, 3), -4), ((0, 1), 1), ((-5, 2), 7)]:
        direct = lv.linear_form_certificate(list(column), list(mu), nu)
        if direct.status != "nonzero_with_bound":
            continue
        weight = sum(abs(c) for c in mu)
        envelope = col.c_value * lv.pow_lower(Fraction(weight), -col.a_value)
        assert direct.bound >= envelope


def test_condition2_rejects_marker_entries():
    with pytest.raises(lv.UnsupportedEntry):
        lv.condition2_certificate([[SQRT2], ["pi"]])


def test_condition2_to_dict_strings():
    cert = lv.condition2_certificate([[Fraction(1, 3)]])
    d = cert.to_dict()
    assert isinstance(d["c"], str) and isinstance(d["a"], str)
    assert d["columns"][0]["degrees"] == [1]
