"""Exact interval arithmetic: enclosure is the whole contract."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cousingroups.intervals import (
    ComplexInterval,
    Interval,
    cis2pi_interval,
    exp_interval,
    log_interval,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=97)


def iv(a, b):
    return Interval(Fraction(a), Fraction(b))


def test_point_and_width():
    x = Interval.point(Fraction(3, 7))
    assert x.is_point() and x.width == 0 and x.mid == Fraction(3, 7)
    with pytest.raises(ValueError):
        Interval(Fraction(1), Fraction(0))


def test_add_mul_exact():
    x, y = iv(1, 2), iv(-3, 5)
    assert (x + y) == Interval(Fraction(-2), Fraction(7))
    z = x * y
    assert z.lo == Fraction(-6) and z.hi == Fraction(10)


def test_square_tight_at_zero():
    assert iv(-2, 3).square() == Interval(Fraction(0), Fraction(9))


def test_recip_requires_sign():
    assert iv(2, 4).recip() == Interval(Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        iv(-1, 1).recip()


@given(rationals, rationals, rationals, rationals)
def test_containment_add_mul(a, b, x, y):
    # an interval op must contain the op of any members
    lo_a, hi_a = min(a, b), max(a, b) + 1
    lo_x, hi_x = min(x, y), max(x, y) + 1
    A, X = Interval(lo_a, hi_a), Interval(lo_x, hi_x)
    pa = lo_a + (hi_a - lo_a) / 3
    px = lo_x + (hi_x - lo_x) / 2
    assert (A + X).contains(pa + px)
    assert (A * X).contains(pa * px)
    assert A.square().contains(pa * pa)


def test_sqrt_encloses():
    s = Interval.point(Fraction(2)).sqrt()
    assert s.lo * s.lo <= 2 <= s.hi * s.hi
    assert s.width < Fraction(1, 2**48)


def test_round_out_is_outward():
    x = Interval(Fraction(1, 3), Fraction(2, 3))
    r = x.round_out(16)
    assert r.lo <= x.lo and r.hi >= x.hi
    assert r.lo.denominator <= 2**16 and r.hi.denominator <= 2**16


def test_complex_mul_contains_product():
    a = ComplexInterval(iv(1, 2), iv(-1, 1))
    b = ComplexInterval(iv(-3, -2), iv(0, 1))
    # members: (3/2 + 0j) and (-5/2 + 1/2 j)
    prod_re = Fraction(3, 2) * Fraction(-5, 2) - 0 * Fraction(1, 2)
    prod_im = Fraction(3, 2) * Fraction(1, 2)
    z = a * b
    assert z.re.contains(prod_re) and z.im.contains(prod_im)


def test_complex_recip_and_div():
    a = ComplexInterval.point(Fraction(3), Fraction(4))
    r = a.recip()
    assert r.re.contains(Fraction(3, 25)) and r.im.contains(Fraction(-4, 25))
    q = a / a
    assert q.re.contains(Fraction(1)) and q.im.contains(Fraction(0))


def test_pow_int_matches_repeated_mul():
    a = ComplexInterval.point(Fraction(1, 2), Fraction(1, 3))
    assert a.pow_int(3).re.contains((a * a * a).re.mid)


def test_log_interval_against_mpmath():
    x = iv(2, 2)
    got = log_interval(x)
    mpmath.mp.dps = 40
    truth = Fraction(str(mpmath.log(2)))
    assert got.lo <= truth <= got.hi
    assert got.width < Fraction(1, 2**40)
    with pytest.raises(ValueError):
        log_interval(iv(0, 1))


def test_exp_interval_width_and_value():
    got = exp_interval(Interval.point(Fraction(1)))
    mpmath.mp.dps = 40
    truth = Fraction(str(mpmath.e))
    assert got.lo <= truth <= got.hi


def test_cis2pi_quarter_turn():
    z = cis2pi_interval(Fraction(1, 4))
    assert z.re.contains(Fraction(0)) and z.im.contains(Fraction(1))
    assert z.width < Fraction(1, 2**40)


def test_cis2pi_periodicity_overlap():
    a = cis2pi_interval(Fraction(5, 7))
    b = cis2pi_interval(Fraction(5, 7) + 3)
    assert a.overlaps(b)


@settings(max_examples=40)
@given(rationals)
def test_cis2pi_on_unit_circle(x):
    z = cis2pi_interval(x)
    m = z.mag2()
    assert m.lo <= 1 <= m.hi
