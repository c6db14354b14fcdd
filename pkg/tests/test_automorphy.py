"""Frequency-table automorphy: compatibility, scaling, extension, axioms."""

import cmath
import json
import math
import random
from fractions import Fraction

import pytest

from cousingroups import automorphy as am
from cousingroups.scalars import parse_scalar, s_add, s_mul

SQRT2 = parse_scalar("alg([-2,0,1];1)")
IMAG = parse_scalar("0+1*i")

# n=2, m=1: one integer-block generator, one with irrational trailing
# coordinate, one torus column with trailing coordinate zero
SPLIT_COLS = ((0, 1), (1, SQRT2), (IMAG, 0))
SPLIT_SHARED = {(1,): Fraction(1, 2), (-1,): complex(1.0, -1 / 3), (2,): 0.25j}

# n=3, m=1 with rational trailing data; denominators are chosen so that
# no frequency with |sigma| <= 16 pairs to an integer (89*16 + 97*16 and
# 79*16 + 83*16 stay below the respective products), which keeps every
# generator pair genuinely coupled
RATIONAL_COLS = (
    (0, 1, 0),
    (0, 0, 1),
    (1, Fraction(1, 97), Fraction(1, 89)),
    (IMAG, Fraction(1, 83), Fraction(1, 79)),
)
RATIONAL_SHARED = {
    (1, 0): 0.5,
    (0, 1): complex(0.2, -0.7),
    (3, -2): 0.125,
    (16, -3): 0.03125j,
    (-5, 11): Fraction(1, 9),
}


@pytest.fixture(scope="module")
def split():
    return am.cocycle_parametrization(2, 1, SPLIT_COLS, SPLIT_SHARED)


@pytest.fixture(scope="module")
def rational():
    return am.cocycle_parametrization(3, 1, RATIONAL_COLS, RATIONAL_SHARED)


def _full_vector(cols, ratios):
    out = [Fraction(0)] * len(cols[0])
    for r, col in zip(ratios, cols, strict=True):
        if r:
            out = [s_add(v, s_mul(Fraction(r), x)) for v, x in zip(out, col)]
    return tuple(out)


def _perturbed(a, gen, bump=Fraction(1, 1000)):
    tabs = [dict(t) for t in a.tables]
    sig = sorted(tabs[gen])[0]
    re, im = tabs[gen][sig]
    tabs[gen][sig] = (re + bump, im)
    return am.SummandFourier.build(a.n, a.m, a.columns, tabs, a.truncation)


# ---------------------------------------------------------------- build


def test_build_drops_zero_coefficients():
    tabs = [{}, {(1,): 0.0, (2,): 1.5}, {}]
    a = am.SummandFourier.build(2, 1, SPLIT_COLS, tabs)
    assert a.tables[1] == {(2,): (Fraction(3, 2), Fraction(0))}
    assert a.rank == 3 and a.trailing_coords(0) == (Fraction(1),)


def test_build_rejects_bad_shapes():
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 2, SPLIT_COLS, [{}, {}, {}])
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 1, SPLIT_COLS[:2], [{}, {}])
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 1, ((0,), (1,), (2,)), [{}, {}, {}])
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 1, SPLIT_COLS, [{}, {}])
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 1, SPLIT_COLS, [{}, {(1, 2): 1.0}, {}])
    with pytest.raises(ValueError):
        am.SummandFourier.build(2, 1, SPLIT_COLS, [{}, {(17,): 1.0}, {}], 16)


def test_integer_block_generator_must_have_empty_table():
    with pytest.raises(ValueError, match="integer block"):
        am.SummandFourier.build(2, 1, SPLIT_COLS, [{(1,): 1.0}, {}, {}])
    # an explicit zero coefficient is dropped, hence allowed
    a = am.SummandFourier.build(2, 1, SPLIT_COLS, [{(1,): 0.0}, {}, {}])
    assert a.tables[0] == {}


def test_parametrization_clears_integer_pairings(split):
    # generator 0 pairs integrally (trailing 1), generator 2 trivially
    # (trailing 0); only the irrational column keeps its table
    assert [len(t) for t in split.tables] == [0, 3, 0]


def test_json_round_trip(split, rational):
    for a in (split, rational):
        blob = json.dumps(a.to_json())
        back = am.SummandFourier.from_json(json.loads(blob))
        assert back == a
    # bare floats are accepted alongside string rationals
    data = split.to_json()
    data["tables"]["1"][0]["re"] = 0.5
    parsed = am.SummandFourier.from_json(data)
    sig = tuple(data["tables"]["1"][0]["sigma"])
    assert parsed.tables[1][sig][0] == Fraction(1, 2)


# -------------------------------------------------------- compatibility


def test_same_generator_pair_agrees(rational):
    rep = am.fourier_cocycle_check(rational, 2, 2)
    assert rep.passed and rep.max_defect < 1e-15
    assert rep.generator_pair == (2, 2)


def test_parametrized_tables_pass_all_pairs(split, rational):
    for a in (split, rational):
        for i in range(a.rank):
            for j in range(i, a.rank):
                rep = am.fourier_cocycle_check(a, i, j)
                assert rep.passed, (i, j, rep.max_defect)
    # defects are enumerated per frequency in sorted order
    rep = am.fourier_cocycle_check(rational, 2, 3)
    assert [s for s, _ in rep.defects] == sorted(set(rational.tables[2]) | set(rational.tables[3]))


def test_independent_tables_fail():
    rng = random.Random(41)
    tabs = [{}, {}, {}, {}]
    for j in (2, 3):
        tabs[j] = {
            sig: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for sig in RATIONAL_SHARED
        }
    a = am.SummandFourier.build(3, 1, RATIONAL_COLS, tabs)
    rep = am.fourier_cocycle_check(a, 2, 3)
    assert not rep.passed and rep.max_defect > 1e-6


def test_pair_index_out_of_range(split):
    with pytest.raises(ValueError):
        am.fourier_cocycle_check(split, 0, 3)


# ------------------------------------------------------ scaling factor


def test_unit_and_zero_ratio_are_exact():
    for trailing in [(SQRT2,), (Fraction(1, 4),)]:
        assert am.extension_coefficient((1,), 1, trailing) == complex(1)
        assert am.extension_coefficient((1,), 0, trailing) == complex(0)


def test_integer_pairing_takes_the_limit_branch():
    assert am.extension_coefficient((2,), Fraction(1, 2), (3,)) == complex(0.5)
    assert am.extension_coefficient((2,), Fraction(7, 3), (3,)) == complex(Fraction(7, 3))
    # zero frequency always pairs to an integer
    assert am.extension_coefficient((0,), Fraction(2, 5), (SQRT2,)) == complex(Fraction(2, 5))


def test_generic_branch_matches_direct_formula():
    got = am.extension_coefficient((1,), Fraction(1, 2), (Fraction(1, 4),))
    want = (1 - cmath.exp(2j * math.pi * 0.125)) / (1 - cmath.exp(2j * math.pi * 0.25))
    assert abs(got - want) < 1e-14

    got = am.extension_coefficient((1,), Fraction(1, 3), (SQRT2,))
    x = math.sqrt(2)
    want = (1 - cmath.exp(2j * math.pi * x / 3)) / (1 - cmath.exp(2j * math.pi * x))
    assert abs(got - want) < 1e-12


def test_branch_consistency_near_integer():
    # the generic value converges to the limit branch value r along
    # sequences whose scaled pairing r*x also heads to an integer: here
    # x -> 0 from both sides and x -> 2 with r = 1/2
    r = Fraction(1, 2)
    for gap, tol in [(Fraction(1, 10**3), 5e-3), (Fraction(1, 10**6), 5e-6)]:
        for x in (gap, -gap, 2 + gap):
            got = am.extension_coefficient((1,), r, (x,))
            assert abs(got - complex(r)) < tol


def test_branch_jump_when_scaled_pairing_misses():
    # toward an odd integer with r = 1/2 the numerator stays near 2
    # while the denominator vanishes; the two branches genuinely jump
    # and the modulus grows like 1/(pi * gap)
    got = am.extension_coefficient((1,), Fraction(1, 2), (1 + Fraction(1, 10**3),))
    assert abs(got) > 100
    assert abs(abs(got) - 1 / (math.pi * 1e-3)) / abs(got) < 0.01


def test_complex_pairing_rejected():
    with pytest.raises(ValueError):
        am.extension_coefficient((1,), Fraction(1, 2), (IMAG,))


# ------------------------------------------------------------ extension


def test_whole_step_matches_table_sum(split):
    z = (parse_scalar("1/3+1/5*i"), Fraction(2, 7))
    got = am.extend_summand(split, (0, 1, 0), z)
    want = 0j
    for sig, (re, im) in sorted(split.tables[1].items()):
        want += complex(float(re), float(im)) * cmath.exp(2j * math.pi * sig[0] * (2 / 7))
    assert abs(got - want) < 1e-12
    assert split.value((0, 1, 0), z) == got


def test_zero_ratios_give_zero(split):
    z = (Fraction(1, 3), Fraction(1, 9))
    assert am.extend_summand(split, (0, 0, 0), z) == 0j


def test_lattice_sum_matches_combined_table(rational):
    # the table a whole two-generator step induces is the parametrized
    # one at the summed trailing coordinates; the split evaluation must
    # reproduce it
    z = (Fraction(1, 3), Fraction(2, 7), Fraction(-1, 5))
    got = am.extend_summand(rational, (0, 0, 1, 1), z)
    want = 0j
    for sig, c in RATIONAL_SHARED.items():
        x = sig[0] * (Fraction(1, 97) + Fraction(1, 83)) + sig[1] * (Fraction(1, 89) + Fraction(1, 79))
        zphase = sig[0] * Fraction(2, 7) + sig[1] * Fraction(-1, 5)
        want += complex(c) * (1 - cmath.exp(2j * math.pi * float(x))) * cmath.exp(
            2j * math.pi * float(zphase)
        )
    assert abs(got - want) < 1e-10


def test_gluing_identity_at_random_samples(rational):
    # whole steps on the integer block, rational steps elsewhere; the
    # identity a(x+x') = a(x, .+x') + a(x') then holds up to float noise
    rng = random.Random(7)
    worst = 0.0
    for _ in range(100):
        r1 = (
            rng.randint(-2, 2),
            rng.randint(-2, 2),
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
        )
        r2 = (
            rng.randint(-2, 2),
            rng.randint(-2, 2),
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
            Fraction(rng.randint(-8, 8), rng.randint(1, 8)),
        )
        z = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(3))
        shift = _full_vector(RATIONAL_COLS, r2)
        zs = tuple(s_add(zc, xv) for zc, xv in zip(z, shift))
        lhs = am.extend_summand(rational, tuple(u + v for u, v in zip(r1, r2)), z)
        rhs = am.extend_summand(rational, r1, zs) + am.extend_summand(rational, r2, z)
        worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-10


def test_gluing_needs_whole_integer_block_steps(rational):
    # a fractional step along the integer block shifts every phase with
    # no compensating table term; the identity genuinely fails there
    r1 = (Fraction(1, 2), 0, Fraction(1, 3), 0)
    r2 = (Fraction(1, 3), 0, Fraction(1, 5), 0)
    z = (Fraction(1, 3), Fraction(2, 7), Fraction(1, 11))
    shift = _full_vector(RATIONAL_COLS, r2)
    zs = tuple(s_add(zc, xv) for zc, xv in zip(z, shift))
    lhs = am.extend_summand(rational, tuple(u + v for u, v in zip(r1, r2)), z)
    rhs = am.extend_summand(rational, r1, zs) + am.extend_summand(rational, r2, z)
    assert abs(lhs - rhs) > 1e-3


def test_trailing_integer_shift_is_exact(split, rational):
    z = (parse_scalar("1/3+1/5*i"), Fraction(2, 7))
    assert am.extend_summand(split, (0, 1, 0), z) == am.extend_summand(
        split, (0, 1, 0), (z[0], z[1] + 1)
    )
    z3 = (Fraction(1, 3), Fraction(2, 7), Fraction(-4, 9))
    for shift in [(0, 1, 0), (0, 0, 1), (0, -3, 2)]:
        moved = tuple(zc + s for zc, s in zip(z3, shift))
        assert am.extend_summand(rational, (0, 1, 1, 1), z3) == am.extend_summand(
            rational, (0, 1, 1, 1), moved
        )


def test_extension_report_contents(split):
    z = (Fraction(0), Fraction(1, 5))
    rep = am.extend_summand_report(split, (0, Fraction(1, 2), 1), z)
    assert rep.order == am.DECOMPOSITION_ORDER == "generator index ascending"
    assert rep.truncation == split.truncation == am.TRUNCATION_DEFAULT
    assert rep.value == am.extend_summand(split, (0, Fraction(1, 2), 1), z)
    # no modulus bound is promised for the scaling factors; the report
    # exposes the peak instead
    assert rep.scaling_peak > 1


def test_extension_shape_validation(split):
    with pytest.raises(ValueError):
        am.extend_summand(split, (1, 0), (Fraction(0), Fraction(0)))
    with pytest.raises(ValueError):
        am.extend_summand(split, (1, 0, 0), (Fraction(0),))


# --------------------------------------------------------------- axioms


PAIRS = [
    ((0, 0, 1, 0), (0, 0, 0, 1)),
    ((0, 0, 0, 1), (0, 0, 1, 0)),
    ((1, 0, 2, 1), (0, 1, 1, -1)),
    ((0, -1, 1, 1), (2, 0, 0, 1)),
]
POINTS = [
    (Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1, 3), Fraction(2, 7), Fraction(-1, 5)),
    (Fraction(-2, 5), Fraction(1, 2), Fraction(3, 4)),
]


def test_zero_summand_passes():
    rep = am.check_summand_axioms(lambda c, z: 0j, RATIONAL_COLS, PAIRS, POINTS)
    assert rep.passed and rep.cocycle_defect == 0.0 and rep.identity_defect == 0.0
    assert rep.kind == "summand"
    assert rep.samples == len(POINTS) * (len(PAIRS) + 1)


def test_additive_homomorphism_passes_exactly():
    # integer weights keep the float sums exact, so the defect is zero,
    # not merely small
    weights = (3, -2, 5, 7)

    def hom(coeffs, _z):
        return complex(sum(c * w for c, w in zip(coeffs, weights)), 0.0)

    rep = am.check_summand_axioms(hom, RATIONAL_COLS, PAIRS, POINTS)
    assert rep.passed and rep.cocycle_defect == 0.0 and rep.identity_defect == 0.0


def test_table_evaluator_passes_and_perturbation_fails(rational):
    rep = am.check_summand_axioms(rational.value, RATIONAL_COLS, PAIRS, POINTS)
    assert rep.passed and rep.cocycle_defect < 1e-12

    bad = _perturbed(rational, 2)
    rep_bad = am.check_summand_axioms(bad.value, RATIONAL_COLS, PAIRS, POINTS)
    assert not rep_bad.passed and rep_bad.cocycle_defect > 1e-6
    assert rep_bad.threshold == am.DEFECT_THRESHOLD
    # the same perturbation is visible on the coefficient side
    assert not am.fourier_cocycle_check(bad, 2, 3).passed


def test_factor_axioms_multiplicative(rational):
    def factor(coeffs, z):
        return cmath.exp(rational.value(coeffs, z))

    rep = am.check_factor_axioms(factor, RATIONAL_COLS, PAIRS, POINTS)
    assert rep.passed and rep.kind == "factor"

    bad = _perturbed(rational, 3)

    def bad_factor(coeffs, z):
        return cmath.exp(bad.value(coeffs, z))

    rep_bad = am.check_factor_axioms(bad_factor, RATIONAL_COLS, PAIRS, POINTS)
    assert not rep_bad.passed and rep_bad.cocycle_defect > 1e-6


def test_factor_identity_defect():
    rep = am.check_factor_axioms(lambda c, z: complex(1), RATIONAL_COLS, [], POINTS)
    assert rep.passed and rep.identity_defect == 0.0
    rep_off = am.check_factor_axioms(lambda c, z: complex(1.0 + 1e-6), RATIONAL_COLS, [], POINTS)
    assert not rep_off.passed and rep_off.identity_defect > 5e-7
