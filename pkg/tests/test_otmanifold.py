"""Pipeline assembly: field data to period lattice, scan, and certificates."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from cousingroups.okring import field_context
from cousingroups.otmanifold import build_ot, report_dict, scan_report_dict, summarize
from cousingroups.scalars import format_scalar, parse_scalar, s_equal

CUBIC = [-1, -1, 0, 1]
QUARTIC = [-1, 0, -2, 0, 1]  # z^4 - 2z^2 - 1, roots +-sqrt(1+sqrt2) and a complex pair

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def cubic():
    return build_ot(CUBIC, [(0, 1, 0)], 50)


@pytest.fixture(scope="module")
def quartic():
    return build_ot(QUARTIC, [(0, 0, 1, 0)], 20)


def test_cubic_field_shape(cubic):
    assert (cubic.degree, cubic.s, cubic.t, cubic.m) == (3, 1, 1, 2)
    assert cubic.order == "Z[alpha]"
    assert cubic.rank_certified == 3
    assert cubic.ok


def test_cubic_admissible_and_simple(cubic):
    assert cubic.admissibility.status == "admissible"
    assert cubic.admissibility.pr_rank_certified == 1
    assert cubic.admissibility_note is None
    assert cubic.simple_type == "simple"
    assert cubic.generated_degree == 3


def test_cubic_normal_form_frozen(cubic):
    # the greedy basis takes the two non-constant power columns; the S
    # column entries are cubic algebraics whose minimal polynomials were
    # frozen from independent reduction: z^3+2z^2+z+1 and z^3-z+1
    assert cubic.chosen_columns == (1, 2)
    assert [format_scalar(x) for row in cubic.normal_form_s for x in row] == [
        "alg([1,1,2,1];2)",
        "alg([1,-1,0,1];1)",
    ]
    # period matrix top row is the power basis under the real embedding
    assert format_scalar(cubic.period_rows[0][1]) == "alg([-1,-1,0,1];0)"
    assert cubic.period_rows[0][0] == Fraction(1)


def test_cubic_scan_and_certificate(cubic):
    assert cubic.cousin.ok and cubic.cousin.bound == 50
    assert cubic.scan.ok and cubic.scan.bound == 50
    assert [r.sigma for r in cubic.scan.records][:8] == [
        (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 4), (4, 5), (5, 7),
    ]
    assert cubic.scan.env_c is not None and cubic.scan.env_a == 0
    assert cubic.certificate is not None and cubic.certificate_reason is None
    assert cubic.certificate_check is True


def test_quartic_subfield_unit_not_simple(quartic):
    assert (quartic.s, quartic.t, quartic.m) == (2, 1, 3)
    # theta^2 = 1 + sqrt2 generates only the quadratic subfield
    assert quartic.simple_type == "not simple"
    assert quartic.generated_degree == 2
    assert quartic.admissibility.status == "inadmissible"
    assert quartic.admissibility_note is not None
    assert "rank condition" in quartic.admissibility_note
    assert quartic.certificate_check is True


def test_trivial_subgroup_not_applicable():
    rep = build_ot(CUBIC, [(1, 0, 0)], 5)
    assert rep.simple_type == "not applicable"
    assert rep.generated_degree is None
    assert rep.admissibility.status == "inadmissible"


def test_degenerate_signatures_rejected():
    with pytest.raises(ValueError):
        build_ot([-2, 0, 1], [(1, 0)], 10)  # totally real
    with pytest.raises(ValueError):
        build_ot([1, 0, 1], [(1, 0)], 10)  # totally complex


def test_bad_generators_rejected():
    with pytest.raises(ValueError, match="totally positive"):
        build_ot(CUBIC, [(2, 0, 0)], 10)
    with pytest.raises(ValueError, match="totally positive"):
        build_ot(CUBIC, [(0, -1, 0)], 10)  # unit, but negative at the real place
    with pytest.raises(ValueError, match="at least one"):
        build_ot(CUBIC, [], 10)
    other = field_context(QUARTIC, mixed_signature=True).element((0, 1, 0, 0))
    with pytest.raises(ValueError, match="different field"):
        build_ot(CUBIC, [other], 10)


def test_simple_type_is_generating_set_invariant():
    # same subgroup presented three ways: generator, its inverse, a
    # redundant power added
    seen = set()
    for gens in [[(0, 1, 0)], [(-1, 0, 1)], [(0, 1, 0), (0, 0, 1)]]:
        rep = build_ot(CUBIC, gens, 5)
        seen.add((rep.simple_type, rep.generated_degree))
    assert seen == {("simple", 3)}


def test_scan_dict_serializes_exactly(cubic):
    data = scan_report_dict(cubic.scan)
    json.dumps(data)
    assert data["env_C"] == str(cubic.scan.env_c)
    first = data["records"][0]
    assert Fraction(first["delta_lo"]) == cubic.scan.records[0].delta.lo
    assert Fraction(first["delta_hi"]) == cubic.scan.records[0].delta.hi
    assert data["violation"] is None


def test_report_json_lossless(cubic):
    data = report_dict(cubic)
    for i, row in enumerate(data["period_matrix"]):
        for j, cell in enumerate(row):
            assert s_equal(parse_scalar(cell), cubic.period_rows[i][j])
    for i, row in enumerate(data["normal_form"]["s_matrix"]):
        for j, cell in enumerate(row):
            assert s_equal(parse_scalar(cell), cubic.normal_form_s[i][j])
    cert = data["certificate"]
    assert Fraction(cert["c"]) == cubic.certificate.c_overall
    assert Fraction(cert["a"]) == cubic.certificate.a_overall


def test_summarize_text(cubic):
    text, data = summarize(cubic)
    assert text.endswith("\n")
    for needle in [
        "degree 3",
        "signature (1,1)",
        "rank 3 certified",
        "admissible",
        "simple type: simple",
        "no violation up to bound 50",
        "scan: bound 50",
        "certificate:",
        "pass",
    ]:
        assert needle in text, needle
    assert data == report_dict(cubic)


def test_golden_snapshots(cubic, quartic):
    got = json.dumps(report_dict(cubic), indent=2, sort_keys=True) + "\n"
    assert got == (GOLDEN / "ot_cubic_b50.json").read_text()

    got = json.dumps(report_dict(quartic), indent=2, sort_keys=True) + "\n"
    assert got == (GOLDEN / "ot_quartic_b20.json").read_text()

    with pytest.raises(ValueError) as err:
        build_ot([-2, 0, 1], [(1, 0)], 10)
    assert str(err.value) + "\n" == (GOLDEN / "ot_signature_error.txt").read_text()
