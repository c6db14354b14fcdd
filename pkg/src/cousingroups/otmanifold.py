"""End-to-end pipeline from a number field and unit subgroup to lattice checks.

Given a monic integer polynomial with mixed signature (s real and t pairs of
complex embeddings, both nonzero) and generators of a subgroup of totally
positive units, this assembles the period lattice of the order's embedding
into C^(s+t), certifies its rank, brings it to the (I | S) shape, runs the
no-nonconstant-functions check and the gap scan on S, emits the exponential
lower-bound certificate when the entries support one, and decides
admissibility and simple type of the unit subgroup.  The outcome is a single
report object with a lossless JSON rendering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diophantine import ScanReport, check_against_certificate, scan
from .lattice import CheckOutcome, PeriodMatrix, cousin_check_form1, normal_form_1, real_rank
from .liouville import Condition2Certificate, UnsupportedEntry, condition2_certificate
from .numberfield import degree_of_generated_field
from .okring import (
    ORDER_FLAG,
    AdmissibilityReport,
    FieldContext,
    OKElement,
    UnitSubgroup,
    check_admissible,
    field_context,
    is_totally_positive_unit,
)
from .scalars import Scalar, demote, format_scalar, s_add, s_mul, s_pow

__all__ = [
    "OTReport",
    "build_ot",
    "summarize",
    "scan_report_dict",
]


@dataclass(frozen=True)
class OTReport:
    """Everything the pipeline certified, in one place.

    The field degree equals the lattice rank (s + 2t); the ambient complex
    dimension is m = s + t.  The scan and certificate live on the S block
    of the (I | S) shape of the period matrix, which has t columns here.
    """

    degree: int
    s: int
    t: int
    m: int
    order: str
    period_rows: tuple[tuple[Scalar, ...], ...]
    rank_certified: int
    admissibility: AdmissibilityReport
    admissibility_note: str | None
    simple_type: str
    generated_degree: int | None
    normal_form_s: tuple[tuple[Scalar, ...], ...]
    chosen_columns: tuple[int, ...]
    scan_bound: int
    cousin: CheckOutcome
    scan: ScanReport
    certificate: Condition2Certificate | None
    certificate_reason: str | None
    certificate_check: bool | None

    @property
    def ok(self) -> bool:
        """No lattice violation and, when a certificate exists, scan agreement."""
        return self.cousin.ok and self.scan.ok and self.certificate_check is not False


def _first_embedding(ctx: FieldContext, el: OKElement) -> Scalar:
    """Image of el under the smallest real embedding, as an exact scalar."""
    acc: Scalar = Fraction(0)
    for k, c in enumerate(el.coords):
        if c:
            acc = s_add(acc, s_mul(Fraction(c), s_pow(ctx.roots[0], k)))
    return demote(acc)


def simple_type_of(ctx: FieldContext, gens: Sequence[OKElement]) -> tuple[str, int | None]:
    images = [_first_embedding(ctx, g) for g in gens]
    if all(isinstance(v, Fraction) for v in images):
        # the subgroup sits inside the rationals; the notion is vacuous
        return "not applicable", None
    d = degree_of_generated_field(images)
    return ("simple" if d == ctx.degree else "not simple"), d


def build_ot(minpoly, generators: Sequence, bound: int, *, norm_kind: str = "inf",
             shards: int = 1) -> OTReport:
    """Run the whole pipeline and return the combined report.

    ``generators`` are integer coordinate vectors in the power basis (or
    ready-made order elements).  Rejects polynomials without both real and
    complex embeddings, and any generator that is not a totally positive
    unit.  A rank decision the interval pass cannot settle propagates as
    the rank module's own error rather than being silently rounded.
    """
    ctx = field_context(minpoly, mixed_signature=True)
    gens: list[OKElement] = []
    for idx, g in enumerate(generators):
        el = g if isinstance(g, OKElement) else ctx.element(g)
        if el.ctx.minpoly.coeffs != ctx.minpoly.coeffs:
            raise ValueError(f"generator {idx} belongs to a different field")
        if not is_totally_positive_unit(el):
            raise ValueError(f"generator {idx} is not a totally positive unit")
        gens.append(el)
    if not gens:
        raise ValueError("at least one generator is required")

    n = ctx.degree
    rows = [
        tuple(demote(s_pow(ctx.roots[i], j)) for j in range(n))
        for i in range(ctx.m)
    ]
    pm = PeriodMatrix(rows)
    rank = real_rank(pm)
    if rank != n:
        raise ArithmeticError(f"period lattice rank {rank} does not match degree {n}")

    nf1 = normal_form_1(pm)
    s_matrix = [list(row) for row in nf1.s_matrix]
    cousin = cousin_check_form1(s_matrix, bound)
    scan_report = scan(s_matrix, bound, norm_kind=norm_kind, shards=shards)

    certificate: Condition2Certificate | None
    reason: str | None
    try:
        certificate = condition2_certificate(s_matrix)
        reason = None
    except UnsupportedEntry as exc:
        certificate = None
        reason = str(exc)
    cert_check = None
    if certificate is not None:
        cert_check = check_against_certificate(scan_report, certificate)

    admissibility = check_admissible(UnitSubgroup(tuple(gens)))
    note = None
    if len(gens) != ctx.s:
        note = (
            f"{len(gens)} generators for rank requirement s={ctx.s}; "
            "only the rank condition is decisive"
        )

    simple, gen_degree = simple_type_of(ctx, gens)

    return OTReport(
        degree=n,
        s=ctx.s,
        t=ctx.t,
        m=ctx.m,
        order=ORDER_FLAG,
        period_rows=tuple(rows),
        rank_certified=rank,
        admissibility=admissibility,
        admissibility_note=note,
        simple_type=simple,
        generated_degree=gen_degree,
        normal_form_s=tuple(tuple(row) for row in nf1.s_matrix),
        chosen_columns=tuple(nf1.chosen),
        scan_bound=bound,
        cousin=cousin,
        scan=scan_report,
        certificate=certificate,
        certificate_reason=reason,
        certificate_check=cert_check,
    )


# ---------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------


def scan_report_dict(rep: ScanReport) -> dict:
    """Lossless JSON form of a scan report; exact values become strings.

    The exponential envelope constant is published under the key "env_C"
    (capital C), matching the certificate notation used everywhere else.
    """
    return {
        "bound": rep.bound,
        "norm": rep.norm_kind,
        "sigma_scanned": rep.sigma_scanned,
        "violation": list(rep.violation) if rep.violation is not None else None,
        "records": [
            {
                "sigma": list(r.sigma),
                "tau": list(r.tau_star),
                "delta_lo": str(r.delta.lo),
                "delta_hi": str(r.delta.hi),
            }
            for r in rep.records
        ],
        "l1_lower": {str(k): str(v) for k, v in sorted(rep.l1_lower.items())},
        "env_C": None if rep.env_c is None else str(rep.env_c),
        "env_a": None if rep.env_a is None else str(rep.env_a),
        "poly_c": None if rep.poly_c is None else str(rep.poly_c),
        "poly_p": None if rep.poly_p is None else str(rep.poly_p),
    }


def admissibility_dict(rep: AdmissibilityReport) -> dict:
    return {
        "status": rep.status,
        "rank_needed": rep.rank_needed,
        "pr_rank_certified": rep.pr_rank_certified,
        "log_rank_lower": rep.log_rank_lower,
        "log_rank_upper": rep.log_rank_upper,
        "notes": list(rep.notes),
        "order": rep.order,
    }


def report_dict(rep: OTReport) -> dict:
    return {
        "degree": rep.degree,
        "s": rep.s,
        "t": rep.t,
        "m": rep.m,
        "order": rep.order,
        "period_matrix": [[format_scalar(x) for x in row] for row in rep.period_rows],
        "rank_certified": rep.rank_certified,
        "admissibility": admissibility_dict(rep.admissibility),
        "admissibility_note": rep.admissibility_note,
        "simple_type": rep.simple_type,
        "generated_degree": rep.generated_degree,
        "normal_form": {
            "s_matrix": [[format_scalar(x) for x in row] for row in rep.normal_form_s],
            "chosen_columns": list(rep.chosen_columns),
        },
        "scan_bound": rep.scan_bound,
        "cousin": {
            "bound": rep.cousin.bound,
            "violation": list(rep.cousin.violation) if rep.cousin.violation is not None else None,
            "sigma_checked": rep.cousin.sigma_checked,
        },
        "scan": scan_report_dict(rep.scan),
        "certificate": rep.certificate.to_dict() if rep.certificate is not None else None,
        "certificate_reason": rep.certificate_reason,
        "certificate_check": rep.certificate_check,
    }


def summarize(rep: OTReport) -> tuple[str, dict]:
    """Human-readable lines plus the lossless JSON dictionary."""
    lines = [
        f"field: degree {rep.degree}, signature ({rep.s},{rep.t}), "
        f"ambient dimension {rep.m}, order {rep.order}",
        f"period lattice: rank {rep.rank_certified} certified "
        f"(matches degree: {rep.rank_certified == rep.degree})",
        f"admissibility: {rep.admissibility.status} "
        f"(projected rank {rep.admissibility.pr_rank_certified}"
        f"/{rep.admissibility.rank_needed}, log rank in "
        f"[{rep.admissibility.log_rank_lower}, {rep.admissibility.log_rank_upper}])",
    ]
    for nte in rep.admissibility.notes:
        lines.append(f"  note: {nte}")
    if rep.admissibility_note:
        lines.append(f"  note: {rep.admissibility_note}")
    if rep.generated_degree is None:
        lines.append(f"simple type: {rep.simple_type}")
    else:
        lines.append(
            f"simple type: {rep.simple_type} "
            f"(generated field degree {rep.generated_degree} of {rep.degree})"
        )
    if rep.cousin.ok:
        lines.append(
            f"lattice check: no violation up to bound {rep.cousin.bound} "
            f"({rep.cousin.sigma_checked} classes)"
        )
    else:
        lines.append(f"lattice check: VIOLATION at sigma {rep.cousin.violation}")
    lines.append(
        f"scan: bound {rep.scan.bound}, {rep.scan.sigma_scanned} classes, "
        f"{len(rep.scan.records)} records"
    )
    if rep.scan.env_c is not None:
        lines.append(f"  envelope: env_C = {rep.scan.env_c}, env_a = {rep.scan.env_a}")
    if rep.certificate is not None:
        lines.append(
            f"certificate: C = {rep.certificate.c_overall}, a = {rep.certificate.a_overall}; "
            f"scan agreement: {'pass' if rep.certificate_check else 'FAIL'}"
        )
    else:
        lines.append(f"certificate: unsupported ({rep.certificate_reason})")
    return "\n".join(lines) + "\n", report_dict(rep)
