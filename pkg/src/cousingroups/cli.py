"""Command line front end over the library pipelines.

Six subcommands: field info, lattice normalize, vogt scan, liouville
certify, automorphy check, ot build.  Every run writes one JSON report
(stdout, or --out FILE) with exact values as strings and the invocation
embedded; human-readable status goes to stderr.

Exit codes: 0 clean, 1 bad input (flags, files, parse), 2 a violation
was found (an integer hit in a lattice check, a cocycle defect beyond
threshold, a certificate cross-check failure), 3 a rank decision came
back indeterminate.

The --shards flag controls parallel width only and never changes report
content, so it is the one flag filtered from the embedded invocation;
rerunning the embedded invocation reproduces the report byte for byte.
"""

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import liouville, numberfield
from .automorphy import (
    DEFECT_THRESHOLD,
    SummandFourier,
    check_summand_axioms,
    extend_summand,
    fourier_cocycle_check,
)
from .diophantine import scan
from .lattice import (
    IndeterminateRank,
    cousin_check_form1,
    cousin_check_form2,
    normal_form_1,
    normal_form_2,
    parse_matrix_text,
    real_rank,
)
from .liouville import condition2_certificate
from .okring import ORDER_FLAG, UnitSubgroup, check_admissible, field_context, log_map
from .otmanifold import (
    admissibility_dict,
    build_ot,
    scan_report_dict,
    simple_type_of,
    summarize,
)
from .scalars import Scalar, format_scalar

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_INDETERMINATE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Exit 2 is reserved for violations, so flag errors raise instead
    of going through argparse's SystemExit(2)."""

    def error(self, message: str):
        raise _UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------
# flag value parsers
# ---------------------------------------------------------------------

def _width_arg(text: str) -> Fraction:
    s = text.strip()
    try:
        w = Fraction(2) ** int(s[2:]) if s.startswith("2^") else Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(
            f"{text!r}: expected 2^-k or an exact rational p/q") from exc
    if w <= 0:
        raise argparse.ArgumentTypeError("width must be positive")
    return w


def _poly_arg(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"{text!r}: expected comma-separated integers c0,...,cn") from exc


def _units_arg(text: str) -> list[tuple[int, ...]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not (part.startswith("[") and part.endswith("]")):
            raise argparse.ArgumentTypeError(
                f"unit {part!r}: expected [c0,...,c_(n-1)]")
        try:
            out.append(tuple(int(tok) for tok in part[1:-1].split(",")))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(
                f"unit {part!r}: entries must be integers") from exc
    return out


def _bound_arg(text: str) -> int:
    try:
        b = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: expected an integer") from exc
    if b < 1:
        raise argparse.ArgumentTypeError("bound must be >= 1")
    return b


def _read_matrix(path: str):
    return parse_matrix_text(Path(path).read_text())


def _grid(rows: Sequence[Sequence[Scalar]]) -> list[list[str]]:
    return [[format_scalar(x) for x in row] for row in rows]


def _echo(argv: Sequence[str]) -> list[str]:
    """The invocation that gets embedded: argv minus the shards flag."""
    out: list[str] = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--shards":
            skip = True
        elif not tok.startswith("--shards="):
            out.append(tok)
    return out


def _apply_precision(width: Fraction) -> None:
    # Opening width for adaptive interval refinement.  Decisions refine
    # until resolved, so this trades first-try cost against refinement
    # steps without changing any result.
    numberfield.START_WIDTH = width
    liouville.START_WIDTH = width


# ---------------------------------------------------------------------
# subcommand handlers: (args) -> (exit code, report dict)
# ---------------------------------------------------------------------

def _cmd_field_info(args) -> tuple[int, dict]:
    ctx = field_context(args.poly)
    report = {
        "minpoly": list(args.poly),
        "degree": ctx.degree,
        "s": ctx.s,
        "t": ctx.t,
        "m": ctx.m,
        "order": ORDER_FLAG,
        "roots": [format_scalar(r) for r in ctx.roots],
    }
    code = EXIT_OK
    if args.units is not None:
        gens = [ctx.element(v) for v in args.units]
        adm = check_admissible(UnitSubgroup(tuple(gens)))
        kind, degree = simple_type_of(ctx, gens)
        report["admissibility"] = admissibility_dict(adm)
        report["simple_type"] = kind
        report["generated_degree"] = degree
        report["log_images"] = [
            [{"lo": str(iv.lo), "hi": str(iv.hi)} for iv in log_map(g)]
            for g in gens
        ]
        print(f"admissibility: {adm.status}; simple type: {kind}", file=sys.stderr)
        if adm.status == "indeterminate":
            code = EXIT_INDETERMINATE
    return code, report


def _cmd_lattice_normalize(args) -> tuple[int, dict]:
    pm = _read_matrix(args.matrix)
    report: dict = {"n": pm.n, "r": pm.r, "rank": real_rank(pm), "form": args.form}
    code = EXIT_OK
    if args.form == 1:
        nf = normal_form_1(pm)
        report["s_matrix"] = _grid(nf.s_matrix)
        report["basis_change"] = _grid(nf.basis_change)
        report["unimodular"] = [list(r) for r in nf.unimodular]
        report["chosen_columns"] = list(nf.chosen)
        outcome = cousin_check_form1(nf.s_matrix, args.bound) if args.bound else None
    else:
        nf = normal_form_2(pm)
        report["torus"] = _grid(nf.torus)
        report["r_matrix"] = _grid(nf.r_matrix)
        report["basis_change"] = _grid(nf.basis_change)
        report["unimodular"] = [list(r) for r in nf.unimodular]
        report["m"] = nf.m
        report["chosen_f"] = list(nf.chosen_f)
        report["chosen_torus"] = list(nf.chosen_torus)
        outcome = cousin_check_form2(nf.r_matrix, args.bound) if args.bound else None
    if outcome is not None:
        report["cousin"] = {
            "bound": outcome.bound,
            "violation": list(outcome.violation) if outcome.violation else None,
            "sigma_checked": outcome.sigma_checked,
        }
        if outcome.ok:
            print(f"no violation up to bound {outcome.bound}", file=sys.stderr)
        else:
            print(f"violation at sigma={outcome.violation}", file=sys.stderr)
            code = EXIT_VIOLATION
    return code, report


def _cmd_vogt_scan(args) -> tuple[int, dict]:
    pm = _read_matrix(args.matrix)
    rep = scan(pm.rows, args.bound, norm_kind=args.norm, shards=args.shards)
    if rep.violation is None:
        print(f"no violation up to bound {rep.bound}; "
              f"{len(rep.records)} record gaps", file=sys.stderr)
        return EXIT_OK, scan_report_dict(rep)
    print(f"violation at sigma={rep.violation}", file=sys.stderr)
    return EXIT_VIOLATION, scan_report_dict(rep)


def _cmd_liouville_certify(args) -> tuple[int, dict]:
    pm = _read_matrix(args.matrix)
    mode = "exact" if args.exact_degree else "safe_upper"
    cert = condition2_certificate(pm.rows, degree_mode=mode)
    print(f"C = {cert.c_overall}, a = {cert.a_overall} "
          f"({len(cert.columns)} columns, degree mode {mode})", file=sys.stderr)
    return EXIT_OK, cert.to_dict()


def _axiom_samples(a: SummandFourier, rng: random.Random, count: int):
    def vec() -> tuple[int, ...]:
        v = [rng.randint(-2, 2) for _ in range(a.rank)]
        if not any(v):
            v[rng.randrange(a.rank)] = 1
        return tuple(v)

    pairs = [(vec(), vec()) for _ in range(count)]
    points = [
        tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(a.n))
        for _ in range(3)
    ]
    return pairs, points


def _cmd_automorphy_check(args) -> tuple[int, dict]:
    a = SummandFourier.from_json(json.loads(Path(args.tables).read_text()))
    pair_reports = []
    worst = 0.0
    for i in range(a.rank):
        for j in range(i + 1, a.rank):
            rep = fourier_cocycle_check(a, i, j, threshold=args.threshold)
            pair_reports.append({
                "pair": [i, j],
                "max_defect": rep.max_defect,
                "passed": rep.passed,
            })
            worst = max(worst, rep.max_defect)
    report: dict = {
        "n": a.n,
        "m": a.m,
        "truncation": a.truncation,
        "threshold": args.threshold,
        "pairs": pair_reports,
        "max_defect": worst,
    }
    code = EXIT_OK if all(p["passed"] for p in pair_reports) else EXIT_VIOLATION
    if args.samples:
        rng = random.Random(args.seed)
        pairs, points = _axiom_samples(a, rng, args.samples)
        ax = check_summand_axioms(
            lambda coeffs, z: extend_summand(a, coeffs, z),
            a.columns, pairs, points, threshold=args.threshold)
        report["axioms"] = {
            "kind": ax.kind,
            "samples": ax.samples,
            "cocycle_defect": ax.cocycle_defect,
            "identity_defect": ax.identity_defect,
            "passed": ax.passed,
        }
        if not ax.passed:
            code = EXIT_VIOLATION
    status = "pass" if code == EXIT_OK else "FAIL"
    print(f"cocycle defect {worst:.3g} over {len(pair_reports)} pairs: "
          f"{status}", file=sys.stderr)
    return code, report


def _cmd_ot_build(args) -> tuple[int, dict]:
    rep = build_ot(args.poly, args.units, args.bound,
                   norm_kind=args.norm, shards=args.shards)
    text, data = summarize(rep)
    sys.stderr.write(text)
    if not rep.ok:
        return EXIT_VIOLATION, data
    if rep.admissibility.status == "indeterminate":
        return EXIT_INDETERMINATE, data
    return EXIT_OK, data


# ---------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--precision-start", type=_width_arg, default=Fraction(1, 2 ** 32),
        metavar="W",
        help="opening interval width, 2^-k or p/q (default 2^-32)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sampling (default 0)")
    common.add_argument("--out", metavar="FILE",
                        help="write the JSON report here instead of stdout")

    parser = _Parser(prog="cousin", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = top.add_parser("field", help="number field contexts")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("info", parents=[common],
                       help="signature, roots, optional unit-group analysis")
    q.add_argument("--poly", type=_poly_arg, required=True, metavar="c0,...,cn")
    q.add_argument("--units", type=_units_arg, metavar="[v1];[v2]")
    q.set_defaults(handler=_cmd_field_info)

    p = top.add_parser("lattice", help="period matrix normal forms")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("normalize", parents=[common],
                       help="block normal form plus optional integrality check")
    q.add_argument("--matrix", required=True, metavar="FILE")
    q.add_argument("--form", type=int, choices=(1, 2), default=1)
    q.add_argument("--bound", type=_bound_arg, metavar="B")
    q.set_defaults(handler=_cmd_lattice_normalize)

    p = top.add_parser("vogt", help="small-divisor gap scans")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("scan", parents=[common],
                       help="certified gap scan of an S block")
    q.add_argument("--matrix", required=True, metavar="FILE")
    q.add_argument("--bound", type=_bound_arg, required=True, metavar="B")
    q.add_argument("--norm", choices=("inf", "euclid"), default="inf")
    q.add_argument("--shards", type=int, default=1, metavar="K")
    q.set_defaults(handler=_cmd_vogt_scan)

    p = top.add_parser("liouville", help="linear-form lower bounds")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("certify", parents=[common],
                       help="per-column exponential-envelope certificate")
    q.add_argument("--matrix", required=True, metavar="FILE")
    q.add_argument("--exact-degree", action="store_true",
                   help="exact compositum degrees instead of the safe upper bound")
    q.set_defaults(handler=_cmd_liouville_certify)

    p = top.add_parser("automorphy", help="summand coefficient tables")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("check", parents=[common],
                       help="pairwise cocycle checks, optional random axiom samples")
    q.add_argument("--tables", required=True, metavar="FILE")
    q.add_argument("--threshold", type=float, default=DEFECT_THRESHOLD)
    q.add_argument("--samples", type=int, default=0, metavar="N")
    q.set_defaults(handler=_cmd_automorphy_check)

    p = top.add_parser("ot", help="unit-action lattice pipeline")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    q = sub.add_parser("build", parents=[common],
                       help="field, lattice, scan, and certificate in one run")
    q.add_argument("--poly", type=_poly_arg, required=True, metavar="c0,...,cn")
    q.add_argument("--units", type=_units_arg, required=True, metavar="[v1];[v2]")
    q.add_argument("--bound", type=_bound_arg, required=True, metavar="B")
    q.add_argument("--norm", choices=("inf", "euclid"), default="inf")
    q.add_argument("--shards", type=int, default=1, metavar="K")
    q.set_defaults(handler=_cmd_ot_build)

    return parser


def _merge_negative_values(argv: list[str]) -> list[str]:
    # "--poly -1,-1,0,1" would be read by argparse as flag + flag; fold
    # the value into --poly= form (the embedded echo keeps the original).
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--poly" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--poly={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(_merge_negative_values(argv))
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _apply_precision(args.precision_start)
    try:
        code, report = args.handler(args)
        report["invocation"] = _echo(argv)
        payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
        if args.out:
            Path(args.out).write_text(payload)
        else:
            sys.stdout.write(payload)
    except IndeterminateRank as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (ValueError, TypeError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
