"""Exact-arithmetic toolkit for lattices in complex vector spaces.

Everything downstream of the scalar layer computes with rationals,
Gaussian rationals, or boxed algebraic numbers, so every yes/no answer
(rank, zero test, lattice membership, bound check) is certified rather
than floating-point best-effort.
"""

from . import scalars       # exact scalar tower and arithmetic helpers
from . import polynomials   # integer polynomials, Sturm chains, root bounds
from . import intervals     # rational interval / box arithmetic
from . import numberfield   # certified root isolation, algebraic numbers
from . import intmatrix     # integer matrices, HNF, unimodular completion
from . import okring        # monogenic orders, units, log map
from . import lattice       # period matrices, normal forms, rank checks
from . import diophantine   # integrality gap scanner over integer vectors
from . import liouville     # certified lower-bound certificates
from . import automorphy    # Fourier summand tables and cocycle checks
from . import otmanifold    # end-to-end build pipeline and reports
from . import cli           # command-line front end

from .scalars import GaussianRational, parse_scalar, format_scalar
from .polynomials import IntPolynomial
from .intervals import Interval, ComplexInterval
from .numberfield import AlgebraicNumber, isolate_roots, PrecisionError
from .okring import (
    FieldContext,
    OKElement,
    UnitSubgroup,
    field_context,
    check_admissible,
    log_map,
    unit_search,
)
from .lattice import (
    PeriodMatrix,
    DegenerateLattice,
    IndeterminateRank,
    parse_matrix_text,
    format_matrix_text,
    real_rank,
    normal_form_1,
    normal_form_2,
    apply_transforms,
    cousin_check_form1,
    cousin_check_form2,
)
from .diophantine import ScanReport, scan, fit_envelopes, check_against_certificate
from .liouville import (
    MultiPolynomial,
    LowerBoundCertificate,
    Condition2Certificate,
    poly_lower_bound,
    linear_form_certificate,
    condition2_certificate,
)
from .automorphy import (
    SummandFourier,
    cocycle_parametrization,
    fourier_cocycle_check,
    extend_summand,
    check_summand_axioms,
    check_factor_axioms,
)
from .otmanifold import OTReport, build_ot, report_dict, summarize

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "ComplexInterval",
    "Condition2Certificate",
    "DegenerateLattice",
    "FieldContext",
    "GaussianRational",
    "IndeterminateRank",
    "IntPolynomial",
    "Interval",
    "LowerBoundCertificate",
    "MultiPolynomial",
    "OKElement",
    "OTReport",
    "PeriodMatrix",
    "PrecisionError",
    "ScanReport",
    "SummandFourier",
    "UnitSubgroup",
    "apply_transforms",
    "build_ot",
    "check_admissible",
    "check_against_certificate",
    "check_factor_axioms",
    "check_summand_axioms",
    "cocycle_parametrization",
    "condition2_certificate",
    "cousin_check_form1",
    "cousin_check_form2",
    "extend_summand",
    "field_context",
    "fit_envelopes",
    "format_matrix_text",
    "format_scalar",
    "fourier_cocycle_check",
    "isolate_roots",
    "linear_form_certificate",
    "log_map",
    "normal_form_1",
    "normal_form_2",
    "parse_matrix_text",
    "parse_scalar",
    "poly_lower_bound",
    "real_rank",
    "report_dict",
    "scan",
    "summarize",
    "unit_search",
]
