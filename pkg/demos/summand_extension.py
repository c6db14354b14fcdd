"""Build compatible Fourier tables and extend them off the lattice.

Tables built through the shared parametrization satisfy the pairwise
compatibility relation by construction, so the checker's certified
defect bounds come out at zero.  The extension then evaluates the
summand at rational multiples of the generators, where the per-
frequency scaling factor does the work; perturbing one coefficient
breaks compatibility and the checker pins down the offending pair.
"""

from fractions import Fraction

from cousingroups import (
    check_summand_axioms,
    cocycle_parametrization,
    extend_summand,
    fourier_cocycle_check,
)
from cousingroups.automorphy import extension_coefficient

COLUMNS = ((0, 1), (1, Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 5)))
SHARED = {(1,): Fraction(1, 2), (2,): Fraction(-1, 4)}


def main() -> None:
    a = cocycle_parametrization(2, 1, COLUMNS, SHARED)
    print(f"generators: {a.rank}, table sizes: {[len(t) for t in a.tables]}")

    for i in range(a.rank):
        for j in range(i + 1, a.rank):
            rep = fourier_cocycle_check(a, i, j)
            print(f"pair ({i},{j}): max defect {rep.max_defect:.3e}, passed {rep.passed}")

    # extension: value at 1/2 of generator 1 plus 1/3 of generator 2
    ratios = (Fraction(0), Fraction(1, 2), Fraction(1, 3))
    z = (Fraction(1, 7), Fraction(0))
    val = extend_summand(a, ratios, z)
    print(f"summand at mixed rational point: {val:.10f}")

    # the cocycle axioms hold wherever the extension is defined; the
    # checker replays additivity on sampled arguments
    axioms = check_summand_axioms(
        lambda coeffs, zz: extend_summand(a, coeffs, zz),
        COLUMNS,
        [((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (0, 0, 1))],
        [(Fraction(1, 3), Fraction(0)), (Fraction(-2, 5), Fraction(1, 4))],
    )
    print(f"additivity samples pass: {axioms.passed} "
          f"(worst {max(axioms.cocycle_defect, axioms.identity_defect):.3e})")

    # the per-frequency factor vanishes at ratio 0 and is 1 at ratio 1;
    # at integer pairings the oscillating part drops out and the limit
    # is the ratio itself
    trail = (Fraction(1, 3),)
    for r in (Fraction(0), Fraction(1, 2), Fraction(1)):
        c = extension_coefficient((1,), r, trail)
        print(f"scaling factor at ratio {r}: {c:.6f}")
    flat = extension_coefficient((3,), Fraction(1, 2), (Fraction(2, 3),))
    print(f"integer pairing, ratio 1/2: {flat:.6f}")


if __name__ == "__main__":
    main()
