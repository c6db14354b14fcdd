"""End-to-end build from a cubic unit, with a quartic contrast case.

z^3 - z - 1 has one real root and one complex pair, so its unit group
can move a rank-3 lattice around a two-dimensional complex space.  The
pipeline certifies every stage: signature, admissibility of the chosen
unit, simple type, the period normal form, and the integrality scan
with its matching lower-bound certificate.
"""

from cousingroups import build_ot, field_context, log_map, summarize


def main() -> None:
    report = build_ot([-1, -1, 0, 1], [(0, 1, 0)], 50)
    text, _ = summarize(report)
    print(text)

    # the admissibility proof lives in the log image of the unit: the
    # real coordinate must stay away from zero while all coordinates
    # sum to zero (units have norm +-1)
    ctx = field_context([-1, -1, 0, 1])
    unit = ctx.element((0, 1, 0))
    logs = log_map(unit)
    print("log image of the generating unit:")
    for k, box in enumerate(logs):
        print(f"  coordinate {k}: [{float(box.lo):.12f}, {float(box.hi):.12f}]")
    total_lo = sum(b.lo for b in logs)
    total_hi = sum(b.hi for b in logs)
    print(f"  coordinate sum in [{float(total_lo):.3e}, {float(total_hi):.3e}]")

    # z^4 - 2z^2 - 1 has two real roots and one complex pair; a single
    # unit can no longer span the rank-2 real side, so the group it
    # generates fails the rank condition and the type is not simple
    print()
    quartic = build_ot([-1, 0, -2, 0, 1], [(0, 0, 1, 0)], 20)
    text, _ = summarize(quartic)
    print(text)


if __name__ == "__main__":
    main()
