#!/usr/bin/env python3
"""Convergence tables for the stage-n regularizations.

Prints, for a constant field with alpha(b) = 1/2 and for a two-face step
field, the regularized indicator and determinant at n = 1..12 against their
closed-form limits.
"""

from fractions import Fraction as Q

from shadowsum.determinants import SteppedField, det_rig_constant, det_rig_step
from shadowsum.diagrams import build_diagram
from shadowsum.regularize import det_rig_n, regularized_indicator
from shadowsum.roots import build_root_system


def table(rs, field, target, title):
    print(f"\n{title}  (closed form {target:.10f})")
    print(f"{'n':>3} {'indicator':>22} {'det_rig_n':>26} {'|det err|':>12}")
    for n in range(1, 13):
        ind = regularized_indicator(rs, n, field)
        det = det_rig_n(rs, n, field)
        print(f"{n:>3} {ind:>22.14f} {det.real:>14.8f}{det.imag:>+12.2e}j {abs(det - target):>12.3e}")


def main():
    rs = build_root_system("A1")
    b = rs.from_labels([Q(1, 2)])
    const = SteppedField.constant(b)
    table(rs, const, det_rig_constant(rs, b, 2), "constant field, alpha(b) = 1/2")

    diagram = build_diagram(
        [{"id": "c", "parent": None, "winding": 1, "positive_side": "inside", "color": [0]}]
    )
    step = SteppedField(
        diagram=diagram,
        values=(rs.from_labels([Q(1, 2)]), rs.from_labels([Q(1, 3)])),
    )
    table(rs, step, det_rig_step(rs, step), "step field, faces alpha(b) = 1/2 and 1/3")

    singular = SteppedField(
        diagram=diagram, values=(rs.from_labels([Q(1, 2)]), rs.from_labels([2]))
    )
    print("\nsingular step field: indicator =",
          [regularized_indicator(rs, n, singular) for n in range(1, 9)])


if __name__ == "__main__":
    main()
