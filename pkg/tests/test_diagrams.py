import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_forest_diagram
from shadowsum.diagrams import (
    KahanComplex,
    build_diagram,
    combine_partitions,
    empty_link_value,
    gleam_of_face,
    state_sum,
)
from shadowsum.errors import PreconditionError
from shadowsum.fusion import build_fusion_table, quantum_dimension
from shadowsum.reps import level_alphabet
from shadowsum.roots import build_root_system


def circle(cid, parent=None, winding=1, side="inside", color=(0,)):
    return {
        "id": cid,
        "parent": parent,
        "winding": winding,
        "positive_side": side,
        "color": list(color),
    }


def naive_state_sum(diagram, alphabet, fusion):
    """Full product-space enumeration with plain nested loops; no pruning.

    Mirrors the canonical term arithmetic (integer fusion product, dims in
    face order, exact rational phase exponent) so agreement can be checked
    with zero tolerance.
    """
    rs = alphabet.rs
    k = alphabet.k
    qdims = [quantum_dimension(alphabet, lam) for lam in alphabet.elements]
    rho2 = (2,) * rs.rank
    phase_q = [
        rs.label_form(lam, tuple(a + b for a, b in zip(lam, rho2)))
        for lam in alphabet.elements
    ]
    face_ids = [f.face_id for f in diagram.faces]
    chis = [f.euler for f in diagram.faces]
    gleams = [f.gleam for f in diagram.faces]
    circles = []
    for c in diagram.circles:
        inner = face_ids.index(f"in:{c.circle_id}")
        outer = face_ids.index("outer" if c.parent is None else f"in:{c.parent}")
        plus, minus = (inner, outer) if c.positive_side == "inside" else (outer, inner)
        circles.append((minus, plus, c.color))
    acc = KahanComplex()
    n_nonzero = 0
    for coloring in itertools.product(range(len(alphabet.elements)), repeat=len(chis)):
        n_product = 1
        for minus, plus, gamma in circles:
            n_product *= fusion.get(
                alphabet.elements[coloring[minus]], gamma, alphabet.elements[coloring[plus]]
            )
            if n_product == 0:
                break
        if n_product == 0:
            continue
        dim_product = 1.0
        exponent = Fraction(0)
        for fi, ci in enumerate(coloring):
            dim_product *= qdims[ci] ** chis[fi]
            exponent += gleams[fi] * phase_q[ci]
        exponent = exponent % (2 * k)
        term = n_product * dim_product * complex(
            math.cos(math.pi * float(exponent) / k),
            math.sin(math.pi * float(exponent) / k),
        )
        n_nonzero += 1
        acc.add(term)
    return acc.total, n_nonzero


class TestBuildDiagram:
    def test_empty(self):
        d = build_diagram([])
        assert len(d.faces) == 1
        f = d.faces[0]
        assert f.euler == 2 and f.gleam == 0

    def test_single_circle(self):
        d = build_diagram([circle("c", winding=1, side="inside")])
        by_id = {f.face_id: f for f in d.faces}
        assert by_id["in:c"].euler == 1 and by_id["in:c"].gleam == 1
        assert by_id["outer"].euler == 1 and by_id["outer"].gleam == -1

    def test_two_nested(self):
        d = build_diagram(
            [circle("a", winding=2), circle("b", parent="a", winding=5)]
        )
        by_id = {f.face_id: f for f in d.faces}
        # middle annulus: inside a, outside b
        assert by_id["in:a"].euler == 0
        assert by_id["in:a"].gleam == 2 - 5
        d2 = build_diagram(
            [circle("a", winding=2), circle("b", parent="a", winding=5, side="outside")]
        )
        assert {f.face_id: f for f in d2.faces}["in:a"].gleam == 2 + 5

    def test_gleam_of_face_examples(self):
        d = build_diagram([circle("c", winding=3, side="inside")])
        assert gleam_of_face(d, "outer") == -3
        assert gleam_of_face(build_diagram([]), "outer") == 0
        d2 = build_diagram(
            [
                circle("a", winding=1, side="inside"),
                circle("b", parent="a", winding=1, side="outside"),
            ]
        )
        assert gleam_of_face(d2, "in:a") == 2
        with pytest.raises(PreconditionError):
            gleam_of_face(d2, "nope")

    def test_cycle_rejected(self):
        with pytest.raises(PreconditionError) as ei:
            build_diagram(
                [circle("a", parent="b"), circle("b", parent="a")]
            )
        assert "cycle" in str(ei.value)

    def test_self_parent_rejected(self):
        with pytest.raises(PreconditionError):
            build_diagram([circle("a", parent="a")])

    def test_unknown_parent_rejected(self):
        with pytest.raises(PreconditionError):
            build_diagram([circle("a", parent="ghost")])

    def test_bad_side_rejected(self):
        with pytest.raises(PreconditionError):
            build_diagram([circle("a", side="left")])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(PreconditionError):
            build_diagram([circle("a"), circle("a")])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_forest_invariants_property(seed, a1k4):
    rng = random.Random(seed)
    d = random_forest_diagram(rng, a1k4)
    assert sum(f.euler for f in d.faces) == 2
    assert sum(f.gleam for f in d.faces) == 0
    assert len(d.faces) == len(d.circles) + 1


class TestStateSum:
    def test_empty_link_a1_k4(self, a1k4, a1k4_table):
        d = build_diagram([])
        r = state_sum(d, a1k4, a1k4_table)
        assert abs(r.value - 4.0) < 1e-9
        assert abs(empty_link_value(a1k4) - 4.0) < 1e-9

    def test_wind0_trivial_color(self, a1k4, a1k4_table):
        d = build_diagram([circle("c", winding=0, color=(0,))])
        r = state_sum(d, a1k4, a1k4_table)
        assert abs(r.value - 4.0) < 1e-9

    def test_single_circle_brute_force(self, a1k4, a1k4_table):
        d = build_diagram([circle("c", winding=1, color=(1,))])
        r = state_sum(d, a1k4, a1k4_table, diagnostics=True)
        val = 0j
        for a in range(3):
            for b in range(3):
                n = a1k4_table.get((b,), (1,), (a,))
                val += (
                    n
                    * quantum_dimension(a1k4, (a,))
                    * quantum_dimension(a1k4, (b,))
                    * cmath.exp(1j * math.pi * a * (a + 2) / 8)
                    * cmath.exp(-1j * math.pi * b * (b + 2) / 8)
                )
        assert abs(r.value - val) < 1e-12
        assert abs(r.value - sum(t for _, t in r.terms)) < 1e-12  # diagnostics consistency

    def test_trivially_colored_wind0_circles_match_empty(self, a1):
        for k in (4, 5):
            al = level_alphabet(a1, k)
            ft = build_fusion_table(al)
            expect = state_sum(build_diagram([]), al, ft).value
            for n in (1, 2, 3):
                circles = [
                    circle(str(i), parent=str(i - 1) if i and i % 2 else None,
                           winding=0, color=(0,))
                    for i in range(n)
                ]
                got = state_sum(build_diagram(circles), al, ft).value
                assert abs(got - expect) < 1e-9

    def test_mismatched_fusion_rejected(self, a1, a1k4):
        other = build_fusion_table(level_alphabet(a1, 5))
        with pytest.raises(PreconditionError):
            state_sum(build_diagram([]), a1k4, other)

    def test_color_outside_alphabet_rejected(self, a1k4, a1k4_table):
        d = build_diagram([circle("c", color=(3,))])
        with pytest.raises(PreconditionError):
            state_sum(d, a1k4, a1k4_table)

    @pytest.mark.parametrize("label,k", [("A1", 5), ("A2", 5), ("B2", 5)])
    def test_double_reversal_invariance(self, label, k):
        rs = build_root_system(label)
        al = level_alphabet(rs, k)
        ft = build_fusion_table(al)
        rng = random.Random(20240 + k)
        for _ in range(6):
            d = random_forest_diagram(rng, al, max_circles=4, max_wind=2)
            flipped = [
                circle(
                    c.circle_id,
                    parent=c.parent,
                    winding=-c.winding,
                    side="outside" if c.positive_side == "inside" else "inside",
                    color=c.color,
                )
                for c in d.circles
            ]
            v1 = state_sum(d, al, ft).value
            v2 = state_sum(build_diagram(flipped), al, ft).value
            assert abs(v1 - v2) < 1e-9

    def test_partitioned_equals_sequential(self, a1k4, a1k4_table):
        d = build_diagram(
            [circle("a", winding=2, color=(1,)), circle("b", parent="a", winding=-1, color=(2,))]
        )
        full = state_sum(d, a1k4, a1k4_table)
        for workers in (2, 3):
            parts = [
                state_sum(d, a1k4, a1k4_table, partition=(j, workers))
                for j in range(workers)
            ]
            combined = combine_partitions(parts)
            assert abs(combined.value - full.value) < 1e-12
            assert combined.colorings_total == full.colorings_total
            assert combined.colorings_retained == full.colorings_retained
            again = combine_partitions(
                [
                    state_sum(d, a1k4, a1k4_table, partition=(j, workers))
                    for j in range(workers)
                ]
            )
            assert again.value == combined.value  # bit-reproducible


def all_small_diagrams():
    """Every diagram shape with <= 3 faces: none, one circle, two nested,
    two side-by-side; windings in [-2, 2], both side flags."""
    yield []
    for w, side in itertools.product(range(-2, 3), ("inside", "outside")):
        yield [circle("a", winding=w, side=side)]
    for w1, w2, s1, s2, nested in itertools.product(
        range(-2, 3), range(-2, 3), ("inside", "outside"), ("inside", "outside"), (True, False)
    ):
        yield [
            circle("a", winding=w1, side=s1),
            circle("b", parent="a" if nested else None, winding=w2, side=s2),
        ]


def test_pruned_equals_naive_exactly(a1):
    """Zero-tolerance agreement between the pruned DFS and naive loops."""
    for k in (3, 4, 5):
        al = level_alphabet(a1, k)
        ft = build_fusion_table(al)
        colors = list(al.elements)
        rng = random.Random(99)
        for shape in all_small_diagrams():
            cs = [dict(c, color=list(rng.choice(colors))) for c in shape]
            d = build_diagram(cs)
            got = state_sum(d, al, ft)
            want, n_nonzero = naive_state_sum(d, al, ft)
            assert got.value == want
            assert got.colorings_retained == n_nonzero
