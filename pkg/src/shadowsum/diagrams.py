"""Projected ribbon links on the sphere: faces, gleams, and the state sum.

A diagram is a family of disjoint circles on S^2 organized as a nesting
forest (no partial overlaps: that encodes the standing embedded-ribbons
assumption).  Faces are the complementary regions; each circle borders
exactly two of them and contributes +wind to the face on its positive side
and -wind to the other, so gleams always sum to zero while the face Euler
characteristics sum to chi(S^2) = 2.

The invariant of a colored diagram is

    |L| = sum_{colorings phi} prod_i N^{phi(Y^-_i)}_{gamma_i phi(Y^+_i)}
          * prod_Y dim(phi(Y))^chi(Y)
          * exp(pi i <phi(Y), phi(Y)+2 rho> / k)^{gleam(Y)}

summed over all maps from faces to the level alphabet.  Enumeration is
depth-first in region-tree order and prunes on vanishing fusion factors;
terms are accumulated in a compensated (error-tracking) sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .fusion import FusionTable, quantum_dimension
from .reps import Labels, LevelAlphabet

OUTER_FACE = "outer"


@dataclass(frozen=True)
class Circle:
    circle_id: str
    parent: str | None
    winding: int
    positive_side: str  # "inside" | "outside"
    color: Labels


@dataclass(frozen=True)
class Face:
    face_id: str
    boundary: tuple[str, ...]  # ids of adjacent circles
    euler: int
    gleam: int


@dataclass(frozen=True)
class ShadowDiagram:
    circles: tuple[Circle, ...]
    faces: tuple[Face, ...]  # region-tree preorder; outer face first

    def face_index(self, face_id: str) -> int:
        for i, f in enumerate(self.faces):
            if f.face_id == face_id:
                return i
        raise PreconditionError(f"unknown face {face_id!r}")

    def face(self, face_id: str) -> Face:
        return self.faces[self.face_index(face_id)]


def _face_id_of(circle_id: str | None) -> str:
    return OUTER_FACE if circle_id is None else f"in:{circle_id}"


def build_diagram(circles: Iterable[Circle | dict]) -> ShadowDiagram:
    """Validate the nesting forest and derive faces, Euler numbers, gleams.

    The face inside circle c (and outside c's children) gets chi = 1 - #children;
    the outer face gets chi = 2 - #roots.  Rejects containment cycles and
    dangling parent references as violations of the disjointness assumption.
    """
    cs: list[Circle] = []
    for c in circles:
        if isinstance(c, dict):
            c = Circle(
                circle_id=str(c["id"]),
                parent=None if c.get("parent") is None else str(c["parent"]),
                winding=int(c["winding"]),
                positive_side=str(c["positive_side"]),
                color=tuple(int(x) for x in c["color"]),
            )
        cs.append(c)

    ids = [c.circle_id for c in cs]
    if len(set(ids)) != len(ids):
        raise PreconditionError(f"duplicate circle ids in {ids}")
    by_id = {c.circle_id: c for c in cs}
    for c in cs:
        if c.positive_side not in ("inside", "outside"):
            raise PreconditionError(
                f"circle {c.circle_id}: positive_side must be 'inside' or 'outside', "
                f"got {c.positive_side!r}"
            )
        if c.parent is not None and c.parent not in by_id:
            raise PreconditionError(
                f"circle {c.circle_id} is parented to unknown circle {c.parent!r}"
            )
    # Forest check: walking parents must terminate at a root.
    for c in cs:
        seen = {c.circle_id}
        cur = c.parent
        while cur is not None:
            if cur in seen:
                raise PreconditionError(
                    f"containment cycle through circle {cur!r} violates the "
                    "disjoint-circles assumption"
                )
            seen.add(cur)
            cur = by_id[cur].parent

    children: dict[str | None, list[str]] = {None: []}
    for c in cs:
        children.setdefault(c.circle_id, [])
    for c in cs:
        children.setdefault(c.parent, []).append(c.circle_id)
    for v in children.values():
        v.sort()

    # Faces in region-tree preorder.
    order: list[str | None] = [None]
    stack = list(reversed(children[None]))
    while stack:
        cid = stack.pop()
        order.append(cid)
        stack.extend(reversed(children[cid]))

    gleams = {_face_id_of(cid): 0 for cid in order}
    for c in cs:
        inner = _face_id_of(c.circle_id)
        outer = _face_id_of(c.parent)
        s = 1 if c.positive_side == "inside" else -1
        gleams[inner] += s * c.winding
        gleams[outer] -= s * c.winding

    faces = []
    for cid in order:
        fid = _face_id_of(cid)
        kids = children[None if cid is None else cid]
        if cid is None:
            boundary = tuple(kids)
            euler = 2 - len(kids)
        else:
            boundary = tuple([cid] + kids)
            euler = 1 - len(kids)
        faces.append(Face(face_id=fid, boundary=boundary, euler=euler, gleam=gleams[fid]))

    return ShadowDiagram(circles=tuple(cs), faces=tuple(faces))


def gleam_of_face(diagram: ShadowDiagram, face_id: str) -> int:
    """The signed winding sum attached to one face (stored at build time)."""
    return diagram.face(face_id).gleam


@dataclass
class KahanComplex:
    """Compensated complex accumulator; exact zeros leave the state untouched."""

    total: complex = 0j
    _comp: complex = 0j

    def add(self, term: complex) -> None:
        if term == 0:
            return
        y = term - self._comp
        t = self.total + y
        self._comp = (t - self.total) - y
        self.total = t


@dataclass(frozen=True)
class StateSumResult:
    value: complex
    colorings_total: int
    colorings_retained: int
    terms: tuple[tuple[tuple[Labels, ...], complex], ...] | None = None


@dataclass(frozen=True)
class _TermData:
    """Per-diagram tables shared by the pruned and partitioned evaluations."""

    k: int
    chis: tuple[int, ...]
    gleams: tuple[int, ...]
    qdims: tuple[float, ...]
    phase_q: tuple[Fraction, ...]  # <phi, phi + 2 rho> per alphabet entry
    # circles as (face index of Y^-, face index of Y^+, color labels)
    circle_faces: tuple[tuple[int, int, Labels], ...]


def _prepare(diagram: ShadowDiagram, alphabet: LevelAlphabet, fusion: FusionTable) -> _TermData:
    if fusion.alphabet is not alphabet and (
        fusion.alphabet.k != alphabet.k
        or fusion.alphabet.rs.type_label != alphabet.rs.type_label
        or fusion.alphabet.rs.rank != alphabet.rs.rank
    ):
        raise PreconditionError(
            "fusion table was built for a different root system or level than the alphabet"
        )
    rs = alphabet.rs
    for c in diagram.circles:
        if c.color not in alphabet:
            raise PreconditionError(
                f"circle {c.circle_id}: color {c.color} is outside the level alphabet "
                f"of {rs.type_label}{rs.rank} at k = {alphabet.k}"
            )
    rho2 = (2,) * rs.rank
    qdims = tuple(quantum_dimension(alphabet, lam) for lam in alphabet.elements)
    phase_q = tuple(
        rs.label_form(lam, tuple(a + b for a, b in zip(lam, rho2)))
        for lam in alphabet.elements
    )
    idx = {f.face_id: i for i, f in enumerate(diagram.faces)}
    circle_faces = []
    for c in diagram.circles:
        inner = idx[_face_id_of(c.circle_id)]
        outer = idx[_face_id_of(c.parent)]
        plus, minus = (inner, outer) if c.positive_side == "inside" else (outer, inner)
        circle_faces.append((minus, plus, c.color))
    return _TermData(
        k=alphabet.k,
        chis=tuple(f.euler for f in diagram.faces),
        gleams=tuple(f.gleam for f in diagram.faces),
        qdims=qdims,
        phase_q=phase_q,
        circle_faces=tuple(circle_faces),
    )


def term_value(
    data: _TermData,
    alphabet: LevelAlphabet,
    fusion: FusionTable,
    coloring: Sequence[int],
) -> complex:
    """Canonical per-coloring term; factors multiplied in fixed face order."""
    n_product = 1
    for minus, plus, gamma in data.circle_faces:
        n_product *= fusion.get(alphabet.elements[coloring[minus]], gamma, alphabet.elements[coloring[plus]])
        if n_product == 0:
            return 0j
    dim_product = 1.0
    exponent = Fraction(0)
    for fi, ci in enumerate(coloring):
        dim_product *= data.qdims[ci] ** data.chis[fi]
        exponent += data.gleams[fi] * data.phase_q[ci]
    exponent = exponent % (2 * data.k)  # exp(i pi q / k) has period 2k in q
    return n_product * dim_product * complex(
        math.cos(math.pi * float(exponent) / data.k),
        math.sin(math.pi * float(exponent) / data.k),
    )


def state_sum(
    diagram: ShadowDiagram,
    alphabet: LevelAlphabet,
    fusion: FusionTable,
    diagnostics: bool = False,
    partition: tuple[int, int] | None = None,
) -> StateSumResult:
    """Sum the invariant over all area colorings (optionally one partition).

    Colorings are enumerated depth-first over faces in region-tree order;
    a branch is cut as soon as some circle's fusion factor vanishes.  With
    partition = (j, p) only colorings whose outer-face color index is
    congruent to j mod p are summed; combining the p partial results in
    fixed order reproduces the full sum deterministically.
    """
    data = _prepare(diagram, alphabet, fusion)
    n_faces = len(diagram.faces)
    n_colors = len(alphabet.elements)
    if partition is not None:
        j, p = partition
        if p < 1 or not (0 <= j < p):
            raise PreconditionError(f"bad partition {partition}")
        first_choices = [i for i in range(n_colors) if i % p == j]
    else:
        first_choices = list(range(n_colors))

    # circles whose fusion factor becomes decidable once face f is colored
    # (in region-tree order that is the inner face, except for inside-out
    # orientations where it is still the later of the two faces).
    ready_at: list[list[tuple[int, int, Labels]]] = [[] for _ in range(n_faces)]
    for minus, plus, gamma in data.circle_faces:
        ready_at[max(minus, plus)].append((minus, plus, gamma))

    acc = KahanComplex()
    terms: list[tuple[tuple[Labels, ...], complex]] = []
    coloring = [0] * n_faces
    retained = 0

    def descend(face: int) -> None:
        nonlocal retained
        choices = first_choices if face == 0 else range(n_colors)
        for ci in choices:
            coloring[face] = ci
            ok = True
            for minus, plus, gamma in ready_at[face]:
                if (
                    fusion.get(
                        alphabet.elements[coloring[minus]],
                        gamma,
                        alphabet.elements[coloring[plus]],
                    )
                    == 0
                ):
                    ok = False
                    break
            if not ok:
                continue
            if face + 1 < n_faces:
                descend(face + 1)
            else:
                t = term_value(data, alphabet, fusion, coloring)
                retained += 1
                acc.add(t)
                if diagnostics:
                    terms.append(
                        (tuple(alphabet.elements[c] for c in coloring), t)
                    )

    descend(0)
    total_space = n_colors ** n_faces if partition is None else len(first_choices) * n_colors ** (n_faces - 1)
    return StateSumResult(
        value=acc.total,
        colorings_total=total_space,
        colorings_retained=retained,
        terms=tuple(terms) if diagnostics else None,
    )


def combine_partitions(parts: Sequence[StateSumResult]) -> StateSumResult:
    """Fixed-order reduction of per-partition results (bit-reproducible)."""
    acc = KahanComplex()
    for p in parts:
        acc.add(p.value)
    return StateSumResult(
        value=acc.total,
        colorings_total=sum(p.colorings_total for p in parts),
        colorings_retained=sum(p.colorings_retained for p in parts),
        terms=None,
    )


def empty_link_value(alphabet: LevelAlphabet) -> float:
    """sum_lambda dim_q(lambda)^2, the bare-sphere state sum."""
    return sum(quantum_dimension(alphabet, lam) ** 2 for lam in alphabet.elements)
