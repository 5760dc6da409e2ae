"""Dominant weights, level alphabets, weight multiplicities, characters.

Weights are handled by their integer coordinates in the fundamental-weight
basis ("labels").  Multiplicities come from the Freudenthal recursion run
in exact integer arithmetic (the invariant form scaled to an integer
quadratic form on labels).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .roots import RootSystem, dominant_weights_up_to_level

Labels = tuple[int, ...]


@dataclass(frozen=True)
class LevelAlphabet:
    """The dominant weights integrable at level k - g: <lambda, theta> <= k - g."""

    rs: RootSystem
    k: int
    elements: tuple[Labels, ...]

    def __contains__(self, labels) -> bool:
        return tuple(labels) in set(self.elements)

    def index(self, labels) -> int:
        return self.elements.index(tuple(labels))


def level_alphabet(rs: RootSystem, k: int) -> LevelAlphabet:
    """All dominant weights with <lambda, theta> <= k - g.

    Requires k > g; at and below the dual Coxeter number the state sum
    degenerates and is out of scope here.
    """
    g = rs.dual_coxeter
    if k <= g:
        raise PreconditionError(
            f"level bound violated: need k > g, got k = {k} with dual Coxeter "
            f"number g = {g} for {rs.type_label}{rs.rank} "
            f"(the alphabet requires <lambda, theta> <= k - g)"
        )
    elems = dominant_weights_up_to_level(rs, k - g)
    return LevelAlphabet(rs=rs, k=k, elements=tuple(elems))


@dataclass(frozen=True)
class WeightSystem:
    """Full multiplicity table of one irreducible highest-weight module."""

    rs: RootSystem
    highest: Labels
    multiplicities: dict[Labels, int]

    def dimension(self) -> int:
        return sum(self.multiplicities.values())


def weyl_dimension(rs: RootSystem, lam: Sequence[int]) -> int:
    """dim = prod_{alpha>0} <lam+rho, alpha> / <rho, alpha>, an exact integer."""
    lam = _check_dominant(rs, lam)
    rho = (1,) * rs.rank
    lam_rho = tuple(a + b for a, b in zip(lam, rho))
    num = Fraction(1)
    for alpha in rs.positive_roots:
        al = tuple(rs.inner(alpha, cr) for cr in rs.simple_coroots)
        num *= rs.label_form(lam_rho, al) / rs.label_form(rho, al)
    assert num.denominator == 1
    return int(num)


def _check_dominant(rs: RootSystem, lam: Sequence[int]) -> Labels:
    t = tuple(int(v) for v in lam)
    if len(t) != rs.rank or any(ti != v for ti, v in zip(t, lam)) or any(v < 0 for v in t):
        raise PreconditionError(
            f"weight {tuple(lam)} is not dominant for {rs.type_label}{rs.rank}: "
            "expected nonnegative integer fundamental-weight coordinates"
        )
    return t


_mult_cache: dict[tuple[str, int, Labels], "WeightSystem"] = {}


def weight_multiplicities(rs: RootSystem, lam: Sequence[int]) -> WeightSystem:
    """Weight multiplicity table by the Freudenthal recursion (exact).

    Weights of the module are found breadth-first from the highest weight by
    subtracting simple roots; a candidate is kept iff the recursion gives a
    positive multiplicity.  Results are memoized per (type, weight); the
    cache is filled by whichever caller arrives first and only read after.
    """
    lam = _check_dominant(rs, lam)
    key = (rs.type_label, rs.rank, lam)
    hit = _mult_cache.get(key)
    if hit is not None:
        return hit

    den = rs.weight_form_den
    rho = (1,) * rs.rank
    pos_labels = [
        tuple(int(rs.inner(a, cr)) for cr in rs.simple_coroots)
        for a in rs.positive_roots
    ]

    def norm_shifted(mu: Labels) -> Fraction:
        v = tuple(a + b for a, b in zip(mu, rho))
        return rs.label_form(v, v)

    lam_norm = norm_shifted(lam)
    mult: dict[Labels, int] = {lam: 1}
    simple_labels = [rs.simple_root_labels(i) for i in range(rs.rank)]
    frontier = [lam]
    while frontier:
        candidates: set[Labels] = set()
        for w in frontier:
            for s in simple_labels:
                candidates.add(tuple(a - b for a, b in zip(w, s)))
        frontier = []
        for mu in sorted(candidates):
            if mu in mult:
                continue
            denom = lam_norm - norm_shifted(mu)
            if denom <= 0:
                continue
            acc = Fraction(0)
            for al in pos_labels:
                j = 1
                while True:
                    up = tuple(a + j * b for a, b in zip(mu, al))
                    m = mult.get(up)
                    if m is None:
                        break
                    acc += 2 * m * rs.label_form(up, al)
                    j += 1
            if acc == 0:
                continue
            m_mu = acc / denom
            assert m_mu.denominator == 1 and m_mu > 0, (lam, mu, m_mu)
            mult[mu] = int(m_mu)
            frontier.append(mu)

    ws = WeightSystem(rs=rs, highest=lam, multiplicities=mult)
    if ws.dimension() != weyl_dimension(rs, lam):
        raise AssertionError(
            f"Freudenthal total {ws.dimension()} != Weyl dimension "
            f"{weyl_dimension(rs, lam)} for {rs.type_label}{rs.rank} weight {lam}"
        )
    _mult_cache[key] = ws
    return ws


def character_eval(ws: WeightSystem, b: Sequence) -> complex:
    """Character value sum_beta m(beta) e^{2 pi i beta(b)} at b in t.

    With the convention exp(b) = identity iff b lies in the coroot lattice,
    the phases use the 2 pi i factor and the value is periodic under
    translations of b by coroots.  Exact rational b gets its phase reduced
    mod 1 before any float rounding.
    """
    rs = ws.rs
    total = 0j
    for labels, m in ws.multiplicities.items():
        beta = rs.from_labels(labels)
        phase = rs.inner(beta, tuple(b))
        if isinstance(phase, Fraction):
            phase = phase - math.floor(phase)
        total += m * cmath.exp(2j * math.pi * float(phase))
    return total
