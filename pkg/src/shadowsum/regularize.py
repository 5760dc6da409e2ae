"""Regularization sequences for the indicator of the regular set and the
determinant: trigonometric-polynomial cutoffs and polynomial exp/log.

The n-th stage works on the n-th barycentric refinement of a face mesh
compatible with the diagram, simulated combinatorially: every face is
subdivided fourfold per step, so stage n has N_n = max(1, #faces) * 4^n
cells and each cell inherits its face's (exact) field value.

Indicator.  A smooth 1-periodic bump psi_n vanishes exactly on the
integers and equals 1 outside the 1/(4n)-neighborhood of them; its
truncated Fourier series p_n, recentred so that p_n(0) = 0, is the
cell-wise cutoff.  The stage value is

    prod_{cells F} prod_{alpha>0} pbar_n(alpha(B(F)))

which is exactly zero as soon as some alpha(B(F)) is an integer (arguments
are reduced mod 1 in exact rational arithmetic before evaluation), and
tends to 1 on fields bounded away from the singular set.

Determinant.  exp is replaced by its degree-n Taylor polynomial and log by
a polynomial fit converging uniformly to the principal log on the compact
pieces of [-2, -1/n] u [1/n, 2]; the integral reduces to Euler-number
weights per face under the standing metric assumption.
"""

from __future__ import annotations

import math
from fractions import Fraction
import numpy as np

from .determinants import SteppedField
from .errors import PreconditionError
from .roots import RootSystem

# -- smooth periodic bump and its trig-polynomial approximation ---------------

_BUMP_C = 0.25  # transition fits inside the C/n-neighborhood of the integers


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C^infinity step: 0 at t <= 0, 1 at t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        g = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return f / (f + g)


def bump(n: int, x: np.ndarray) -> np.ndarray:
    """psi_n: 1-periodic, 0 exactly on Z, 1 at distance >= 1/(4n) from Z."""
    s0 = math.sin(math.pi * _BUMP_C / n) ** 2
    return _smooth_step(np.sin(math.pi * x) ** 2 / s0)


class TrigCutoff:
    """Recentred truncated Fourier series of the bump, pbar_n = p_n - p_n(0).

    Guarantees pbar_n(m) = 0 exactly for integer m; `sup_error` is the
    measured uniform distance to psi_n on a dense grid.
    """

    def __init__(self, n: int, coeffs: np.ndarray, sup_error: float):
        self.n = n
        self.coeffs = coeffs  # cosine coefficients, constant recentred
        self.sup_error = sup_error

    def __call__(self, x: Fraction | float) -> float:
        if isinstance(x, Fraction):
            x = x - math.floor(x)
            if x == 0:
                return 0.0
            xf = float(x)
        else:
            xf = x - math.floor(x)
            if xf == 0.0:
                return 0.0
        m = np.arange(len(self.coeffs))
        return float(self.coeffs @ np.cos(2.0 * math.pi * m * xf))


_cutoff_cache: dict[tuple[int, float], TrigCutoff] = {}


def trig_cutoff(n: int, target: float) -> TrigCutoff:
    """Build (and cache) pbar_n with sup error below `target` where feasible.

    Accuracy below ~1e-12 is not reachable in double precision; the builder
    floors the target there and records the achieved error.
    """
    target = max(target, 1e-12)
    key = (n, target)
    hit = _cutoff_cache.get(key)
    if hit is not None:
        return hit
    K = 1 << 13
    grid = np.arange(K) / K
    psi = bump(n, grid)
    spectrum = np.fft.rfft(psi) / K
    dense_n = 4 * K
    psi_dense = bump(n, np.arange(dense_n) / dense_n)
    best = None
    M = max(8 * n, 32)
    while True:
        M = min(M, len(spectrum) - 1)
        a = np.zeros(M + 1)
        a[0] = spectrum[0].real
        a[1:] = 2.0 * spectrum[1 : M + 1].real  # psi is even: cosine series
        a[0] -= a.sum()  # recentre: pbar = p - p(0) vanishes at the integers
        z = np.zeros(dense_n // 2 + 1, dtype=complex)
        z[0] = a[0] * dense_n
        z[1 : M + 1] = a[1:] * (dense_n / 2.0)
        vals = np.fft.irfft(z, n=dense_n)
        err = float(np.max(np.abs(vals - psi_dense)))
        if best is None or err < best[1]:
            best = (a, err)
        if err <= target or M == len(spectrum) - 1:
            break
        M *= 2
    cut = TrigCutoff(n, best[0], best[1])
    _cutoff_cache[key] = cut
    return cut


def mesh_cells(field: SteppedField, n: int) -> int:
    """Cells per face of the n-th fourfold refinement."""
    if n < 1:
        raise PreconditionError(f"regularization index must be >= 1, got {n}")
    return 4 ** n


def total_cells(field: SteppedField, n: int) -> int:
    return max(1, len(field.diagram.faces)) * mesh_cells(field, n)


def cutoff_accuracy_target(rs: RootSystem, field: SteppedField, n: int) -> float:
    """Per-factor accuracy making the whole product 1/N_n^2-close to 1.

    The product has N_n * |R+| factors, so the per-factor budget is
    1/(8 N_n^3 |R+|); below the double-precision floor the builder clips it
    and the product accuracy degrades gracefully to ~N_n |R+| * 1e-12.
    """
    nn = total_cells(field, n)
    return 1.0 / (8.0 * nn ** 3 * len(rs.positive_roots))


def regularized_indicator(rs: RootSystem, n: int, field: SteppedField) -> float:
    """Stage-n regularized indicator of "the field is everywhere regular".

    Exactly 0 whenever some alpha(value) is an integer (exact rational
    test); close to 1 when every value keeps all alpha-pairings at least
    1/n away from the integers.
    """
    cut = trig_cutoff(n, cutoff_accuracy_target(rs, field, n))
    cells = mesh_cells(field, n)
    out = 1.0
    for b in field.values:
        face_factor = 1.0
        for alpha in rs.positive_roots:
            x = rs.inner(alpha, b)
            v = cut(x)
            if v == 0.0:
                return 0.0
            face_factor *= v
        out *= face_factor ** cells
    return out


# -- polynomial exp/log sequences ---------------------------------------------


def exp_poly(n: int, z: complex) -> complex:
    """Degree-n Taylor polynomial of exp at 0."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    for j in range(1, n + 1):
        term *= z / j
        total += term
    return total


class LogPoly:
    """One polynomial approximating the principal log on [-2,-1/n] u [1/n, 2].

    Complex coefficients in the Chebyshev basis on [-2, 2]; converges
    uniformly to ln|x| + i pi H(-x) on every compact subset of
    [-2, 2] minus 0 as n grows.
    """

    def __init__(self, n: int, coeffs: np.ndarray, sup_error: float):
        self.n = n
        self.coeffs = coeffs
        self.sup_error = sup_error

    def __call__(self, x: float) -> complex:
        return complex(np.polynomial.chebyshev.chebval(x / 2.0, self.coeffs))


_log_cache: dict[int, LogPoly] = {}


def log_poly(n: int) -> LogPoly:
    """Build (and cache) log^(n), fitting until sup error <= 4^-n or floor."""
    hit = _log_cache.get(n)
    if hit is not None:
        return hit
    target = max(4.0 ** (-n), 2e-11)
    a = 1.0 / n
    samples = []
    for lo, hi in ((a, 2.0), (-2.0, -a)):
        t = np.cos(np.pi * (np.arange(1200) + 0.5) / 1200)
        samples.append((lo + hi) / 2.0 + (hi - lo) / 2.0 * t)
    x = np.concatenate(samples)
    y = np.log(np.abs(x)) + 1j * math.pi * (x < 0)
    dense = []
    for lo, hi in ((a, 2.0), (-2.0, -a)):
        dense.append(np.linspace(lo, hi, 4000))
    xd = np.concatenate(dense)
    yd = np.log(np.abs(xd)) + 1j * math.pi * (xd < 0)
    best = None
    deg = max(8, 4 * n)
    while True:
        deg = min(deg, 1000)
        v = np.polynomial.chebyshev.chebvander(x / 2.0, deg)
        coef, *_ = np.linalg.lstsq(v, y, rcond=None)
        vals = np.polynomial.chebyshev.chebval(xd / 2.0, coef)
        err = float(np.max(np.abs(vals - yd)))
        if best is None or err < best[1]:
            best = (coef, err)
        if err <= target or deg >= 1000:
            break
        deg *= 2
    lp = LogPoly(n, best[0], best[1])
    _log_cache[n] = lp
    return lp


def det_rig_n(rs: RootSystem, n: int, field: SteppedField) -> complex:
    """Stage-n regularized determinant of a stepped (or constant) field.

    prod_{alpha>0} exp^(n)( sum_faces log^(n)(2 sin(pi alpha(b_face))) * chi(face) ),
    using that the curvature measure of each face is 4 pi chi(face) under
    the standing metric assumption and that the mesh refines the faces, so
    cell means reproduce the face values exactly.  Defined (finite) for any
    bounded field, singular values included.
    """
    if n < 1:
        raise PreconditionError(f"regularization index must be >= 1, got {n}")
    lp = log_poly(n)
    total = 1.0 + 0j
    for alpha in rs.positive_roots:
        acc = 0j
        for face, b in zip(field.diagram.faces, field.values):
            x = 2.0 * math.sin(math.pi * float(rs.inner(alpha, b)))
            acc += lp(x) * face.euler
        total *= exp_poly(n, acc)
    return total
