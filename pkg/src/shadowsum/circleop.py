"""Inverse of d/dt + ad(b) on g-valued Fourier series over the circle.

Series live in the complexified root-space basis [H_1..H_r, X_alpha for
alpha in roots] where ad(b) is diagonal: 0 on the Cartan coordinates and
2 pi i alpha(b) on X_alpha (the exponential convention exp(b) = 1 iff b is
in the coroot lattice).  Mode n of the operator multiplies coordinate
X_alpha by 2 pi i (n + alpha(b)) and Cartan coordinates by 2 pi i n, so
for regular b the operator is invertible exactly on the admissible space:
all root-space modes plus the nonzero Cartan modes.

The closed form T(b) . int_0^1 e^{s ad(b)} f(t+s) ds evaluates, mode by
mode on root coordinates, to that same division; on Cartan-valued modes
the formula's t-part averages to a constant and cannot invert d/dt, so
this implementation divides modes directly and rejects inputs whose mean
has a Cartan component (the admissibility constraint).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .errors import PreconditionError
from .roots import RootSystem, is_regular


@dataclass(frozen=True)
class CircleOperatorData:
    """A regular Cartan element plus truncation order, with cached spectra."""

    rs: RootSystem
    b: tuple
    order: int
    pairings: tuple[float, ...] = field(init=False)  # alpha(b) over all roots

    def __post_init__(self):
        rs = self.rs
        b = tuple(self.b)
        if not is_regular(rs, b):
            raise PreconditionError(f"b = {b} is singular; T(b) is undefined")
        if self.order < 0:
            raise PreconditionError("truncation order must be >= 0")
        pair = tuple(float(rs.inner(alpha, b)) for alpha in rs.roots)
        object.__setattr__(self, "pairings", pair)

    @property
    def dim(self) -> int:
        return self.rs.rank + len(self.rs.roots)

    def eigenvalue(self, mode: int, coord: int) -> complex:
        """Spectrum of d/dt + ad(b) on mode `mode`, coordinate `coord`."""
        r = self.rs.rank
        if coord < r:
            return 2j * math.pi * mode
        return 2j * math.pi * (mode + self.pairings[coord - r])


def _check_series(data: CircleOperatorData, coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    n = 2 * data.order + 1
    if c.shape != (n, data.dim):
        raise PreconditionError(
            f"series shape {c.shape} does not match truncation order "
            f"{data.order} and algebra dimension {data.dim}"
        )
    return c


def apply_operator(data: CircleOperatorData, coeffs: np.ndarray) -> np.ndarray:
    """(d/dt + ad(b)) f, mode by mode."""
    c = _check_series(data, coeffs)
    out = np.empty_like(c)
    for i in range(c.shape[0]):
        mode = i - data.order
        for j in range(data.dim):
            out[i, j] = data.eigenvalue(mode, j) * c[i, j]
    return out


def circle_inverse_apply(
    data: CircleOperatorData, coeffs: np.ndarray, constraint_tol: float = 0.0
) -> np.ndarray:
    """Apply (d/dt + ad(b))^{-1} on the admissible truncated space.

    Rejects series whose zero mode has a Cartan component larger than
    `constraint_tol` (the mean of an admissible series lies in the root
    complement, where ad(b) is invertible).
    """
    c = _check_series(data, coeffs)
    r = data.rs.rank
    mean_t = np.abs(c[data.order, :r])
    if np.any(mean_t > constraint_tol):
        raise PreconditionError(
            "series violates the admissibility constraint: its mean has a "
            f"Cartan component of size {float(mean_t.max())!r}"
        )
    out = np.zeros_like(c)
    for i in range(c.shape[0]):
        mode = i - data.order
        for j in range(data.dim):
            if j < r and mode == 0:
                continue  # annihilated direction; inverse not defined there
            out[i, j] = c[i, j] / data.eigenvalue(mode, j)
    return out


def random_admissible_series(
    data: CircleOperatorData, rng: np.random.Generator
) -> np.ndarray:
    """Random truncated series satisfying the mean-in-root-part constraint."""
    n = 2 * data.order + 1
    c = rng.standard_normal((n, data.dim)) + 1j * rng.standard_normal((n, data.dim))
    c[data.order, : data.rs.rank] = 0.0
    return c
