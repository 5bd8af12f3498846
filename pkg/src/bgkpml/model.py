#
# bgkpml - Hermite-expanded BGK solver with a perfectly matched layer
#
# Copyright (c) 2021-2024 The bgkpml developers
#
# SPDX-License-Identifier: GPL-2.0-only
#
# This program is free software; you can redistribute it and/or modify it
# under the terms of version 2 of the GNU General Public License as
# published by the Free Software Foundation.
#
# This program is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of MERCHANTABILITY
# or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU General Public License
# for more details.
#
# You should have received a copy of the GNU General Public License along
# with this program; if not, write to the Free Software Foundation, Inc.,
# 51 Franklin Street, Fifth Floor, Boston, MA 02110-1301 USA.
#

"""The second-order Hermite expansion of the BGK model.

The state is the vector of six expansion coefficients a1..a6 (a1 is the
density).  Coefficient arrays are stacked along the first axis, so a
single point is a shape (6,) array and a grid field is (6, nx, ny).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

SQRT2 = np.sqrt(2.0)
NUM_COEFFS = 6


class SingularStateError(ValueError):
    """The density coefficient a1 is not positive."""


@dataclass(frozen=True)
class ModelConstants:
    RT: float = 1.0
    tau: float = 0.01

    def __post_init__(self):
        if not self.RT > 0:
            raise ValueError(f"RT must be positive, got {self.RT}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def sound_speed(self) -> float:
        return float(np.sqrt(self.RT))


@dataclass
class MacroscopicState:
    rho: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    sigma11: np.ndarray
    sigma22: np.ndarray
    sigma12: np.ndarray
    p: np.ndarray


@lru_cache(maxsize=None)
def _flux_matrices(RT: float) -> Tuple[np.ndarray, np.ndarray]:
    c = np.sqrt(RT)
    A1 = np.zeros((NUM_COEFFS, NUM_COEFFS))
    A2 = np.zeros((NUM_COEFFS, NUM_COEFFS))
    # Zero-based (row, col, value) of the upper triangle
    for row, col, value in ((0, 1, c), (1, 4, SQRT2 * c), (2, 3, c)):
        A1[row, col] = A1[col, row] = value
    for row, col, value in ((0, 2, c), (1, 3, c), (2, 5, SQRT2 * c)):
        A2[row, col] = A2[col, row] = value
    A1.setflags(write=False)
    A2.setflags(write=False)
    return A1, A2


def flux_matrices(consts: ModelConstants) -> Tuple[np.ndarray, np.ndarray]:
    """Return the symmetric flux matrices (A1, A2).

    The arrays are shared and read-only."""
    if not consts.RT > 0:
        raise ValueError(f"RT must be positive, got {consts.RT}")
    return _flux_matrices(float(consts.RT))


def _check_density(a1):
    if np.any(np.asarray(a1) <= 0):
        raise SingularStateError("Nonpositive density coefficient a1")


def source_linear(a, consts: ModelConstants) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = np.zeros_like(a)
    out[3:6] = -a[3:6] / consts.tau
    return out


def source_nonlinear(a, consts: ModelConstants) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a1, a2, a3 = a[0], a[1], a[2]
    _check_density(a1)
    out = np.zeros_like(a)
    out[3] = a2 * a3 / a1
    out[4] = a2 * a2 / (SQRT2 * a1)
    out[5] = a3 * a3 / (SQRT2 * a1)
    out[3:6] /= consts.tau
    return out


def source(a, consts: ModelConstants) -> np.ndarray:
    """Relaxation source S(a) = S_L(a) + S_NL(a).

    Only the three second-order coefficients relax; mass and momentum
    components are zero."""
    return source_linear(a, consts) + source_nonlinear(a, consts)


def principal_symbol(n, consts: ModelConstants) -> np.ndarray:
    A1, A2 = flux_matrices(consts)
    return -(n[0] * A1 + n[1] * A2)


def principal_symbol_eigenvalues(n, consts: ModelConstants) -> np.ndarray:
    # P1(n) is real symmetric, so eigvalsh applies and the result is sorted
    return np.linalg.eigvalsh(principal_symbol(n, consts))


def principal_symbol_eigenvalues_exact(n, consts: ModelConstants) -> np.ndarray:
    r = np.hypot(n[0], n[1])
    c = np.sqrt(consts.RT) * r
    return np.sort(np.array([0.0, 0.0, -c, c, -np.sqrt(3.0) * c, np.sqrt(3.0) * c]))


def coeffs_to_macroscopic(a, consts: ModelConstants) -> MacroscopicState:
    a = np.asarray(a, dtype=float)
    a1, a2, a3, a4, a5, a6 = a
    _check_density(a1)
    RT = consts.RT
    c = np.sqrt(RT)
    return MacroscopicState(
        rho=a1,
        u1=a2 * c / a1,
        u2=a3 * c / a1,
        sigma11=-RT * (SQRT2 * a5 - a2 * a2 / a1),
        sigma22=-RT * (SQRT2 * a6 - a3 * a3 / a1),
        sigma12=-RT * (a4 - a2 * a3 / a1),
        p=RT * a1,
    )


def macroscopic_to_coeffs(m: MacroscopicState, consts: ModelConstants) -> np.ndarray:
    rho = np.asarray(m.rho, dtype=float)
    if np.any(rho <= 0):
        raise SingularStateError("Nonpositive density")
    RT = consts.RT
    c = np.sqrt(RT)
    u1 = np.asarray(m.u1, dtype=float)
    u2 = np.asarray(m.u2, dtype=float)
    return np.stack(
        np.broadcast_arrays(
            rho,
            u1 * rho / c,
            u2 * rho / c,
            (u1 * u2 * rho - m.sigma12) / RT,
            (SQRT2 / 2) * (u1 * u1 * rho - m.sigma11) / RT,
            (SQRT2 / 2) * (u2 * u2 * rho - m.sigma22) / RT,
        )
    )


def ns_limit_closure(
    rho,
    u1,
    u2,
    consts: ModelConstants,
    ddx: Callable[[np.ndarray], np.ndarray],
    ddy: Callable[[np.ndarray], np.ndarray],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Second-order coefficients (a4, a5, a6) from the near-equilibrium
    closure.  ddx and ddy differentiate a field on the grid holding rho,
    u1 and u2."""
    rho = np.asarray(rho, dtype=float)
    mx = rho * u1
    my = rho * u2
    if not (np.shape(ddx(mx)) == np.shape(ddy(my)) == rho.shape):
        raise ValueError("Derivative provider does not match the field shape")
    RT = consts.RT
    tau = consts.tau
    a4 = -tau * (ddx(my) + ddy(mx)) + u1 * u2 * rho / RT
    a5 = -tau * SQRT2 * ddx(mx) + u1 * u1 * rho / (SQRT2 * RT)
    a6 = -tau * SQRT2 * ddy(my) + u2 * u2 * rho / (SQRT2 * RT)
    return a4, a5, a6
