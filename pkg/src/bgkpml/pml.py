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

"""Right-hand sides of the plain and layer-augmented BGK systems.

The layer absorbs along +x only.  A layer state stacks the six
coefficient fields and the six auxiliary fields into one (12, nx, ny)
array so the integrator can treat both systems alike.
"""

from dataclasses import asdict, dataclass, fields
from typing import List

import numpy as np

from .grid import (
    A_WALL_PARITY_X,
    A_WALL_PARITY_Y,
    OMEGA_WALL_PARITY_X,
    OMEGA_WALL_PARITY_Y,
    BoundarySpec,
    Grid,
    apply_wall_bc,
    interior,
    stencil_x,
    stencil_y,
)
from .model import NUM_COEFFS, ModelConstants, flux_matrices, source, source_linear


@dataclass(frozen=True)
class PmlParams:
    alpha0: float = 0.0
    lambda0: float = 0.0
    alpha1: float = 0.0
    lambda1: float = 0.0
    # y-layer counterparts; only the frequency-domain symbol uses them
    alpha0t: float = 0.0
    lambda0t: float = 0.0
    alpha1t: float = 0.0
    lambda1t: float = 0.0

    @classmethod
    def from_dict(cls, info):
        names = {f.name for f in fields(cls)}
        return cls(**{k: float(v) for k, v in info.items() if k in names})

    def as_dict(self):
        return asdict(self)

    def warnings(self, sigma_min=0.0) -> List[str]:
        """Conditions of the stable parameter region that are violated."""
        ret = []
        if self.lambda0 != 0 or self.lambda1 != 0:
            ret.append("lambda0 and lambda1 should be zero for a stable layer")
        if not self.alpha0 > -sigma_min:
            ret.append(f"alpha0 must exceed -sigma1 ({-sigma_min:g})")
        return ret


@dataclass(frozen=True)
class DampingProfile:
    C: float
    x0: float
    L: float
    beta: float

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"Damping strength C must be positive, got {self.C}")
        if not self.L > 0:
            raise ValueError(f"Layer thickness L must be positive, got {self.L}")
        if not self.beta >= 0:
            raise ValueError(f"Damping exponent beta must be nonnegative, got {self.beta}")

    def __call__(self, x):
        return damping_value(x, self)


def damping_value(x, profile: DampingProfile):
    # Full strength beyond the outer edge of the layer
    x = np.asarray(x, dtype=float)
    s = np.clip((x - profile.x0) / profile.L, 0.0, 1.0)
    inside = x > profile.x0
    ramp = np.power(s, profile.beta, where=inside, out=np.zeros_like(s))
    return np.where(inside, profile.C * ramp, 0.0)


def auto_strength(dt):
    return 1.0 / dt


def make_state(a, omega=None):
    a = np.asarray(a, dtype=float)
    if omega is None:
        omega = np.zeros_like(a)
    return np.concatenate([a, np.asarray(omega, dtype=float)])


def split_state(y):
    return y[:NUM_COEFFS], y[NUM_COEFFS:]


def _transport(consts, gx, dya):
    A1, A2 = flux_matrices(consts)
    return -np.tensordot(A1, gx, axes=1) - np.tensordot(A2, dya, axes=1)


def _pad_coeffs(a, boundary):
    return apply_wall_bc(a, boundary, A_WALL_PARITY_X, A_WALL_PARITY_Y)


def rhs_plain(a, consts: ModelConstants, grid: Grid, boundary: BoundarySpec, linear=False):
    padded = _pad_coeffs(a, boundary)
    a = interior(padded)
    dxa = stencil_x(padded, grid.hx)
    dya = stencil_y(padded, grid.hy)
    s = source_linear(a, consts) if linear else source(a, consts)
    return _transport(consts, dxa, dya) + s


def rhs_pml(
    y,
    params: PmlParams,
    sigma1,
    consts: ModelConstants,
    grid: Grid,
    boundary: BoundarySpec,
    linear=False,
):
    """Tendency of a stacked (a, omega) state.

    sigma1 is the damping profile or its values on the x nodes."""
    if isinstance(sigma1, DampingProfile):
        sigma1 = damping_value(grid.x, sigma1)
    sig = np.asarray(sigma1, dtype=float)[:, None]
    a, omega = split_state(y)
    pa = _pad_coeffs(a, boundary)
    pw = apply_wall_bc(omega, boundary, OMEGA_WALL_PARITY_X, OMEGA_WALL_PARITY_Y)
    a = interior(pa)
    omega = interior(pw)
    dxa = stencil_x(pa, grid.hx)
    dya = stencil_y(pa, grid.hy)
    dyw = stencil_y(pw, grid.hy)

    p = params
    s = source_linear(a, consts) if linear else source(a, consts)
    da = _transport(consts, dxa + sig * (p.lambda0 * a + omega), dya) + s
    damp = p.alpha0 + sig
    dw = -p.alpha1 * dyw - damp * omega - dxa - p.lambda0 * damp * a + p.lambda1 * dya
    return np.concatenate([da, dw])


class PlainOperator:
    def __init__(self, consts, grid, boundary, linear=False):
        self.consts = consts
        self.grid = grid
        self.boundary = boundary
        self.linear = linear

    def __call__(self, y):
        return rhs_plain(y, self.consts, self.grid, self.boundary, self.linear)

    def coefficients(self, y):
        return y


class PmlOperator:
    def __init__(self, params, profile, consts, grid, boundary, linear=False):
        self.params = params
        self.profile = profile
        self.consts = consts
        self.grid = grid
        self.boundary = boundary
        self.linear = linear
        self.sigma1 = damping_value(grid.x, profile)

    def __call__(self, y):
        return rhs_pml(
            y, self.params, self.sigma1, self.consts, self.grid, self.boundary, self.linear
        )

    def coefficients(self, y):
        return split_state(y)[0]
