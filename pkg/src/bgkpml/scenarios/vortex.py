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

import numpy as np

from ..grid import Grid, ddx, ddy
from ..model import MacroscopicState, macroscopic_to_coeffs, ns_limit_closure
from .base import Scenario


def vortex_fields(grid: Grid, U0, V0, Umax, b, gamma):
    """Density and velocity of the isentropic vortex centered at the origin."""
    X, Y = grid.mesh()
    r2 = X**2 + Y**2
    # Swirl speed divided by r, so the center needs no special case
    swirl = Umax / b * np.exp(0.5 * (1 - r2 / b**2))
    u = U0 - swirl * Y
    v = V0 + swirl * X
    rho = (1 - 0.5 * (gamma - 1) * Umax**2 * np.exp(1 - r2 / b**2)) ** (1 / (gamma - 1))
    return rho, u, v


def init_vortex(config, grid: Grid, boundary=None) -> np.ndarray:
    vortex = config.section("scenario")["vortex"]
    consts = config.consts()
    rho, u, v = vortex_fields(
        grid, vortex["U0"], vortex["V0"], vortex["Umax"], vortex["b"], vortex["gamma"]
    )
    zero = np.zeros_like(rho)
    state = MacroscopicState(rho, u, v, zero, zero, zero, rho * consts.RT)
    a = macroscopic_to_coeffs(state, consts)
    a[3], a[4], a[5] = ns_limit_closure(
        rho,
        u,
        v,
        consts,
        lambda f: ddx(f, grid, boundary),
        lambda f: ddy(f, grid, boundary),
    )
    return a


class IsentropicVortex(Scenario):
    LABEL = "isentropic-vortex"
    DEFAULTS = {
        # A relaxation time of 0.01 would put dt/tau outside the RK4
        # stability interval at dt = 0.025.
        "model": {"RT": 1.0, "tau": 0.02},
        "grid": {"nx": 21, "ny": 21, "Lx": 2.0, "Ly": 2.0, "x_min": -1.0, "y_min": -1.0},
        "pml": {"L": 0.5, "beta": 4.0, "alpha0": 1.0},
        "time": {"T": 3.5, "safety": 0.9, "dt": 0.025},
        "scenario": {
            "vortex": {"U0": 0.5, "V0": 0.0, "Umax": 0.25, "b": 0.2, "gamma": 1.4},
        },
        "probe": {"x_star": 0.9},
        "reference": {"stretch": 4.0},
    }
    SNAPSHOT_FIELD = "v"
    SNAPSHOT_TIMES = [0.0, 1.5, 2.5, 3.5]
    # Mean flow enters on the left and leaves through the layer
    OUTER_EDGES = ("neumann", "wall", "wall")
    FAR_EDGE = "neumann"
    MIN_LAYER = 0.1

    def initial_coefficients(self, grid):
        return init_vortex(self._config, grid, self.boundary(layer=False))
