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

from ..grid import Grid
from ..model import NUM_COEFFS
from .base import Scenario


def init_gaussian(config, grid: Grid) -> np.ndarray:
    """Density peak at the center of the physical domain, fluid at rest."""
    settings = config.section("scenario")
    phys = config.grid()
    amplitude = settings["amplitude"]
    eps = settings["eps"]
    X, Y = grid.mesh()
    xc = phys.x_min + phys.Lx / 2
    yc = phys.y_min + phys.Ly / 2
    a = np.zeros((NUM_COEFFS,) + grid.shape)
    a[0] = 1 + 2 * amplitude * np.exp(-eps * np.sqrt((X - xc) ** 2 + (Y - yc) ** 2))
    return a


class GaussianPulse(Scenario):
    LABEL = "gaussian-pulse"
    DEFAULTS = {
        "model": {"RT": 1.0, "tau": 0.01},
        "grid": {"nx": 20, "ny": 20, "Lx": 1.0, "Ly": 1.0, "x_min": 0.0, "y_min": 0.0},
        "pml": {"L": 0.4, "beta": 4.0, "alpha0": 1.0},
        "time": {"T": 1.0, "safety": 0.9, "dt": None},
        "scenario": {"amplitude": 0.05, "eps": 10.0},
        "probe": {"x_star": None},
        "reference": {"stretch": 2.5},
    }
    SNAPSHOT_FIELD = "a1"
    SNAPSHOT_TIMES = [0.0, 0.7, 1.0]
    MIN_LAYER = 0.25
    LAYER_INSIDE = True

    def initial_coefficients(self, grid):
        return init_gaussian(self._config, grid)
