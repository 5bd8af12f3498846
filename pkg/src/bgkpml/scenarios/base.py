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

from typing import Dict, List, Optional

import numpy as np

from ..grid import BoundarySpec, Grid


class Scenario:
    LABEL: Optional[str] = None
    # Section defaults merged under the user's configuration
    DEFAULTS: Dict[str, dict] = {}
    # Field written by snapshot dumps
    SNAPSHOT_FIELD = "a1"
    SNAPSHOT_TIMES: List[float] = []
    # Tags for the left, bottom and top edges of both runs
    OUTER_EDGES = ("wall", "wall", "wall")
    # Right edge of the reference run
    FAR_EDGE = "wall"
    # Smallest layer thickness accepted by sensitivity studies
    MIN_LAYER = 0.1
    # Layer occupies the right end of the physical domain instead of
    # extending it
    LAYER_INSIDE = False

    def __init__(self, config):
        self._config = config
        self._settings = config.section("scenario")

    @classmethod
    def get_scenarios(cls):
        scenarios = {}
        for scenario in cls.__subclasses__():
            assert scenario.LABEL is not None
            scenarios[scenario.LABEL] = scenario
        return scenarios

    def initial_coefficients(self, grid: Grid) -> np.ndarray:
        raise NotImplementedError

    def boundary(self, layer: bool) -> BoundarySpec:
        # The layer run ends in an absorbing edge; the reference run is long
        # enough that nothing reaches its far edge before the final time.
        left, bottom, top = self.OUTER_EDGES
        return BoundarySpec(
            left=left, right="pml-backed" if layer else self.FAR_EDGE, bottom=bottom, top=top
        )

    def default_x_star(self, grid: Grid, x0: float) -> float:
        # Last node strictly left of the layer
        return float(grid.x[grid.x < x0 - 1e-9 * grid.hx][-1])
