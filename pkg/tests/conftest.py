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
import pytest
import yaml

from bgkpml.grid import Grid
from bgkpml.model import ModelConstants
from bgkpml.scenarios import ScenarioConfig

# A pulse case small enough for unit tests: 11x11 nodes, short final time
QUICK_PULSE = {
    "scenario": {"case": "gaussian-pulse"},
    "grid": {"nx": 11, "ny": 11},
    "pml": {"L": 0.3},
    "time": {"T": 0.2},
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240117)


@pytest.fixture
def consts():
    return ModelConstants(RT=1.0, tau=0.01)


@pytest.fixture
def grid():
    return Grid(16, 12, 1.0, 0.75)


@pytest.fixture
def quick_pulse():
    return ScenarioConfig(QUICK_PULSE)


@pytest.fixture
def config_file(tmp_path):
    """Write a config document and return its path."""

    def write(info):
        path = tmp_path / "bgkpml.conf"
        path.write_text(yaml.safe_dump(info))
        return path

    return write
