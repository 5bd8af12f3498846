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


from . import pulse, vortex  # noqa: F401  (registers the cases)
from .base import Scenario
from .config import BASE_DEFAULTS, ConfigError, ScenarioConfig
from .functionals import FUNCTIONALS, all_functionals, err_a1_series, functional, integrands
from .pulse import GaussianPulse, init_gaussian
from .runs import RUN_SETTINGS, RunPair, Trajectory, run_pair, run_single, velocity_v
from .vortex import IsentropicVortex, init_vortex, vortex_fields

__all__ = [
    "BASE_DEFAULTS",
    "FUNCTIONALS",
    "RUN_SETTINGS",
    "ConfigError",
    "GaussianPulse",
    "IsentropicVortex",
    "RunPair",
    "Scenario",
    "ScenarioConfig",
    "Trajectory",
    "all_functionals",
    "err_a1_series",
    "functional",
    "init_gaussian",
    "init_vortex",
    "integrands",
    "run_pair",
    "run_single",
    "velocity_v",
    "vortex_fields",
]
