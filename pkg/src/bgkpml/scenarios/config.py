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

"""Resolution and validation of scenario configuration documents."""

import copy
import math
from numbers import Real

import numpy as np

from ..grid import MIN_POINTS, Grid
from ..integrate import cfl_dt
from ..model import ModelConstants
from ..pml import DampingProfile, PmlParams, auto_strength
from .base import Scenario

SECTIONS = ("model", "grid", "pml", "time", "scenario", "probe", "reference")

BASE_DEFAULTS = {
    "model": {"RT": 1.0, "tau": 0.01},
    "grid": {"nx": 20, "ny": 20, "Lx": 1.0, "Ly": 1.0, "x_min": 0.0, "y_min": 0.0},
    "pml": {
        "alpha0": 0.0,
        "lambda0": 0.0,
        "alpha1": 0.0,
        "lambda1": 0.0,
        "alpha0t": 0.0,
        "lambda0t": 0.0,
        "alpha1t": 0.0,
        "lambda1t": 0.0,
        "L": 0.4,
        "beta": 4.0,
        "Cmode": "auto",
        "C": None,
    },
    "time": {"T": 1.0, "dt": None, "safety": 0.9},
    "scenario": {
        "case": "gaussian-pulse",
        "amplitude": 0.05,
        "eps": 10.0,
        "vortex": {"U0": 0.5, "V0": 0.0, "Umax": 0.25, "b": 0.2, "gamma": 1.4},
    },
    "probe": {"x_star": None},
    "reference": {"stretch": 2.5},
}


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _merge(base, override, path=""):
    ret = copy.deepcopy(base)
    if not isinstance(override, dict):
        raise ConfigError(path.rstrip(".") or "config", "must be a mapping")
    for key, value in override.items():
        if key not in ret:
            raise ConfigError(f"{path}{key}", "unknown key")
        if isinstance(ret[key], dict):
            ret[key] = _merge(ret[key], value, f"{path}{key}.")
        else:
            ret[key] = copy.deepcopy(value)
    return ret


def _number(data, key, minimum=None, strict=True, optional=False):
    value = data
    for part in key.split("."):
        value = value[part]
    if value is None and optional:
        return
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise ConfigError(key, f"must be a number, got {value!r}")
    if minimum is not None:
        if strict and not value > minimum:
            raise ConfigError(key, f"must be > {minimum:g}")
        if not strict and not value >= minimum:
            raise ConfigError(key, f"must be >= {minimum:g}")


class ScenarioConfig:
    """A fully resolved scenario configuration.

    raw holds the sections of a configuration document; any other
    top-level keys (settings, study) are ignored here."""

    def __init__(self, raw=None):
        raw = {k: v for k, v in (raw or {}).items() if k in SECTIONS}
        case = (raw.get("scenario") or {}).get("case", BASE_DEFAULTS["scenario"]["case"])
        scenarios = Scenario.get_scenarios()
        if case not in scenarios:
            raise ConfigError(
                "scenario.case",
            f"unknown case {case!r} (choose from {', '.join(sorted(scenarios))})",
            )
        defaults = copy.deepcopy(BASE_DEFAULTS)
        for name, values in scenarios[case].DEFAULTS.items():
            defaults[name].update(copy.deepcopy(values))
        self._data = _merge(defaults, {k: v or {} for k, v in raw.items()})
        self._scenario = scenarios[case](self)
        self._validate()

    def _validate(self):
        d = self._data
        for key in ("model.RT", "model.tau", "grid.Lx", "grid.Ly", "pml.L", "time.T"):
            _number(d, key, 0)
        for key in ("grid.x_min", "grid.y_min"):
            _number(d, key)
        for key in ("grid.nx", "grid.ny"):
            value = d["grid"][key.split(".")[1]]
            if isinstance(value, bool) or not isinstance(value, int) or value < MIN_POINTS:
                raise ConfigError(key, f"must be an integer >= {MIN_POINTS}")
        for name in PmlParams().as_dict():
            _number(d, f"pml.{name}")
        _number(d, "pml.beta", 0, strict=False)
        if d["pml"]["Cmode"] not in ("auto", "fixed"):
            raise ConfigError("pml.Cmode", "must be 'auto' or 'fixed'")
        if d["pml"]["Cmode"] == "fixed":
            if d["pml"]["C"] is None:
                raise ConfigError("pml.C", "required when pml.Cmode is 'fixed'")
            _number(d, "pml.C", 0)
        _number(d, "time.dt", 0, optional=True)
        _number(d, "time.safety", 0)
        if d["time"]["safety"] > 1:
            raise ConfigError("time.safety", "must be <= 1")
        _number(d, "scenario.amplitude", 0, strict=False)
        _number(d, "scenario.eps", 0)
        for key in ("U0", "V0", "Umax"):
            _number(d, f"scenario.vortex.{key}")
        _number(d, "scenario.vortex.b", 0)
        _number(d, "scenario.vortex.gamma", 1)
        _number(d, "reference.stretch", 1, strict=False)
        _number(d, "probe.x_star", optional=True)
        phys = self.grid()
        x0 = self.layer_start()
        if not np.any(phys.x < x0 - 1e-9 * phys.hx):
            raise ConfigError("pml.L", "leaves no grid line left of the layer")
        x_star = self.x_star()
        if not phys.x_min <= x_star < x0:
            raise ConfigError(
                "probe.x_star", f"must lie in [{phys.x_min:g}, {x0:g}) left of the layer"
            )

    def section(self, name):
        return self._data[name]

    def as_dict(self):
        return copy.deepcopy(self._data)

    @property
    def case(self):
        return self._data["scenario"]["case"]

    @property
    def scenario(self) -> Scenario:
        return self._scenario

    def with_overrides(self, overrides):
        """A new configuration with dotted keys (e.g. 'pml.alpha0') replaced."""
        data = self.as_dict()
        for key, value in overrides.items():
            parts = key.split(".")
            target = data
            for part in parts[:-1]:
                if part not in target or not isinstance(target[part], dict):
                    raise ConfigError(key, "unknown key")
                target = target[part]
            if parts[-1] not in target:
                raise ConfigError(key, "unknown key")
            target[parts[-1]] = value
        return ScenarioConfig(data)

    def consts(self):
        m = self._data["model"]
        return ModelConstants(RT=float(m["RT"]), tau=float(m["tau"]))

    def params(self):
        return PmlParams.from_dict(self._data["pml"])

    def grid(self) -> Grid:
        g = self._data["grid"]
        return Grid(g["nx"], g["ny"], g["Lx"], g["Ly"], g["x_min"], g["y_min"])

    def dt(self):
        t = self._data["time"]
        if t["dt"] is not None:
            return float(t["dt"])
        return cfl_dt(self.grid(), self.consts(), t["safety"])

    def layer_start(self):
        """Abscissa x0 where the damping begins."""
        phys = self.grid()
        if self._scenario.LAYER_INSIDE:
            return phys.x_max - float(self._data["pml"]["L"])
        return phys.x_max

    def layer_columns(self):
        """Grid columns with nonzero damping."""
        phys = self.grid()
        if self._scenario.LAYER_INSIDE:
            return int(np.count_nonzero(phys.x > self.layer_start() + 1e-9 * phys.hx))
        return int(math.ceil(self._data["pml"]["L"] / phys.hx - 1e-9))

    def pml_grid(self) -> Grid:
        if self._scenario.LAYER_INSIDE:
            return self.grid()
        return self.grid().extended(self.layer_columns())

    def reference_grid(self) -> Grid:
        phys = self.grid()
        nx = int(round(self._data["reference"]["stretch"] * phys.Lx / phys.hx)) + 1
        nx = max(nx, phys.nx + self.layer_columns())
        return phys.extended(nx - phys.nx)

    def strength(self, dt=None):
        p = self._data["pml"]
        if p["Cmode"] == "fixed":
            return float(p["C"])
        return auto_strength(self.dt() if dt is None else dt)

    def profile(self, dt=None) -> DampingProfile:
        p = self._data["pml"]
        return DampingProfile(
            C=self.strength(dt), x0=self.layer_start(), L=float(p["L"]), beta=float(p["beta"])
        )

    def x_star(self):
        x_star = self._data["probe"]["x_star"]
        if x_star is None:
            return self._scenario.default_x_star(self.grid(), self.layer_start())
        return float(x_star)
