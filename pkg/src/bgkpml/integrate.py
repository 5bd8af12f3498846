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

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .grid import Grid
from .model import ModelConstants, SingularStateError

DEFAULT_BLOWUP_THRESHOLD = 1e6


class BlowUpError(Exception):
    def __init__(self, t, step=None, reason="non-finite state"):
        self.t = t
        self.step = step
        self.reason = reason
        where = f"step {step}, " if step is not None else ""
        super().__init__(f"Solution blew up at {where}t={t:.6g}: {reason}")

    def as_dict(self):
        return {"t": self.t, "step": self.step, "reason": self.reason}


@dataclass
class TimeSpec:
    T: float
    dt: float
    t0: float = 0.0
    safety: float = 1.0

    def __post_init__(self):
        if not self.T > self.t0:
            raise ValueError("Final time must exceed the start time")
        if not self.dt > 0:
            raise ValueError("Time step must be positive")
        if not 0 < self.safety <= 1:
            raise ValueError("CFL safety fraction must be in (0, 1]")

    def steps(self):
        return step_sizes(self.t0, self.T, self.dt)


def cfl_dt(grid: Grid, consts: ModelConstants, safety=1.0):
    """Largest stable step for the fastest characteristic speed sqrt(3 RT)."""
    if not consts.RT > 0:
        raise ValueError("RT must be positive")
    return safety * min(grid.hx, grid.hy) / (2 * np.sqrt(3 * consts.RT))


def step_sizes(t0, T, dt) -> List[float]:
    # Fixed steps, with the last one shortened to land on T
    count = int(np.floor((T - t0) / dt * (1 + 1e-12)))
    steps = [dt] * count
    remainder = (T - t0) - count * dt
    if remainder > 1e-9 * dt:
        steps.append(remainder)
    return steps


def check_state(y, t, step=None, threshold=DEFAULT_BLOWUP_THRESHOLD):
    if not np.all(np.isfinite(y)):
        raise BlowUpError(t, step)
    if threshold is not None:
        peak = np.max(np.abs(y))
        if peak > threshold:
            raise BlowUpError(t, step, f"max |state| {peak:.3g} exceeds {threshold:g}")


def rk4_step(y, rhs: Callable, dt, t=0.0, threshold=None):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    y_new = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(y_new)):
        raise BlowUpError(t + dt)
    if threshold is not None:
        check_state(y_new, t + dt, threshold=threshold)
    return y_new


def integrate(
    y0,
    rhs: Callable,
    T,
    dt,
    t0=0.0,
    callback: Optional[Callable] = None,
    threshold=DEFAULT_BLOWUP_THRESHOLD,
):
    """Advance y0 from t0 to T with fixed RK4 steps.

    callback(step, t, y) is called for the initial state and after every
    step.  Raises BlowUpError with the step index and time of failure."""
    y = np.array(y0, dtype=float, copy=True)
    t = t0
    if callback is not None:
        callback(0, t, y)
    for step, h in enumerate(step_sizes(t0, T, dt), 1):
        try:
            y = rk4_step(y, rhs, h, t, threshold)
        except BlowUpError as e:
            raise BlowUpError(e.t, step, e.reason) from None
        except SingularStateError:
            raise BlowUpError(t + h, step, "nonpositive density") from None
        t = t0 + (step * dt if h == dt else T - t0)
        if callback is not None:
            callback(step, t, y)
    return y, t
