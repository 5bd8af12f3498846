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

"""Layer runs, reference runs, and the data they record."""

from typing import Callable, Dict, List, Optional

import numpy as np

from ..grid import Grid
from ..integrate import DEFAULT_BLOWUP_THRESHOLD, BlowUpError, integrate, step_sizes
from ..model import ModelConstants, SingularStateError, coeffs_to_macroscopic
from ..pml import PlainOperator, PmlOperator, make_state
from .config import ScenarioConfig

RUN_SETTINGS = {
    "blowup-threshold": DEFAULT_BLOWUP_THRESHOLD,
    "snapshot-stride": 1,
    "progress-every": 0,
}


def velocity_v(a, consts: ModelConstants):
    return coeffs_to_macroscopic(a, consts).u2


def step_times(t0, T, dt):
    return t0 + np.concatenate([[0.0], np.cumsum(step_sizes(t0, T, dt))])


def snapshot_steps(times, snap_times):
    """Map each requested time to the nearest realized step."""
    ret = {}
    for ts in snap_times:
        if not times[0] - 1e-12 <= ts <= times[-1] + 1e-12:
            raise ValueError(f"Snapshot time {ts:g} outside [{times[0]:g}, {times[-1]:g}]")
        ret[int(np.argmin(np.abs(times - ts)))] = float(ts)
    return ret


class Trajectory:
    """What one integration recorded.

    Probe lines are kept at every step; domain fields (restricted to the
    physical domain) at every stride-th step; full snapshots at the
    requested steps."""

    def __init__(self, label, grid: Grid, phys: Grid, probe_index):
        self.label = label
        self.grid = grid
        self.phys = phys
        self.probe_index = probe_index
        self.times: List[float] = []
        self.probe_a1: List[np.ndarray] = []
        self.probe_v: List[np.ndarray] = []
        self.domain_times: List[float] = []
        self.domain_a1: List[np.ndarray] = []
        self.domain_v: List[np.ndarray] = []
        self.snapshots: Dict[float, np.ndarray] = {}
        self.blowup: Optional[BlowUpError] = None

    @property
    def completed(self):
        return self.blowup is None

    def record(self, a, t, v, domain, snapshot=None):
        ix = self.probe_index
        nx = self.phys.nx
        self.times.append(t)
        self.probe_a1.append(a[0, ix].copy())
        self.probe_v.append(v[ix].copy())
        if domain:
            self.domain_times.append(t)
            self.domain_a1.append(a[0, :nx].copy())
            self.domain_v.append(v[:nx].copy())
        if snapshot is not None:
            key, field = snapshot
            self.snapshots[key] = (a[0] if field == "a1" else v).copy()


class RunPair:
    def __init__(self, config: ScenarioConfig, pml: Trajectory, reference: Optional[Trajectory]):
        self.config = config
        self.pml = pml
        self.reference = reference

    @property
    def completed(self):
        return self.pml.completed and (self.reference is None or self.reference.completed)


def _line_norm(grid: Grid, values):
    return float(np.sqrt(grid.integrate_line(values**2)))


def _run(
    config: ScenarioConfig,
    layer: bool,
    settings=None,
    snap_times=None,
    report: Optional[Callable[[str], None]] = None,
    reference: Optional[Trajectory] = None,
):
    settings = {**RUN_SETTINGS, **(settings or {})}
    scenario = config.scenario
    consts = config.consts()
    phys = config.grid()
    dt = config.dt()
    T = config.section("time")["T"]
    boundary = scenario.boundary(layer)
    if layer:
        grid = config.pml_grid()
        op = PmlOperator(
            config.params(), config.profile(dt), consts, grid, boundary, linear=False
        )
        y0 = make_state(scenario.initial_coefficients(grid))
    else:
        grid = config.reference_grid()
        op = PlainOperator(consts, grid, boundary)
        y0 = scenario.initial_coefficients(grid)

    probe_index = phys.index_of_x(config.x_star())
    traj = Trajectory("pml" if layer else "reference", grid, phys, probe_index)
    times = step_times(0.0, T, dt)
    last = len(times) - 1
    if snap_times is None:
        snap_times = [t for t in scenario.SNAPSHOT_TIMES if t <= T]
    snaps = snapshot_steps(times, snap_times)
    stride = max(1, int(settings["snapshot-stride"]))
    every = int(settings["progress-every"])
    if reference is not None:
        norm0 = _line_norm(phys, reference.probe_a1[0])

    def callback(step, t, y):
        a = op.coefficients(y)
        try:
            v = velocity_v(a, consts)
        except SingularStateError:
            raise BlowUpError(t, step, "nonpositive density") from None
        snapshot = (snaps[step], scenario.SNAPSHOT_FIELD) if step in snaps else None
        traj.record(a, t, v, step % stride == 0 or step == last, snapshot)
        if report is not None and every > 0 and (step % every == 0 or step == last):
            line = f"{traj.label}: step {step}/{last} t={t:.4f} max|a1|={np.max(np.abs(a[0])):.6g}"
            if reference is not None and step < len(reference.probe_a1):
                diff = traj.probe_a1[-1] - reference.probe_a1[step]
                line += f" err-a1={_line_norm(phys, diff) / norm0:.6g}"
            report(line)

    try:
        integrate(y0, op, T, dt, callback=callback, threshold=settings["blowup-threshold"])
    except BlowUpError as e:
        e.run = traj.label
        e.trajectory = traj
        traj.blowup = e
        raise
    return traj


def run_single(config: ScenarioConfig, settings=None, snap_times=None, report=None) -> RunPair:
    """Layer run only; no functionals can be formed from the result."""
    return RunPair(config, _run(config, True, settings, snap_times, report), None)


def run_pair(
    config: ScenarioConfig, reference=True, settings=None, snap_times=None, report=None
) -> RunPair:
    """Run the reference on the stretched domain, then the layer run.

    Both runs share dt, spacing and origin, so step k of one lines up
    with step k of the other.  A BlowUpError from either run propagates
    with run and trajectory attributes set, plus the finished reference
    when the layer run is the one that failed."""
    if not reference:
        return run_single(config, settings, snap_times, report)
    ref = _run(config, False, settings, snap_times, report)
    try:
        pml = _run(config, True, settings, snap_times, report, reference=ref)
    except BlowUpError as e:
        e.reference = ref
        raise
    return RunPair(config, pml, ref)
