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


import os
import sys

import click
import numpy as np

from .command import get_settings, load_scenario, pass_config, warn
from .grid import dump_field_csv
from .integrate import BlowUpError
from .scenarios import RunPair, all_functionals, integrands, run_pair
from .util import make_dir_path, status, write_csv, write_json


def parse_times(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of times: {value}")


def write_probe(path, pair: RunPair, provenance):
    if pair.reference is not None:
        cols = integrands(pair)
        header = list(cols)
        rows = zip(*(cols[k] for k in header))
    else:
        phys = pair.pml.phys
        header = ["t", "a1_line_norm", "v_line_sup"]
        rows = [
            (t, np.sqrt(phys.integrate_line(a1**2)), np.max(np.abs(v)))
            for t, a1, v in zip(pair.pml.times, pair.pml.probe_a1, pair.pml.probe_v)
        ]
    write_csv(path, header, rows, provenance)


def write_snapshots(out_dir, pair: RunPair, provenance):
    field = pair.config.scenario.SNAPSHOT_FIELD
    count = 0
    for traj in (pair.pml, pair.reference):
        if traj is None:
            continue
        for t, values in sorted(traj.snapshots.items()):
            path = os.path.join(out_dir, f"{field}-{traj.label}-t{t:.2f}.csv")
            dump_field_csv(path, values, traj.grid, field, t, provenance)
            count += 1
    return count


def summarize(pair: RunPair, provenance, blowup=None):
    scenario = pair.config
    ret = {
        "config": provenance,
        "case": scenario.case,
        "dt": scenario.dt(),
        "steps": len(pair.pml.times) - 1,
        "completed": blowup is None,
        "blowup": None,
    }
    if blowup is not None:
        ret["blowup"] = dict(blowup.as_dict(), run=getattr(blowup, "run", None))
    if pair.reference is not None and pair.pml.times and pair.reference.times:
        ret["functionals"] = all_functionals(pair)
    return ret


@click.command()
@click.option(
    "-o",
    "--output-dir",
    type=click.Path(file_okay=False),
    help="directory for result files [default: settings.output-dir]",
)
@click.option("--no-reference", is_flag=True, help="skip the reference run")
@click.option(
    "--snap-times",
    callback=parse_times,
    metavar="T1,T2,...",
    help="snapshot times [default: per scenario]",
)
@pass_config
def simulate(config, output_dir, no_reference, snap_times):
    """run a layer simulation against its reference"""
    scenario = load_scenario(config)
    settings = get_settings(config)
    output_dir = make_dir_path(output_dir or settings.get("output-dir", "output"))
    provenance = scenario.as_dict()
    for message in scenario.params().warnings():
        warn(message)

    T = scenario.section("time")["T"]
    for t in snap_times or []:
        if not 0 <= t <= T:
            raise click.BadParameter(
                f"{t:g} is outside [0, {T:g}]", param_hint="--snap-times"
            )

    status(f"Starting {scenario.case} (dt={scenario.dt():.6g})")
    blowup = None
    try:
        pair = run_pair(
            scenario,
            reference=not no_reference,
            settings=settings,
            snap_times=snap_times,
            report=status,
        )
    except BlowUpError as e:
        blowup = e
        status(f"Failed:  {e}", err=True)
        if e.run == "reference":
            pair = RunPair(scenario, e.trajectory, None)
        else:
            pair = RunPair(scenario, e.trajectory, getattr(e, "reference", None))

    write_probe(os.path.join(output_dir, "probe.csv"), pair, provenance)
    count = write_snapshots(output_dir, pair, provenance)
    summary = summarize(pair, provenance, blowup)
    write_json(os.path.join(output_dir, "summary.json"), summary)
    for kind, value in sorted(summary.get("functionals", {}).items()):
        status(f"{kind} = {value:.6g}")
    status(f"Ending   {scenario.case} ({count} snapshots in {output_dir})")
    if blowup is not None:
        sys.exit(3)
