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

import click

from .command import get_settings, pass_config, warn
from .model import ModelConstants
from .pml import PmlParams
from .stability import DEFAULT_KMAX, DEFAULT_KPOINTS, analyze
from .util import make_dir_path, status, to_json, write_csv, write_json


def param_option(name):
    return click.option(f"--{name}", type=float, default=0.0, show_default=True)


def param_options(f):
    for name in reversed(list(PmlParams().as_dict())):
        f = param_option(name)(f)
    return f


@click.command()
@param_options
@click.option("--sigma1", type=float, default=0.0, show_default=True, help="x damping")
@click.option("--sigma2", type=float, default=0.0, show_default=True, help="y damping")
@click.option(
    "--RT", "RT", type=float, default=1.0, show_default=True, help="gas constant times temperature"
)
@click.option(
    "--kmax", type=float, default=DEFAULT_KMAX, show_default=True, help="wavenumber range"
)
@click.option(
    "--kpoints", type=int, default=DEFAULT_KPOINTS, show_default=True, help="points per axis"
)
@click.option(
    "--samples", type=int, default=5, show_default=True, help="continued-fraction samples"
)
@click.option(
    "-o",
    "--output-dir",
    type=click.Path(file_okay=False),
    help="directory for result files [default: settings.output-dir]",
)
@pass_config
def stability(config, sigma1, sigma2, RT, kmax, kpoints, samples, output_dir, **params):
    """scan the layer symbol for growing modes"""
    if kpoints < 2 or not kmax > 0:
        raise click.BadParameter("need kmax > 0 and at least 2 points", param_hint="--kpoints")
    params = PmlParams(**params)
    settings = get_settings(config)
    out_dir = make_dir_path(output_dir or settings.get("output-dir", "output"))
    provenance = {
        "pml": params.as_dict(),
        "sigma1": sigma1,
        "sigma2": sigma2,
        "RT": RT,
        "kmax": kmax,
        "kpoints": kpoints,
    }

    status(f"Starting stability scan on a {kpoints}x{kpoints} grid")
    report = analyze(
        params, sigma1, sigma2, ModelConstants(RT=RT), kmax=kmax, kpoints=kpoints, samples=samples
    )
    summary = report.summary()
    write_json(os.path.join(out_dir, "stability.json"), dict(summary, config=provenance))
    write_csv(
        os.path.join(out_dir, "fsign.csv"),
        ["k1", "k2", "f", "sign"],
        report.region.rows(),
        provenance,
    )
    write_csv(
        os.path.join(out_dir, "margins.csv"),
        ["k1", "k2", "hermitian_max", "max_real_eig"],
        report.margins,
        provenance,
    )
    status(f"energy margin = {report.energy_margin:.6g}")
    status(f"raw energy margin = {report.raw_energy_margin:.6g}")
    status(f"max Re(eig) = {report.petrovskii_margin:.6g}")
    for name in summary["violated"]:
        warn(f"condition violated: {name}")
    if summary["instability_region"]["nonempty"]:
        warn(
            "instability region is nonempty "
            f"({summary['instability_region']['negative_points']} negative points)"
        )
    brief = {k: summary[k] for k in ("energy_decay", "petrovskii", "violated")}
    click.echo(to_json(brief), nl=False)
    status(f"Ending   stability scan ({out_dir})")
