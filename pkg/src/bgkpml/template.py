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


import click

_SETTINGS = """
settings:
  output-dir: %(output_dir)s
  workers: %(workers)d
  blowup-threshold: 1.0e+6
  snapshot-stride: 1
  progress-every: 0
"""

TEMPLATES = {
    "pulse": """
# Gaussian density pulse leaving a unit square through the layer
scenario:
  case: gaussian-pulse
  amplitude: 0.05
  eps: 10.0
model:
  RT: 1.0
  tau: 0.01
grid:
  nx: 20
  ny: 20
  Lx: 1.0
  Ly: 1.0
pml:
  alpha0: 1.0
  alpha1: 0.0
  lambda0: 0.0
  lambda1: 0.0
  # Damped strip [1 - L, 1] at the right end of the square
  L: 0.4
  beta: 4.0
  # auto: C = 1/dt; fixed: use C below
  Cmode: auto
time:
  T: 1.0
  safety: 0.9
reference:
  stretch: 2.5
""",
    "vortex": """
# Isentropic vortex advected into the layer by the mean flow
scenario:
  case: isentropic-vortex
  vortex:
    U0: 0.5
    V0: 0.0
    Umax: 0.25
    b: 0.2
    gamma: 1.4
model:
  RT: 1.0
  tau: 0.02
grid:
  nx: 21
  ny: 21
  Lx: 2.0
  Ly: 2.0
  x_min: -1.0
  y_min: -1.0
pml:
  alpha0: 1.0
  alpha1: 0.0
  # Appended to the right of x = 1
  L: 0.5
  beta: 4.0
  Cmode: auto
time:
  T: 3.5
  dt: 0.025
probe:
  x_star: 0.9
reference:
  stretch: 4.0
""",
    "study": """
# Total sensitivity indices of g1 over (beta, L) on the pulse case
study:
  preset: g1-beta-L
  # Overrides of the preset
  n: [2, 3, 4]
  frozen:
    alpha0: 1.0
    alpha1: 1.0
""",
}


@click.command()
@click.option("--output-dir", default="output", show_default=True, help="directory for results")
@click.option("--workers", type=int, default=1, show_default=True, help="parallel evaluations")
@click.argument("file", type=click.Choice(list(TEMPLATES)), required=True)
def mkconf(output_dir, workers, file):
    """generate a config file template"""
    print(
        (TEMPLATES[file].strip() + "\n" + _SETTINGS.rstrip())
        % {"output_dir": output_dir, "workers": workers}
    )
