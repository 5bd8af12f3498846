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


from pathlib import Path

import click
import yaml

from .command import ConfigFailure, default_config_path
from .scan import stability
from .simulate import simulate
from .study import anova
from .template import mkconf

CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option()
@click.option(
    "-c",
    "--config-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=default_config_path,
    show_default=True,
    help="path to config file",
)
@click.pass_context
def bgkpml_cli(ctx, config_file):
    # A missing default file means all defaults
    if not config_file.exists():
        if config_file != default_config_path:
            raise ConfigFailure(f"{config_file}: no such file")
        config = {}
    else:
        try:
            with config_file.open() as fh:
                config = yaml.safe_load(fh) or {}
        except yaml.YAMLError as e:
            raise ConfigFailure(f"{config_file}: {e}")
    if not isinstance(config, dict):
        raise ConfigFailure(f"{config_file}: top level must be a mapping")

    ctx.obj = config


bgkpml_cli.add_command(simulate)
bgkpml_cli.add_command(stability)
bgkpml_cli.add_command(anova)
bgkpml_cli.add_command(mkconf)
