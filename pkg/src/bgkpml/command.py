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

from .scenarios import ConfigError, ScenarioConfig


def _get_default_config_path():
    return Path(click.get_app_dir("bgkpml")).with_suffix(".conf")


default_config_path = _get_default_config_path()


pass_config = click.make_pass_decorator(dict)


class ConfigFailure(click.ClickException):
    exit_code = 2

    def __init__(self, message):
        super().__init__(f"Invalid configuration: {message}")


def load_scenario(config, overrides=None):
    try:
        ret = ScenarioConfig(config)
        if overrides:
            ret = ret.with_overrides(overrides)
        return ret
    except ConfigError as e:
        raise ConfigFailure(str(e))


def get_settings(config):
    """The run-wide settings section, or an empty dict."""
    settings = config.get("settings") or {}
    if not isinstance(settings, dict):
        raise ConfigFailure("settings: must be a mapping")
    return settings


def warn(message):
    click.echo(f"Warning: {message}", err=True)
