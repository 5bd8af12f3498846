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


"""Variance-based sensitivity studies of the layer parameters."""

import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List

import click
import numpy as np

from .anova import (
    CubatureRule,
    EvaluationCache,
    ParameterBox,
    PoisonedNodesError,
    UndefinedSensitivityError,
    anova_terms,
    evaluate_on_grid,
    tsi,
    tsi_breakdown,
)
from .command import ConfigFailure, get_settings, load_scenario, pass_config
from .scenarios import FUNCTIONALS, ConfigError, ScenarioConfig, functional, run_pair
from .util import LockConflict, lockfile, make_dir_path, status, write_csv, write_json

# Table column order
PARAMETERS = ("alpha0", "alpha1", "beta", "L")
PARAMETER_KEYS = {"alpha0": "pml.alpha0", "alpha1": "pml.alpha1", "beta": "pml.beta", "L": "pml.L"}

_PULSE_4D = {"alpha0": [0.0, 3.5], "alpha1": [0.0, 3.5], "beta": [0.0, 4.0], "L": [0.25, 0.8]}
_VORTEX_4D = {"alpha0": [0.0, 3.5], "alpha1": [0.0, 3.5], "beta": [0.0, 4.0], "L": [0.1, 1.0]}
# On the coarse vortex grid 1/dt saturates the first layer cell (C hx / c near
# 2.3); a fixed strength keeps the damping resolved across the layer.
_VORTEX_DAMPING = {"Cmode": "fixed", "C": 5.0}

PRESETS = {
    "g1-beta-L": {
        "case": "gaussian-pulse",
        "functional": "g1",
        "box": {"beta": [0.0, 4.0], "L": [0.25, 0.8]},
        "frozen": {"alpha0": 1.0, "alpha1": 1.0},
        "n": [2, 3, 4],
    },
    "g1-alpha-L": {
        "case": "gaussian-pulse",
        "functional": "g1",
        "box": {"alpha0": [0.0, 5.0], "alpha1": [0.0, 5.0], "L": [0.25, 0.8]},
        "frozen": {"beta": 4.0},
        "n": [2, 3],
    },
    "g1-4d": {"case": "gaussian-pulse", "functional": "g1", "box": _PULSE_4D, "n": [2, 3]},
    "g2-4d": {"case": "gaussian-pulse", "functional": "g2", "box": _PULSE_4D, "n": [2, 3]},
    "g3-4d": {"case": "gaussian-pulse", "functional": "g3", "box": _PULSE_4D, "n": [2, 3]},
    "h1-beta-L": {
        "case": "isentropic-vortex",
        "functional": "h1",
        "pml": _VORTEX_DAMPING,
        "box": {"beta": [0.0, 4.0], "L": [0.1, 1.0]},
        "frozen": {"alpha0": 1.0, "alpha1": 1.0},
        "n": [2, 3, 4],
    },
    "h2-beta-L": {
        "case": "isentropic-vortex",
        "functional": "h2",
        "pml": _VORTEX_DAMPING,
        "box": {"beta": [0.0, 4.0], "L": [0.1, 1.0]},
        "frozen": {"alpha0": 1.0, "alpha1": 1.0},
        "n": [2, 3, 4],
    },
    "h1-4d": {
        "case": "isentropic-vortex",
        "functional": "h1",
        "pml": _VORTEX_DAMPING,
        "box": _VORTEX_4D,
        "n": [2, 3],
    },
    "h2-4d": {
        "case": "isentropic-vortex",
        "functional": "h2",
        "pml": _VORTEX_DAMPING,
        "box": _VORTEX_4D,
        "n": [2, 3],
    },
}

ORACLES = {
    "additive": lambda u: float(np.sum(u)),
    "product": lambda u: float(np.prod(u)),
}


@dataclass
class StudySpec:
    functional: str
    box: Dict[str, List[float]]
    n: List[int] = field(default_factory=lambda: [2])
    frozen: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, info):
        info = dict(info)
        unknown = set(info) - {"preset", "case", "functional", "box", "n", "frozen"}
        if unknown:
            raise ConfigFailure(f"study.{sorted(unknown)[0]}: unknown key")
        try:
            spec = cls(
                functional=info["functional"],
                box={k: [float(lo), float(hi)] for k, (lo, hi) in info["box"].items()},
                n=[int(v) for v in info.get("n", [2])],
                frozen={k: float(v) for k, v in (info.get("frozen") or {}).items()},
            )
        except KeyError as e:
            raise ConfigFailure(f"study.{e.args[0]}: required")
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigFailure(f"study: {e}")
        return spec

    def validate(self, scenario: ScenarioConfig):
        if self.functional not in FUNCTIONALS:
            raise ConfigFailure(f"study.functional: must be one of {', '.join(FUNCTIONALS)}")
        if not self.box:
            raise ConfigFailure("study.box: no parameters to vary")
        for name in list(self.box) + list(self.frozen):
            if name not in PARAMETERS:
                raise ConfigFailure(f"study.box.{name}: must be one of {', '.join(PARAMETERS)}")
        overlap = set(self.box) & set(self.frozen)
        if overlap:
            raise ConfigFailure(f"study.frozen.{sorted(overlap)[0]}: also varied in study.box")
        for name, (lo, hi) in self.box.items():
            if not lo < hi:
                raise ConfigFailure(f"study.box.{name}: empty interval [{lo:g}, {hi:g}]")
        min_layer = scenario.scenario.MIN_LAYER
        L_lo = self.box["L"][0] if "L" in self.box else self.frozen.get("L")
        if L_lo is not None and L_lo < min_layer:
            raise ConfigFailure(f"study.box.L: layer thinner than {min_layer:g}")
        if "L" in self.box:
            try:
                scenario.with_overrides({"pml.L": self.box["L"][1]})
            except ConfigError as e:
                raise ConfigFailure(f"study.box.L: {e}")
        if "beta" in self.box and self.box["beta"][0] < 0:
            raise ConfigFailure("study.box.beta: must be >= 0")
        if any(n < 1 for n in self.n):
            raise ConfigFailure("study.n: must be >= 1")

    @property
    def names(self):
        return [p for p in PARAMETERS if p in self.box]

    def parameter_box(self):
        names = self.names
        return ParameterBox(
            names, [self.box[n][0] for n in names], [self.box[n][1] for n in names]
        )

    def as_dict(self):
        return {"functional": self.functional, "box": self.box, "n": self.n, "frozen": self.frozen}


def resolve_study(config, preset=None):
    """Merge a preset (from the option or study.preset) with study keys."""
    study = dict(config.get("study") or {})
    preset = preset or study.pop("preset", None)
    study.pop("preset", None)
    raw = dict(config)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigFailure(f"study.preset: unknown preset {preset!r}")
        base = {k: v for k, v in PRESETS[preset].items() if k not in ("case", "pml")}
        study = {**base, **study}
        scenario_section = dict(raw.get("scenario") or {})
        scenario_section.setdefault("case", PRESETS[preset]["case"])
        raw["scenario"] = scenario_section
        raw["pml"] = {**PRESETS[preset].get("pml", {}), **(raw.get("pml") or {})}
    scenario = load_scenario(raw)
    spec = StudySpec.from_dict(study)
    spec.validate(scenario)
    overrides = {PARAMETER_KEYS[k]: v for k, v in spec.frozen.items()}
    return spec, load_scenario(scenario.as_dict(), overrides)


class FunctionalEvaluator:
    """Layer-run functional at a point of the parameter box."""

    def __init__(self, scenario: ScenarioConfig, spec: StudySpec, settings):
        self._scenario = scenario
        self._spec = spec
        self._settings = dict(settings, **{"progress-every": 0})

    def __call__(self, point):
        overrides = {PARAMETER_KEYS[n]: float(v) for n, v in zip(self._spec.names, point)}
        config = self._scenario.with_overrides(overrides)
        pair = run_pair(config, settings=self._settings, snap_times=[])
        return functional(pair, self._spec.functional)


class OracleEvaluator:
    def __init__(self, box: ParameterBox, kind):
        self._box = box
        self._f = ORACLES[kind]

    def __call__(self, point):
        return self._f(self._box.to_unit(point))


def run_study(
    scenario, spec: StudySpec, out_dir, workers=1, resume=False, oracle=None, settings=None
):
    """Evaluate and decompose at every requested rule.

    Returns {rule label: decomposition}.  Raises PoisonedNodesError after
    the remaining nodes of the failing rule have been evaluated."""
    box = spec.parameter_box()
    if oracle is not None:
        f = OracleEvaluator(box, oracle)
    else:
        f = FunctionalEvaluator(scenario, spec, settings or {})
    ret = {}
    for n in spec.n:
        rule = CubatureRule(n, box.p)
        path = os.path.join(out_dir, f"cache-G{n}.json")
        if not resume and os.path.exists(path):
            os.unlink(path)
        meta = {"study": spec.as_dict(), "config": scenario.as_dict(), "oracle": oracle, "n": n}
        cache = EvaluationCache(path, meta)
        status(f"Starting {rule.label}: {rule.size - len(cache)} of {rule.size} nodes to evaluate")
        table = evaluate_on_grid(f, box, rule, cache, workers=workers, verbose=workers > 1)
        ret[rule.label] = anova_terms(table, rule, box=box)
        status(f"Ending   {rule.label} ({cache.evaluations} evaluations)")
    return ret


def write_results(out_dir, spec: StudySpec, decompositions, provenance):
    rows = []
    export = {}
    for label, dec in decompositions.items():
        info = dec.as_dict()
        try:
            indices = tsi(dec)
            info["tsi_breakdown"] = tsi_breakdown(dec)
        except UndefinedSensitivityError as e:
            indices = {}
            info["error"] = str(e)
        rows.append([label] + [indices.get(name, float("nan")) for name in spec.names])
        export[label] = info
    write_csv(os.path.join(out_dir, "tsi.csv"), ["rule"] + spec.names, rows, provenance)
    write_json(
        os.path.join(out_dir, "decomposition.json"),
        {"config": provenance, "study": spec.as_dict(), "rules": export},
    )


@click.command()
@click.option("-p", "--preset", type=click.Choice(sorted(PRESETS)), help="predefined study")
@click.option(
    "--oracle",
    type=click.Choice(sorted(ORACLES)),
    help="analytic function of the unit coordinates instead of the solver",
)
@click.option(
    "-n", "n_values", type=int, multiple=True, help="Gauss nodes per parameter (repeatable)"
)
@click.option("-w", "--workers", type=int, help="parallel evaluations [default: settings.workers]")
@click.option("--resume", is_flag=True, help="reuse cached evaluations")
@click.option(
    "-o",
    "--output-dir",
    type=click.Path(file_okay=False),
    help="directory for result files [default: settings.output-dir]",
)
@pass_config
def anova(config, preset, oracle, n_values, workers, resume, output_dir):
    """compute total sensitivity indices of the layer parameters"""
    settings = get_settings(config)
    spec, scenario = resolve_study(config, preset)
    if n_values:
        spec.n = list(n_values)
        spec.validate(scenario)
    if workers is None:
        workers = int(settings.get("workers", 1))
    out_dir = make_dir_path(output_dir or settings.get("output-dir", "output"))
    provenance = dict(scenario.as_dict(), study=spec.as_dict())

    try:
        with lockfile(out_dir, "study"):
            try:
                decompositions = run_study(
                    scenario, spec, out_dir, workers, resume, oracle, settings
                )
            except PoisonedNodesError as e:
                write_json(
                    os.path.join(out_dir, "poisoned.json"),
                    {
                        "config": provenance,
                        "nodes": [
                            {"index": i, "point": dict(zip(spec.names, p)), "reason": r}
                            for i, p, r in e.nodes
                        ],
                    },
                )
                click.echo(str(e), err=True)
                sys.exit(4)
            write_results(out_dir, spec, decompositions, provenance)
    except LockConflict as e:
        raise click.ClickException(str(e))
    for label, dec in decompositions.items():
        try:
            values = ", ".join(f"{k}={v:.4f}" for k, v in tsi(dec).items())
        except UndefinedSensitivityError as e:
            values = str(e)
        status(f"{label}: {values}")
