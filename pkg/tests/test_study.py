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


import numpy as np
import pytest

from bgkpml.command import ConfigFailure
from bgkpml.study import (
    PARAMETERS,
    PRESETS,
    FunctionalEvaluator,
    OracleEvaluator,
    StudySpec,
    resolve_study,
    run_study,
)


def test_presets_resolve():
    for name, preset in PRESETS.items():
        spec, scenario = resolve_study({}, name)
        assert scenario.case == preset["case"]
        assert spec.names == [p for p in PARAMETERS if p in preset["box"]]
        for key, value in spec.frozen.items():
            assert scenario.section("pml")[key] == value


def test_study_section_overrides_preset():
    config = {"study": {"preset": "g1-alpha-L", "frozen": {"beta": 2.0}, "n": [2]}}
    spec, scenario = resolve_study(config)
    assert spec.frozen == {"beta": 2.0}
    assert spec.n == [2]
    assert scenario.params().alpha0 == 1.0
    assert scenario.section("pml")["beta"] == 2.0


@pytest.mark.parametrize(
    "study, message",
    [
        ({"functional": "g9", "box": {"L": [0.3, 0.8]}}, "study.functional"),
        ({"functional": "g1", "box": {"tau": [0.1, 0.2]}}, "study.box.tau"),
        ({"functional": "g1", "box": {"L": [0.1, 0.8]}}, "study.box.L"),
        ({"functional": "g1", "box": {"L": [0.8, 0.3]}}, "study.box.L"),
        ({"functional": "g1", "box": {"L": [0.3, 1.0]}}, "study.box.L"),
        (
            {"functional": "g1", "box": {"beta": [0, 4]}, "frozen": {"beta": 2}},
            "study.frozen.beta",
        ),
        ({"functional": "g1", "box": {}}, "study.box"),
        ({"box": {"L": [0.3, 0.8]}}, "study.functional"),
        ({"functional": "g1", "box": {"L": [0.3, 0.8]}, "seed": 3}, "study.seed"),
    ],
)
def test_invalid_studies(study, message):
    with pytest.raises(ConfigFailure) as excinfo:
        resolve_study({"study": study})
    assert message in excinfo.value.message


def test_vortex_allows_thin_layers():
    spec, scenario = resolve_study({}, "h1-beta-L")
    assert spec.box["L"][0] == 0.1
    assert scenario.scenario.MIN_LAYER == 0.1


def test_vortex_presets_fix_damping_strength():
    for name in ("h1-beta-L", "h2-beta-L", "h1-4d", "h2-4d"):
        _, scenario = resolve_study({}, name)
        assert scenario.profile().C == 5.0
    _, scenario = resolve_study({"pml": {"Cmode": "auto"}}, "h1-beta-L")
    assert scenario.profile().C == pytest.approx(40.0)
    _, scenario = resolve_study({}, "g1-beta-L")
    assert scenario.profile().C == pytest.approx(1 / scenario.dt())


def test_unknown_preset():
    with pytest.raises(ConfigFailure):
        resolve_study({}, "g7-everything")


def test_oracle_evaluator_uses_unit_coordinates():
    spec = StudySpec("g1", {"beta": [0.0, 4.0], "L": [0.25, 0.75]})
    f = OracleEvaluator(spec.parameter_box(), "product")
    assert f([2.0, 0.75]) == pytest.approx(0.5)


def test_oracle_study(tmp_path):
    spec, scenario = resolve_study({"study": {"preset": "g1-beta-L", "n": [2, 4]}})
    decs = run_study(scenario, spec, str(tmp_path), oracle="product")
    assert sorted(decs) == ["(G_2)^2", "(G_4)^2"]
    for dec in decs.values():
        values = dec.as_dict()["tsi"]
        assert values["beta"] == pytest.approx(4 / 7, abs=1e-12)
        assert values["L"] == pytest.approx(4 / 7, abs=1e-12)
    assert (tmp_path / "cache-G4.json").exists()


def test_functional_evaluator(quick_pulse):
    spec = StudySpec("g1", {"beta": [0.0, 4.0], "L": [0.25, 0.8]})
    f = FunctionalEvaluator(quick_pulse, spec, {})
    value = f([4.0, 0.3])
    assert np.isfinite(value) and value >= 0


@pytest.mark.slow
def test_beta_L_sensitivities(tmp_path):
    spec, scenario = resolve_study({"study": {"preset": "g1-beta-L", "n": [2, 3, 4]}})
    decs = run_study(scenario, spec, str(tmp_path), workers=4)
    for dec in decs.values():
        values = dec.as_dict()["tsi"]
        assert 0.80 <= values["L"] <= 1.0
        assert values["L"] > values["beta"]


@pytest.mark.slow
def test_vortex_beta_L_sensitivities(tmp_path):
    spec, scenario = resolve_study({"study": {"preset": "h1-beta-L", "n": [2, 3, 4]}})
    decs = run_study(scenario, spec, str(tmp_path), workers=4)
    for dec in decs.values():
        values = dec.as_dict()["tsi"]
        assert 0.70 <= values["L"] <= 0.95
        assert values["L"] > values["beta"]


@pytest.mark.slow
def test_functional_choice_keeps_ordering(tmp_path):
    orderings = []
    for preset in ("g1-4d", "g2-4d", "g3-4d"):
        spec, scenario = resolve_study({"study": {"preset": preset, "n": [2]}})
        out = tmp_path / preset
        out.mkdir()
        (dec,) = run_study(scenario, spec, str(out), workers=4).values()
        values = dec.as_dict()["tsi"]
        orderings.append(sorted(values, key=values.get, reverse=True))
    assert orderings[0] == orderings[1] == orderings[2]
    assert orderings[0][:2] == ["L", "beta"]


@pytest.mark.slow
@pytest.mark.parametrize("preset", ["g1-4d", "h1-4d", "h2-4d"])
def test_layer_thickness_leads_four_parameter_studies(tmp_path, preset):
    spec, scenario = resolve_study({"study": {"preset": preset, "n": [2, 3]}})
    decs = run_study(scenario, spec, str(tmp_path), workers=4)
    assert sorted(decs) == ["(G_2)^4", "(G_3)^4"]
    for dec in decs.values():
        values = dec.as_dict()["tsi"]
        assert sorted(values, key=values.get, reverse=True)[:2] == ["L", "beta"]
