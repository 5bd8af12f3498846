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


import csv
import json

import pytest
import yaml
from click.testing import CliRunner

from bgkpml.cli import bgkpml_cli
from bgkpml.scenarios import ScenarioConfig

QUICK = {
    "scenario": {"case": "gaussian-pulse"},
    "grid": {"nx": 11, "ny": 11},
    "pml": {"L": 0.3},
    "time": {"T": 0.2},
}


@pytest.fixture
def invoke(config_file):
    def run(args, config=QUICK):
        runner = CliRunner()
        return runner.invoke(bgkpml_cli, ["-c", str(config_file(config))] + args)

    return run


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(line for line in fh if not line.startswith("#")))


def test_simulate(invoke, tmp_path):
    out = tmp_path / "out"
    result = invoke(["simulate", "-o", str(out), "--snap-times", "0,0.2"])
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "summary.json").read_text())
    assert summary["completed"]
    assert summary["blowup"] is None
    assert set(summary["functionals"]) == {"g1", "g2", "g3", "h1"}
    assert summary["config"]["grid"]["nx"] == 11
    snapshots = sorted(p.name for p in out.glob("a1-*.csv"))
    assert snapshots == [
        "a1-pml-t0.00.csv",
        "a1-pml-t0.20.csv",
        "a1-reference-t0.00.csv",
        "a1-reference-t0.20.csv",
    ]
    rows = read_csv(out / "probe.csv")
    assert rows[0] == ["t", "err_a1", "v_sup"]
    assert len(rows) == 10
    assert float(rows[1][1]) == 0.0
    assert (out / "probe.csv").read_text().startswith("# grid:")


def test_simulate_is_deterministic(invoke, tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert invoke(["simulate", "-o", str(out)]).exit_code == 0
        outputs.append((out / "probe.csv").read_bytes())
    assert outputs[0] == outputs[1]


def test_simulate_without_reference(invoke, tmp_path):
    out = tmp_path / "out"
    result = invoke(["simulate", "-o", str(out), "--no-reference"])
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "summary.json").read_text())
    assert "functionals" not in summary
    assert read_csv(out / "probe.csv")[0] == ["t", "a1_line_norm", "v_line_sup"]
    assert not list(out.glob("a1-reference-*.csv"))


def test_simulate_blowup(invoke, tmp_path):
    out = tmp_path / "out"
    config = dict(QUICK, settings={"blowup-threshold": 1.0})
    result = invoke(["simulate", "-o", str(out)], config)
    assert result.exit_code == 3
    summary = json.loads((out / "summary.json").read_text())
    assert not summary["completed"]
    assert summary["blowup"]["run"] == "reference"
    assert summary["blowup"]["step"] == 1


def test_bad_config_names_key(invoke, tmp_path):
    result = invoke(["simulate", "-o", str(tmp_path)], dict(QUICK, grid={"nx": 3}))
    assert result.exit_code == 2
    assert "grid.nx" in result.output


def test_unparsable_config(tmp_path):
    path = tmp_path / "broken.conf"
    path.write_text("grid: [nx\n")
    result = CliRunner().invoke(bgkpml_cli, ["-c", str(path), "simulate"])
    assert result.exit_code == 2


def test_missing_config(tmp_path):
    result = CliRunner().invoke(bgkpml_cli, ["-c", str(tmp_path / "none.conf"), "simulate"])
    assert result.exit_code == 2


def test_stability(invoke, tmp_path):
    out = tmp_path / "out"
    args = ["stability", "--alpha0", "1", "--alpha0t", "1", "--kmax", "2", "--kpoints", "5"]
    result = invoke(args + ["-o", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "stability.json").read_text())
    assert report["energy_decay"] and report["petrovskii"]
    assert report["violated"] == []
    assert len(read_csv(out / "fsign.csv")) == 26
    assert read_csv(out / "margins.csv")[0] == ["k1", "k2", "hermitian_max", "max_real_eig"]


def test_stability_flags_violation(invoke, tmp_path):
    args = ["stability", "--alpha0", "-1", "--alpha0t", "1", "--sigma1", "0.5"]
    result = invoke(args + ["--kmax", "2", "--kpoints", "5", "-o", str(tmp_path)])
    assert result.exit_code == 0
    assert "condition violated: alpha0 > -sigma1" in result.output


def test_stability_flags_instability_region(invoke, tmp_path):
    args = ["stability", "--alpha0", "1", "--lambda1", "1", "--sigma1", "0.5"]
    result = invoke(args + ["-o", str(tmp_path)])
    assert result.exit_code == 0
    assert "instability region is nonempty" in result.output


def test_anova_oracle(invoke, tmp_path):
    out = tmp_path / "out"
    args = ["anova", "-p", "g1-beta-L", "--oracle", "additive", "-n", "2", "-n", "3"]
    result = invoke(args + ["-o", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_csv(out / "tsi.csv")
    assert rows[0] == ["rule", "beta", "L"]
    assert [r[0] for r in rows[1:]] == ["(G_2)^2", "(G_3)^2"]
    for row in rows[1:]:
        assert float(row[1]) == pytest.approx(0.5, abs=1e-12)
        assert float(row[2]) == pytest.approx(0.5, abs=1e-12)
    export = json.loads((out / "decomposition.json").read_text())
    assert export["rules"]["(G_3)^2"]["superposition_dimension"]["0.99"] == 1


def test_anova_resume(invoke, tmp_path):
    out = tmp_path / "out"
    args = ["anova", "-p", "g1-beta-L", "--oracle", "product", "-n", "2", "-o", str(out)]
    assert invoke(args).exit_code == 0
    result = invoke(args + ["--resume"])
    assert result.exit_code == 0
    assert "0 of 4 nodes to evaluate" in result.output
    result = invoke(args)
    assert "4 of 4 nodes to evaluate" in result.output


def test_anova_poisoned_nodes(invoke, tmp_path):
    out = tmp_path / "out"
    config = dict(QUICK, settings={"blowup-threshold": 1.0})
    result = invoke(["anova", "-p", "g1-beta-L", "-n", "1", "-o", str(out)], config)
    assert result.exit_code == 4
    poisoned = json.loads((out / "poisoned.json").read_text())
    assert len(poisoned["nodes"]) == 1
    assert set(poisoned["nodes"][0]["point"]) == {"beta", "L"}


def test_anova_rejects_thin_layer(invoke, tmp_path):
    config = dict(QUICK, study={"functional": "g1", "box": {"L": [0.05, 0.5]}})
    result = invoke(["anova", "-o", str(tmp_path)], config)
    assert result.exit_code == 2
    assert "study.box.L" in result.output


@pytest.mark.parametrize("template", ["pulse", "vortex", "study"])
def test_mkconf(template):
    result = CliRunner().invoke(bgkpml_cli, ["mkconf", template])
    assert result.exit_code == 0, result.output
    info = yaml.safe_load(result.output)
    assert info["settings"]["workers"] == 1
    ScenarioConfig(info)
