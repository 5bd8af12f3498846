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



import json
import os
import re
from threading import Lock

import numpy as np
import pytest
import yaml

from bgkpml.task import Task
from bgkpml.util import (
    LockConflict,
    lockfile,
    make_dir_path,
    provenance_header,
    status,
    to_json,
    update_file,
    write_atomic,
    write_csv,
)


def test_update_file(tmp_path):
    path = tmp_path / "out.txt"
    assert update_file(path, "one\n")
    assert path.read_text() == "one\n"
    mtime = os.stat(path).st_mtime_ns
    assert not update_file(path, "one\n")
    assert os.stat(path).st_mtime_ns == mtime
    assert update_file(path, b"two\n")
    assert path.read_text() == "two\n"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_write_atomic_cleanup(tmp_path):
    path = tmp_path / "out.txt"
    with pytest.raises(RuntimeError):
        with write_atomic(path) as fh:
            fh.write(b"partial")
            raise RuntimeError("interrupted")
    assert os.listdir(tmp_path) == []


def test_lockfile(tmp_path):
    with lockfile(tmp_path, "study"):
        with pytest.raises(LockConflict, match="Another study"):
            with lockfile(tmp_path, "study"):
                pass
        # a different name does not conflict
        with lockfile(tmp_path, "other"):
            pass
    with lockfile(tmp_path, "study"):
        pass


def test_make_dir_path(tmp_path):
    path = make_dir_path(tmp_path, "a", "b")
    assert os.path.isdir(path)
    assert make_dir_path(tmp_path, "a", "b") == path


def test_to_json():
    text = to_json({"b": np.arange(3), "a": (np.float64(0.5), np.int64(2))})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [0.5, 2], "b": [0, 1, 2]}


def test_write_csv(tmp_path):
    path = tmp_path / "out.csv"
    config = {"pml": {"alpha0": 1.0}, "grid": {"nx": np.int64(20)}}
    write_csv(path, ["t", "value"], [(0.1, np.float64(1 / 3)), (0.2, 4)], config)
    lines = path.read_text().splitlines()
    comments = [line for line in lines if line.startswith("#")]
    assert yaml.safe_load("\n".join(c[2:] for c in comments)) == {
        "grid": {"nx": 20},
        "pml": {"alpha0": 1.0},
    }
    body = lines[len(comments) :]
    assert body[0] == "t,value"
    assert body[1] == "0.10000000000000001,0.33333333333333331"
    assert body[2] == "0.20000000000000001,4"


def test_provenance_header():
    header = provenance_header({"time": {"T": 1.0}})
    assert all(line.startswith("# ") for line in header.splitlines())
    assert header.endswith("\n")


def test_status(capsys):
    status("hello")
    status("oops", err=True)
    out, err = capsys.readouterr()
    assert re.fullmatch(r"\d{4}-\d\d-\d\d \d\d:\d\d:\d\d hello\n", out)
    assert err.endswith(" oops\n")


class CollectTask(Task):
    def __init__(self, thread_count, units, verbose=False):
        super().__init__(thread_count, units, verbose)
        self.seen = []
        self._lock = Lock()

    def _execute(self, unit):
        if unit == "bad":
            raise ValueError("bad unit")
        with self._lock:
            self.seen.append(unit)
        return unit != "false"


def test_task_success():
    task = CollectTask(3, range(20))
    assert task.run()
    assert sorted(task.seen) == list(range(20))


@pytest.mark.parametrize("failing", ["bad", "false"])
def test_task_failure(capsys, failing):
    task = CollectTask(2, ["a", failing, "b"], verbose=True)
    assert not task.run()
    assert {"a", "b"} <= set(task.seen)
    out, err = capsys.readouterr()
    assert "Starting a" in out
    if failing == "bad":
        assert "bad unit" in err
