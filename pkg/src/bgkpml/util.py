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
import errno
import fcntl
import io
import json
import os
import sys
from contextlib import contextmanager
from datetime import datetime
from tempfile import mkstemp
from typing import Union

import numpy as np
import yaml

TEMPFILE_PREFIX = ".bgkpml-tmp"


class LockConflict(Exception):
    pass


@contextmanager
def noop(value=None):
    yield value


def try_open(path: Union[str, bytes, os.PathLike], mode: str):
    try:
        return open(path, mode)
    except OSError:
        return noop()


@contextmanager
def write_atomic(path, prefix=TEMPFILE_PREFIX, suffix=""):
    # Open a temporary file for writing.  On successfully exiting the
    # context, close the file and rename it to the specified path.
    # On exiting due to exception, close and delete the temporary file.
    fd, tempfile = mkstemp(
        prefix=prefix, suffix=suffix, dir=os.path.dirname(os.path.abspath(path))
    )
    try:
        with os.fdopen(fd, "wb") as fh:
            yield fh
        os.chmod(tempfile, 0o644)
        os.rename(tempfile, path)
    except BaseException:
        os.unlink(tempfile)
        raise


def update_file(path, data, prefix=TEMPFILE_PREFIX, suffix=""):
    # Atomically replace the file only if its contents have changed, so
    # rerunning a study leaves identical outputs untouched.  Returns True
    # if the file was written.
    if isinstance(data, str):
        data = data.encode("utf-8")
    with try_open(path, "rb") as oldfh:
        if oldfh is not None and oldfh.read() == data:
            return False
    with write_atomic(path, prefix=prefix, suffix=suffix) as fh:
        fh.write(data)
    return True


@contextmanager
def lockfile(directory, name):
    lock_dir = make_dir_path(directory, ".lock")
    lock_file = os.path.join(lock_dir, name)
    with open(lock_file, "w") as lock:
        try:
            fcntl.flock(lock, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError as e:
            if e.errno in (errno.EACCES, errno.EAGAIN):
                raise LockConflict(f"Another {name} is already running in {directory}.")
            else:
                raise
        yield


def make_dir_path(*args):
    path = os.path.join(*args)
    try:
        os.makedirs(path)
    except OSError as e:
        if e.errno != errno.EEXIST:
            raise
    return path


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def to_json(info):
    return json.dumps(_jsonable(info), sort_keys=True, indent=2) + "\n"


def write_json(path, info):
    return update_file(path, to_json(info))


def provenance_header(config):
    """The resolved configuration as a block of '# ' comment lines."""
    text = yaml.safe_dump(_jsonable(config), sort_keys=True, default_flow_style=False)
    return "".join(f"# {line}\n" for line in text.splitlines())


def write_csv(path, header, rows, config=None, comments=()):
    """Write rows through csv, after "# " comment lines for the provenance
    header and any extra comments."""
    out = io.StringIO()
    if config is not None:
        out.write(provenance_header(config))
    for line in comments:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return update_file(path, out.getvalue())


def _format_cell(value):
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return value


def timestamp():
    return datetime.now().strftime("%Y-%m-%d %H:%M:%S")


def status(message, err=False):
    fh = sys.stderr if err else sys.stdout
    fh.write(f"{timestamp()} {message}\n")
    fh.flush()
