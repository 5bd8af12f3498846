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

import queue
import traceback
from contextlib import nullcontext
from threading import Thread

import click

from .util import status


class Task:
    """Drain a queue of units with a fixed pool of worker threads.

    Subclasses implement _execute(unit) and return True on success.  A
    unit that raises is reported on stderr and counts as a failure; the
    other workers keep going."""

    def __init__(self, thread_count, units, verbose=False):
        self._queue: queue.Queue = queue.Queue()
        for unit in units:
            self._queue.put(unit)
        self._success = True
        self._verbose = verbose
        self._threads = [
            Thread(target=self._worker) for i in range(max(1, int(thread_count)))
        ]

    def start(self):
        self._ctx = click.get_current_context(silent=True)
        for thread in self._threads:
            thread.start()

    def _worker(self):
        while True:
            try:
                unit = self._queue.get_nowait()
            except queue.Empty:
                return
            scope = self._ctx.scope() if self._ctx is not None else nullcontext()
            with scope:
                if self._verbose:
                    status(f"Starting {unit}")
                try:
                    ok = self._execute(unit)
                except Exception as e:
                    ok = False
                    if self._verbose:
                        excerpt = traceback.format_exception_only(type(e), e)[-1].strip()
                        status(f"Failed:  {unit}\n   {excerpt}", err=True)
                if not ok:
                    self._success = False
                if self._verbose:
                    status(f"Ending   {unit}")

    def _execute(self, unit):
        raise NotImplementedError

    def wait(self):
        for thread in self._threads:
            thread.join()
        return self._success

    def run(self):
        self.start()
        return self.wait()
