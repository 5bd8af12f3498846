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

"""Error functionals comparing a layer run against its reference."""

import numpy as np
from scipy.integrate import trapezoid

from .runs import RunPair

FUNCTIONALS = ("g1", "g2", "g3", "h1", "h2")


def _require_reference(pair: RunPair):
    if pair.reference is None:
        raise ValueError("Functionals need a reference run")


def _aligned(pair: RunPair, attr):
    pml = getattr(pair.pml, attr)
    ref = getattr(pair.reference, attr)
    n = min(len(pml), len(ref))
    if n == 0:
        raise ValueError(f"No {attr} recorded")
    return np.array(pml[:n]), np.array(ref[:n])


def err_a1_series(pair: RunPair, x_star=None):
    """Times and normalized probe-line L2 density error at each step."""
    _require_reference(pair)
    phys = pair.pml.phys
    if x_star is not None and phys.index_of_x(x_star) != pair.pml.probe_index:
        raise ValueError(f"No probe data recorded at x={x_star:g}")
    pml, ref = _aligned(pair, "probe_a1")
    norm0 = np.sqrt(phys.integrate_line(ref[0] ** 2))
    if not norm0 > 0:
        raise ValueError("Reference density vanishes on the probe line")
    err = np.sqrt(phys.integrate_line((pml - ref) ** 2)) / norm0
    return np.array(pair.pml.times[: len(err)]), err


def _domain_series(pair: RunPair, attr):
    pml, ref = _aligned(pair, attr)
    phys = pair.pml.phys
    norm0 = np.sqrt(phys.integrate(ref[0] ** 2))
    if not norm0 > 0:
        raise ValueError(f"Initial reference {attr.split('_')[1]} has zero norm")
    err = np.sqrt(phys.integrate((pml - ref) ** 2)) / norm0
    return np.array(pair.pml.domain_times[: len(err)]), err


def integrands(pair: RunPair):
    """Per-step integrands for the probe CSV, keyed by column name."""
    t, err = err_a1_series(pair)
    pml, ref = _aligned(pair, "probe_v")
    ret = {"t": t, "err_a1": err, "v_sup": np.max(np.abs(pml - ref), axis=-1)[: len(t)]}
    return ret


def functional(pair: RunPair, kind):
    _require_reference(pair)
    if kind == "g1":
        return float(np.max(err_a1_series(pair)[1]))
    elif kind == "g2":
        t, err = err_a1_series(pair)
        return float(trapezoid(err, t))
    elif kind == "g3":
        t, err = _domain_series(pair, "domain_a1")
        return float(trapezoid(err, t))
    elif kind == "h1":
        pml, ref = _aligned(pair, "probe_v")
        return float(np.max(np.abs(pml - ref)))
    elif kind == "h2":
        t, err = _domain_series(pair, "domain_v")
        return float(trapezoid(err, t))
    raise ValueError(f"Unknown functional {kind!r} (choose from {', '.join(FUNCTIONALS)})")


def all_functionals(pair: RunPair, kinds=FUNCTIONALS):
    """Every functional that the recorded data supports."""
    ret = {}
    for kind in kinds:
        try:
            ret[kind] = functional(pair, kind)
        except ValueError:
            pass
    return ret
