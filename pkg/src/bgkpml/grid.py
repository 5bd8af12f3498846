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

"""Uniform vertex-centered grids and fourth-order first derivatives.

Fields are arrays whose last two axes are (x, y).  Stacked fields carry
the component on the first axis.  The solver pads every field with two
ghost nodes per edge and applies the central five-point stencil
everywhere; the standalone ddx/ddy operators close non-periodic edges
with biased fourth-order stencils instead.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .util import write_csv

EDGE_TAGS = ("wall", "periodic", "pml-backed", "neumann")
MIN_POINTS = 9
GHOSTS = 2

# Reflection parity of a1..a6 across a wall: the wall-normal momentum and
# the shear coefficient are odd, everything else is even.
A_WALL_PARITY_X = np.array([1, -1, 1, -1, 1, 1])
A_WALL_PARITY_Y = np.array([1, 1, -1, -1, 1, 1])
# The auxiliary fields are driven by d/dx of the coefficients, which flips
# the x parity.
OMEGA_WALL_PARITY_X = -A_WALL_PARITY_X
OMEGA_WALL_PARITY_Y = A_WALL_PARITY_Y

_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12
_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12


class Grid:
    def __init__(self, nx, ny, Lx, Ly, x_min=0.0, y_min=0.0):
        if nx < MIN_POINTS or ny < MIN_POINTS:
            raise ValueError(f"Grid needs at least {MIN_POINTS} points per direction")
        if not (Lx > 0 and Ly > 0):
            raise ValueError("Grid extents must be positive")
        self.nx = int(nx)
        self.ny = int(ny)
        self.Lx = float(Lx)
        self.Ly = float(Ly)
        self.x_min = float(x_min)
        self.y_min = float(y_min)
        self.hx = self.Lx / (self.nx - 1)
        self.hy = self.Ly / (self.ny - 1)

    @classmethod
    def with_spacing(cls, nx, ny, hx, hy, x_min=0.0, y_min=0.0):
        return cls(nx, ny, hx * (nx - 1), hy * (ny - 1), x_min, y_min)

    def __repr__(self):
        return (
            f"Grid(nx={self.nx}, ny={self.ny}, Lx={self.Lx:g}, Ly={self.Ly:g}, "
            f"x_min={self.x_min:g}, y_min={self.y_min:g})"
        )

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def x(self):
        return self.x_min + self.hx * np.arange(self.nx)

    @property
    def y(self):
        return self.y_min + self.hy * np.arange(self.ny)

    @property
    def x_max(self):
        return self.x_min + self.Lx

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def extended(self, extra_nx):
        """The same grid with extra_nx columns appended on the right."""
        return Grid.with_spacing(
            self.nx + extra_nx, self.ny, self.hx, self.hy, self.x_min, self.y_min
        )

    def index_of_x(self, x):
        return int(round((x - self.x_min) / self.hx))

    def integrate(self, field):
        """Trapezoid-rule integral over the last two axes."""
        return trapezoid(trapezoid(field, dx=self.hy, axis=-1), dx=self.hx, axis=-1)

    def integrate_line(self, values):
        """Trapezoid-rule integral along y of values sampled on the y nodes."""
        return trapezoid(values, dx=self.hy, axis=-1)


@dataclass(frozen=True)
class BoundarySpec:
    left: str = "wall"
    right: str = "wall"
    bottom: str = "wall"
    top: str = "wall"

    def __post_init__(self):
        for edge in ("left", "right", "bottom", "top"):
            tag = getattr(self, edge)
            if tag not in EDGE_TAGS:
                raise ValueError(f"Unknown boundary tag for {edge} edge: {tag}")
        if (self.left == "periodic") != (self.right == "periodic"):
            raise ValueError("Periodic x boundary must be set on both edges")
        if (self.bottom == "periodic") != (self.top == "periodic"):
            raise ValueError("Periodic y boundary must be set on both edges")
        if "pml-backed" in (self.left, self.bottom, self.top):
            raise ValueError("Only the right edge may be backed by the layer")

    @classmethod
    def periodic(cls):
        """All four edges periodic.

        The vertex grid does not repeat its last node, so the period along
        x is nx * hx rather than Lx = (nx - 1) * hx; build periodic grids
        with Grid.with_spacing(nx, ny, period / nx, ...)."""
        return cls("periodic", "periodic", "periodic", "periodic")

    @property
    def periodic_x(self):
        return self.left == "periodic"

    @property
    def periodic_y(self):
        return self.bottom == "periodic"


def _component_parity(parity, fields):
    parity = np.asarray(parity, dtype=float)
    if parity.ndim == 0:
        return parity
    if fields.ndim != 3 or parity.shape[0] != fields.shape[0]:
        raise ValueError("Parity must have one entry per component")
    return parity[:, None, None]


def _ghosts(f, axis, tag, parity, side):
    n = f.shape[axis]
    if tag == "periodic":
        return np.take(f, [n - 2, n - 1] if side == "lo" else [0, 1], axis=axis)
    # Mirror about the edge node
    g = np.take(f, [2, 1] if side == "lo" else [n - 2, n - 3], axis=axis)
    if tag == "wall":
        g = g * parity
    return g


def _zero_odd_edge(f, axis, parity, index):
    if np.ndim(parity) == 0:
        if parity < 0:
            sl = [slice(None)] * f.ndim
            sl[axis] = index
            f[tuple(sl)] = 0.0
        return
    odd = np.flatnonzero(np.asarray(parity).ravel() < 0)
    for c in odd:
        sl = [slice(None)] * f.ndim
        sl[0] = c
        sl[axis] = index
        f[tuple(sl)] = 0.0


def apply_wall_bc(fields, boundary: BoundarySpec, parity_x=1, parity_y=1):
    """Ghost-extend fields by two nodes on every edge.

    Wall edges reflect each component with its parity (odd components are
    also forced to zero on the wall itself); periodic edges wrap;
    neumann and pml-backed edges reflect evenly.  Returns an array
    padded by two along each of the last two axes.
    """
    f = np.array(fields, dtype=float, copy=True)
    px = _component_parity(parity_x, f)
    py = _component_parity(parity_y, f)
    xaxis = f.ndim - 2
    yaxis = f.ndim - 1
    if boundary.left == "wall":
        _zero_odd_edge(f, xaxis, parity_x, 0)
    if boundary.right == "wall":
        _zero_odd_edge(f, xaxis, parity_x, -1)
    if boundary.bottom == "wall":
        _zero_odd_edge(f, yaxis, parity_y, 0)
    if boundary.top == "wall":
        _zero_odd_edge(f, yaxis, parity_y, -1)

    f = np.concatenate(
        [
            _ghosts(f, xaxis, boundary.left, px, "lo"),
            f,
            _ghosts(f, xaxis, boundary.right, px, "hi"),
        ],
        axis=xaxis,
    )
    return np.concatenate(
        [
            _ghosts(f, yaxis, boundary.bottom, py, "lo"),
            f,
            _ghosts(f, yaxis, boundary.top, py, "hi"),
        ],
        axis=yaxis,
    )


def stencil_x(padded, hx):
    """d/dx at the interior nodes of a field padded on both axes."""
    p = padded[..., :, GHOSTS:-GHOSTS]
    c = _CENTRAL
    return (
        c[0] * p[..., :-4, :] + c[1] * p[..., 1:-3, :] + c[3] * p[..., 3:-1, :] + c[4] * p[..., 4:, :]
    ) / hx


def stencil_y(padded, hy):
    p = padded[..., GHOSTS:-GHOSTS, :]
    c = _CENTRAL
    return (
        c[0] * p[..., :-4] + c[1] * p[..., 1:-3] + c[3] * p[..., 3:-1] + c[4] * p[..., 4:]
    ) / hy


def interior(padded):
    return padded[..., GHOSTS:-GHOSTS, GHOSTS:-GHOSTS]


def _biased(f, h, periodic):
    # f has the differentiated axis first
    n = f.shape[0]
    if periodic:
        return sum(
            _CENTRAL[k] * np.roll(f, 2 - k, axis=0) for k in (0, 1, 3, 4)
        ) / h
    d = np.empty_like(f)
    d[2:-2] = (
        _CENTRAL[0] * f[:-4] + _CENTRAL[1] * f[1:-3] + _CENTRAL[3] * f[3:-1] + _CENTRAL[4] * f[4:]
    )
    d[0] = np.tensordot(_EDGE0, f[0:5], axes=1)
    d[1] = np.tensordot(_EDGE1, f[0:5], axes=1)
    d[n - 1] = -np.tensordot(_EDGE0, f[n - 1 : n - 6 : -1], axes=1)
    d[n - 2] = -np.tensordot(_EDGE1, f[n - 1 : n - 6 : -1], axes=1)
    return d / h


def _check_shape(field, grid):
    field = np.asarray(field, dtype=float)
    if field.shape[-2:] != grid.shape:
        raise ValueError(f"Field shape {field.shape} does not match {grid!r}")
    return field


def ddx(field, grid: Grid, boundary: BoundarySpec = None, parity=None):
    """Fourth-order d/dx.

    With parity given, non-periodic edges are ghost-extended exactly as
    the solver does it; otherwise they use biased one-sided stencils."""
    f = _check_shape(field, grid)
    if boundary is None:
        boundary = BoundarySpec()
    if parity is not None:
        return stencil_x(apply_wall_bc(f, boundary, parity, 1), grid.hx)
    f = np.moveaxis(f, -2, 0)
    return np.moveaxis(_biased(f, grid.hx, boundary.periodic_x), 0, -2)


def ddy(field, grid: Grid, boundary: BoundarySpec = None, parity=None):
    f = _check_shape(field, grid)
    if boundary is None:
        boundary = BoundarySpec()
    if parity is not None:
        return stencil_y(apply_wall_bc(f, boundary, 1, parity), grid.hy)
    f = np.moveaxis(f, -1, 0)
    return np.moveaxis(_biased(f, grid.hy, boundary.periodic_y), 0, -1)


def dump_field_csv(path, field, grid: Grid, name, t, config=None):
    """Write a field as (x, y, value) rows, x-major, with a grid header."""
    field = _check_shape(field, grid)
    comments = [f"field: {name}", f"t: {t:.10g}", f"nx: {grid.nx}", f"ny: {grid.ny}"]
    comments += [
        f"{key}: {getattr(grid, key):.10g}" for key in ("hx", "hy", "x_min", "y_min")
    ]
    rows = (
        (x, y, field[i, j]) for i, x in enumerate(grid.x) for j, y in enumerate(grid.y)
    )
    return write_csv(path, ["x", "y", "value"], rows, config, comments)
