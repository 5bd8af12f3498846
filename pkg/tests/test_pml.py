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

from bgkpml.grid import (
    A_WALL_PARITY_X,
    A_WALL_PARITY_Y,
    BoundarySpec,
    Grid,
    apply_wall_bc,
    stencil_x,
)
from bgkpml.integrate import cfl_dt, integrate, rk4_step
from bgkpml.model import ModelConstants, flux_matrices, source_linear
from bgkpml.pml import (
    DampingProfile,
    PlainOperator,
    PmlOperator,
    PmlParams,
    damping_value,
    make_state,
    rhs_plain,
    rhs_pml,
    split_state,
)
from bgkpml.scenarios import ScenarioConfig, init_gaussian


def random_state(rng, grid, scale=0.05):
    a = rng.normal(size=(6,) + grid.shape) * scale
    a[0] += 1.0
    return a


def test_damping_profile():
    profile = DampingProfile(C=10.0, x0=1.0, L=0.5, beta=2.0)
    x = np.array([0.0, 1.0, 1.25, 1.5, 2.0])
    np.testing.assert_allclose(profile(x), [0.0, 0.0, 2.5, 10.0, 10.0])
    assert damping_value(1.25, DampingProfile(C=1.0, x0=1.0, L=0.5, beta=0.0)) == 1.0


@pytest.mark.parametrize("kwargs", [{"C": 0.0}, {"L": -1.0}, {"beta": -0.5}])
def test_damping_profile_validation(kwargs):
    args = dict(C=1.0, x0=0.0, L=0.4, beta=4.0)
    args.update(kwargs)
    with pytest.raises(ValueError):
        DampingProfile(**args)


def test_state_stacking(rng, grid):
    a = random_state(rng, grid)
    y = make_state(a)
    assert y.shape == (12,) + grid.shape
    a2, omega = split_state(y)
    np.testing.assert_array_equal(a2, a)
    assert not omega.any()


def test_matches_plain_outside_layer(rng, consts):
    phys = Grid(12, 12, 1.0, 1.0)
    grid = phys.extended(4)
    boundary = BoundarySpec(right="pml-backed")
    profile = DampingProfile(C=30.0, x0=phys.x_max, L=4 * phys.hx, beta=4.0)
    params = PmlParams(alpha0=1.0, lambda0=0.3, alpha1=0.7, lambda1=0.2)
    for _ in range(5):
        a = random_state(rng, grid)
        plain = rhs_plain(a, consts, grid, boundary)
        da, _ = split_state(rhs_pml(make_state(a), params, profile, consts, grid, boundary))
        inside = grid.x <= phys.x_max
        np.testing.assert_array_equal(da[:, inside], plain[:, inside])


def test_auxiliary_tendency_without_damping(rng, consts, grid):
    a = random_state(rng, grid)
    boundary = BoundarySpec(right="pml-backed")
    y = make_state(a)
    _, dw = split_state(rhs_pml(y, PmlParams(), np.zeros(grid.nx), consts, grid, boundary))
    # The auxiliaries integrate -da/dx computed with the solver's ghost nodes
    expected = -stencil_x(apply_wall_bc(a, boundary, A_WALL_PARITY_X, A_WALL_PARITY_Y), grid.hx)
    np.testing.assert_allclose(dw, expected, atol=1e-12)


def test_rest_state_is_steady(consts, grid):
    a = np.zeros((6,) + grid.shape)
    a[0] = 1.0
    np.testing.assert_allclose(rhs_plain(a, consts, grid, BoundarySpec()), 0.0, atol=1e-14)


def test_operators(rng, consts):
    grid = Grid(12, 12, 1.0, 1.0)
    boundary = BoundarySpec(right="pml-backed")
    profile = DampingProfile(C=5.0, x0=0.6, L=0.4, beta=4.0)
    op = PmlOperator(PmlParams(alpha0=1.0), profile, consts, grid, boundary)
    y = make_state(random_state(rng, grid))
    assert op(y).shape == y.shape
    np.testing.assert_array_equal(op.coefficients(y), y[:6])
    plain = PlainOperator(consts, grid, boundary)
    np.testing.assert_array_equal(plain.coefficients(y[:6]), y[:6])


def test_periodic_linear_run_conserves_mass(rng, consts):
    grid = Grid.with_spacing(16, 16, 1.0 / 16, 1.0 / 16)
    a = random_state(rng, grid, scale=0.01)
    op = PlainOperator(consts, grid, BoundarySpec.periodic(), linear=True)
    dt = 0.2 * grid.hx
    y, _ = integrate(a, op, 100 * dt, dt)
    mass0 = a[0].sum()
    assert abs(y[0].sum() - mass0) / mass0 < 1e-12


def test_params_warnings():
    assert PmlParams(alpha0=1.0).warnings() == []
    messages = PmlParams(alpha0=-1.0, lambda1=1.0).warnings(0.5)
    assert len(messages) == 2
    assert PmlParams.from_dict({"alpha0": 2, "L": 0.4}).alpha0 == 2.0


def test_linear_momentum_drains_density():
    consts = ModelConstants(RT=4.0)
    grid = Grid(12, 12, 1.0, 1.0)
    a = np.zeros((6,) + grid.shape)
    a[0] = 1.0
    a[1] = grid.x[:, None]
    edges = BoundarySpec("neumann", "neumann", "neumann", "neumann")
    da = rhs_plain(a, consts, grid, edges)
    # Away from the mirrored edges: da1/dt = -sqrt(RT) da2/dx
    np.testing.assert_allclose(da[0, 2:-2], -2.0, atol=1e-12)


def test_plane_wave_travels_with_flux_eigenvalue(consts):
    grid = Grid.with_spacing(32, 8, 1.0 / 32, 1.0 / 8)
    A1 = flux_matrices(consts)[0]
    lam, vectors = np.linalg.eigh(A1)
    k = 2 * np.pi
    phase = np.sin(k * grid.x)[:, None] * np.ones(grid.ny)
    for m in range(6):
        a = np.zeros((6,) + grid.shape)
        a[0] = 1.0
        a += 1e-3 * vectors[:, m, None, None] * phase
        transport = rhs_plain(a, consts, grid, BoundarySpec.periodic(), linear=True)
        transport -= source_linear(a, consts)
        wave = np.cos(k * grid.x)[:, None] * np.ones(grid.ny)
        expected = -lam[m] * k * 1e-3 * vectors[:, m, None, None] * wave
        np.testing.assert_allclose(transport, expected, atol=1e-3 * k * 1e-3)


def small_pulse():
    config = ScenarioConfig({"grid": {"nx": 11, "ny": 11}})
    grid = config.grid()
    return config, grid, init_gaussian(config, grid)


def test_walls_keep_mass():
    config, grid, a = small_pulse()
    consts = config.consts()
    op = PlainOperator(consts, grid, BoundarySpec())
    dt = cfl_dt(grid, consts, 0.9)
    mass0 = grid.integrate(a[0])
    y, _ = integrate(a, op, 100 * dt, dt)
    assert abs(grid.integrate(y[0]) - mass0) / mass0 < 1e-6


def test_wall_keeps_normal_momentum_odd():
    config, grid, a = small_pulse()
    consts = config.consts()
    op = PlainOperator(consts, grid, BoundarySpec())
    y = rk4_step(a, op, cfl_dt(grid, consts, 0.9))
    # Flow develops next to the wall but not through it
    assert np.abs(y[1, 1]).max() > 0
    np.testing.assert_allclose(y[1, 0], 0.0, atol=1e-15)
    np.testing.assert_allclose(y[1, -1], 0.0, atol=1e-15)
    padded = apply_wall_bc(y, BoundarySpec(), A_WALL_PARITY_X, A_WALL_PARITY_Y)
    np.testing.assert_array_equal(padded[1, 0:2, 2:-2], -padded[1, 4:2:-1, 2:-2])
