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

"""Frequency-domain stability analysis of the layer system.

The symbol is the 18x18 matrix acting on the Fourier amplitudes of the
coefficients, the x-layer auxiliaries and the y-layer auxiliaries.  Its
characteristic polynomial factors into simple linear terms and two
quartics; the quartics are examined with a continued-fraction expansion
that counts roots in each half-plane without computing them.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .model import NUM_COEFFS, ModelConstants, flux_matrices
from .pml import PmlParams

CF_TOLERANCE = 1e-10
DEFAULT_KMAX = 10.0
DEFAULT_KPOINTS = 41
_I_POWERS = (1.0, 1j, -1.0, -1j)


@dataclass
class SymbolMatrix:
    matrix: np.ndarray
    k1: float
    k2: float
    sigma1: float
    sigma2: float
    params: PmlParams

    def eigenvalues(self):
        return np.linalg.eigvals(self.matrix)

    def hermitian_part(self):
        return (self.matrix + self.matrix.conj().T) / 2

    def characteristic_polynomial(self) -> Polynomial:
        # np.poly returns det(zI - M) highest power first
        return Polynomial(np.poly(self.matrix)[::-1])


def assemble_symbol(
    k1, k2, params: PmlParams, sigma1=0.0, sigma2=0.0, consts: ModelConstants = None
) -> SymbolMatrix:
    if consts is None:
        consts = ModelConstants()
    A1, A2 = flux_matrices(consts)
    eye = np.eye(NUM_COEFFS)
    zero = np.zeros((NUM_COEFFS, NUM_COEFFS))
    p = params
    s1, s2 = sigma1, sigma2
    matrix = -np.block(
        [
            [A1 * (1j * k1 + s1 * p.lambda0) + A2 * (1j * k2 + s2 * p.lambda0t), s1 * A1, s2 * A2],
            [
                (1j * k1 + p.lambda0 * (p.alpha0 + s1) - 1j * p.lambda1 * k2) * eye,
                (1j * p.alpha1 * k2 + p.alpha0 + s1) * eye,
                zero,
            ],
            [
                (1j * k2 + p.lambda0t * (p.alpha0t + s2) - 1j * p.lambda1t * k1) * eye,
                zero,
                (1j * p.alpha1t * k1 + p.alpha0t + s2) * eye,
            ],
        ]
    )
    return SymbolMatrix(matrix, k1, k2, sigma1, sigma2, params)


def mu4_nu4(
    k1, k2, params: PmlParams, sigma1, consts: ModelConstants = None
) -> Tuple[Polynomial, Polynomial]:
    """The two quartic factors of the characteristic polynomial (sigma2 = 0).

    They differ only in the squared wave speed: RT for the first and
    3 RT for the second."""
    if consts is None:
        consts = ModelConstants()
    p = params
    s = sigma1
    z = Polynomial([0, 1])
    w = z + (p.alpha0 + 1j * p.alpha1 * k2)
    m = p.alpha1 * p.lambda0 + p.lambda1
    g = p.lambda0 * z + 1j * k2 * m

    def quartic(c):
        return (
            w**2 * (z**2 + c * (k1**2 + k2**2))
            + 2 * s * w * (z**2 + c * k2**2 - 1j * c * k1 * g)
            + s**2 * (z**2 + c * k2**2 - c * g**2)
        )

    return quartic(consts.RT), quartic(3 * consts.RT)


def factorized_polynomial(
    k1, k2, params: PmlParams, sigma1, consts: ModelConstants = None
) -> Polynomial:
    p = params
    z = Polynomial([0, 1])
    mu4, nu4 = mu4_nu4(k1, k2, params, sigma1, consts)
    theta = z + (p.alpha0t + 1j * k1 * p.alpha1t)
    omega = z + (p.alpha0 + sigma1 + 1j * k2 * p.alpha1)
    return z**2 * theta**6 * omega**2 * mu4 * nu4


@dataclass
class CfExpansion:
    degree: int
    c: List[float] = field(default_factory=list)
    d: List[float] = field(default_factory=list)
    undefined: bool = False

    @property
    def n_r(self):
        return len(self.c)

    @property
    def positive(self):
        return sum(1 for c in self.c if c > 0)

    @property
    def negative(self):
        return sum(1 for c in self.c if c < 0)

    @property
    def on_axis(self) -> Optional[int]:
        if self.undefined:
            return None
        return self.degree - self.n_r

    def as_dict(self):
        return {
            "degree": self.degree,
            "c": list(self.c),
            "d": list(self.d),
            "undefined": self.undefined,
            "right_half_plane": None if self.undefined else self.positive,
            "left_half_plane": None if self.undefined else self.negative,
            "imaginary_axis": self.on_axis,
        }


def _is_zero(poly: Polynomial, tol):
    return poly.degree() == 0 and abs(poly.coef[0]) <= tol


def _as_polynomial(q) -> Polynomial:
    # Polynomial(p) of a Polynomial wraps it as an object series
    if isinstance(q, Polynomial):
        return q.copy()
    return Polynomial(np.asarray(q, dtype=complex))


def split_on_imaginary_axis(q) -> Tuple[Polynomial, Polynomial]:
    """Real polynomials Q0, Q1 with q(iD) = i^n (Q0(D) + i Q1(D)) for monic q."""
    coef = np.asarray(_as_polynomial(q).coef, dtype=complex)
    scale = np.max(np.abs(coef))
    coef = Polynomial(coef).trim(CF_TOLERANCE * scale).coef
    n = len(coef) - 1
    if n < 1:
        raise ValueError("Polynomial must have degree at least 1")
    coef = coef / coef[-1]
    e = np.array([a * _I_POWERS[(j - n) % 4] for j, a in enumerate(coef)])
    return Polynomial(e.real), Polynomial(e.imag)


def frank_cf(q) -> CfExpansion:
    """Continued-fraction expansion of Q1/Q0.

    Each step must produce a quotient c D + d.  Positive c count roots in
    the right half-plane, negative c roots in the left half-plane, and the
    remaining degree - n_r roots lie on the imaginary axis.  A step whose
    quotient is not linear leaves the expansion undefined."""
    A, B = split_on_imaginary_axis(q)
    ret = CfExpansion(degree=A.degree())
    B = B.trim(CF_TOLERANCE * np.max(np.abs(A.coef)))
    while not _is_zero(B, CF_TOLERANCE * np.max(np.abs(A.coef))):
        if A.degree() - B.degree() != 1:
            ret.undefined = True
            break
        quo, rem = divmod(A, B)
        ret.c.append(float(quo.coef[1]))
        ret.d.append(float(quo.coef[0]))
        tol = CF_TOLERANCE * np.max(np.abs(A.coef))
        A, B = B, (-rem).trim(tol)
    return ret


def root_counts(q) -> Tuple[int, int, int]:
    """(right, left, on-axis) root counts from the companion matrix."""
    roots = _as_polynomial(q).roots()
    scale = max(1.0, np.max(np.abs(roots))) if len(roots) else 1.0
    tol = 1e-9 * scale
    right = int(np.sum(roots.real > tol))
    left = int(np.sum(roots.real < -tol))
    return right, left, len(roots) - right - left


def c1_closed_form(params: PmlParams, sigma1):
    return -1.0 / (2 * (params.alpha0 + sigma1))


def _mixed(params: PmlParams):
    return 2 * params.alpha1 * params.lambda0 + params.lambda1


def small_sigma_denominator(k1, k2, params: PmlParams, sigma1):
    a0 = params.alpha0
    return a0**4 + a0 * (k1**2 + 4 * a0**2 - k1 * k2 * _mixed(params)) * sigma1


def c2_closed_form(k1, k2, params: PmlParams, sigma1, small_sigma=False):
    """Second continued-fraction coefficient of the first quartic.

    Valid for RT = 1.  With small_sigma the denominator is truncated to
    first order in sigma1."""
    a0 = params.alpha0
    l0 = params.lambda0
    X = a0 + sigma1
    if X == 0:
        raise ValueError("c2 is undefined for alpha0 = -sigma1")
    M = _mixed(params)
    s = sigma1
    if small_sigma:
        den = small_sigma_denominator(k1, k2, params, sigma1)
    else:
        den = (
            a0**4
            + a0 * (k1**2 + 4 * a0**2 - k1 * k2 * M) * s
            - (a0**2 * (-6 + l0**2) + k1**2 * (-1 + l0**2) + k1 * k2 * M) * s**2
            - 2 * a0 * (-2 + l0**2) * s**3
            - (-1 + l0**2) * s**4
        )
    if den == 0:
        raise ValueError("c2 is undefined: vanishing denominator")
    return -2 * X**3 / den


def k_axis(kmax=DEFAULT_KMAX, n=DEFAULT_KPOINTS):
    return np.linspace(-kmax, kmax, n)


def _k_pairs(k1s, k2s):
    for k1 in np.atleast_1d(k1s):
        for k2 in np.atleast_1d(k2s):
            yield float(k1), float(k2)


def _matrix_abs(A):
    vals, vecs = np.linalg.eigh(A)
    return (vecs * np.abs(vals)) @ vecs.T


def energy_decay_margin(params: PmlParams, sigma1, sigma2, consts: ModelConstants = None):
    """Worst block-wise damping bound of the symbol's Hermitian part.

    Transport terms are skew-Hermitian and drop out, so the bound is the
    largest of the damping carried by each diagonal block and by the
    coefficient-to-auxiliary coupling.  It does not depend on the
    wavenumbers or on alpha1, alpha1t, lambda1 and lambda1t.  A
    nonpositive value means energy cannot grow."""
    if consts is None:
        consts = ModelConstants()
    p = params
    A1, A2 = flux_matrices(consts)
    a_block = -(sigma1 * p.lambda0 * _matrix_abs(A1) + sigma2 * p.lambda0t * _matrix_abs(A2))
    bounds = [
        np.max(np.linalg.eigvalsh(a_block)),
        -(p.alpha0 + sigma1),
        -(p.alpha0t + sigma2),
        -p.lambda0 * (p.alpha0 + sigma1),
        -p.lambda0t * (p.alpha0t + sigma2),
    ]
    return float(max(bounds))


def raw_energy_margin(
    params: PmlParams, sigma1, sigma2, k1s, k2s, consts: ModelConstants = None
):
    """Largest eigenvalue of (P + P*)/2 over the wavenumber grid."""
    return max(
        float(
            np.max(
                np.linalg.eigvalsh(
                    assemble_symbol(k1, k2, params, sigma1, sigma2, consts).hermitian_part()
                )
            )
        )
        for k1, k2 in _k_pairs(k1s, k2s)
    )


def petrovskii_margin(
    params: PmlParams, sigma1, sigma2, k1s, k2s, consts: ModelConstants = None
):
    """Largest real part of the symbol's eigenvalues over the grid."""
    return max(
        float(np.max(assemble_symbol(k1, k2, params, sigma1, sigma2, consts).eigenvalues().real))
        for k1, k2 in _k_pairs(k1s, k2s)
    )


def stability_conditions(params: PmlParams, sigma1, sigma2) -> Dict[str, bool]:
    """Sign conditions on the layer parameters.

    lambda0 = 0 and lambda0t = 0 are accepted: the coupling terms then
    vanish and the damping blocks alone keep the energy bound at zero."""
    p = params
    return {
        "lambda0 >= 0": p.lambda0 >= 0,
        "lambda0t >= 0": p.lambda0t >= 0,
        "alpha0 > -sigma1": p.alpha0 > -sigma1,
        "alpha0t > -sigma2": p.alpha0t > -sigma2,
    }


@dataclass
class RegionScan:
    k1: np.ndarray
    k2: np.ndarray
    f: np.ndarray
    boundary_k1: np.ndarray
    boundary_k2: np.ndarray

    @property
    def sign(self):
        return np.sign(np.nan_to_num(self.f)).astype(int)

    @property
    def nonempty(self):
        return bool(np.any(self.f < 0))

    def rows(self):
        for i, k1 in enumerate(self.k1):
            for j, k2 in enumerate(self.k2):
                yield k1, k2, self.f[i, j], self.sign[i, j]


def instability_region_scan(params: PmlParams, sigma1, k1s, k2s) -> RegionScan:
    """Sign map of the small-sigma denominator of c2.

    Where it turns negative c2 becomes positive and the first quartic
    gains a right half-plane root.  The zero set for k1 != 0 is the
    hyperbola returned as (boundary_k1, boundary_k2)."""
    a0 = params.alpha0
    if a0 == 0:
        raise ValueError("Instability region scan requires alpha0 != 0")
    k1s = np.asarray(k1s, dtype=float)
    k2s = np.asarray(k2s, dtype=float)
    K1, K2 = np.meshgrid(k1s, k2s, indexing="ij")
    f = small_sigma_denominator(K1, K2, params, sigma1)
    M = _mixed(params)
    bk1 = k1s[k1s != 0]
    if M * sigma1 != 0:
        bk2 = (a0**3 + (4 * a0**2 + bk1**2) * sigma1) / (M * bk1 * sigma1)
    else:
        bk1 = np.array([])
        bk2 = np.array([])
    return RegionScan(k1s, k2s, f, bk1, bk2)


def sample_wavenumbers(kmax=DEFAULT_KMAX, count=5):
    """A fixed set of off-axis wavenumbers for the continued-fraction report."""
    ks = np.linspace(-kmax, kmax, count)
    return [(float(k), float(0.5 * k + 0.25 * kmax)) for k in ks]


@dataclass
class StabilityReport:
    params: PmlParams
    sigma1: float
    sigma2: float
    energy_margin: float
    raw_energy_margin: float
    petrovskii_margin: float
    conditions: Dict[str, bool]
    region: RegionScan
    margins: List[Tuple[float, float, float, float]]
    samples: List[dict]

    def summary(self, tol=1e-10, eig_tol=1e-6):
        # Repeated eigenvalues of the symbol are defective at most wavenumbers,
        # so their computed real parts carry errors near sqrt(machine epsilon).
        return {
            "params": self.params.as_dict(),
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "energy_margin": self.energy_margin,
            "raw_energy_margin": self.raw_energy_margin,
            "energy_decay": self.energy_margin <= tol,
            "petrovskii_margin": self.petrovskii_margin,
            "petrovskii": self.petrovskii_margin <= eig_tol,
            "conditions": self.conditions,
            "violated": [k for k, v in self.conditions.items() if not v],
            "instability_region": {
                "nonempty": self.region.nonempty,
                "negative_points": int(np.sum(self.region.f < 0)),
                "points": int(self.region.f.size),
            },
            "continued_fraction": self.samples,
        }


def _sample_report(k1, k2, params, sigma1, consts):
    mu4, nu4 = mu4_nu4(k1, k2, params, sigma1, consts)
    ret = {"k1": k1, "k2": k2}
    for name, poly in (("mu4", mu4), ("nu4", nu4)):
        cf = frank_cf(poly)
        info = cf.as_dict()
        info["c1"] = cf.c[0] if cf.n_r > 0 else None
        info["c2"] = cf.c[1] if cf.n_r > 1 else None
        ret[name] = info
    ret["c1_closed_form"] = c1_closed_form(params, sigma1) if params.alpha0 + sigma1 != 0 else None
    if consts.RT == 1.0:
        try:
            ret["c2_closed_form"] = c2_closed_form(k1, k2, params, sigma1)
        except ValueError:
            ret["c2_closed_form"] = None
    return ret


def analyze(
    params: PmlParams,
    sigma1=0.0,
    sigma2=0.0,
    consts: ModelConstants = None,
    kmax=DEFAULT_KMAX,
    kpoints=DEFAULT_KPOINTS,
    samples=5,
) -> StabilityReport:
    if consts is None:
        consts = ModelConstants()
    ks = k_axis(kmax, kpoints)
    margins = []
    for k1, k2 in _k_pairs(ks, ks):
        symbol = assemble_symbol(k1, k2, params, sigma1, sigma2, consts)
        herm = float(np.max(np.linalg.eigvalsh(symbol.hermitian_part())))
        re = float(np.max(symbol.eigenvalues().real))
        margins.append((k1, k2, herm, re))
    if params.alpha0 != 0:
        region = instability_region_scan(params, sigma1, ks, ks)
    else:
        empty = np.full((len(ks), len(ks)), np.nan)
        region = RegionScan(ks, ks, empty, np.array([]), np.array([]))
    return StabilityReport(
        params=params,
        sigma1=sigma1,
        sigma2=sigma2,
        energy_margin=energy_decay_margin(params, sigma1, sigma2, consts=consts),
        raw_energy_margin=max(m[2] for m in margins),
        petrovskii_margin=max(m[3] for m in margins),
        conditions=stability_conditions(params, sigma1, sigma2),
        region=region,
        margins=margins,
        samples=[
            _sample_report(k1, k2, params, sigma1, consts)
            for k1, k2 in sample_wavenumbers(kmax, samples)
        ],
    )
