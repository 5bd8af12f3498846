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

"""ANOVA decomposition of a black-box function on a parameter box.

The box is mapped affinely onto the unit hypercube and every integral is
taken with a tensor Gauss-Legendre rule whose weights sum to one per
coordinate.  The function is evaluated once per tensor node; all subset
integrals are partial contractions of that single table.
"""

import itertools
import json
import os
from threading import Lock
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .task import Task
from .util import to_json, update_file

Subset = Tuple[int, ...]
NodeIndex = Tuple[int, ...]


class UndefinedSensitivityError(ValueError):
    pass


class PoisonedNodesError(Exception):
    def __init__(self, nodes):
        # nodes: list of (index, point, reason)
        self.nodes = sorted(nodes)
        lines = [
            f"  node {index}: {', '.join(f'{v:.6g}' for v in point)}: {reason}"
            for index, point, reason in self.nodes
        ]
        super().__init__(f"{len(self.nodes)} poisoned node(s):\n" + "\n".join(lines))


class ParameterBox:
    def __init__(self, names: Sequence[str], lows, highs):
        self.names = list(names)
        self.lows = np.asarray(lows, dtype=float)
        self.highs = np.asarray(highs, dtype=float)
        if not (len(self.names) == len(self.lows) == len(self.highs)):
            raise ValueError("Box names and bounds differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("Box parameter names must be distinct")
        for name, lo, hi in zip(self.names, self.lows, self.highs):
            if not lo < hi:
                raise ValueError(f"Empty interval for {name}: [{lo}, {hi}]")

    @classmethod
    def from_dict(cls, intervals: Dict[str, Sequence[float]]):
        names = list(intervals)
        return cls(names, [intervals[n][0] for n in names], [intervals[n][1] for n in names])

    @classmethod
    def unit(cls, p, names=None):
        if names is None:
            names = [f"x{i + 1}" for i in range(p)]
        return cls(names, np.zeros(p), np.ones(p))

    @property
    def p(self):
        return len(self.names)

    def to_unit(self, x):
        return (np.asarray(x, dtype=float) - self.lows) / (self.highs - self.lows)

    def from_unit(self, u):
        return self.lows + np.asarray(u, dtype=float) * (self.highs - self.lows)

    def as_dict(self):
        return {n: [float(lo), float(hi)] for n, lo, hi in zip(self.names, self.lows, self.highs)}


class CubatureRule:
    """Tensor Gauss-Legendre rule (G_n)^p on the unit hypercube."""

    def __init__(self, n, p):
        if n < 1 or p < 1:
            raise ValueError("Cubature needs n >= 1 nodes in p >= 1 dimensions")
        self.n = int(n)
        self.p = int(p)
        t, w = np.polynomial.legendre.leggauss(self.n)
        self.nodes = (t + 1) / 2
        self.weights = w / 2

    @property
    def label(self):
        return f"(G_{self.n})^{self.p}"

    @property
    def size(self):
        return self.n**self.p

    def indices(self) -> Iterable[NodeIndex]:
        return itertools.product(range(self.n), repeat=self.p)

    def point(self, index: NodeIndex):
        return self.nodes[list(index)]


def _key(index: NodeIndex):
    return ",".join(str(i) for i in index)


class EvaluationCache:
    """Write-once map from node index to function value.

    With a path, the cache is reloaded on creation and saved after every
    new value, so an interrupted study can resume.  meta identifies the
    study; a saved cache with different meta is ignored."""

    def __init__(self, path=None, meta=None):
        self._values: Dict[NodeIndex, float] = {}
        self._lock = Lock()
        self.path = path
        self.meta = meta
        self.evaluations = 0
        if path is not None and os.path.exists(path):
            with open(path) as fh:
                saved = json.load(fh)
            if saved.get("meta") == json.loads(to_json(meta)):
                for key, value in saved["values"].items():
                    self._values[tuple(int(i) for i in key.split(","))] = float(value)

    def __contains__(self, index):
        return tuple(index) in self._values

    def __len__(self):
        return len(self._values)

    def get(self, index):
        return self._values[tuple(index)]

    def put(self, index, value):
        index = tuple(index)
        with self._lock:
            if index in self._values:
                if self._values[index] != value:
                    raise ValueError(f"Node {index} already holds a different value")
                return
            self._values[index] = float(value)
            self.evaluations += 1
            if self.path is not None:
                self._save()

    def _save(self):
        update_file(
            self.path,
            to_json(
                {
                    "meta": self.meta,
                    "values": {_key(k): v for k, v in sorted(self._values.items())},
                }
            ),
        )


class _Node:
    def __init__(self, index, point, names):
        self.index = index
        self.point = point
        self._names = names

    def __str__(self):
        values = ", ".join(f"{n}={v:.6g}" for n, v in zip(self._names, self.point))
        return f"node {self.index} ({values})"


class _NodeEvaluationTask(Task):
    def __init__(self, f, cache, thread_count, nodes, verbose):
        Task.__init__(self, thread_count, nodes, verbose)
        self._f = f
        self._cache = cache
        self._lock = Lock()
        self.poisoned = []

    def _execute(self, node):
        try:
            value = float(self._f(node.point))
            if not np.isfinite(value):
                raise ValueError("non-finite value")
        except Exception as e:
            with self._lock:
                self.poisoned.append((node.index, tuple(node.point), str(e)))
            raise
        self._cache.put(node.index, value)
        return True


def evaluate_on_grid(
    f,
    box: ParameterBox,
    rule: CubatureRule,
    cache: EvaluationCache = None,
    workers=1,
    verbose=False,
) -> np.ndarray:
    """Table of f at every tensor node, shape (n,) * p.

    f receives a point in box coordinates.  Only nodes missing from the
    cache are evaluated.  Raises PoisonedNodesError listing every node
    whose evaluation failed."""
    if box.p != rule.p:
        raise ValueError("Box and cubature rule dimensions differ")
    if cache is None:
        cache = EvaluationCache()
    nodes = [
        _Node(index, box.from_unit(rule.point(index)), box.names)
        for index in rule.indices()
        if index not in cache
    ]
    if nodes:
        task = _NodeEvaluationTask(f, cache, workers, nodes, verbose)
        if not task.run():
            raise PoisonedNodesError(task.poisoned)
    table = np.empty((rule.n,) * rule.p)
    for index in rule.indices():
        table[index] = cache.get(index)
    return table


def _integrate_out(table, weights, axes):
    # Remove the highest axes first so lower indices stay valid
    for axis in sorted(axes, reverse=True):
        table = np.tensordot(table, weights, axes=([axis], [0]))
    return table


def _expand(values, subset: Subset, target: Subset):
    """Broadcastable view of a term on subset against the axes of target."""
    shape = [values.shape[subset.index(a)] if a in subset else 1 for a in target]
    return values.reshape(shape)


def _subset_label(names, subset):
    return ",".join(names[i] for i in subset)


class AnovaDecomposition:
    def __init__(self, box: ParameterBox, rule: CubatureRule, table, order=None):
        p = rule.p
        self.box = box
        self.rule = rule
        self.table = np.asarray(table, dtype=float)
        self.order = p if order is None else int(order)
        if not 1 <= self.order <= p:
            raise ValueError(f"Order must be between 1 and {p}")
        w = rule.weights
        self.g0 = float(_integrate_out(self.table, w, range(p)))
        self.terms: Dict[Subset, np.ndarray] = {}
        for size in range(1, self.order + 1):
            for T in itertools.combinations(range(p), size):
                complement = [a for a in range(p) if a not in T]
                g = _integrate_out(self.table, w, complement) - self.g0
                for W, gW in self.terms.items():
                    if len(W) < size and set(W) <= set(T):
                        g = g - _expand(gW, W, T)
                self.terms[T] = g
        self.variances = {T: self._integrate_square(T, g) for T, g in self.terms.items()}
        self.V = float(_integrate_out((self.table - self.g0) ** 2, w, range(p)))
        scale = float(np.max(np.abs(self.table))) if self.table.size else 0.0
        self._variance_floor = (1e-13 * max(scale, 1e-300)) ** 2

    def _integrate_square(self, T, g):
        return float(_integrate_out(g * g, self.rule.weights, range(len(T))))

    def expand(self, T: Subset):
        """Term T broadcast over the full node tensor."""
        full = tuple(range(self.rule.p))
        return np.broadcast_to(_expand(self.terms[T], T, full), (self.rule.n,) * self.rule.p)

    def mean(self, T: Subset):
        return float(_integrate_out(self.terms[T], self.rule.weights, range(len(T))))

    def inner_product(self, S: Subset, T: Subset):
        return float(
            _integrate_out(self.expand(S) * self.expand(T), self.rule.weights, range(self.rule.p))
        )

    def check_variance(self):
        if not self.V > self._variance_floor:
            raise UndefinedSensitivityError("Total variance is zero; sensitivities are undefined")

    def label(self, T: Subset):
        return _subset_label(self.box.names, T)

    def as_dict(self):
        info = {
            "box": self.box.as_dict(),
            "rule": {"label": self.rule.label, "n": self.rule.n, "p": self.rule.p},
            "order": self.order,
            "g0": self.g0,
            "V": self.V,
            "variances": {self.label(T): v for T, v in self.variances.items()},
        }
        try:
            self.check_variance()
        except UndefinedSensitivityError:
            return info
        info["sensitivities"] = {self.label(T): v / self.V for T, v in self.variances.items()}
        info["proportions"] = {
            str(r): captured_proportion(self, r) for r in range(1, self.order + 1)
        }
        info["superposition_dimension"] = {}
        for q in (0.9, 0.99):
            try:
                info["superposition_dimension"][str(q)] = superposition_dimension(self, q)
            except ValueError:
                info["superposition_dimension"][str(q)] = None
        if self.order == self.rule.p:
            info["tsi"] = tsi(self)
        return info


def anova_terms(table, rule: CubatureRule, order=None, box: ParameterBox = None):
    if box is None:
        box = ParameterBox.unit(rule.p)
    table = np.asarray(table, dtype=float)
    if table.shape != (rule.n,) * rule.p:
        raise ValueError("Evaluation table does not match the cubature rule")
    return AnovaDecomposition(box, rule, table, order)


def variances(dec: AnovaDecomposition):
    return dict(dec.variances), dec.V


def tsi(dec: AnovaDecomposition) -> Dict[str, float]:
    """Total sensitivity index of every coordinate."""
    dec.check_variance()
    if dec.order != dec.rule.p:
        raise ValueError("Total sensitivities need the full-order decomposition")
    return {
        name: sum(v for T, v in dec.variances.items() if i in T) / dec.V
        for i, name in enumerate(dec.box.names)
    }


def tsi_breakdown(dec: AnovaDecomposition) -> Dict[str, Dict[str, float]]:
    dec.check_variance()
    return {
        name: {dec.label(T): v / dec.V for T, v in dec.variances.items() if i in T}
        for i, name in enumerate(dec.box.names)
    }


def captured_proportion(dec: AnovaDecomposition, r):
    dec.check_variance()
    return sum(v for T, v in dec.variances.items() if len(T) <= r) / dec.V


def superposition_dimension(dec: AnovaDecomposition, q) -> int:
    dec.check_variance()
    for r in range(1, dec.order + 1):
        if captured_proportion(dec, r) >= q - 1e-12:
            return r
    raise ValueError(f"No order up to {dec.order} captures a proportion {q}")


def _interpolate(nodes, values, coords):
    for u in coords:
        values = BarycentricInterpolator(nodes, values, axis=0)(u)
    return float(values)


def truncated_eval(dec: AnovaDecomposition, point, r: Optional[int] = None):
    """Truncated expansion at a point in box coordinates.

    Returns the value and the proportion of the variance the kept terms
    carry (None when the variance is zero)."""
    if r is None:
        r = dec.order
    if r > dec.order:
        raise ValueError(f"Decomposition only holds terms up to order {dec.order}")
    u = dec.box.to_unit(point)
    if np.any(u < -1e-12) or np.any(u > 1 + 1e-12):
        raise ValueError(f"Point {point} lies outside the parameter box")
    value = dec.g0
    for T, g in dec.terms.items():
        if len(T) <= r:
            value += _interpolate(dec.rule.nodes, g, [u[a] for a in T])
    try:
        proportion = captured_proportion(dec, r)
    except UndefinedSensitivityError:
        proportion = None
    return value, proportion
