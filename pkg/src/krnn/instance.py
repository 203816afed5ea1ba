"""Domain model: symmetric TSP instances, closed tours and open Hamiltonian paths.

An instance is either an explicit symmetric weight matrix or a set of 2D
points with a named distance function.  Weights are int64 for benchmark
instances and float64 for generated ones; everything is immutable after
construction and safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    InvalidInstanceError,
    InvalidSizeError,
    InvalidTourError,
)

# Above this size coordinate instances stop precomputing the full O(n^2)
# matrix and evaluate distance rows on the fly.
MATRIX_THRESHOLD = 4096

# Distance tags whose weights are (possibly rounded or rescaled) Euclidean
# distances between plane points; the 1.25 spanning-tree bound applies here.
EUCLIDEAN_TAGS = frozenset({"euclidean", "EUC_2D", "CEIL_2D", "ATT"})

RANDOM_KINDS = (
    "euclidean-uniform",
    "metric-shortest-path-closure",
    "arbitrary-nonnegative",
)

# tag -> vectorised row function (points, i) -> distances from point i to all
_ROW_FUNCS: dict[str, Callable[[np.ndarray, int], np.ndarray]] = {}


def register_distance_tag(tag: str, row_func: Callable[[np.ndarray, int], np.ndarray]) -> None:
    """Register a named distance function for coordinate instances."""
    _ROW_FUNCS[tag] = row_func


def _euclidean_row(points: np.ndarray, i: int) -> np.ndarray:
    d = points - points[i]
    return np.hypot(d[:, 0], d[:, 1])


register_distance_tag("euclidean", _euclidean_row)


def _scalar(x):
    """Return a plain Python int/float for a numpy scalar."""
    if isinstance(x, (np.integer, int)):
        return int(x)
    return float(x)


@dataclass(frozen=True)
class Instance:
    """A symmetric TSP instance with nonnegative weights and zero diagonal."""

    name: str
    n: int
    points: np.ndarray | None = field(default=None, repr=False)
    distance_tag: str | None = None
    _W: np.ndarray | None = field(default=None, repr=False)

    @staticmethod
    def from_matrix(name: str, matrix: np.ndarray | Sequence[Sequence]) -> "Instance":
        """Build an explicit-matrix instance, validating symmetry and sign."""
        W = np.asarray(matrix)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise InvalidInstanceError(f"{name}: weight matrix must be square, got {W.shape}")
        n = W.shape[0]
        if n < 2:
            raise InvalidSizeError(f"{name}: need at least 2 vertices, got {n}")
        if np.issubdtype(W.dtype, np.integer):
            W = W.astype(np.int64)
        else:
            W = W.astype(np.float64)
        if (W < 0).any():
            raise InvalidInstanceError(f"{name}: negative edge weight")
        if (W != W.T).any():
            raise InvalidInstanceError(f"{name}: weight matrix is not symmetric")
        if np.diagonal(W).any():
            raise InvalidInstanceError(f"{name}: nonzero diagonal entry")
        W = W.copy()
        W.setflags(write=False)
        return Instance(name=name, n=n, _W=W)

    @staticmethod
    def from_points(
        name: str,
        points: np.ndarray | Sequence[Sequence[float]],
        distance_tag: str = "euclidean",
        dense: bool | None = None,
    ) -> "Instance":
        """Build a coordinate instance with the given distance function tag."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInstanceError(f"{name}: points must be an (n, 2) array")
        n = pts.shape[0]
        if n < 2:
            raise InvalidSizeError(f"{name}: need at least 2 vertices, got {n}")
        if not np.isfinite(pts).all():
            raise InvalidInstanceError(f"{name}: non-finite coordinate")
        if distance_tag not in _ROW_FUNCS:
            raise InvalidInstanceError(f"{name}: unknown distance tag {distance_tag!r}")
        pts = pts.copy()
        pts.setflags(write=False)
        inst = Instance(name=name, n=n, points=pts, distance_tag=distance_tag)
        if dense or (dense is None and n <= MATRIX_THRESHOLD):
            row = _ROW_FUNCS[distance_tag]
            W = np.stack([row(pts, i) for i in range(n)])
            W.setflags(write=False)
            object.__setattr__(inst, "_W", W)
        return inst

    @property
    def integral(self) -> bool:
        """True when all weights are integers (TSPLIB semantics)."""
        if self._W is not None:
            return bool(np.issubdtype(self._W.dtype, np.integer))
        return bool(np.issubdtype(self.row(0).dtype, np.integer))

    @property
    def euclidean(self) -> bool:
        """True when weights derive from plane-point distances (1.25-bound regime)."""
        return self.distance_tag in EUCLIDEAN_TAGS

    def dist(self, i: int, j: int):
        """Weight of edge (i, j)."""
        if self._W is not None:
            return _scalar(self._W[i, j])
        return _scalar(self.row(i)[j])

    def row(self, i: int) -> np.ndarray:
        """All weights from vertex i, as a read-only length-n array."""
        if self._W is not None:
            return self._W[i]
        return _ROW_FUNCS[self.distance_tag](self.points, i)

    def matrix(self) -> np.ndarray:
        """Full weight matrix (precomputed for small instances, built on demand)."""
        if self._W is not None:
            return self._W
        return np.stack([self.row(i) for i in range(self.n)])

    def __repr__(self) -> str:  # keep large arrays out of test failure output
        kind = self.distance_tag or "explicit"
        return f"Instance({self.name!r}, n={self.n}, {kind})"


def _check_permutation(n: int, order: Sequence[int]) -> np.ndarray:
    arr = np.asarray(order, dtype=np.int64)
    if arr.shape != (n,):
        raise InvalidTourError(f"order has {arr.size} vertices, instance has {n}")
    seen = np.zeros(n, dtype=bool)
    if arr.min(initial=0) < 0 or arr.max(initial=0) >= n:
        raise InvalidTourError("vertex index out of range")
    seen[arr] = True
    if not seen.all():
        raise InvalidTourError("order is not a permutation: duplicate or missing vertex")
    return arr


def tour_cost(instance: Instance, order: Sequence[int]):
    """Closed-cycle cost of visiting `order` and returning to its start."""
    arr = _check_permutation(instance.n, order)
    W = instance._W
    # strict left-to-right accumulation: float costs are then bit-identical
    # with the batch completion engine, which adds edges in visit order
    total = 0
    if W is not None:
        for a, b in zip(arr, np.roll(arr, -1)):
            total += W[a, b]
        return _scalar(total)
    for a, b in zip(arr, np.roll(arr, -1)):
        total += instance.dist(int(a), int(b))
    return total


def path_cost(instance: Instance, order: Sequence[int]):
    """Open-path cost of visiting `order`; no closing edge."""
    arr = _check_permutation(instance.n, order)
    W = instance._W
    total = 0
    if W is not None:
        for a, b in zip(arr[:-1], arr[1:]):
            total += W[a, b]
        return _scalar(total)
    for a, b in zip(arr[:-1], arr[1:]):
        total += instance.dist(int(a), int(b))
    return total


@dataclass(frozen=True)
class Tour:
    """A closed tour: a vertex permutation plus its cycle cost."""

    order: tuple[int, ...]
    cost: int | float

    @staticmethod
    def from_order(instance: Instance, order: Sequence[int]) -> "Tour":
        return Tour(tuple(int(v) for v in order), tour_cost(instance, order))


@dataclass(frozen=True)
class HamPath:
    """An open Hamiltonian path: a vertex permutation plus its path cost."""

    order: tuple[int, ...]
    cost: int | float

    @staticmethod
    def from_order(instance: Instance, order: Sequence[int]) -> "HamPath":
        return HamPath(tuple(int(v) for v in order), path_cost(instance, order))


def is_metric(instance: Instance, tolerance: float = 0.0) -> bool:
    """True iff the triangle inequality holds for every triple, up to `tolerance`."""
    W = instance.matrix()
    for j in range(instance.n):
        if (W > W[:, [j]] + W[[j], :] + tolerance).any():
            return False
    return True


def _closure(W: np.ndarray) -> np.ndarray:
    """All-pairs shortest-path closure (Floyd-Warshall), in place on a copy."""
    W = W.copy()
    for j in range(W.shape[0]):
        np.minimum(W, W[:, [j]] + W[[j], :], out=W)
    return W


def random_instance(kind: str, n: int, seed: int) -> Instance:
    """Deterministic random instance of one of the supported kinds.

    euclidean-uniform: n points uniform in the unit square, float64
    distances.  The two matrix kinds draw integer weights in [1, 10^6]
    so that tie, metric, and optimality comparisons are exact:
    metric-shortest-path-closure replaces each weight by its all-pairs
    shortest-path distance (guaranteeing metricity), while
    arbitrary-nonnegative leaves the raw weights unstructured.
    """
    if n < 2:
        raise InvalidSizeError(f"need at least 2 vertices, got {n}")
    if kind not in RANDOM_KINDS:
        raise InvalidInstanceError(f"unknown instance kind {kind!r}; expected one of {RANDOM_KINDS}")
    rng = np.random.default_rng(seed)
    name = f"{kind}-n{n}-s{seed}"
    if kind == "euclidean-uniform":
        return Instance.from_points(name, rng.random((n, 2)))
    raw = rng.integers(1, 1_000_001, size=(n, n), dtype=np.int64)
    W = np.triu(raw, 1)
    W = W + W.T
    if kind == "metric-shortest-path-closure":
        W = _closure(W)
    np.fill_diagonal(W, 0)
    return Instance.from_matrix(name, W)
