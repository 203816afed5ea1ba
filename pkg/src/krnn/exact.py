"""Ground-truth oracles: exhaustive search and Held-Karp dynamic
programming, for closed tours and open Hamiltonian paths.

Size caps are hard limits, not tunables: brute force enumerates
(n-1)!/2 tours (n <= 11) or n!/2 paths (n <= 10); Held-Karp holds
n * 2^n DP states in memory (n <= 21, with the open-path variant
reducing to a tour through a zero-weight virtual depot).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeRefusedError
from .instance import HamPath, Instance, Tour, path_cost, tour_cost

BRUTE_TOUR_MAX_N = 11
BRUTE_PATH_MAX_N = 10
HELD_KARP_MAX_N = 21

METHOD_BRUTE = "brute-force"
METHOD_HELD_KARP = "held-karp"

_CHUNK = 40320  # permutation batch size for the vectorized enumerators


@dataclass(frozen=True)
class ExactResult:
    """An exact optimum with its witness solution."""

    optimum_cost: int | float
    witness: Tour | HamPath
    method: str
    states_explored: int


def _canon_tour(order) -> list[int]:
    """Rotate to start at 0 and pick the direction with the smaller
    second vertex.  Float costs are evaluated in this orientation, so
    equal solutions from different oracles get bit-identical costs."""
    order = [int(v) for v in order]
    i = order.index(0)
    order = order[i:] + order[:i]
    if len(order) > 2 and order[1] > order[-1]:
        order = [0] + order[:0:-1]
    return order


def _canon_path(order) -> list[int]:
    """Orient an open path so its first endpoint has the lower index."""
    order = [int(v) for v in order]
    if order[0] > order[-1]:
        order.reverse()
    return order


def _perm_chunks(pool: list[int], width: int):
    """Permutations of `pool` taken `width` at a time, as lexicographically
    ordered int64 array chunks."""
    it = itertools.permutations(pool, width)
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _chunk_costs(W: np.ndarray, orders: np.ndarray, closed: bool) -> np.ndarray:
    # edge-by-edge accumulation in visit order: bit-identical with the
    # core cost functions on floats
    cost = np.zeros(len(orders), dtype=W.dtype)
    for i in range(orders.shape[1] - 1):
        cost += W[orders[:, i], orders[:, i + 1]]
    if closed:
        cost += W[orders[:, -1], orders[:, 0]]
    return cost


def brute_force_tour(instance: Instance) -> ExactResult:
    """Exhaustive closed-tour minimum.  Fixes vertex 0 first and keeps
    one direction of each cycle, so (n-1)!/2 candidates are scored."""
    n = instance.n
    if n > BRUTE_TOUR_MAX_N:
        raise SizeRefusedError(
            f"brute_force_tour handles n <= {BRUTE_TOUR_MAX_N}, got n={n}"
        )
    if n == 2:
        return ExactResult(tour_cost(instance, (0, 1)), Tour.from_order(instance, (0, 1)),
                           METHOD_BRUTE, 1)
    W = instance.matrix()
    best_cost = None
    best_order = None
    states = 0
    for perms in _perm_chunks(list(range(1, n)), n - 1):
        keep = perms[:, 0] < perms[:, -1]  # canonical direction
        perms = perms[keep]
        if len(perms) == 0:
            continue
        orders = np.concatenate(
            [np.zeros((len(perms), 1), dtype=np.int64), perms], axis=1
        )
        costs = _chunk_costs(W, orders, closed=True)
        states += len(orders)
        i = int(np.argmin(costs))  # first minimum: lexicographically earliest
        if best_cost is None or costs[i] < best_cost:
            best_cost = costs[i]
            best_order = orders[i]
    witness = Tour.from_order(instance, best_order)
    return ExactResult(witness.cost, witness, METHOD_BRUTE, states)


def _brute_force_path(instance: Instance) -> ExactResult:
    n = instance.n
    if n > BRUTE_PATH_MAX_N:
        raise SizeRefusedError(
            f"brute-force shortest_ham_path handles n <= {BRUTE_PATH_MAX_N}, got n={n}"
        )
    W = instance.matrix()
    best_cost = None
    best_order = None
    states = 0
    for orders in _perm_chunks(list(range(n)), n):
        keep = orders[:, 0] < orders[:, -1]  # one direction of each path
        orders = orders[keep]
        if len(orders) == 0:
            continue
        costs = _chunk_costs(W, orders, closed=False)
        states += len(orders)
        i = int(np.argmin(costs))
        if best_cost is None or costs[i] < best_cost:
            best_cost = costs[i]
            best_order = orders[i]
    witness = HamPath.from_order(instance, best_order)
    return ExactResult(witness.cost, witness, METHOD_BRUTE, states)


def _held_karp_matrix(W: np.ndarray) -> tuple[np.ndarray, int]:
    """Held-Karp DP anchored at vertex 0 of `W`; returns the optimal
    cycle order (starting at 0) and the DP state count.

    dp[mask, j] = cost of the cheapest path 0 -> ... -> j visiting
    exactly the vertices of `mask` (bit i <-> vertex i+1).  Masks are
    processed in popcount layers; within a layer every end vertex j is
    relaxed at once over all masks containing j.
    """
    n = W.shape[0]
    m = n - 1
    if np.issubdtype(W.dtype, np.integer):
        inf = np.iinfo(W.dtype).max // 4
    else:
        inf = np.inf
    W1 = W[1:, 1:]  # weights between non-anchor vertices
    full = (1 << m) - 1

    masks = np.arange(1 << m, dtype=np.int64)
    pop = np.zeros(1 << m, dtype=np.int8)
    for b in range(m):
        pop += ((masks >> b) & 1).astype(np.int8)
    by_pop = [masks[pop == s] for s in range(m + 1)]

    dp = np.full(((1 << m), m), inf, dtype=W.dtype)
    parent = np.full(((1 << m), m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = W[0, j + 1]

    for s in range(2, m + 1):
        layer = by_pop[s]
        for j in range(m):
            bit = 1 << j
            mj = layer[(layer & bit) != 0]
            if len(mj) == 0:
                continue
            prev = dp[mj ^ bit]  # (len(mj), m); entries for i outside the mask are inf
            cand = prev + W1[:, j]
            best = np.argmin(cand, axis=1)  # ties -> lowest predecessor index
            dp[mj, j] = cand[np.arange(len(mj)), best]
            parent[mj, j] = best

    closing = dp[full] + W[1:, 0]
    end = int(np.argmin(closing))
    seq = [end]
    mask = full
    while pop[mask] > 1:
        p = int(parent[mask, seq[-1]])
        mask ^= 1 << seq[-1]
        seq.append(p)
    order = np.array([0] + [v + 1 for v in reversed(seq)], dtype=np.int64)
    states = m * (1 << (m - 1)) + m
    return order, states


def held_karp_tour(instance: Instance) -> ExactResult:
    """Exact closed-tour optimum via subset DP; n <= 21."""
    n = instance.n
    if n > HELD_KARP_MAX_N:
        raise SizeRefusedError(
            f"held_karp_tour handles n <= {HELD_KARP_MAX_N}, got n={n}"
        )
    if n == 2:
        return ExactResult(tour_cost(instance, (0, 1)), Tour.from_order(instance, (0, 1)),
                           METHOD_HELD_KARP, 1)
    order, states = _held_karp_matrix(instance.matrix())
    witness = Tour.from_order(instance, _canon_tour(order))
    return ExactResult(witness.cost, witness, METHOD_HELD_KARP, states)


def _held_karp_path(instance: Instance) -> ExactResult:
    n = instance.n
    if n > HELD_KARP_MAX_N:
        raise SizeRefusedError(
            f"held-karp shortest_ham_path handles n <= {HELD_KARP_MAX_N}, got n={n}"
        )
    # a zero-weight depot connected to every vertex turns the shortest
    # Hamiltonian path into a tour through the depot
    W = instance.matrix()
    Wd = np.zeros((n + 1, n + 1), dtype=W.dtype)
    Wd[1:, 1:] = W
    order, states = _held_karp_matrix(Wd)
    path = _canon_path(int(v) - 1 for v in order[1:])
    witness = HamPath.from_order(instance, path)
    return ExactResult(witness.cost, witness, METHOD_HELD_KARP, states)


def shortest_ham_path(instance: Instance, method: str = "auto") -> ExactResult:
    """Exact minimum open Hamiltonian path.

    method: "brute-force" (n <= 10), "held-karp" (n <= 21), or "auto"
    (brute force when it fits, held-karp otherwise).
    """
    if method == METHOD_BRUTE:
        return _brute_force_path(instance)
    if method == METHOD_HELD_KARP:
        return _held_karp_path(instance)
    if method == "auto":
        if instance.n <= BRUTE_PATH_MAX_N:
            return _brute_force_path(instance)
        return _held_karp_path(instance)
    raise ValueError(f"unknown method {method!r}")
