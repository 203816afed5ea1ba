"""The k-RNN heuristic family.

Enumerate every ordered k-vertex prefix, complete each one greedily by
repeatedly appending the nearest unvisited neighbour of the current
endpoint, and keep the best closed tour or open path.  k=1 is
best-of-all-starts nearest neighbour; k=2 starts from every directed
edge.

Completions are independent, so the enumeration runs as a data-parallel
map over prefix chunks followed by a deterministic min-reduction: equal
costs are resolved by the lexicographically smallest completed vertex
sequence, which makes results bit-identical for any worker count or
chunk size.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceededError,
    InvalidKError,
    InvalidPrefixError,
    PrefixLimitError,
)
from .instance import HamPath, Instance, Tour

MODE_TOUR = "closed-tour"
MODE_PATH = "open-path"

DEFAULT_PREFIX_LIMIT = 10_000_000


@dataclass(frozen=True)
class KrnnConfig:
    """Settings for one k-RNN run."""

    k: int
    mode: str = MODE_TOUR
    tie_break: str = "lowest-index"
    workers: int = 1
    prefix_limit: int = DEFAULT_PREFIX_LIMIT
    keep_costs: bool = False


@dataclass(frozen=True)
class KrnnResult:
    """Winner of a k-RNN enumeration."""

    best: Tour | HamPath
    best_prefix: tuple[int, ...]
    candidates_evaluated: int
    per_prefix_costs: tuple | None = None


def _check_prefix(n: int, prefix: Sequence[int]) -> list[int]:
    pfx = [int(v) for v in prefix]
    if not pfx:
        raise InvalidPrefixError("prefix must contain at least one vertex")
    if len(set(pfx)) != len(pfx):
        raise InvalidPrefixError(f"duplicate vertex in prefix {pfx}")
    if min(pfx) < 0 or max(pfx) >= n:
        raise InvalidPrefixError(f"prefix vertex outside 0..{n - 1}")
    if len(pfx) > n:
        raise InvalidPrefixError("prefix longer than instance")
    return pfx


def greedy_complete(instance: Instance, prefix: Sequence[int], mode: str = MODE_TOUR):
    """Reference completion of one prefix: repeatedly take the nearest
    unvisited neighbour of the current endpoint (ties to the lowest
    vertex index).  Returns a Tour or HamPath per `mode`."""
    n = instance.n
    order = _check_prefix(n, prefix)
    visited = [False] * n
    for v in order:
        visited[v] = True
    cur = order[-1]
    for _ in range(n - len(order)):
        row = instance.row(cur)
        best = -1
        for j in range(n):
            if not visited[j] and (best < 0 or row[j] < row[best]):
                best = j
        visited[best] = True
        order.append(best)
        cur = best
    if mode == MODE_TOUR:
        return Tour.from_order(instance, order)
    if mode == MODE_PATH:
        return HamPath.from_order(instance, order)
    raise ValueError(f"unknown mode {mode!r}")


# -- batch engine ------------------------------------------------------------


def _complete_chunk(W: np.ndarray, prefixes: np.ndarray, mode: str) -> np.ndarray:
    """Greedy-complete a chunk of prefixes at once; returns their costs.

    Cost accumulation is strictly edge-by-edge in visit order, matching
    the scalar cost functions bit for bit on floats.
    """
    c, k = prefixes.shape
    n = W.shape[0]
    if np.issubdtype(W.dtype, np.integer):
        inf = np.iinfo(W.dtype).max // 4
    else:
        inf = np.inf
    cost = np.zeros(c, dtype=W.dtype)
    for i in range(k - 1):
        cost += W[prefixes[:, i], prefixes[:, i + 1]]
    visited = np.zeros((c, n), dtype=bool)
    rows = np.arange(c)
    for i in range(k):
        visited[rows, prefixes[:, i]] = True
    cur = prefixes[:, -1].copy()
    buf = np.empty((c, n), dtype=W.dtype)
    for _ in range(n - k):
        np.take(W, cur, axis=0, out=buf)
        buf[visited] = inf
        cur = np.argmin(buf, axis=1)  # first minimum == lowest-index tie-break
        cost += buf[rows, cur]
        visited[rows, cur] = True
    if mode == MODE_TOUR:
        cost += W[cur, prefixes[:, 0]]
    return cost


def _complete_chunk_orders(W: np.ndarray, prefixes: np.ndarray) -> np.ndarray:
    """Like _complete_chunk but returns the full visit orders (c, n)."""
    c, k = prefixes.shape
    n = W.shape[0]
    if np.issubdtype(W.dtype, np.integer):
        inf = np.iinfo(W.dtype).max // 4
    else:
        inf = np.inf
    orders = np.empty((c, n), dtype=np.int64)
    orders[:, :k] = prefixes
    visited = np.zeros((c, n), dtype=bool)
    rows = np.arange(c)
    for i in range(k):
        visited[rows, prefixes[:, i]] = True
    cur = prefixes[:, -1].copy()
    buf = np.empty((c, n), dtype=W.dtype)
    for step in range(k, n):
        np.take(W, cur, axis=0, out=buf)
        buf[visited] = inf
        cur = np.argmin(buf, axis=1)
        visited[rows, cur] = True
        orders[:, step] = cur
    return orders


def _prefix_array(n: int, k: int) -> np.ndarray | Iterator[np.ndarray]:
    """All ordered k-prefixes in lexicographic order.

    k <= 2 is built directly as one array; larger k streams chunks from
    itertools to avoid materialising huge Python tuples.
    """
    if k == 1:
        return np.arange(n, dtype=np.int64)[:, None]
    if k == 2:
        second = np.broadcast_to(np.arange(n, dtype=np.int64), (n, n))
        keep = ~np.eye(n, dtype=bool)
        first = np.repeat(np.arange(n, dtype=np.int64), n - 1)
        return np.stack([first, second[keep]], axis=1)

    def chunks() -> Iterator[np.ndarray]:
        it = itertools.permutations(range(n), k)
        while True:
            block = list(itertools.islice(it, 65536))
            if not block:
                return
            yield np.array(block, dtype=np.int64)

    return chunks()


def _chunk_size(n: int) -> int:
    # keep the (chunk, n) work buffers around a few tens of MB
    return max(256, min(65536, 4_000_000 // n))


def krnn(
    instance: Instance,
    config: KrnnConfig,
    deadline: float | None = None,
) -> KrnnResult:
    """Run k-RNN: best greedy completion over all ordered k-prefixes.

    Deterministic for any worker count: the winner is the minimum cost,
    ties resolved by lexicographic order of the completed sequence.
    `deadline` (time.monotonic value) aborts between chunks.
    """
    n, k = instance.n, config.k
    if not 1 <= k <= n:
        raise InvalidKError(f"k={k} outside 1..{n}")
    count = math.perm(n, k)
    if count > config.prefix_limit:
        raise PrefixLimitError(
            f"{count} prefixes exceed the guard limit {config.prefix_limit}; "
            "raise KrnnConfig.prefix_limit to override"
        )
    W = instance.matrix()
    mode = config.mode
    if mode not in (MODE_TOUR, MODE_PATH):
        raise ValueError(f"unknown mode {mode!r}")

    prefixes = _prefix_array(n, k)
    if isinstance(prefixes, np.ndarray):
        size = _chunk_size(n)
        chunk_iter = (prefixes[i : i + size] for i in range(0, len(prefixes), size))
    else:
        chunk_iter = prefixes

    def run_chunk(chunk: np.ndarray):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceededError("time budget exhausted during prefix enumeration")
        costs = _complete_chunk(W, chunk, mode)
        best = costs.min()
        ties = chunk[costs == best]
        return best, ties, (costs if config.keep_costs else None)

    workers = max(1, config.workers)
    if workers == 1:
        outcomes = [run_chunk(chunk) for chunk in chunk_iter]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_chunk, chunk_iter))

    best_cost = min(o[0] for o in outcomes)
    tying = np.concatenate([o[1] for o in outcomes if o[0] == best_cost])
    # resolve ties by the lexicographically smallest completed sequence;
    # degenerate instances can tie thousands of prefixes, so batch this too
    size = _chunk_size(n)
    best_order: tuple[int, ...] | None = None
    for i in range(0, len(tying), size):
        for row in _complete_chunk_orders(W, tying[i : i + size]):
            cand = tuple(int(v) for v in row)
            if best_order is None or cand < best_order:
                best_order = cand
    if mode == MODE_TOUR:
        best = Tour.from_order(instance, best_order)
    else:
        best = HamPath.from_order(instance, best_order)
    per_prefix = None
    if config.keep_costs:
        per_prefix = tuple(np.concatenate([o[2] for o in outcomes]).tolist())
    return KrnnResult(
        best=best,
        best_prefix=best.order[:k],
        candidates_evaluated=count,
        per_prefix_costs=per_prefix,
    )


def krnn_all_k(
    instance: Instance,
    k_max: int,
    mode: str = MODE_TOUR,
    workers: int = 1,
    prefix_limit: int = DEFAULT_PREFIX_LIMIT,
) -> list[tuple[int, int | float]]:
    """Best k-RNN cost for every k = 1..k_max; non-increasing in k."""
    out = []
    for k in range(1, k_max + 1):
        cfg = KrnnConfig(k=k, mode=mode, workers=workers, prefix_limit=prefix_limit)
        out.append((k, krnn(instance, cfg).best.cost))
    return out
