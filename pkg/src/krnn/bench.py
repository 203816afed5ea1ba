"""Benchmark harness over the 48-instance TSPLIB registry.

The registry pins each instance's size and proven optimal tour length,
plus previously published 1-RNN/2-RNN results for side-by-side
comparison, so the benchmark runs fully offline.  Excess percentages
are computed in decimal arithmetic with half-up rounding to two
places, which reproduces the published excess columns exactly.

Published results for two instances appeared under the labels "f1400"
and "f1417"; their optima and sizes identify them as the canonical
TSPLIB instances fl1400 and fl417, which are the names used here (the
old labels are accepted as aliases).
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import (
    BudgetExceededError,
    InstanceNotFoundError,
    InvalidOptimumError,
    KrnnError,
    PrefixLimitError,
    SizeRefusedError,
)
from .heuristics import DEFAULT_PREFIX_LIMIT, MODE_TOUR, KrnnConfig, krnn
from .tsplib import parse_file

SCHEMA_VERSION = 1

DESK_SCALE_MAX_N = 300

REPORT_COLUMNS = (
    "name",
    "n",
    "optimum",
    "k",
    "result",
    "excess",
    "paper_result",
    "paper_excess",
    "delta",
    "time",
)


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    n: int
    optimum: int


# name -> (n, optimum, 1-RNN result, 1-RNN excess, 2-RNN result, 2-RNN excess)
_ROWS = {
    "a280": (280, 2579, 2975, 15.35, 2953, 14.50),
    "berlin52": (52, 7542, 8181, 8.47, 7968, 5.65),
    "bier127": (127, 118282, 133953, 13.25, 128589, 8.71),
    "brazil58": (58, 25395, 27384, 7.83, 27213, 7.16),
    "brg180": (180, 1950, 8890, 355.90, 2020, 3.59),
    "ch130": (130, 6110, 7129, 16.68, 6903, 12.98),
    "ch150": (150, 6528, 7113, 8.96, 7113, 8.96),
    "d1291": (1291, 50801, 58681, 15.51, 58681, 15.51),
    "d1655": (1655, 62128, 73369, 18.09, 72554, 16.78),
    "d198": (198, 15780, 17620, 11.66, 17405, 10.30),
    "d493": (493, 35002, 40186, 14.81, 40186, 14.81),
    "d657": (657, 48912, 60174, 23.03, 59310, 21.26),
    "dantzig42": (42, 699, 864, 23.61, 826, 18.17),
    "eil101": (101, 629, 746, 18.60, 743, 18.12),
    "eil51": (51, 426, 482, 13.15, 472, 10.80),
    "eil76": (76, 538, 608, 13.01, 598, 11.15),
    "fl1400": (1400, 20127, 25115, 24.78, 24719, 22.82),
    "fl417": (417, 11861, 13887, 17.08, 13866, 16.90),
    "fri26": (26, 937, 965, 2.99, 959, 2.35),
    "gil262": (262, 2378, 2823, 18.71, 2767, 16.36),
    "gr120": (120, 6942, 8438, 21.55, 8335, 20.07),
    "gr17": (17, 2085, 2178, 4.46, 2178, 4.46),
    "gr21": (21, 2707, 3003, 10.93, 2958, 9.27),
    "gr24": (24, 1272, 1553, 22.09, 1400, 10.06),
    "gr48": (48, 5046, 5840, 15.74, 5561, 10.21),
    "hk48": (48, 11461, 12137, 5.90, 12031, 4.97),
    "kroA100": (100, 21282, 24698, 16.05, 24582, 15.51),
    "kroA150": (150, 26524, 31479, 18.68, 31320, 18.08),
    "kroA200": (200, 29368, 34543, 17.62, 34543, 17.62),
    "kroB100": (100, 22141, 25884, 16.91, 25255, 14.06),
    "kroB150": (150, 26130, 31611, 20.98, 31524, 20.64),
    "kroB200": (200, 29437, 35389, 20.22, 35283, 19.86),
    "kroC100": (100, 20749, 23660, 14.03, 23603, 13.75),
    "kroD100": (100, 21294, 24852, 16.71, 24603, 15.54),
    "kroE100": (100, 22068, 24782, 12.30, 24445, 10.77),
    "lin105": (105, 14379, 16935, 17.78, 16147, 12.30),
    "lin318": (318, 42029, 49201, 17.06, 49201, 17.06),
    "linhp318": (318, 41345, 49201, 19.00, 49201, 19.00),
    "nrw1379": (1379, 56638, 68531, 21.00, 67873, 19.84),
    "p654": (654, 34643, 43027, 24.20, 42935, 23.94),
    "pa561": (561, 2763, 3279, 18.68, 3269, 18.31),
    "pcb1173": (1173, 56892, 70115, 23.24, 69085, 21.43),
    "pcb442": (442, 50778, 58950, 16.09, 58682, 15.57),
    "pr76": (76, 108159, 130921, 21.04, 128749, 19.04),
    "si1032": (1032, 92650, 94083, 1.55, 93981, 1.44),
    "si175": (175, 21407, 22000, 2.77, 21906, 2.33),
    "si535": (535, 48450, 50036, 3.27, 50032, 3.27),
    "swiss42": (42, 1273, 1437, 12.88, 1425, 11.94),
}

REGISTRY: dict[str, RegistryEntry] = {
    name: RegistryEntry(name, row[0], row[1]) for name, row in _ROWS.items()
}

#: published heuristic results: (name, k) -> (result, excess)
PAPER_RESULTS: dict[tuple[str, int], tuple[int, float]] = {}
for _name, _row in _ROWS.items():
    PAPER_RESULTS[(_name, 1)] = (_row[2], _row[3])
    PAPER_RESULTS[(_name, 2)] = (_row[4], _row[5])

NAME_ALIASES = {"f1400": "fl1400", "f1417": "fl417"}


def resolve_name(name: str) -> str:
    """Canonical registry name, accepting published aliases."""
    name = NAME_ALIASES.get(name, name)
    if name not in REGISTRY:
        raise InstanceNotFoundError(f"{name!r} is not in the benchmark registry")
    return name


def desk_scale_names(max_n: int = DESK_SCALE_MAX_N) -> list[str]:
    """Registry instances small enough for an interactive run."""
    return sorted(n for n, e in REGISTRY.items() if e.n <= max_n)


def excess_percent(result, optimum) -> float:
    """100 * (result - optimum) / optimum, half-up rounded to 2 decimals."""
    if optimum <= 0:
        raise InvalidOptimumError(f"optimum must be positive, got {optimum}")
    value = (Decimal(result) - Decimal(optimum)) * 100 / Decimal(optimum)
    return float(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class BenchRecord:
    """One (instance, k) benchmark outcome."""

    name: str
    n: int
    optimum: int
    k: int
    status: str  # ok | skipped | unavailable
    result_cost: int | None = None
    excess: float | None = None
    wall_time: float | None = None
    paper_result: int | None = None
    paper_excess: float | None = None
    error: str | None = None

    @property
    def delta(self) -> int | None:
        if self.result_cost is None or self.paper_result is None:
            return None
        return self.result_cost - self.paper_result

    @property
    def divergent(self) -> bool | None:
        """True when the result strays more than 1% of optimum from the
        published value (tie-breaking differences are expected below that)."""
        if self.delta is None:
            return None
        return abs(self.delta) / self.optimum > 0.01

    def to_dict(self, include_times: bool = False) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "optimum": self.optimum,
            "k": self.k,
            "status": self.status,
            "result": self.result_cost,
            "excess": self.excess,
            "paper_result": self.paper_result,
            "paper_excess": self.paper_excess,
            "delta": self.delta,
            "divergent": self.divergent,
            "time": self.wall_time if include_times else None,
            "error": self.error,
        }


def default_data_dir() -> Path:
    """KRNN_DATA_DIR if set, else the repository's data/tsplib."""
    env = os.environ.get("KRNN_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data" / "tsplib"


def run_benchmark(
    names: list[str],
    ks=(1, 2),
    data_dir: Path | None = None,
    budget_secs: float | None = None,
    workers: int = 1,
    prefix_limit: int = DEFAULT_PREFIX_LIMIT,
    progress=None,
) -> list[BenchRecord]:
    """One record per (instance, k), sorted by (name, k).

    The time budget applies per (instance, k) run; a run that exceeds
    it is recorded as skipped, never silently dropped.  `progress` is
    an optional callable fed one line per completed record.
    """
    data_dir = data_dir or default_data_dir()
    records = []
    for name in sorted(resolve_name(n) for n in names):
        entry = REGISTRY[name]
        base = {
            "name": name,
            "n": entry.n,
            "optimum": entry.optimum,
        }
        path = Path(data_dir) / f"{name}.tsp"
        instance = None
        load_error = None
        if path.is_file():
            try:
                instance = parse_file(path)
            except KrnnError as exc:
                load_error = str(exc)
        else:
            load_error = f"no such file: {path}"
        for k in sorted(ks):
            paper = PAPER_RESULTS.get((name, k), (None, None))
            if instance is None:
                rec = BenchRecord(
                    **base, k=k, status="unavailable",
                    paper_result=paper[0], paper_excess=paper[1], error=load_error,
                )
                records.append(rec)
                if progress:
                    progress(f"{name} k={k}: unavailable ({load_error})")
                continue
            start = time.monotonic()
            deadline = start + budget_secs if budget_secs else None
            try:
                result = krnn(
                    instance,
                    KrnnConfig(k=k, mode=MODE_TOUR, workers=workers, prefix_limit=prefix_limit),
                    deadline=deadline,
                )
                elapsed = time.monotonic() - start
                rec = BenchRecord(
                    **base, k=k, status="ok",
                    result_cost=int(result.best.cost),
                    excess=excess_percent(int(result.best.cost), entry.optimum),
                    wall_time=elapsed,
                    paper_result=paper[0], paper_excess=paper[1],
                )
            except (BudgetExceededError, PrefixLimitError, SizeRefusedError) as exc:
                rec = BenchRecord(
                    **base, k=k, status="skipped",
                    wall_time=time.monotonic() - start,
                    paper_result=paper[0], paper_excess=paper[1], error=str(exc),
                )
            records.append(rec)
            if progress:
                desc = f"cost {rec.result_cost}" if rec.status == "ok" else rec.status
                progress(f"{name} k={k}: {desc} ({rec.wall_time:.2f}s)")
    return records


# -- report emission ---------------------------------------------------------


def _fmt2(x) -> str:
    return "" if x is None else f"{x:.2f}"


def _fmt(x) -> str:
    return "" if x is None else str(x)


def _row_cells(r: BenchRecord, include_times: bool) -> list[str]:
    time_cell = _fmt2(r.wall_time) if include_times else ""
    return [
        r.name,
        str(r.n),
        str(r.optimum),
        str(r.k),
        _fmt(r.result_cost),
        _fmt2(r.excess),
        _fmt(r.paper_result),
        _fmt2(r.paper_excess),
        _fmt(r.delta),
        time_cell,
    ]


def generated_at_stamp() -> str | None:
    """Deterministic timestamp: derived from SOURCE_DATE_EPOCH when the
    caller pins one, otherwise omitted so reports stay byte-stable."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def emit_report(records, fmt: str, include_times: bool = False) -> str:
    """Render records as csv, json, or a GitHub-flavored markdown table;
    rows ordered by (name, k)."""
    records = sorted(records, key=lambda r: (r.name, r.k))
    if fmt == "csv":
        lines = [",".join(REPORT_COLUMNS)]
        for r in records:
            lines.append(",".join(_row_cells(r, include_times)))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        import json

        doc = {
            "schema_version": SCHEMA_VERSION,
            "generated_at": generated_at_stamp(),
            "records": [r.to_dict(include_times) for r in records],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt in ("md", "markdown", "markdown-table"):
        header = "| " + " | ".join(REPORT_COLUMNS) + " |"
        rule = "|" + "|".join([" --- "] * len(REPORT_COLUMNS)) + "|"
        lines = [header, rule]
        for r in records:
            lines.append("| " + " | ".join(c or " " for c in _row_cells(r, include_times)) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
