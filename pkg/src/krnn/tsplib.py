"""TSPLIB95 instance parsing with bit-exact distance semantics.

Supports EXPLICIT matrices (all row/column triangle layouts), EUC_2D,
CEIL_2D, GEO and ATT coordinate instances.  Distance formulas follow the
canonical TSPLIB definitions exactly (nearest-integer rounding, the
3.141592 pi approximation and 6378.388 earth radius for GEO, and the
ATT round-up rule), so known optima reproduce bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InstanceNotFoundError,
    InvalidInstanceError,
    TsplibParseError,
    UnsupportedFormatError,
)
from .instance import Instance, register_distance_tag

SUPPORTED_WEIGHT_TYPES = ("EXPLICIT", "EUC_2D", "CEIL_2D", "GEO", "ATT")
SUPPORTED_WEIGHT_FORMATS = (
    "FULL_MATRIX",
    "UPPER_ROW",
    "LOWER_ROW",
    "UPPER_DIAG_ROW",
    "LOWER_DIAG_ROW",
    "UPPER_COL",
    "LOWER_COL",
)

_HEADER_KEYS = {
    "NAME",
    "TYPE",
    "COMMENT",
    "DIMENSION",
    "CAPACITY",
    "EDGE_WEIGHT_TYPE",
    "EDGE_WEIGHT_FORMAT",
    "EDGE_DATA_FORMAT",
    "NODE_COORD_TYPE",
    "DISPLAY_DATA_TYPE",
}

_SECTION_KEYS = {
    "NODE_COORD_SECTION",
    "EDGE_WEIGHT_SECTION",
    "DISPLAY_DATA_SECTION",
    "FIXED_EDGES_SECTION",
}


def _nint(x: float) -> int:
    # TSPLIB nint(): C-style (int)(x + 0.5), truncation toward zero.
    return int(x + 0.5) if x >= 0 else -int(-x + 0.5)


# -- canonical distance functions, vectorised as rows ------------------------


def _euc2d_row(points: np.ndarray, i: int) -> np.ndarray:
    d = points - points[i]
    return np.floor(np.hypot(d[:, 0], d[:, 1]) + 0.5).astype(np.int64)


def _ceil2d_row(points: np.ndarray, i: int) -> np.ndarray:
    d = points - points[i]
    return np.ceil(np.hypot(d[:, 0], d[:, 1])).astype(np.int64)


def _att_row(points: np.ndarray, i: int) -> np.ndarray:
    d = points - points[i]
    r = np.sqrt((d[:, 0] ** 2 + d[:, 1] ** 2) / 10.0)
    t = np.floor(r + 0.5)
    return np.where(t < r, t + 1.0, t).astype(np.int64)


def _geo_radians(coords: np.ndarray) -> np.ndarray:
    pi = 3.141592
    deg = np.trunc(coords + np.where(coords >= 0, 0.5, -0.5))
    minutes = coords - deg
    return pi * (deg + 5.0 * minutes / 3.0) / 180.0


def _geo_row(points: np.ndarray, i: int) -> np.ndarray:
    rrr = 6378.388
    lat = _geo_radians(points[:, 0])
    lon = _geo_radians(points[:, 1])
    q1 = np.cos(lon[i] - lon)
    q2 = np.cos(lat[i] - lat)
    q3 = np.cos(lat[i] + lat)
    arg = np.clip(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3), -1.0, 1.0)
    d = (rrr * np.arccos(arg) + 1.0).astype(np.int64)
    d[i] = 0  # the formula yields 1 on the diagonal; self-distance is 0
    return d


register_distance_tag("EUC_2D", _euc2d_row)
register_distance_tag("CEIL_2D", _ceil2d_row)
register_distance_tag("ATT", _att_row)
register_distance_tag("GEO", _geo_row)

_ROW_BY_TYPE = {
    "EUC_2D": _euc2d_row,
    "CEIL_2D": _ceil2d_row,
    "ATT": _att_row,
    "GEO": _geo_row,
}


def distance(edge_weight_type: str, point_i, point_j) -> int:
    """Distance between two coordinate pairs under a TSPLIB weight type."""
    if edge_weight_type not in _ROW_BY_TYPE:
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_TYPE: {edge_weight_type}")
    pts = np.asarray([point_i, point_j], dtype=np.float64)
    if not np.isfinite(pts).all():
        raise InvalidInstanceError("non-finite coordinate")
    return int(_ROW_BY_TYPE[edge_weight_type](pts, 0)[1])


# -- file parsing ------------------------------------------------------------


@dataclass(frozen=True)
class TsplibHeader:
    """Specification part of a .tsp file, before any data section."""

    name: str
    type: str
    dimension: int
    edge_weight_type: str
    edge_weight_format: str | None = None


def _triangle_indices(fmt: str, n: int):
    """Yield the (row, col) index for each entry of an EDGE_WEIGHT_SECTION."""
    if fmt == "FULL_MATRIX":
        return ((i, j) for i in range(n) for j in range(n))
    if fmt == "UPPER_ROW":
        return ((i, j) for i in range(n) for j in range(i + 1, n))
    if fmt == "LOWER_ROW":
        return ((i, j) for i in range(n) for j in range(i))
    if fmt == "UPPER_DIAG_ROW":
        return ((i, j) for i in range(n) for j in range(i, n))
    if fmt == "LOWER_DIAG_ROW":
        return ((i, j) for i in range(n) for j in range(i + 1))
    if fmt == "UPPER_COL":
        return ((i, j) for j in range(n) for i in range(j))
    if fmt == "LOWER_COL":
        return ((i, j) for j in range(n) for i in range(j + 1, n))
    raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT: {fmt}")


class _Lines:
    """Line cursor that keeps 1-based numbers for error messages."""

    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next_content(self) -> tuple[int, str] | None:
        while self.pos < len(self.lines):
            self.pos += 1
            stripped = self.lines[self.pos - 1].strip()
            if stripped:
                return self.pos, stripped
        return None

    def push_back(self) -> None:
        self.pos -= 1


def _parse_header(cur: _Lines) -> tuple[TsplibHeader, str]:
    fields: dict[str, str] = {}
    # The header ends at the first data section, at EOF, or at end of input;
    # validation runs on whatever was collected, so an unsupported weight
    # type is reported as such even in a file with no data sections.
    while True:
        item = cur.next_content()
        if item is None:
            break
        lineno, line = item
        key = line.split(":", 1)[0].strip() if ":" in line else line.split()[0]
        if key in _SECTION_KEYS:
            cur.push_back()
            break
        if key == "EOF":
            break
        if key not in _HEADER_KEYS:
            raise TsplibParseError(f"unrecognised keyword {key!r}", lineno)
        if ":" not in line:
            raise TsplibParseError(f"header keyword {key} has no value", lineno)
        value = line.split(":", 1)[1].strip()
        if key != "COMMENT":
            fields[key] = value
    for required in ("DIMENSION", "EDGE_WEIGHT_TYPE"):
        if required not in fields:
            raise TsplibParseError(f"missing {required}")
    file_type = fields.get("TYPE", "TSP")
    if not file_type.startswith("TSP"):
        raise UnsupportedFormatError(f"unsupported problem TYPE: {file_type}")
    ewt = fields["EDGE_WEIGHT_TYPE"]
    if ewt not in SUPPORTED_WEIGHT_TYPES:
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_TYPE: {ewt}")
    fmt = fields.get("EDGE_WEIGHT_FORMAT")
    if ewt == "EXPLICIT":
        if fmt is None:
            raise TsplibParseError("EXPLICIT instance without EDGE_WEIGHT_FORMAT")
        if fmt not in SUPPORTED_WEIGHT_FORMATS:
            raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT: {fmt}")
    else:
        fmt = None
    try:
        dimension = int(fields["DIMENSION"])
    except ValueError:
        raise TsplibParseError(f"DIMENSION is not an integer: {fields['DIMENSION']!r}")
    if dimension < 2:
        raise TsplibParseError(f"DIMENSION must be >= 2, got {dimension}")
    header = TsplibHeader(
        name=fields.get("NAME", "unnamed"),
        type=file_type,
        dimension=dimension,
        edge_weight_type=ewt,
        edge_weight_format=fmt,
    )
    return header, ewt


def _read_numbers(cur: _Lines, count: int, section: str, start_line: int) -> list[float]:
    values: list[float] = []
    while len(values) < count:
        item = cur.next_content()
        if item is None:
            raise TsplibParseError(
                f"{section}: expected {count} values, got {len(values)}", start_line
            )
        lineno, line = item
        for tok in line.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise TsplibParseError(f"{section}: bad numeric token {tok!r}", lineno)
        if len(values) > count:
            raise TsplibParseError(
                f"{section}: expected {count} values, got at least {len(values)}", start_line
            )
    return values


def _read_coord_section(cur: _Lines, n: int, section: str, start_line: int) -> np.ndarray:
    pts = np.full((n, 2), np.nan)
    for _ in range(n):
        item = cur.next_content()
        if item is None:
            raise TsplibParseError(f"{section}: fewer than {n} coordinate lines", start_line)
        lineno, line = item
        parts = line.split()
        if len(parts) != 3:
            raise TsplibParseError(f"{section}: expected 'index x y', got {line!r}", lineno)
        try:
            idx = int(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise TsplibParseError(f"{section}: bad coordinate line {line!r}", lineno)
        if not 1 <= idx <= n:
            raise TsplibParseError(f"{section}: vertex index {idx} outside 1..{n}", lineno)
        pts[idx - 1] = (x, y)
    if np.isnan(pts).any():
        raise TsplibParseError(f"{section}: some vertices missing coordinates", start_line)
    return pts


def _skip_fixed_edges(cur: _Lines, start_line: int) -> None:
    while True:
        item = cur.next_content()
        if item is None:
            raise TsplibParseError("FIXED_EDGES_SECTION: missing -1 terminator", start_line)
        if item[1].split()[-1] == "-1":
            return


def parse_instance(text: str) -> Instance:
    """Parse the contents of a .tsp file into an Instance.

    Explicit matrices are expanded to full symmetric form; coordinate
    instances keep their points plus the distance-function tag, with
    1-based TSPLIB labels mapped to 0-based vertex indices.
    """
    cur = _Lines(text)
    header, ewt = _parse_header(cur)
    n = header.dimension
    matrix: np.ndarray | None = None
    points: np.ndarray | None = None
    while True:
        item = cur.next_content()
        if item is None:
            break
        lineno, line = item
        key = line.split(":", 1)[0].strip() if ":" in line else line.split()[0]
        if key == "EOF":
            break
        if key == "NODE_COORD_SECTION":
            coords = _read_coord_section(cur, n, key, lineno)
            if ewt == "EXPLICIT":
                continue  # coordinates of EXPLICIT instances are display-only
            points = coords
        elif key == "DISPLAY_DATA_SECTION":
            _read_coord_section(cur, n, key, lineno)
        elif key == "FIXED_EDGES_SECTION":
            _skip_fixed_edges(cur, lineno)
        elif key == "EDGE_WEIGHT_SECTION":
            if ewt != "EXPLICIT":
                raise TsplibParseError(f"EDGE_WEIGHT_SECTION in a {ewt} instance", lineno)
            fmt = header.edge_weight_format
            indices = list(_triangle_indices(fmt, n))
            values = _read_numbers(cur, len(indices), key, lineno)
            W = np.zeros((n, n), dtype=np.int64)
            for (i, j), v in zip(indices, values):
                if v != int(v):
                    raise TsplibParseError(f"non-integer explicit weight {v}", lineno)
                W[i, j] = int(v)
                if fmt != "FULL_MATRIX":
                    W[j, i] = int(v)
            matrix = W
        else:
            raise TsplibParseError(f"unrecognised keyword {key!r}", lineno)
    if ewt == "EXPLICIT":
        if matrix is None:
            raise TsplibParseError("EXPLICIT instance without EDGE_WEIGHT_SECTION")
        try:
            return Instance.from_matrix(header.name, matrix)
        except InvalidInstanceError as exc:
            raise InvalidInstanceError(f"{header.name}: {exc}") from exc
    if points is None:
        raise TsplibParseError(f"{ewt} instance without NODE_COORD_SECTION")
    return Instance.from_points(header.name, points, distance_tag=ewt)


def parse_header(text: str) -> TsplibHeader:
    """Parse only the specification part of a .tsp file."""
    return _parse_header(_Lines(text))[0]


def parse_file(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def load_bundle(directory: str | Path, names: list[str]) -> list[Instance]:
    """Load the named instances from a directory, in sorted name order.

    All missing files are reported together rather than failing one at
    a time or being silently skipped.
    """
    directory = Path(directory)
    ordered = sorted(names)
    missing = [name for name in ordered if not (directory / f"{name}.tsp").is_file()]
    if missing:
        raise InstanceNotFoundError(
            f"missing instance files in {directory}: {', '.join(missing)}"
        )
    return [parse_file(directory / f"{name}.tsp") for name in ordered]


def serialize_full_matrix(instance: Instance) -> str:
    """Render an explicit instance as a FULL_MATRIX .tsp document."""
    W = instance.matrix()
    if not instance.integral:
        raise InvalidInstanceError("only integer-weight instances serialise to TSPLIB")
    lines = [
        f"NAME: {instance.name}",
        "TYPE: TSP",
        f"DIMENSION: {instance.n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines.extend(" ".join(str(int(v)) for v in row) for row in W)
    lines.append("EOF")
    return "\n".join(lines) + "\n"
