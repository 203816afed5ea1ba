#!/usr/bin/env python3
"""Download the 48 benchmark TSPLIB instances into data/tsplib/.

The files are not vendored in this repository; this script fetches
them from public mirrors and verifies every file against the pinned
SHA-256 checksums in data/checksums.sha256 (which cover the canonical
TSPLIB95 file contents).

Sources, tried in order per instance:
  1. the mastqe/tsplib GitHub mirror (plain .tsp files)
  2. the Heidelberg TSPLIB95 site (gzip-compressed .tsp.gz)

Usage:  python3 scripts/fetch_tsplib.py [--dest data/tsplib] [names...]
"""

from __future__ import annotations

import argparse
import gzip
import hashlib
import sys
import urllib.error
import urllib.request
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_DEST = REPO_ROOT / "data" / "tsplib"
CHECKSUMS = REPO_ROOT / "data" / "checksums.sha256"

MIRRORS = (
    ("https://raw.githubusercontent.com/mastqe/tsplib/master/{name}.tsp", False),
    ("http://comopt.ifi.uni-heidelberg.de/software/TSPLIB95/tsp/{name}.tsp.gz", True),
)

NAMES = [
    "a280", "berlin52", "bier127", "brazil58", "brg180", "ch130", "ch150",
    "d1291", "d1655", "d198", "d493", "d657", "dantzig42", "eil101", "eil51",
    "eil76", "fl1400", "fl417", "fri26", "gil262", "gr120", "gr17", "gr21",
    "gr24", "gr48", "hk48", "kroA100", "kroA150", "kroA200", "kroB100",
    "kroB150", "kroB200", "kroC100", "kroD100", "kroE100", "lin105",
    "lin318", "linhp318", "nrw1379", "p654", "pa561", "pcb1173", "pcb442",
    "pr76", "si1032", "si175", "si535", "swiss42",
]


def load_checksums() -> dict[str, str]:
    sums = {}
    for line in CHECKSUMS.read_text().splitlines():
        digest, _, fname = line.strip().partition("  ")
        if fname:
            sums[fname] = digest
    return sums


def fetch(name: str, dest: Path, expected: str | None) -> bool:
    target = dest / f"{name}.tsp"
    if target.is_file() and expected:
        got = hashlib.sha256(target.read_bytes()).hexdigest()
        if got == expected:
            print(f"{name}: already present, checksum ok")
            return True
        print(f"{name}: present but checksum differs; refetching")
    last_err = None
    for url_tpl, gzipped in MIRRORS:
        url = url_tpl.format(name=name)
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                raw = resp.read()
        except (urllib.error.URLError, OSError) as exc:
            last_err = f"{url}: {exc}"
            continue
        data = gzip.decompress(raw) if gzipped else raw
        got = hashlib.sha256(data).hexdigest()
        if expected and got != expected:
            last_err = f"{url}: checksum mismatch (got {got})"
            continue
        target.write_bytes(data)
        print(f"{name}: fetched ({len(data)} bytes)")
        return True
    print(f"{name}: FAILED ({last_err})", file=sys.stderr)
    return False


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=None, help="instance names (default: all 48)")
    ap.add_argument("--dest", default=str(DEFAULT_DEST))
    args = ap.parse_args()
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    sums = load_checksums() if CHECKSUMS.is_file() else {}
    names = args.names or NAMES
    failures = 0
    for name in names:
        if not fetch(name, dest, sums.get(f"{name}.tsp")):
            failures += 1
    if failures:
        print(f"{failures} of {len(names)} files failed", file=sys.stderr)
        return 1
    print(f"all {len(names)} files present and verified")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
