from __future__ import annotations

import numpy as np
import pytest

from krnn import Instance, parse_file
from krnn.bench import default_data_dir


@pytest.fixture(scope="session")
def data_dir():
    return default_data_dir()


@pytest.fixture(scope="session")
def tsp(data_dir):
    """Load a named TSPLIB instance, skipping when the file was not
    fetched (run scripts/fetch_tsplib.py)."""
    cache = {}

    def load(name: str) -> Instance:
        if name not in cache:
            path = data_dir / f"{name}.tsp"
            if not path.is_file():
                pytest.skip(f"{name}.tsp not present; run scripts/fetch_tsplib.py")
            cache[name] = parse_file(path)
        return cache[name]

    return load


@pytest.fixture(scope="session")
def square():
    """Unit square with exact float distances: tours cost 4.0, the best
    open path and the MST cost 3.0."""
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]])
    return Instance.from_points("square", pts, "euclidean")
