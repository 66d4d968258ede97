import os

import pytest

from apollonian import orbit

ROOT = (-1, 2, 2, 3)
DECADES = (10**4, 10**5, 10**6)


def worker_count() -> int:
    return min(4, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def decade_tallies():
    """Curvature tallies of the (-1,2,2,3) packing at 1e4, 1e5, 1e6 (computed once)."""
    return {x: orbit.fill_tally(ROOT, x, threads=worker_count()) for x in DECADES}
