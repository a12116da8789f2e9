"""Shared object corpora for the test suite.

Both corpora are deterministic: shapes come from seeded generators, so every
test run sees byte-identical geometry.
"""

from __future__ import annotations

import pytest

from hullsim.hull_oracle import HullSets, hulls
from hullsim.shapes import random_blob, random_nonconvex_blob

# 50 boundary-size targets spanning [12, 400], biased toward small objects
# (most structural corner cases live there; big ones cost far more rounds).
BLOB_TARGETS = (
    [12, 14, 16, 18, 20, 24, 28, 32, 36, 45] * 3
    + [50, 55, 60, 65, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160]
    + [180, 220, 260, 300, 350, 400]
)

# 30 targets for objects whose weak and strong hulls must differ.
NONCONVEX_TARGETS = [20, 24, 28, 32, 36, 40] * 5


@pytest.fixture(scope="session")
def blob_corpus() -> list[tuple[object, HullSets]]:
    """50 tunnel-free random objects with their oracle hulls."""
    corpus = []
    for i, target in enumerate(BLOB_TARGETS):
        shape = random_blob(1000 + i, target)
        assert 12 <= len(shape.boundary_nodes) <= 440, (i, target)
        corpus.append((shape, hulls(shape)))
    return corpus


@pytest.fixture(scope="session")
def nonconvex_corpus() -> list[tuple[object, HullSets]]:
    """30 objects whose weak hull is strictly tighter than the strong one."""
    corpus = []
    for i, target in enumerate(NONCONVEX_TARGETS):
        shape = random_nonconvex_blob(2000 + i, target)
        hs = hulls(shape)
        assert set(hs.weak_cycle) != set(hs.strong_cycle), (i, target)
        corpus.append((shape, hs))
    return corpus
