"""Shared fixtures: small deterministic systems used across test modules."""

from __future__ import annotations

import numpy as np
import pytest

from stochnet.network import BipartiteIncidence, NetworkMatrix


@pytest.fixture
def hand_matrix() -> NetworkMatrix:
    """2x2 matrix with easy row/column sums: s_in = (3, 7), s_out = (4, 6)."""
    return NetworkMatrix(np.array([[1.0, 2.0], [3.0, 4.0]]))


@pytest.fixture
def small_incidence() -> BipartiteIncidence:
    """3 plants x 4 animals, every species connected."""
    y = np.array(
        [
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
        ]
    )
    return BipartiteIncidence(y=y)
