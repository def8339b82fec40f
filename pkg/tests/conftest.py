"""
Shared scenario sets.
"""
from typing import Callable, Optional, Sequence

import numpy as np
import pytest

from mvrisk.core.models import ScenarioSet

ScenarioFactory = Callable[..., ScenarioSet]


def _make(outcomes: Sequence[Sequence[float]],
          probs: Optional[Sequence[float]] = None,
          labels: Optional[Sequence[str]] = None) -> ScenarioSet:
    table = np.array(outcomes, dtype=float)
    weights = np.full(len(table), 1.0 / len(table)) if probs is None else np.array(probs, dtype=float)
    return ScenarioSet(outcomes=table, probs=weights, labels=None if labels is None else tuple(labels))


@pytest.fixture
def make_scenarios() -> ScenarioFactory:
    """Build a set from outcome rows, equally likely unless probs are given."""
    return _make


@pytest.fixture
def example_y() -> ScenarioSet:
    """Five equally likely outcomes with efficient points (3, 3) and (2, 5) at p = 0.6."""
    return _make([(4, 1.5), (1, 3), (2, 5), (2, 3), (3, 1)])


@pytest.fixture
def partner_x() -> ScenarioSet:
    return _make([(1, 5), (3, 2), (2, 1), (1, 4), (5, 5)])


@pytest.fixture
def anti_diagonal() -> ScenarioSet:
    """Equally likely outcomes on x1 + x2 = 6; every outcome is desirable for p in [0.4, 0.8]."""
    return _make([(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)])


@pytest.fixture
def heavy_middle() -> ScenarioSet:
    """Anti-diagonal outcomes with light ends; single efficient point (4, 4) at p = 0.9."""
    return _make([(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)], probs=[0.05, 0.3, 0.3, 0.3, 0.05])


@pytest.fixture
def single_plep() -> ScenarioSet:
    """Single efficient point (3, 3) with P(X <= eta) = 0.75."""
    return _make([(1, 1), (2, 3), (3, 2), (5, 5)])
