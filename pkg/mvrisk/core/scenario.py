"""
Operations on scenario sets that share one finite probability space.

All functions are pure and return new ScenarioSet objects; probabilities and labels
are passed through untouched.
"""
from typing import Sequence

import numpy as np

from mvrisk.core.errors import (
    DimensionMismatchError,
    InvalidOutcomeError,
    NegativeScaleError,
    SpaceMismatchError,
)
from mvrisk.core.models import ScenarioSet

SPACE_TOL = 1e-12


def sum_scenarios(a: ScenarioSet, b: ScenarioSet) -> ScenarioSet:
    """
    Add two scenario sets realization by realization.

    Scenario order is the identity of a realization, so the sets must list the same
    probabilities in the same order.

    :param a: First summand.
    :param b: Second summand.
    :return: Set with outcomes a^s + b^s and the probabilities of a.
    :raises SpaceMismatchError: If n, d or the probabilities differ.
    """
    if a.n != b.n or a.dim != b.dim:
        raise SpaceMismatchError(f"Cannot add a {a.n}x{a.dim} set to a {b.n}x{b.dim} set")
    if np.any(np.abs(a.probs - b.probs) > SPACE_TOL):
        raise SpaceMismatchError("Scenario probabilities differ between the summands")
    return a.with_outcomes(a.outcomes + b.outcomes)


def scale_scenarios(a: ScenarioSet, k: float) -> ScenarioSet:
    """
    Multiply every outcome by a nonnegative factor.

    :param a: Scenario set.
    :param k: Factor, k >= 0.
    :return: Set with outcomes k * a^s.
    :raises NegativeScaleError: If k < 0.
    """
    if not k >= 0.0:
        raise NegativeScaleError(f"Scale factor must be nonnegative, got {k!r}")
    return a.with_outcomes(a.outcomes * float(k))


def translate_scenarios(a: ScenarioSet, k: Sequence[float]) -> ScenarioSet:
    """
    Shift every outcome by a constant vector.

    :param a: Scenario set.
    :param k: Shift with one finite component per criterion.
    :return: Set with outcomes a^s + k.
    :raises DimensionMismatchError: If k has the wrong length.
    :raises InvalidOutcomeError: If k is not finite.
    """
    shift = np.asarray(k, dtype=float)
    if shift.shape != (a.dim,):
        raise DimensionMismatchError(f"Shift must have {a.dim} components, got shape {shift.shape}")
    if not np.all(np.isfinite(shift)):
        raise InvalidOutcomeError("Shift components must be finite")
    return a.with_outcomes(a.outcomes + shift)


def zero_scenarios(dim: int) -> ScenarioSet:
    """
    Degenerate distribution at the origin.

    :param dim: Number of criteria.
    :return: One-scenario set with outcome 0 and probability 1.
    """
    return ScenarioSet(outcomes=np.zeros((1, dim)), probs=np.ones(1))
