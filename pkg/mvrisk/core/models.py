"""
Core data models for mvrisk.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from mvrisk.config.config import config
from mvrisk.core.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidLevelError,
    InvalidOutcomeError,
    InvalidProbabilityError,
    InvalidWeightsError,
)

Vector = Tuple[float, ...]


class Undefined(Enum):
    """Marker for a risk value whose conditioning event has probability zero."""

    UNDEFINED = "undefined"

    def __repr__(self) -> str:
        return "UNDEFINED"


UNDEFINED = Undefined.UNDEFINED

MaybeScalar = Union[float, Undefined]


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    """
    Finite discrete distribution of a random vector.

    Arrays are copied and frozen on construction. Probabilities whose sum is off by more
    than the normalized tolerance but within the accepted tolerance are divided by their sum.

    :param outcomes: Array of shape (n, d), one outcome vector per scenario.
    :param probs: Array of shape (n,) with the scenario probabilities.
    :param labels: Optional scenario identifiers.
    """
    outcomes: np.ndarray
    probs: np.ndarray
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        outcomes = np.array(self.outcomes, dtype=float)
        probs = np.array(self.probs, dtype=float)

        if outcomes.ndim != 2:
            raise DimensionMismatchError(f"Outcomes must form an n x d table, got shape {outcomes.shape}")
        if outcomes.shape[0] == 0:
            raise EmptyInputError("Scenario set has no scenarios")
        if outcomes.shape[1] == 0:
            raise DimensionMismatchError("Outcome vectors must have at least one component")
        if probs.shape != (outcomes.shape[0],):
            raise DimensionMismatchError(
                f"Expected {outcomes.shape[0]} probabilities, got shape {probs.shape}"
            )
        if not np.all(np.isfinite(outcomes)):
            raise InvalidOutcomeError("Outcome components must be finite reals")
        if not np.all(np.isfinite(probs)) or np.any(probs <= 0.0):
            raise InvalidProbabilityError("Every scenario probability must be positive")

        total = float(np.sum(probs))
        deviation = abs(total - 1.0)
        if deviation > config.probability_sum_tol:
            raise InvalidProbabilityError(f"Probabilities sum to {total!r}, expected 1")
        if deviation > config.normalized_sum_tol:
            probs = probs / total

        labels = self.labels
        if labels is not None:
            labels = tuple(str(label) for label in labels)
            if len(labels) != outcomes.shape[0]:
                raise DimensionMismatchError(
                    f"Expected {outcomes.shape[0]} labels, got {len(labels)}"
                )

        outcomes.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        """Number of scenarios."""
        return int(self.outcomes.shape[0])

    @property
    def dim(self) -> int:
        """Number of criteria."""
        return int(self.outcomes.shape[1])

    def with_outcomes(self, outcomes: np.ndarray) -> "ScenarioSet":
        """
        Build a set on the same probability space with new outcomes.

        :param outcomes: Replacement outcome table of the same shape.
        :return: New scenario set sharing probabilities and labels.
        """
        return ScenarioSet(outcomes=outcomes, probs=self.probs, labels=self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScenarioSet):
            return NotImplemented
        return (
            self.outcomes.shape == other.outcomes.shape
            and bool(np.array_equal(self.outcomes, other.outcomes))
            and bool(np.array_equal(self.probs, other.probs))
            and self.labels == other.labels
        )


@dataclass(frozen=True)
class ConfidenceLevel:
    """
    Confidence level p with the tolerance used for probability comparisons.

    Larger p means a smaller tail of mass 1 - p.

    :param p: Level in the open interval (0, 1).
    :param eps: Tolerance for inequalities between probabilities.
    """
    p: float
    eps: float = field(default_factory=lambda: config.level_eps)

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise InvalidLevelError(f"Confidence level must lie in (0, 1), got {self.p!r}")
        if not self.eps > 0.0:
            raise InvalidLevelError(f"Tolerance must be positive, got {self.eps!r}")

    @property
    def tail(self) -> float:
        """Tail mass 1 - p."""
        return 1.0 - self.p

    def reached(self, mass: float) -> bool:
        """Whether a probability mass clears the level."""
        return mass >= self.p - self.eps


@dataclass(frozen=True)
class QuantilePoint:
    """
    Candidate or confirmed p-level efficient point.

    :param eta: Quantile vector.
    :param cdf: Joint CDF value at eta.
    :param covered: Indices of the scenarios with outcome <= eta.
    """
    eta: Vector
    cdf: float
    covered: FrozenSet[int]


@dataclass(frozen=True)
class MVaRSet:
    """
    Multivariate VaR: all efficient points at a level, sorted lexicographically.

    :param level: Confidence level of the enumeration.
    :param points: Efficient points, pairwise non-comparable.
    """
    level: ConfidenceLevel
    points: Tuple[QuantilePoint, ...]

    @property
    def etas(self) -> List[Vector]:
        """Quantile vectors of the points."""
        return [point.eta for point in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[QuantilePoint]:
        return iter(self.points)


@dataclass(frozen=True)
class RiskVector:
    """
    One vector-valued risk value.

    :param value: Risk vector, or UNDEFINED when the conditioning event is empty.
    :param anchor: Efficient point the vector was computed from, if any.
    :param conditioning_mass: Probability of the conditioning event.
    :param flags: Markers such as ``hypothesis_violated``, ``relaxed`` or ``multiple_pleps``.
    """
    value: Union[Vector, Undefined]
    anchor: Optional[QuantilePoint] = None
    conditioning_mass: float = 0.0
    flags: FrozenSet[str] = frozenset()

    @property
    def defined(self) -> bool:
        """Whether the value is a vector."""
        return self.value is not UNDEFINED

    @property
    def hypothesis_violated(self) -> bool:
        """Whether the value was computed outside the hypothesis of its formula."""
        return "hypothesis_violated" in self.flags


@dataclass(frozen=True)
class VMCVaRSet:
    """
    Non-dominated per-quantile conditional risk vectors.

    :param level: Confidence level.
    :param vectors: Pairwise non-dominated vectors, each carrying its anchor.
    """
    level: ConfidenceLevel
    vectors: Tuple[RiskVector, ...]

    @property
    def values(self) -> List[Vector]:
        """Risk vectors without their anchors."""
        return [vector.value for vector in self.vectors if vector.defined]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self) -> Iterator[RiskVector]:
        return iter(self.vectors)


@dataclass(frozen=True)
class ScalarizationWeights:
    """
    Convex weights of a linear scalarization c . x.

    :param c: Nonnegative weights summing to one.
    """
    c: Vector

    def __post_init__(self) -> None:
        weights = tuple(float(value) for value in self.c)
        if not weights:
            raise InvalidWeightsError("Weights must have at least one component")
        if any(not np.isfinite(value) or value < 0.0 for value in weights):
            raise InvalidWeightsError(f"Weights must be nonnegative, got {weights}")
        if abs(sum(weights) - 1.0) > config.normalized_sum_tol:
            raise InvalidWeightsError(f"Weights must sum to 1, got {sum(weights)!r}")
        object.__setattr__(self, "c", weights)

    @property
    def dim(self) -> int:
        """Number of weighted criteria."""
        return len(self.c)

    def apply(self, vector: Sequence[float]) -> float:
        """
        Scalarize a vector.

        :param vector: Vector with as many components as weights.
        :return: Weighted sum.
        """
        if len(vector) != self.dim:
            raise DimensionMismatchError(f"Expected {self.dim} components, got {len(vector)}")
        return float(np.dot(self.c, vector))


@dataclass(frozen=True)
class DesirabilityPartition:
    """
    Split of scenario indices by whether an efficient point dominates the outcome.

    :param desirable: Scenarios with outcome <= some efficient point.
    :param undesirable: All other scenarios.
    """
    desirable: Tuple[int, ...]
    undesirable: Tuple[int, ...]


@dataclass(frozen=True)
class ScalarizedMeasures:
    """
    Measures of one report scalarized with the same weights.

    :param vmcvar: c . v for each VMCVaR element, in report order.
    :param vmcvar_bar: c . VMCVaR-bar, or UNDEFINED.
    :param cte: c . CTE, or UNDEFINED.
    :param marginal_cvar: c . marginal CVaR vector.
    """
    vmcvar: Tuple[float, ...]
    vmcvar_bar: MaybeScalar
    cte: MaybeScalar
    marginal_cvar: float


@dataclass(frozen=True)
class MeasureReport:
    """
    All measures at one level for one scenario set.

    :param level: Confidence level.
    :param mvar: Efficient points.
    :param vmcvar: Vector-valued multivariate CVaR.
    :param vmcvar_bar: Expected outcome over the exceedance event.
    :param cte: Lower-orthant conditional tail expectation.
    :param marginal_cvar: Per-criterion univariate CVaR vector.
    :param mcvar_bar_scalar: Scalarized expectation over undesirable outcomes; None without weights.
    :param weights: Weights used for the scalar measures, if any.
    :param scalarized: All vector measures scalarized with the weights, if any.
    """
    level: ConfidenceLevel
    mvar: MVaRSet
    vmcvar: VMCVaRSet
    vmcvar_bar: RiskVector
    cte: RiskVector
    marginal_cvar: RiskVector
    mcvar_bar_scalar: Optional[MaybeScalar] = None
    weights: Optional[ScalarizationWeights] = None
    scalarized: Optional[ScalarizedMeasures] = None


class Law(str, Enum):
    """Properties checked by the law engine."""

    NORMALIZED = "normalized"
    HOMOGENEOUS = "homogeneous"
    TRANSLATION = "translation"
    MONOTONE = "monotone"
    SUBADDITIVITY_VIOLATION = "subadditivity_violation"
    ORDERING = "ordering"
    MARGINAL_BOUND = "marginal_bound"


@dataclass(frozen=True)
class Violation:
    """
    One instance on which a checked relation failed.

    :param seed: (seed, trial) that generated the instance, None for fixed instances.
    :param values: Offending values keyed by name.
    """
    seed: Optional[Tuple[int, int]]
    values: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class LawReport:
    """
    Outcome of checking one law.

    :param law: Law that was checked.
    :param instances_tested: Number of instances the law was evaluated on.
    :param violations: Failures of the proven statement.
    :param counterexamples: Failures of a stronger literal claim that is known not to hold.
    :param expect_violation: True when the check must find violations to pass.
    :param regressions: Reference values that no longer reproduce.
    """
    law: Law
    instances_tested: int = 0
    violations: Tuple[Violation, ...] = ()
    counterexamples: Tuple[Violation, ...] = ()
    expect_violation: bool = False
    regressions: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        """Whether the check passed."""
        if self.regressions:
            return False
        if self.expect_violation:
            return bool(self.violations)
        return not self.violations

    def merge(self, other: "LawReport") -> "LawReport":
        """
        Combine two reports of the same law.

        :param other: Report of further instances.
        :return: Report counting the instances and failures of both.
        """
        if other.law != self.law:
            raise ValueError(f"Cannot merge {other.law.value} into {self.law.value}")
        return LawReport(
            law=self.law,
            instances_tested=self.instances_tested + other.instances_tested,
            violations=self.violations + other.violations,
            counterexamples=self.counterexamples + other.counterexamples,
            expect_violation=self.expect_violation or other.expect_violation,
            regressions=self.regressions + other.regressions,
        )
