"""
Joint CDF, multivariate VaR enumeration and the non-domination filter.

The joint CDF of a finite discrete distribution is a step function whose steps sit on
scenario coordinates, so every p-level efficient point lies on the grid formed by the
distinct coordinate values of each criterion. Enumeration walks that grid in
lexicographic order: a point that dominates another always comes first, so a running
frontier of confirmed points is enough to decide minimality.
"""
from typing import Iterator, List, Optional, Sequence

import numpy as np
from loguru import logger

from mvrisk.config.config import config
from mvrisk.core.errors import DimensionMismatchError, InfeasibleLevelError, TooLargeError
from mvrisk.core.models import ConfidenceLevel, MVaRSet, QuantilePoint, ScenarioSet, Vector
from mvrisk.utils.vectors import as_vector, dominates

ORACLE_BLOCK = 1 << 14


def joint_cdf(scenarios: ScenarioSet, v: Sequence[float]) -> float:
    """
    Evaluate P(X <= v) with componentwise, non-strict comparison.

    :param scenarios: Distribution of X.
    :param v: Point with one component per criterion.
    :return: Probability mass of the lower orthant of v.
    :raises DimensionMismatchError: If v has the wrong length.
    """
    point = np.asarray(as_vector(v, scenarios.dim))
    mask = np.all(scenarios.outcomes <= point, axis=1)
    return float(scenarios.probs[mask].sum())


def quantile_point(scenarios: ScenarioSet, eta: Sequence[float]) -> QuantilePoint:
    """
    Build a QuantilePoint with its CDF value and covered scenarios.

    :param scenarios: Distribution of X.
    :param eta: Candidate quantile vector.
    :return: Point whose cdf is the mass of its covered scenarios.
    """
    vector = as_vector(eta, scenarios.dim)
    mask = np.all(scenarios.outcomes <= np.asarray(vector), axis=1)
    return QuantilePoint(
        eta=vector,
        cdf=float(scenarios.probs[mask].sum()),
        covered=frozenset(int(s) for s in np.flatnonzero(mask)),
    )


def coordinate_grid(scenarios: ScenarioSet) -> List[np.ndarray]:
    """Sorted distinct values of each criterion."""
    return [np.unique(scenarios.outcomes[:, i]) for i in range(scenarios.dim)]


def _grid_batches(axes: List[np.ndarray], rows: int) -> Iterator[np.ndarray]:
    sizes = tuple(len(axis) for axis in axes)
    total = int(np.prod(sizes))
    for start in range(0, total, rows):
        index = np.unravel_index(np.arange(start, min(start + rows, total)), sizes)
        yield np.column_stack([axis[i] for axis, i in zip(axes, index)])


def enumerate_mvar(scenarios: ScenarioSet, level: ConfidenceLevel) -> MVaRSet:
    """
    Enumerate all p-level efficient points by a coordinate-grid scan.

    Grid points already dominated by a confirmed point are skipped before their CDF is
    evaluated; the remaining ones are evaluated in vectorised batches.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :return: Efficient points sorted lexicographically.
    :raises InfeasibleLevelError: If no grid point reaches the level.
    """
    axes = coordinate_grid(scenarios)
    grid_size = int(np.prod([len(axis) for axis in axes]))
    rows = max(1, config.grid_batch_cells // scenarios.n)
    logger.debug(f"Scanning {grid_size} grid points for p={level.p} in batches of {rows}")

    frontier = np.empty((0, scenarios.dim))
    skipped = 0
    for batch in _grid_batches(axes, rows):
        if len(frontier):
            dominated = np.any(np.all(frontier[None, :, :] <= batch[:, None, :], axis=2), axis=1)
            skipped += int(dominated.sum())
            batch = batch[~dominated]
            if not len(batch):
                continue

        covered = np.all(scenarios.outcomes[None, :, :] <= batch[:, None, :], axis=2)
        mass = covered.astype(float) @ scenarios.probs
        for row in np.flatnonzero(mass >= level.p - level.eps):
            eta = batch[row]
            if len(frontier) and np.any(np.all(frontier <= eta, axis=1)):
                continue
            frontier = np.vstack([frontier, eta])

    if not len(frontier):
        raise InfeasibleLevelError(f"No grid point reaches level {level.p!r}")

    logger.debug(f"Found {len(frontier)} efficient points, pruned {skipped} grid points")
    points = tuple(quantile_point(scenarios, eta) for eta in frontier)
    return MVaRSet(level=level, points=points)


def enumerate_mvar_oracle(scenarios: ScenarioSet, level: ConfidenceLevel) -> MVaRSet:
    """
    Enumerate efficient points by scanning every scenario subset.

    Each subset with mass at least p yields the componentwise maximum of its outcomes;
    the minimal maxima are the efficient points. Independent of the grid argument, so it
    serves as a cross-check of enumerate_mvar.

    :param scenarios: Distribution of X with at most oracle_max_scenarios scenarios.
    :param level: Confidence level.
    :return: Efficient points sorted lexicographically.
    :raises TooLargeError: If the set has too many scenarios.
    """
    n = scenarios.n
    if n > config.oracle_max_scenarios:
        raise TooLargeError(f"Subset scan supports at most {config.oracle_max_scenarios} scenarios, got {n}")

    shifts = np.arange(n)
    candidates = np.empty((0, scenarios.dim))
    for start in range(1, 1 << n, ORACLE_BLOCK):
        masks = np.arange(start, min(start + ORACLE_BLOCK, 1 << n))
        bits = ((masks[:, None] >> shifts) & 1).astype(bool)
        mass = bits.astype(float) @ scenarios.probs
        bits = bits[mass >= level.p - level.eps]
        if not len(bits):
            continue
        maxima = np.where(bits[:, :, None], scenarios.outcomes[None, :, :], -np.inf).max(axis=1)
        candidates = np.unique(np.vstack([candidates, maxima]), axis=0)

    if not len(candidates):
        raise InfeasibleLevelError(f"No scenario subset reaches level {level.p!r}")

    minimal = sorted(pareto_min(candidates.tolist(), tol=0.0))
    return MVaRSet(level=level, points=tuple(quantile_point(scenarios, eta) for eta in minimal))


def pareto_min_indices(points: Sequence[Sequence[float]], tol: Optional[float] = None) -> List[int]:
    """
    Indices of the non-dominated points, in input order.

    u dominates v when u_i <= v_i + tol for all i and u_i < v_i - tol for some i.
    Points within tol of an earlier point in every coordinate are dropped as duplicates.

    :param points: Vectors of equal length.
    :param tol: Coordinate tolerance, the configured Pareto tolerance if None.
    :return: Indices of the retained points.
    :raises DimensionMismatchError: If the vectors differ in length.
    """
    if tol is None:
        tol = config.pareto_tol
    if not len(points):
        return []
    if len({len(point) for point in points}) != 1:
        raise DimensionMismatchError("All points must have the same number of components")

    table = np.asarray(points, dtype=float)
    unique: List[int] = []
    for i, point in enumerate(table):
        if not any(np.all(np.abs(table[j] - point) <= tol) for j in unique):
            unique.append(i)

    kept = table[unique]
    dominated = np.any(dominates(kept[:, None, :], kept[None, :, :], tol), axis=0)
    return [index for index, flag in zip(unique, dominated) if not flag]


def pareto_min(points: Sequence[Sequence[float]], tol: Optional[float] = None) -> List[Vector]:
    """
    Non-dominated subset of points under the minimization convention.

    :param points: Vectors of equal length.
    :param tol: Coordinate tolerance, the configured Pareto tolerance if None.
    :return: Retained vectors, in input order.
    """
    return [as_vector(points[i]) for i in pareto_min_indices(points, tol)]
