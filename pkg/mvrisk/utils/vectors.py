"""
Componentwise comparisons of real vectors under the minimization convention.
"""
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike

from mvrisk.core.errors import DimensionMismatchError
from mvrisk.core.models import Vector


def as_vector(values: Iterable[float], dim: int = 0) -> Vector:
    """
    Convert values to a tuple of floats.

    :param values: Components.
    :param dim: Expected number of components, 0 to skip the check.
    :return: Vector as a tuple.
    :raises DimensionMismatchError: If the length differs from dim.
    """
    vector = tuple(float(value) for value in values)
    if dim and len(vector) != dim:
        raise DimensionMismatchError(f"Expected {dim} components, got {len(vector)}")
    return vector


def dominates(u: ArrayLike, v: ArrayLike, tol: float = 0.0) -> Union[bool, np.ndarray]:
    """
    Whether u dominates v: u <= v + tol everywhere and u < v - tol somewhere.

    Compares along the last axis and broadcasts over the others, so stacked inputs
    give a boolean array instead of a bool.
    """
    a, b = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    result = np.all(a <= b + tol, axis=-1) & np.any(a < b - tol, axis=-1)
    return bool(result) if result.ndim == 0 else result


def weakly_below(u: Sequence[float], v: Sequence[float], tol: float = 0.0) -> bool:
    """Whether u <= v + tol in every component."""
    return bool(np.all(np.asarray(u, dtype=float) <= np.asarray(v, dtype=float) + tol))


def close(u: Sequence[float], v: Sequence[float], tol: float) -> bool:
    """Whether u and v agree within tol in every component, relative to their size above 1."""
    a, b = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return a.shape == b.shape and bool(np.allclose(a, b, rtol=tol, atol=tol))


def contains(vectors: Iterable[Sequence[float]], v: Sequence[float], tol: float) -> bool:
    """Whether some member of vectors is within tol of v."""
    return any(close(member, v, tol) for member in vectors)
