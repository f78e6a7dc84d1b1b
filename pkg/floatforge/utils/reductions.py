"""
Deterministic Reductions

Global sums (mass, momentum, forces) go through math.fsum so the result is
the correctly rounded sum of the inputs, independent of how the inputs were
partitioned between workers.
"""

import math
from typing import Iterable, Union

import numpy as np

ArrayLike = Union[np.ndarray, Iterable[float]]


def deterministic_sum(values: ArrayLike) -> float:
    """Correctly rounded sum of all entries of ``values``."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    return math.fsum(arr.tolist())


def deterministic_vector_sum(vectors: ArrayLike) -> np.ndarray:
    """
    Component-wise correctly rounded sum of an (N, 3) array of vectors.

    Returns a zero vector for empty input.
    """
    arr = np.asarray(vectors, dtype=np.float64).reshape(-1, 3)
    return np.array([math.fsum(arr[:, k].tolist()) for k in range(3)])
