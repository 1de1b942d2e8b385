"""Shared numeric helpers."""

from __future__ import annotations

import math

import numpy as np

# Target element count for chunked pairwise-distance work (~128 MB of doubles
# for the (chunk, n, d) intermediate at d=3).
_CHUNK_ELEMS = 1 << 22


def snapped_ceil(x: float, tol: float = 1e-9) -> int:
    """Ceiling of x, snapping to the nearest integer when x is within tol of it.

    Guards integer-valued products like 0.4 * 5 that land on 2.0000000000000004
    in floating point and would otherwise ceil to 3.
    """
    nearest = round(x)
    if abs(x - nearest) <= tol:
        return int(nearest)
    return int(math.ceil(x))


def pairwise_sqdist(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, shape (len(queries), len(points)).

    Computed as sum((q - p)**2) coordinate-wise so a single-query call and a
    batched call produce bit-identical values.
    """
    diff = queries[:, None, :] - points[None, :, :]
    return (diff * diff).sum(axis=2)


def query_chunks(n_queries: int, n_points: int, dim: int):
    """Yield slices covering range(n_queries), sized to bound temp memory."""
    per_row = max(1, n_points * dim)
    chunk = max(1, _CHUNK_ELEMS // per_row)
    for start in range(0, n_queries, chunk):
        yield slice(start, min(start + chunk, n_queries))
