"""Gaussian kernel density estimator and the discrete kernel distance.

Both are driven by the kernel K(x, y) = exp(-||x - y||^2 / (2 h^2)).  The two
fields satisfy an exact finite-sample identity at every point x:

    Dk^2(x) + 2 * (sqrt(2 pi) h)^d * kde(x) = self_energy + 1,

where self_energy = (1/n^2) sum_ij K(X_i, X_j) depends only on the cloud.
The identity makes the sublevel sets of the squared kernel distance a
rescaling of the superlevel sets of the density estimate, which the tests
check both on values and on persistence diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import pairwise_sqdist, query_chunks
from .core import SUBLEVEL, SUPERLEVEL, EvaluationGrid, PointCloud, ScalarField, grid_sites

__all__ = [
    "KernelParams",
    "gaussian_kernel",
    "kde_normalization",
    "kernel_self_energy",
    "kde_at",
    "kde_values",
    "kde_field",
    "kernel_distance_at",
    "kernel_distance_values",
    "kernel_distance_field",
]

# Radicand of the kernel distance more negative than this signals a broken
# kernel; magnitudes below it are treated as rounding and clamped to zero.
_RADICAND_FLOOR = -1e-9
_RADICAND_ROUNDING = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Gaussian kernel bandwidth h > 0, in the coordinate units of the data."""

    h: float

    def __post_init__(self):
        if not (self.h > 0.0 and math.isfinite(self.h)):
            raise ValueError(f"bandwidth h must be a positive finite real, got {self.h}")


def gaussian_kernel(sqdist: np.ndarray, h: float) -> np.ndarray:
    """exp(-sqdist / (2 h^2)); the single place the kernel shape lives."""
    return np.exp(-sqdist / (2.0 * h * h))


def kde_normalization(dim: int, h: float) -> float:
    """The (sqrt(2 pi) h)^d volume factor of the Gaussian density."""
    return (math.sqrt(2.0 * math.pi) * h) ** dim


def _kernel_row_means(cloud: PointCloud, params: KernelParams, queries: np.ndarray) -> np.ndarray:
    """(1/n) sum_i K(q, X_i) for each query q."""
    out = np.empty(len(queries))
    for block in query_chunks(len(queries), cloud.n, cloud.dim):
        sq = pairwise_sqdist(queries[block], cloud.points)
        out[block] = gaussian_kernel(sq, params.h).mean(axis=1)
    return out


def _check_queries(cloud: PointCloud, queries) -> np.ndarray:
    queries = np.asarray(queries, dtype=float)
    if queries.ndim == 1:
        queries = queries.reshape(1, -1)
    if queries.shape[1] != cloud.dim:
        raise ValueError(f"query dimension {queries.shape[1]} != cloud dimension {cloud.dim}")
    return queries


def kernel_self_energy(cloud: PointCloud, params: KernelParams) -> float:
    """(1/n^2) * sum_i sum_j K(X_i, X_j). Computed once per cloud and reused."""
    cloud.require_nonempty()
    total = 0.0
    for block in query_chunks(cloud.n, cloud.n, cloud.dim):
        sq = pairwise_sqdist(cloud.points[block], cloud.points)
        total += float(gaussian_kernel(sq, params.h).sum())
    return total / (cloud.n * cloud.n)


def kde_values(cloud: PointCloud, params: KernelParams, queries) -> np.ndarray:
    """Kernel density estimate at each query: mean kernel over the data, normalized."""
    cloud.require_nonempty()
    queries = _check_queries(cloud, queries)
    return _kernel_row_means(cloud, params, queries) / kde_normalization(cloud.dim, params.h)


def kde_at(cloud: PointCloud, params: KernelParams, query) -> float:
    return float(kde_values(cloud, params, np.atleast_2d(np.asarray(query, dtype=float)))[0])


def kde_field(cloud: PointCloud, params: KernelParams, grid: EvaluationGrid) -> ScalarField:
    """Density estimate on the grid; superlevel sets carry the topology."""
    if cloud.dim != grid.dim:
        raise ValueError(f"cloud dimension {cloud.dim} != grid dimension {grid.dim}")
    return ScalarField(grid, kde_values(cloud, params, grid_sites(grid)), SUPERLEVEL)


def kernel_distance_values(
    cloud: PointCloud,
    params: KernelParams,
    queries,
    self_energy: float | None = None,
    squared: bool = False,
) -> np.ndarray:
    """Kernel distance between the empirical measure and a Dirac at each query.

    The radicand self_energy + 1 - (2/n) sum_i K(q, X_i) is clamped at zero
    when it is negative by rounding only; larger negative values raise, since
    the Gaussian kernel cannot produce them.
    """
    cloud.require_nonempty()
    queries = _check_queries(cloud, queries)
    if self_energy is None:
        self_energy = kernel_self_energy(cloud, params)
    radicand = self_energy + 1.0 - 2.0 * _kernel_row_means(cloud, params, queries)
    worst = radicand.min()
    if worst < _RADICAND_FLOOR:
        raise ArithmeticError(
            f"kernel distance radicand {worst} is negative beyond rounding; "
            "the kernel is not positive definite in this configuration"
        )
    np.clip(radicand, 0.0, None, out=radicand)
    return radicand if squared else np.sqrt(radicand)


def kernel_distance_at(
    cloud: PointCloud, params: KernelParams, query, self_energy: float | None = None
) -> float:
    return float(
        kernel_distance_values(
            cloud, params, np.atleast_2d(np.asarray(query, dtype=float)), self_energy
        )[0]
    )


def kernel_distance_field(
    cloud: PointCloud, params: KernelParams, grid: EvaluationGrid, squared: bool = False
) -> ScalarField:
    """Kernel distance on the grid (sublevel orientation).

    `squared=True` gives the squared distance, the variant whose sublevel sets
    rescale exactly to the density superlevel sets; that is the field used for
    persistence downstream.
    """
    if cloud.dim != grid.dim:
        raise ValueError(f"cloud dimension {cloud.dim} != grid dimension {grid.dim}")
    vals = kernel_distance_values(cloud, params, grid_sites(grid), squared=squared)
    return ScalarField(grid, vals, SUBLEVEL)
