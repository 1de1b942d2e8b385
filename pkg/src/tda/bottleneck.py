"""Exact bottleneck distance between persistence diagrams.

Finite-death features are matched through the standard diagonal augmentation:
each side is padded with interchangeable diagonal slots for the other side's
points, a point may always retire to the diagonal at cost (death - birth) / 2,
and diagonal-to-diagonal matches are free.  The distance is found by binary
search over the finite set of candidate costs, testing feasibility with a
maximum bipartite matching, so the result is exact: always 0 or an element of
the candidate set.

Infinite-death features must pair with infinite-death features; they are
matched monotonically by sorted birth (optimal on a line) and a count
mismatch makes the distance +inf.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import PersistenceDiagram

__all__ = ["bottleneck_distance", "bottleneck_all_dims"]


def _split_dim(diagram: PersistenceDiagram, dim: int):
    finite = []
    infinite = []
    for f in diagram.in_dim(dim):
        if math.isinf(f.death):
            infinite.append(f.birth)
        else:
            finite.append((f.birth, f.death))
    return np.asarray(finite, dtype=float).reshape(-1, 2), np.sort(np.asarray(infinite))


def _feasible(cross: np.ndarray, diag_p: np.ndarray, diag_q: np.ndarray, t: float) -> bool:
    """Perfect matching in the threshold graph at cost bound t."""
    n1, n2 = cross.shape
    size = n1 + n2
    allowed = np.zeros((size, size), dtype=bool)
    allowed[:n1, :n2] = cross <= t
    allowed[:n1, n2:] = (diag_p <= t)[:, None]
    allowed[n1:, :n2] = (diag_q <= t)[None, :]
    allowed[n1:, n2:] = True
    match = maximum_bipartite_matching(csr_matrix(allowed), perm_type="column")
    return bool((match != -1).all())


def _finite_bottleneck(p: np.ndarray, q: np.ndarray) -> float:
    n1, n2 = len(p), len(q)
    if n1 == 0 and n2 == 0:
        return 0.0
    diag_p = (p[:, 1] - p[:, 0]) / 2.0 if n1 else np.empty(0)
    diag_q = (q[:, 1] - q[:, 0]) / 2.0 if n2 else np.empty(0)
    if n1 == 0:
        return float(diag_q.max())
    if n2 == 0:
        return float(diag_p.max())
    cross = np.maximum(
        np.abs(p[:, 0, None] - q[None, :, 0]), np.abs(p[:, 1, None] - q[None, :, 1])
    )
    candidates = np.unique(np.concatenate([cross.reshape(-1), diag_p, diag_q, [0.0]]))
    lo, hi = 0, len(candidates) - 1
    if not _feasible(cross, diag_p, diag_q, candidates[hi]):  # pragma: no cover
        raise AssertionError("matching infeasible at the largest candidate cost")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cross, diag_p, diag_q, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int) -> float:
    """Bottleneck distance between the dim-dimensional parts of two diagrams."""
    p, inf1 = _split_dim(d1, dim)
    q, inf2 = _split_dim(d2, dim)
    if len(inf1) != len(inf2):
        return math.inf
    inf_cost = float(np.abs(inf1 - inf2).max()) if len(inf1) else 0.0
    return max(inf_cost, _finite_bottleneck(p, q))


def bottleneck_all_dims(d1: PersistenceDiagram, d2: PersistenceDiagram) -> dict:
    """Bottleneck distance for every dimension present in either diagram."""
    dims = sorted(set(d1.dims()) | set(d2.dims()))
    return {dim: bottleneck_distance(d1, d2, dim) for dim in dims}
