"""Core geometric types shared by every module, plus the nearest-point distance field.

The types here are deliberately small and immutable: a point cloud is a
read-only (n, d) array, an evaluation grid is an axis-aligned lattice with
both endpoints included, a scalar field is one value per lattice site, and a
persistence diagram is a sorted tuple of (dim, birth, death) features.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._util import pairwise_sqdist, query_chunks

SUBLEVEL = "sublevel"
SUPERLEVEL = "superlevel"

__all__ = [
    "SUBLEVEL",
    "SUPERLEVEL",
    "PointCloud",
    "EvaluationGrid",
    "ScalarField",
    "Feature",
    "PersistenceDiagram",
    "grid_sites",
    "empirical_distance_field",
    "load_points_csv",
    "save_points_csv",
    "save_field_csv",
    "diagram_to_json",
    "diagram_from_json",
    "save_diagram_json",
    "load_diagram_json",
]


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2:
        raise ValueError(f"points must be an (n, d) array, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class PointCloud:
    """A sample of n points in d-dimensional Euclidean space.

    Coordinates must be finite. A 1-dimensional input array of length n is
    interpreted as n points on the line.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.points).copy()
        if pts.shape[1] < 1:
            raise ValueError("point dimension must be >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def require_nonempty(self) -> None:
        if self.n < 1:
            raise ValueError("operation requires a nonempty point cloud")


@dataclass(frozen=True)
class EvaluationGrid:
    """Axis-aligned lattice: `resolution[i]` sites per axis, endpoints included.

    Sites enumerate in row-major order, axis 0 slowest, so site j along axis i
    sits at lower[i] + j * (upper[i] - lower[i]) / (resolution[i] - 1).
    """

    lower: np.ndarray
    upper: np.ndarray
    resolution: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        res = np.atleast_1d(np.asarray(self.resolution, dtype=int)).copy()
        if not (lower.shape == upper.shape == res.shape) or lower.ndim != 1:
            raise ValueError("lower, upper, resolution must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("grid bounds must be finite")
        if not np.all(lower < upper):
            raise ValueError(f"need lower < upper on every axis, got lower={lower}, upper={upper}")
        if not np.all(res >= 2):
            raise ValueError(f"need at least 2 sites per axis, got resolution={res}")
        for arr in (lower, upper, res):
            arr.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "resolution", res)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.resolution))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return np.linspace(self.lower[axis], self.upper[axis], self.resolution[axis])

    def site_coordinates(self, index: int) -> np.ndarray:
        """Coordinates of the site with the given row-major linear index."""
        multi = np.unravel_index(index, tuple(self.resolution))
        return np.array([self.axis_coordinates(ax)[i] for ax, i in enumerate(multi)])

    def nearest_site_index(self, point) -> int:
        """Row-major index of the lattice site closest to `point`."""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        step = (self.upper - self.lower) / (self.resolution - 1)
        idx = np.rint((point - self.lower) / step).astype(int)
        idx = np.clip(idx, 0, self.resolution - 1)
        return int(np.ravel_multi_index(tuple(idx), tuple(self.resolution)))


def grid_sites(grid: EvaluationGrid) -> np.ndarray:
    """All site coordinates of the grid as an (n_sites, d) array, row-major."""
    axes = [grid.axis_coordinates(i) for i in range(grid.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


@dataclass(frozen=True)
class ScalarField:
    """One finite value per grid site plus the filtration direction that matters.

    Distance-like fields are `sublevel`; density fields are `superlevel`.
    """

    grid: EvaluationGrid
    values: np.ndarray
    orientation: str = SUBLEVEL

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1).copy()
        if vals.shape[0] != self.grid.n_sites:
            raise ValueError(
                f"field has {vals.shape[0]} values but grid has {self.grid.n_sites} sites"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        if self.orientation not in (SUBLEVEL, SUPERLEVEL):
            raise ValueError(f"orientation must be {SUBLEVEL!r} or {SUPERLEVEL!r}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


class Feature(NamedTuple):
    """A persistence feature: homology dimension, birth value, death value.

    `death` is math.inf for essential features; otherwise birth <= death.
    """

    dim: int
    birth: float
    death: float

    @property
    def lifetime(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of features, stored sorted by (dim, birth, death)."""

    features: tuple

    def __post_init__(self):
        feats = tuple(sorted(Feature(int(d), float(b), float(v)) for d, b, v in self.features))
        for f in feats:
            if not (f.birth <= f.death):
                raise ValueError(f"feature {f} has birth > death")
            if math.isinf(f.birth):
                raise ValueError(f"feature {f} has non-finite birth")
        object.__setattr__(self, "features", feats)

    def in_dim(self, dim: int) -> tuple:
        return tuple(f for f in self.features if f.dim == dim)

    def dims(self) -> tuple:
        return tuple(sorted({f.dim for f in self.features}))

    def __len__(self) -> int:
        return len(self.features)


def empirical_distance_field(cloud: PointCloud, grid: EvaluationGrid) -> ScalarField:
    """Distance from each grid site to the nearest data point.

    Exact brute-force scan in double precision; orientation is sublevel.
    """
    cloud.require_nonempty()
    if cloud.dim != grid.dim:
        raise ValueError(f"cloud dimension {cloud.dim} != grid dimension {grid.dim}")
    sites = grid_sites(grid)
    values = np.empty(len(sites))
    for block in query_chunks(len(sites), cloud.n, cloud.dim):
        sq = pairwise_sqdist(sites[block], cloud.points)
        values[block] = np.sqrt(sq.min(axis=1))
    return ScalarField(grid, values, SUBLEVEL)


# ---------------------------------------------------------------------------
# File formats: headerless CSV for clouds, coordinate+value CSV for fields,
# JSON for diagrams (death serialized as the string "inf" when infinite).
# ---------------------------------------------------------------------------


def load_points_csv(path) -> PointCloud:
    pts = np.loadtxt(path, delimiter=",", ndmin=2)
    return PointCloud(pts)


def save_points_csv(cloud: PointCloud, path) -> None:
    np.savetxt(path, cloud.points, delimiter=",", fmt="%.17g")


def save_field_csv(field: ScalarField, path) -> None:
    sites = grid_sites(field.grid)
    np.savetxt(path, np.column_stack([sites, field.values]), delimiter=",", fmt="%.17g")


def diagram_to_json(diagram: PersistenceDiagram) -> str:
    feats = [
        {"dim": f.dim, "birth": f.birth, "death": "inf" if math.isinf(f.death) else f.death}
        for f in diagram.features
    ]
    return json.dumps({"features": feats}, sort_keys=True)


def diagram_from_json(text: str) -> PersistenceDiagram:
    raw = json.loads(text)
    feats = [
        (f["dim"], f["birth"], math.inf if f["death"] == "inf" else f["death"])
        for f in raw["features"]
    ]
    return PersistenceDiagram(tuple(feats))


def save_diagram_json(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w") as fh:
        fh.write(diagram_to_json(diagram))
        fh.write("\n")


def load_diagram_json(path) -> PersistenceDiagram:
    with open(path) as fh:
        return diagram_from_json(fh.read())
