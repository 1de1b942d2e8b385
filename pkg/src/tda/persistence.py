"""Persistence diagrams of gridded scalar fields via cubical lower-star filtration.

A field on a lattice with `res[i]` sites per axis induces a cubical complex
whose cells live on the doubled lattice of extents 2*res[i] - 1: even
coordinates are vertex positions, odd coordinates span an interval, and the
cell dimension is the number of odd coordinates.  Each cell's filtration value
is the maximum of its vertices' values (lower-star rule), and cells are
ordered by (value, dimension, cell id), which guarantees faces never come
after their cofaces.

Pairing uses the standard boundary-matrix column reduction over GF(2),
processed one dimension at a time from the top so that columns already
identified as creators can be cleared.  Superlevel fields are handled by
negating values up front; on output, finite (birth, death) pairs are negated
and swapped back, and essential features keep death = +inf with birth mapped
to the level at which they appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SUBLEVEL, SUPERLEVEL, EvaluationGrid, PersistenceDiagram, ScalarField

__all__ = ["CubicalComplex", "build_complex", "compute_diagram", "lifetimes"]


@dataclass(frozen=True)
class CubicalComplex:
    """All cubes induced by the lattice, with lower-star filtration values.

    `cell_values` and `cell_dims` are indexed by cell id = row-major linear
    index into the doubled lattice of extents `shape`; `order` lists cell ids
    sorted by (filtration value, dimension, id).  Values are in the working
    (sublevel) scale: negated relative to the field when the field is
    superlevel-oriented.
    """

    grid: EvaluationGrid
    orientation: str
    shape: tuple
    cell_values: np.ndarray
    cell_dims: np.ndarray
    order: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.cell_values.shape[0]

    def cell_count(self, dim: int) -> int:
        return int(np.count_nonzero(self.cell_dims == dim))


def build_complex(field: ScalarField) -> CubicalComplex:
    """Cubical complex of the field with lower-star filtration values."""
    grid = field.grid
    res = tuple(int(r) for r in grid.resolution)
    d = grid.dim
    work = field.values if field.orientation == SUBLEVEL else -field.values

    shape = tuple(2 * r - 1 for r in res)
    cells = np.empty(shape)
    cells[(slice(None, None, 2),) * d] = work.reshape(res)
    # Fill odd slabs axis by axis; after processing axis a, every entry whose
    # coordinates are even on all axes > a holds its correct lower-star value.
    for ax in range(d):
        odd = [slice(None)] * d
        lo = [slice(None)] * d
        hi = [slice(None)] * d
        odd[ax] = slice(1, None, 2)
        lo[ax] = slice(0, -1, 2)
        hi[ax] = slice(2, None, 2)
        cells[tuple(odd)] = np.maximum(cells[tuple(lo)], cells[tuple(hi)])

    parities = [(np.arange(extent) % 2).astype(np.uint8) for extent in shape]
    mesh = np.meshgrid(*parities, indexing="ij")
    cell_dims = sum(m.reshape(-1) for m in mesh).astype(np.uint8)
    cell_values = cells.reshape(-1)

    order = np.lexsort((cell_dims, cell_values))
    return CubicalComplex(grid, field.orientation, shape, cell_values, cell_dims, order)


def _strides(shape: tuple) -> np.ndarray:
    strides = np.ones(len(shape), dtype=np.int64)
    for i in range(len(shape) - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]
    return strides


def compute_diagram(complex_: CubicalComplex) -> PersistenceDiagram:
    """Persistence pairing of the complex by column reduction with clearing.

    Zero-persistence pairs are dropped; essential classes get death = +inf.
    Births and deaths are reported in the original field's value scale.
    """
    shape = complex_.shape
    d = len(shape)
    values = complex_.cell_values
    dims = complex_.cell_dims
    order = complex_.order
    n = order.shape[0]

    pos_of = np.empty(n, dtype=np.int64)
    pos_of[order] = np.arange(n, dtype=np.int64)
    strides = _strides(shape)
    extents = np.asarray(shape, dtype=np.int64)

    def face_positions(cell_id: int) -> np.ndarray:
        coords = (cell_id // strides) % extents
        faces = []
        for ax in np.nonzero(coords % 2)[0]:
            faces.append(cell_id - strides[ax])
            faces.append(cell_id + strides[ax])
        return np.sort(pos_of[np.asarray(faces, dtype=np.int64)])

    positions_by_dim = [np.nonzero(dims[order] == p)[0] for p in range(d + 1)]
    cleared = np.zeros(n, dtype=bool)
    pairs = []
    essential_positions = []

    for p in range(d, 0, -1):
        lowinv: dict[int, np.ndarray] = {}
        for pos in positions_by_dim[p]:
            if cleared[pos]:
                continue
            col = face_positions(int(order[pos]))
            while col.size:
                low = int(col[-1])
                other = lowinv.get(low)
                if other is None:
                    break
                col = np.setxor1d(col, other, assume_unique=True)
            if col.size:
                low = int(col[-1])
                lowinv[low] = col
                cleared[low] = True
                pairs.append((low, int(pos)))
            else:
                essential_positions.append(int(pos))

    for pos in positions_by_dim[0]:
        if not cleared[pos]:
            essential_positions.append(int(pos))

    superlevel = complex_.orientation == SUPERLEVEL
    feats = []
    for birth_pos, death_pos in pairs:
        birth = float(values[order[birth_pos]])
        death = float(values[order[death_pos]])
        if birth == death:
            continue
        fdim = int(dims[order[birth_pos]])
        if superlevel:
            birth, death = -death, -birth
        feats.append((fdim, birth, death))
    for pos in essential_positions:
        fdim = int(dims[order[pos]])
        if fdim > d - 1:
            continue
        birth = float(values[order[pos]])
        if superlevel:
            birth = -birth
        feats.append((fdim, birth, math.inf))
    return PersistenceDiagram(tuple(feats))


def lifetimes(diagram: PersistenceDiagram, dim: int):
    """Finite lifetimes in one dimension, sorted descending, plus the count
    of infinite-death features reported separately."""
    finite = []
    n_infinite = 0
    for f in diagram.in_dim(dim):
        if math.isinf(f.death):
            n_infinite += 1
        else:
            finite.append(f.death - f.birth)
    return np.sort(np.asarray(finite))[::-1], n_infinite
