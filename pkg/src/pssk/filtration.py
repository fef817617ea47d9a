"""Sublevel-set (lower-star) filtrations of 1D signals, images and triangle meshes.

Every builder enumerates cells (vertices first, then edges, then 2-cells),
assigns each the maximum of its vertex values, and sorts them by
``(value, dimension, enumeration index)``.  Boundaries are stored as sorted
lists of positions in that sorted order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BadIndex, DegenerateTriangle, EmptyInput, InvalidComplex, NonFinite

__all__ = [
    "FilteredComplex",
    "build_path_filtration",
    "build_cubical_filtration",
    "build_lower_star_filtration",
]


@dataclass(frozen=True)
class FilteredComplex:
    """Cells of a filtered cell complex in filtration order.

    ``maxdim`` is the highest homology degree reported by
    :func:`pssk.persistence.compute_persistence` for this complex.
    """

    dims: tuple[int, ...]
    values: tuple[float, ...]
    boundaries: tuple[tuple[int, ...], ...]
    maxdim: int = 0
    original: tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.dims)

    def count(self, dim: int) -> int:
        return sum(1 for d in self.dims if d == dim)

    def values_of(self, dim: int) -> list[float]:
        return [v for d, v in zip(self.dims, self.values) if d == dim]

    def validate(self) -> None:
        """Raise :class:`InvalidComplex` unless boundaries and order are consistent."""
        n = len(self.dims)
        if len(self.values) != n or len(self.boundaries) != n:
            raise InvalidComplex("dims, values and boundaries differ in length")
        prev = None
        for j in range(n):
            d, v = self.dims[j], self.values[j]
            if not np.isfinite(v):
                raise InvalidComplex(f"cell {j} has non-finite value")
            key = (v, d)
            if prev is not None and key < prev:
                raise InvalidComplex(f"cell {j} is out of filtration order")
            prev = key
            bd = self.boundaries[j]
            if d == 0 and bd:
                raise InvalidComplex(f"vertex {j} has a nonempty boundary")
            if list(bd) != sorted(set(bd)):
                raise InvalidComplex(f"boundary of cell {j} is not sorted and duplicate-free")
            for i in bd:
                if not 0 <= i < j:
                    raise InvalidComplex(f"cell {j} has boundary face {i} not preceding it")
                if self.dims[i] != d - 1:
                    raise InvalidComplex(f"cell {j} has a face of dimension {self.dims[i]}")
                if self.values[i] > v:
                    raise InvalidComplex(f"face {i} of cell {j} enters later than the cell")


def _finalize(dims: list[int], values: list[float], faces: list[tuple[int, ...]],
              maxdim: int) -> FilteredComplex:
    n = len(dims)
    order = sorted(range(n), key=lambda k: (values[k], dims[k], k))
    pos = [0] * n
    for new, old in enumerate(order):
        pos[old] = new
    return FilteredComplex(
        dims=tuple(dims[k] for k in order),
        values=tuple(float(values[k]) for k in order),
        boundaries=tuple(tuple(sorted(pos[f] for f in faces[k])) for k in order),
        maxdim=maxdim,
        original=tuple(order),
    )


def _finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NonFinite(f"{what} contains a non-finite value")


def build_path_filtration(f: Sequence[float]) -> FilteredComplex:
    """Path graph on the samples; edge ``(i, i+1)`` enters at ``max(f[i], f[i+1])``."""
    vals = np.asarray(f, dtype=np.float64).ravel()
    if vals.size == 0:
        raise EmptyInput("a 1D signal needs at least one sample")
    _finite(vals, "signal")
    n = vals.size
    dims = [0] * n + [1] * (n - 1)
    values = vals.tolist() + np.maximum(vals[:-1], vals[1:]).tolist()
    faces = [()] * n + [(i, i + 1) for i in range(n - 1)]
    return _finalize(dims, values, faces, maxdim=0)


def build_cubical_filtration(img) -> FilteredComplex:
    """Cubical complex with one vertex per pixel (V-construction).

    Edges join 4-neighbours; each 2x2 block of pixels spans a square.
    Edges and squares take the maximum pixel value of their vertices.
    """
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise EmptyInput("an image needs at least one row and one column")
    _finite(a, "image")
    rows, cols = a.shape
    vid = np.arange(rows * cols).reshape(rows, cols)
    flat = a.ravel().tolist()
    dims = [0] * (rows * cols)
    values = list(flat)
    faces: list[tuple[int, ...]] = [()] * (rows * cols)
    hid = {}
    vtid = {}
    for r in range(rows):
        for c in range(cols - 1):
            u, v = vid[r, c], vid[r, c + 1]
            hid[r, c] = len(dims)
            dims.append(1)
            values.append(max(flat[u], flat[v]))
            faces.append((int(u), int(v)))
    for r in range(rows - 1):
        for c in range(cols):
            u, v = vid[r, c], vid[r + 1, c]
            vtid[r, c] = len(dims)
            dims.append(1)
            values.append(max(flat[u], flat[v]))
            faces.append((int(u), int(v)))
    for r in range(rows - 1):
        for c in range(cols - 1):
            dims.append(2)
            values.append(float(a[r:r + 2, c:c + 2].max()))
            faces.append((hid[r, c], hid[r + 1, c], vtid[r, c], vtid[r, c + 1]))
    return _finalize(dims, values, faces, maxdim=1)


def build_lower_star_filtration(n_vertices: int, triangles, values) -> FilteredComplex:
    """Lower-star filtration of a triangle mesh with a per-vertex function."""
    vals = np.asarray(values, dtype=np.float64).ravel()
    if vals.size != n_vertices:
        raise BadIndex(f"expected {n_vertices} vertex values, got {vals.size}")
    _finite(vals, "vertex function")
    tris = [tuple(int(i) for i in t) for t in triangles]
    dims = [0] * n_vertices
    cellvals = vals.tolist()
    faces: list[tuple[int, ...]] = [()] * n_vertices
    edge_id: dict[tuple[int, int], int] = {}

    def edge(u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        if key not in edge_id:
            edge_id[key] = len(dims)
            dims.append(1)
            cellvals.append(max(cellvals[key[0]], cellvals[key[1]]))
            faces.append(key)
        return edge_id[key]

    tri_faces = []
    for k, t in enumerate(tris):
        if len(t) != 3:
            raise BadIndex(f"triangle {k} does not have three vertices")
        if any(not 0 <= i < n_vertices for i in t):
            raise BadIndex(f"triangle {k} references a vertex outside [0, {n_vertices})")
        a, b, c = t
        if a == b or b == c or a == c:
            raise DegenerateTriangle(f"triangle {k} repeats a vertex: {t}")
        tri_faces.append((edge(a, b), edge(b, c), edge(a, c), max(vals[a], vals[b], vals[c])))
    seen = set()
    for k, (e1, e2, e3, v) in enumerate(tri_faces):
        key = tuple(sorted(tris[k]))
        if key in seen:
            continue
        seen.add(key)
        dims.append(2)
        cellvals.append(float(v))
        faces.append((e1, e2, e3))
    return _finalize(dims, cellvals, faces, maxdim=1)
