"""Persistence diagrams of filtered complexes.

:func:`compute_persistence` runs the standard column reduction over Z/2 with
the clearing optimisation; columns are Python integers used as bitsets, so a
column addition is a single XOR.  :func:`compute_persistence_dim0` is the
union-find shortcut for connected components (elder rule).
"""
from __future__ import annotations

from .diagram import PersistenceDiagram
from .errors import InvalidComplex
from .filtration import FilteredComplex

__all__ = ["persistence_pairs", "compute_persistence", "compute_persistence_dim0"]


def persistence_pairs(c: FilteredComplex, validate: bool = True) -> list[tuple[int, int]]:
    """Index pairs ``(birth cell, death cell)`` from the reduced boundary matrix."""
    if validate:
        c.validate()
    n = len(c)
    top = max(c.dims, default=0)
    by_dim: list[list[int]] = [[] for _ in range(top + 1)]
    for j, d in enumerate(c.dims):
        by_dim[d].append(j)
    pivot_col: dict[int, int] = {}
    reduced: dict[int, int] = {}
    cleared = [False] * n
    pairs = []
    for d in range(top, 0, -1):
        for j in by_dim[d]:
            if cleared[j]:
                continue
            col = 0
            for i in c.boundaries[j]:
                col |= 1 << i
            while col:
                low = col.bit_length() - 1
                k = pivot_col.get(low)
                if k is None:
                    break
                col ^= reduced[k]
            if col:
                low = col.bit_length() - 1
                pivot_col[low] = j
                reduced[j] = col
                cleared[low] = True
                pairs.append((low, j))
    pairs.sort(key=lambda p: p[1])
    return pairs


def _diagrams_from_pairs(c: FilteredComplex, pairs, maxdim: int) -> list[PersistenceDiagram]:
    pts: list[list[tuple[float, float]]] = [[] for _ in range(maxdim + 1)]
    for i, j in pairs:
        d = c.dims[i]
        b, de = c.values[i], c.values[j]
        if d <= maxdim and de > b:
            pts[d].append((b, de))
    return [PersistenceDiagram(p, dim=k) for k, p in enumerate(pts)]


def compute_persistence(c: FilteredComplex, maxdim: int | None = None) -> list[PersistenceDiagram]:
    """Diagrams for dimensions ``0..maxdim``; zero-persistence and essential classes dropped."""
    maxdim = c.maxdim if maxdim is None else maxdim
    return _diagrams_from_pairs(c, persistence_pairs(c), maxdim)


def compute_persistence_dim0(c: FilteredComplex, validate: bool = True) -> PersistenceDiagram:
    """Connected-component persistence by union-find.

    When two components meet along an edge, the one whose oldest vertex
    entered later in the filtration dies at the edge's value.
    """
    if validate:
        c.validate()
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    pts = []
    for j, d in enumerate(c.dims):
        if d == 0:
            parent[j] = j
        elif d == 1:
            bd = c.boundaries[j]
            if len(bd) != 2:
                raise InvalidComplex(f"edge {j} must have two vertices")
            ru, rv = find(bd[0]), find(bd[1])
            if ru == rv:
                continue
            # roots are the oldest vertex of their component
            elder, younger = (ru, rv) if ru < rv else (rv, ru)
            parent[younger] = elder
            if c.values[j] > c.values[younger]:
                pts.append((c.values[younger], c.values[j]))
    return PersistenceDiagram(pts, dim=0)
