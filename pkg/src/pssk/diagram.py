"""Persistence diagrams: canonical representation, point helpers and text I/O.

A diagram is a finite multiset of ``(birth, death)`` points with
``death >= birth``, tagged with a homology dimension.  Points at infinity
(essential classes) are not representable.  Points are kept sorted
lexicographically by ``(birth, death)`` so that two diagrams are equal exactly
when their point sequences are equal.
"""
from __future__ import annotations

import io
import math
import re
from typing import Iterable, Iterator, NamedTuple, Sequence, TextIO, Union

import numpy as np

from .errors import DeathBeforeBirth, DimensionMismatch, MalformedLine, NonFinite

__all__ = [
    "DiagramPoint",
    "PersistenceDiagram",
    "parse_diagram",
    "write_diagram",
    "read_diagram_file",
    "write_diagram_file",
    "mirror",
    "persistence",
    "multiset_union",
    "format_real",
    "as_points",
]

_DIM_HEADER = re.compile(r"^#\s*dim\s*:\s*(\S+)\s*$")


class DiagramPoint(NamedTuple):
    birth: float
    death: float


def format_real(x: float, precision: int = 17) -> str:
    """Locale-independent ``%g`` formatting; 17 digits round-trips any double."""
    return "%.*g" % (precision, x)


def _check_point(b: float, d: float, where: str = "") -> None:
    if not (math.isfinite(b) and math.isfinite(d)):
        raise NonFinite(f"{where}non-finite coordinate in point ({b}, {d})")
    if d < b:
        raise DeathBeforeBirth(f"{where}death {d} < birth {b}")


class PersistenceDiagram:
    """Immutable multiset of diagram points with a homology dimension tag.

    Parameters
    ----------
    points : iterable of (birth, death) pairs or array of shape (n, 2)
    dim : int
        Homology degree of the features.
    """

    __slots__ = ("_points", "_dim")

    def __init__(self, points: Union[Iterable[Sequence[float]], np.ndarray] = (), dim: int = 0):
        if not isinstance(points, np.ndarray):
            points = list(points)
        arr = np.array(points, dtype=np.float64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise MalformedLine(f"points must have shape (n, 2), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFinite("diagram contains a non-finite coordinate")
        bad = arr[:, 1] < arr[:, 0]
        if np.any(bad):
            b, d = arr[np.argmax(bad)]
            raise DeathBeforeBirth(f"death {d} < birth {b}")
        if int(dim) != dim or dim < 0:
            raise ValueError(f"dimension must be a nonnegative integer, got {dim!r}")
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        arr = np.ascontiguousarray(arr[order])
        arr.setflags(write=False)
        self._points = arr
        self._dim = int(dim)

    @property
    def points(self) -> np.ndarray:
        """Read-only ``(n, 2)`` float array in canonical order."""
        return self._points

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def births(self) -> np.ndarray:
        return self._points[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self._points[:, 1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __iter__(self) -> Iterator[DiagramPoint]:
        for b, d in self._points:
            yield DiagramPoint(float(b), float(d))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return self._dim == other._dim and np.array_equal(self._points, other._points)

    def __hash__(self) -> int:
        return hash((self._dim, self._points.tobytes()))

    def __repr__(self) -> str:
        pts = ", ".join(f"({b:g}, {d:g})" for b, d in self._points[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"PersistenceDiagram([{pts}{more}], dim={self._dim})"

    def without_diagonal(self) -> "PersistenceDiagram":
        """Drop zero-persistence points."""
        keep = self._points[:, 1] > self._points[:, 0]
        return PersistenceDiagram(self._points[keep], self._dim)


def as_points(D) -> np.ndarray:
    """``(n, 2)`` float array view of a diagram or array-like of points."""
    if isinstance(D, PersistenceDiagram):
        return D.points
    return np.ascontiguousarray(D, dtype=np.float64).reshape(-1, 2)


def mirror(p: Sequence[float]) -> tuple[float, float]:
    """Reflect a point across the diagonal: ``(a, b) -> (b, a)``."""
    a, b = p
    return (b, a)


def persistence(p: Sequence[float]) -> float:
    b, d = p
    return d - b


def multiset_union(F: PersistenceDiagram, G: PersistenceDiagram) -> PersistenceDiagram:
    if F.dim != G.dim:
        raise DimensionMismatch(f"cannot join diagrams of dimension {F.dim} and {G.dim}")
    return PersistenceDiagram(np.vstack([F.points, G.points]), F.dim)


def parse_diagram(text: Union[str, TextIO], source: str = "<text>") -> PersistenceDiagram:
    """Parse the line-oriented diagram format.

    One ``<birth> <death>`` pair per line; ``#`` starts a comment and an
    optional ``# dim: <k>`` line sets the dimension tag (default 0).
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    dim = 0
    pts = []
    for lineno, raw in enumerate(text, start=1):
        where = f"{source}:{lineno}: "
        line = raw.strip()
        m = _DIM_HEADER.match(line)
        if m:
            try:
                dim = int(m.group(1))
            except ValueError:
                raise MalformedLine(f"{where}bad dimension header {line!r}") from None
            if dim < 0:
                raise MalformedLine(f"{where}negative dimension in header")
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise MalformedLine(f"{where}expected two numbers, got {raw.rstrip()!r}")
        try:
            b, d = float(tokens[0]), float(tokens[1])
        except ValueError:
            raise MalformedLine(f"{where}expected two numbers, got {raw.rstrip()!r}") from None
        _check_point(b, d, where)
        pts.append((b, d))
    return PersistenceDiagram(pts, dim)


def write_diagram(d: PersistenceDiagram, precision: int = 17) -> str:
    """Serialize a diagram; the dimension header is written only when nonzero."""
    lines = []
    if d.dim != 0:
        lines.append(f"# dim: {d.dim}\n")
    for b, de in d.points:
        lines.append(f"{format_real(b, precision)} {format_real(de, precision)}\n")
    return "".join(lines)


def read_diagram_file(path) -> PersistenceDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(fh, source=str(path))


def write_diagram_file(path, d: PersistenceDiagram, precision: int = 17) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_diagram(d, precision))
