"""Readers and writers for scalar-field inputs, matrices and rasters."""
from __future__ import annotations

import csv
import io
import os
from pathlib import Path
from typing import Sequence

import numpy as np

from .diagram import format_real
from .errors import BadIndex, BadMatrix, MalformedLine, NonFinite

__all__ = [
    "read_signal",
    "read_image",
    "read_off",
    "read_values",
    "read_manifest",
    "read_labels",
    "matrix_to_csv",
    "read_matrix_csv",
    "raster_to_pgm",
    "raster_to_csv",
]


def _parse_real(tok: str, where: str) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise MalformedLine(f"{where}not a number: {tok!r}") from None
    if not np.isfinite(x):
        raise NonFinite(f"{where}non-finite value {tok!r}")
    return x


def _tokens(path) -> list[tuple[str, str]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0]
            for tok in line.replace(",", " ").split():
                out.append((tok, f"{path}:{lineno}: "))
    return out


def read_signal(path) -> np.ndarray:
    """One real per line (commas are also accepted as separators)."""
    return np.array([_parse_real(t, w) for t, w in _tokens(path)], dtype=np.float64)


read_values = read_signal


def _read_pgm_p2(path) -> np.ndarray:
    toks = _tokens(path)
    if not toks or toks[0][0] != "P2":
        raise MalformedLine(f"{path}: not an ASCII PGM (P2) file")
    try:
        cols, rows, _maxval = (int(t) for t, _ in toks[1:4])
    except ValueError:
        raise MalformedLine(f"{path}: bad PGM header") from None
    data = [_parse_real(t, w) for t, w in toks[4:]]
    if len(data) != rows * cols:
        raise MalformedLine(f"{path}: expected {rows * cols} pixels, found {len(data)}")
    return np.array(data, dtype=np.float64).reshape(rows, cols)


def read_image(path) -> np.ndarray:
    """Grayscale image from ASCII PGM (``P2``) or a CSV matrix."""
    with open(path, encoding="utf-8") as fh:
        head = fh.read(2)
    if head == "P2":
        return _read_pgm_p2(path)
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            rows.append([_parse_real(t.strip(), f"{path}:{lineno}: ") for t in row])
    if not rows:
        raise MalformedLine(f"{path}: empty image")
    if len({len(r) for r in rows}) != 1:
        raise MalformedLine(f"{path}: rows have different lengths")
    return np.array(rows, dtype=np.float64)


def read_off(path) -> tuple[int, list[tuple[int, int, int]]]:
    """Vertex count and triangles of an OFF mesh (vertex coordinates are ignored)."""
    lines = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if line:
                lines.append((line, lineno))
    if not lines or not lines[0][0].startswith("OFF"):
        raise MalformedLine(f"{path}: missing OFF header")
    header = lines[0][0][3:].split()
    body = lines[1:]
    if not header:
        header, body = body[0][0].split(), body[1:]
    try:
        nv, nf = int(header[0]), int(header[1])
    except (ValueError, IndexError):
        raise MalformedLine(f"{path}: bad OFF counts line") from None
    if len(body) < nv + nf:
        raise MalformedLine(f"{path}: expected {nv} vertices and {nf} faces")
    tris = []
    for line, lineno in body[nv:nv + nf]:
        parts = line.split()
        try:
            k = int(parts[0])
            idx = [int(x) for x in parts[1:1 + k]]
        except (ValueError, IndexError):
            raise MalformedLine(f"{path}:{lineno}: bad face line") from None
        if k != 3 or len(idx) != 3:
            raise BadIndex(f"{path}:{lineno}: only triangular faces are supported")
        tris.append(tuple(idx))
    return nv, tris


def read_manifest(path) -> tuple[list[str], list[Path], list[str | None]]:
    """Lines ``<diagram path> [<label>]``; paths are relative to the manifest."""
    base = Path(path).parent
    ids, paths, labels = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) > 2:
                raise MalformedLine(f"{path}:{lineno}: expected '<path> [<label>]'")
            ids.append(parts[0])
            p = Path(parts[0])
            paths.append(p if p.is_absolute() else base / p)
            labels.append(parts[1] if len(parts) == 2 else None)
    return ids, paths, labels


def read_labels(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def matrix_to_csv(M: np.ndarray, ids: Sequence[str], precision: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *ids])
    for name, row in zip(ids, M):
        w.writerow([name, *(format_real(x, precision) for x in row)])
    return buf.getvalue()


def read_matrix_csv(path) -> tuple[np.ndarray, list[str]]:
    """Square matrix with a header row of ids (first column repeats the id)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise BadMatrix(f"{path}: empty matrix file")
    header = rows[0]
    ids = header[1:]
    body = rows[1:]
    n = len(ids)
    if len(body) != n:
        raise BadMatrix(f"{path}: header names {n} items but there are {len(body)} rows")
    M = np.empty((n, n))
    for i, r in enumerate(body):
        if len(r) != n + 1:
            raise BadMatrix(f"{path}:{i + 2}: expected {n + 1} fields")
        for j, tok in enumerate(r[1:]):
            M[i, j] = _parse_real(tok, f"{path}:{i + 2}: ")
    return M, ids


def raster_to_csv(R: np.ndarray, precision: int = 17) -> str:
    return "".join(",".join(format_real(x, precision) for x in row) + "\n" for row in R)


def raster_to_pgm(R: np.ndarray, maxval: int = 65535) -> str:
    """ASCII PGM; values are min-max scaled and the scaling is kept in a comment."""
    lo, hi = float(np.min(R)), float(np.max(R))
    span = hi - lo
    if span > 0:
        q = np.rint((R - lo) / span * maxval).astype(np.int64)
    else:
        q = np.zeros(R.shape, dtype=np.int64)
    rows, cols = R.shape
    lines = ["P2", f"# value = {format_real(lo)} + pixel * {format_real(span / maxval if span > 0 else 0.0)}",
             f"{cols} {rows}", str(maxval)]
    lines += [" ".join(str(int(x)) for x in row) for row in q]
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
