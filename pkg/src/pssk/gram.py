"""Gram and distance matrices over collections of diagrams, and precomputed-kernel export."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .diagram import PersistenceDiagram, format_real
from .errors import BadMatrix, MalformedLine
from .kernel import check_scale, pssk_eval
from .landscape import build_landscape, landscape_kernel
from .matching import parse_exponent, wasserstein_distance

__all__ = [
    "GramMatrix",
    "gram_matrix",
    "distance_matrix",
    "pairwise_matrix",
    "export_gram",
    "parse_precomputed",
]


@dataclass
class GramMatrix:
    entries: np.ndarray
    item_ids: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, rows, cols=None) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.intp)
        cols = rows if cols is None else np.asarray(cols, dtype=np.intp)
        return self.entries[np.ix_(rows, cols)]


def pairwise_matrix(items: Sequence, fn: Callable, threads: int = 1) -> np.ndarray:
    """Symmetric matrix of ``fn(items[i], items[j])``, one call per unordered pair."""
    n = len(items)
    M = np.zeros((n, n))

    def row(i: int) -> list[float]:
        return [fn(items[i], items[j]) for j in range(i, n)]

    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n)))
    else:
        rows = [row(i) for i in range(n)]
    for i, vals in enumerate(rows):
        M[i, i:] = vals
        M[i:, i] = vals
    return M


def gram_matrix(diagrams: Sequence[PersistenceDiagram], kernel: str = "pssk",
                sigma: float | None = None, ids=None, threads: int = 1) -> GramMatrix:
    """Kernel Gram matrix; ``kernel`` is ``"pssk"`` (needs ``sigma``) or ``"landscape"``."""
    ids = list(ids) if ids is not None else list(range(len(diagrams)))
    if kernel == "pssk":
        if sigma is None:
            raise ValueError("the pssk kernel needs a scale sigma")
        s = check_scale(sigma)
        M = pairwise_matrix(list(diagrams), lambda a, b: pssk_eval(a, b, s), threads)
    elif kernel == "landscape":
        lands = [build_landscape(D) for D in diagrams]
        M = pairwise_matrix(lands, landscape_kernel, threads)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    return GramMatrix(M, ids)


def distance_matrix(diagrams: Sequence[PersistenceDiagram], metric: str = "wasserstein",
                    p=1.0, sigma: float | None = None, threads: int = 1) -> np.ndarray:
    """Pairwise distances: ``wasserstein`` (exponent ``p``, ``inf`` = bottleneck), ``pssk`` or ``landscape``."""
    items = list(diagrams)
    if metric == "wasserstein":
        p = parse_exponent(p)
        fn = lambda a, b: wasserstein_distance(a, b, p)  # noqa: E731
    elif metric == "pssk":
        s = check_scale(sigma if sigma is not None else math.nan)
        K = gram_matrix(items, "pssk", s, threads=threads).entries
        diag = np.diag(K)
        return np.sqrt(np.maximum(0.0, diag[:, None] + diag[None, :] - 2.0 * K)) * (1 - np.eye(len(items)))
    elif metric == "landscape":
        K = gram_matrix(items, "landscape", threads=threads).entries
        diag = np.diag(K)
        return np.sqrt(np.maximum(0.0, diag[:, None] + diag[None, :] - 2.0 * K)) * (1 - np.eye(len(items)))
    else:
        raise ValueError(f"unknown metric {metric!r}")
    D = pairwise_matrix(items, fn, threads)
    np.fill_diagonal(D, 0.0)
    return D


def export_gram(G, labels: Sequence, precision: int = 17) -> str:
    """Precomputed-kernel text: ``<label> 0:<i+1> 1:<K(i,1)> ... n:<K(i,n)>`` per row."""
    K = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=np.float64)
    n = K.shape[0]
    if len(labels) != n:
        raise BadMatrix(f"{len(labels)} labels for a {n}x{n} Gram matrix")
    lines = []
    for i in range(n):
        fields = [str(labels[i]), f"0:{i + 1}"]
        fields += [f"{j + 1}:{format_real(K[i, j], precision)}" for j in range(n)]
        lines.append(" ".join(fields))
    return "".join(line + "\n" for line in lines)


def parse_precomputed(text: str) -> tuple[list[str], np.ndarray]:
    labels, rows = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        labels.append(parts[0])
        vals = {}
        for tok in parts[1:]:
            try:
                k, v = tok.split(":", 1)
                vals[int(k)] = float(v)
            except ValueError:
                raise MalformedLine(f"line {lineno}: bad entry {tok!r}") from None
        rows.append(vals)
    n = len(rows)
    K = np.zeros((n, n))
    for i, vals in enumerate(rows):
        if int(vals.get(0, -1)) != i + 1:
            raise MalformedLine(f"line {i + 1}: serial index 0:{i + 1} missing")
        for j in range(n):
            if j + 1 not in vals:
                raise MalformedLine(f"line {i + 1}: missing column {j + 1}")
            K[i, j] = vals[j + 1]
    return labels, K
