"""Shape-retrieval measures from a distance matrix.

Each item queries all others, ranked by ascending distance (ties by index).
With ``c`` the number of other members of the query's class:

* NN   -- rank-1 item shares the class
* T1   -- fraction of the ``c`` class members found in the top ``c``
* T2   -- fraction of the ``c`` class members found in the top ``2c``
* EM   -- ``2 / (1/P + 1/R)`` over the top ``min(32, n - 1)`` results
* DCG  -- ``G_1 + sum_{i>=2} G_i / log2(i)`` normalised by the ideal ranking

Results are averaged over queries and reported in percent.  Queries with
``c = 0`` count as NN misses and are skipped for the other measures, which
are NaN when no query has ``c > 0``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import BadMatrix

__all__ = ["retrieval_eval", "RETRIEVAL_MEASURES", "EM_CUTOFF"]

RETRIEVAL_MEASURES = ("NN", "T1", "T2", "EM", "DCG")
EM_CUTOFF = 32


def retrieval_eval(distances, labels: Sequence) -> dict[str, float]:
    D = np.asarray(distances, dtype=np.float64)
    n = D.shape[0] if D.ndim == 2 else -1
    if D.ndim != 2 or D.shape[1] != n:
        raise BadMatrix("distance matrix must be square")
    if len(labels) != n:
        raise BadMatrix(f"{len(labels)} labels for {n} items")
    if not np.all(np.isfinite(D)):
        raise BadMatrix("distance matrix has non-finite entries")
    if np.any(np.diag(D) != 0.0):
        raise BadMatrix("distance matrix must have a zero diagonal")
    if not np.array_equal(D, D.T):
        raise BadMatrix("distance matrix must be symmetric")
    if n < 2:
        raise BadMatrix("retrieval needs at least two items")
    labels = list(labels)
    nn, t1, t2, em, dcg = [], [], [], [], []
    for q in range(n):
        others = np.array([j for j in range(n) if j != q], dtype=np.intp)
        order = others[np.lexsort((others, D[q, others]))]
        rel = np.array([labels[j] == labels[q] for j in order], dtype=np.float64)
        c = int(rel.sum())
        nn.append(rel[0])
        if c == 0:
            continue
        hits = np.cumsum(rel)
        t1.append(hits[c - 1] / c)
        t2.append(hits[min(2 * c, rel.size) - 1] / c)
        k = min(EM_CUTOFF, rel.size)
        found = hits[k - 1]
        em.append(0.0 if found == 0 else 2.0 / (k / found + c / found))
        disc = np.ones(rel.size)
        disc[1:] = 1.0 / np.log2(np.arange(2, rel.size + 1))
        ideal = float(np.sum(disc[:c]))
        dcg.append(float(np.sum(rel * disc)) / ideal)

    def pct(xs):
        return 100.0 * float(np.mean(xs)) if xs else math.nan

    return {"NN": pct(nn), "T1": pct(t1), "T2": pct(t2), "EM": pct(em), "DCG": pct(dcg)}
