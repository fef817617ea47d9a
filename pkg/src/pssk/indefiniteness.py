"""Random search for Wasserstein distance matrices that are not conditionally negative definite.

A c.n.d. matrix has at most one positive eigenvalue, so a distance Gram
with two or more positive eigenvalues is not c.n.d.  A symmetric function
``d`` is c.n.d. exactly when ``exp(-xi d)`` is positive definite for every
``xi > 0``; the search also exhibits a ``xi`` where ``exp(-xi d)`` has a
negative eigenvalue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import PersistenceDiagram
from .errors import SearchExhausted
from .gram import distance_matrix
from .linalg import DefinitenessReport, definiteness_check, sym_eigenvalues
from .matching import parse_exponent

__all__ = ["Witness", "random_diagram", "indefiniteness_search", "XI_SCAN"]

EIG_RTOL = 1e-6
PSD_RTOL = 1e-8
MAX_POINTS = 6
# small sets of tiny diagrams almost never break c.n.d.; these defaults do reliably
SEARCH_ITEMS = 16
SEARCH_POINTS = 2
# factors applied to the requested xi when it does not already break definiteness
XI_SCAN = tuple(10.0 ** k for k in np.arange(-4.0, 4.25, 0.25))


@dataclass
class Witness:
    p: float
    xi: float
    trial: int
    diagrams: list[PersistenceDiagram]
    distances: np.ndarray
    report_d: DefinitenessReport
    report_minus_d: DefinitenessReport
    report_exp: DefinitenessReport

    @property
    def exp_min_eigenvalue(self) -> float:
        return self.report_exp.min_eigenvalue


def random_diagram(rng: np.random.Generator, max_points: int = MAX_POINTS) -> PersistenceDiagram:
    """1 to ``max_points`` points; each is a uniform sample of ``[0, 1]^2`` sorted into ``b <= d``."""
    k = int(rng.integers(1, max_points + 1))
    xy = rng.random((k, 2))
    return PersistenceDiagram(np.sort(xy, axis=1))


def _relative_min(A: np.ndarray) -> float:
    """Smallest eigenvalue divided by the largest magnitude."""
    eig = sym_eigenvalues(A)
    return float(eig[0]) / float(np.max(np.abs(eig)))


def _best_xi(D: np.ndarray, xi: float) -> float | None:
    if _relative_min(np.exp(-xi * D)) < -PSD_RTOL:
        return xi
    scores = [(_relative_min(np.exp(-xi * f * D)), xi * f) for f in XI_SCAN]
    r, x = min(scores)
    return x if r < -PSD_RTOL else None


def indefiniteness_search(p=1.0, xi: float = 1.0, n_items: int = SEARCH_ITEMS, seed: int = 0,
                          max_trials: int = 1000, max_points: int = SEARCH_POINTS) -> Witness:
    """Draw diagram sets until the ``d_{W,p}`` matrix has >= 2 positive and >= 2 negative eigenvalues.

    Each diagram has 1 to ``max_points`` (at most 6) uniform points.
    Eigenvalues count when their magnitude exceeds ``1e-6`` times the largest.
    The requested ``xi`` is reported if ``exp(-xi d)`` already has an
    eigenvalue below ``-1e-8`` times its largest; otherwise ``xi`` is scaled
    by the factor in :data:`XI_SCAN` giving the most negative relative
    eigenvalue.  Raises :class:`SearchExhausted` after ``max_trials`` sets.
    """
    p = parse_exponent(p)
    if not xi > 0 or not math.isfinite(xi):
        raise ValueError("xi must be a positive finite number")
    if n_items < 4:
        raise ValueError("need at least 4 items for two positive and two negative eigenvalues")
    if not 1 <= max_points <= MAX_POINTS:
        raise ValueError(f"max_points must be in 1..{MAX_POINTS}")
    rng = np.random.Generator(np.random.Philox(seed))
    for trial in range(max_trials):
        diagrams = [random_diagram(rng, max_points) for _ in range(n_items)]
        D = distance_matrix(diagrams, "wasserstein", p)
        rep = definiteness_check(D, EIG_RTOL)
        if rep.n_positive < 2 or rep.n_negative < 2:
            continue
        x = _best_xi(D, xi)
        if x is not None:
            return Witness(p, x, trial, diagrams, D, rep, definiteness_check(-D, EIG_RTOL),
                           definiteness_check(np.exp(-x * D), PSD_RTOL))
    raise SearchExhausted(f"no witness for p={p} within {max_trials} trials (seed {seed})")
