"""Persistence landscapes and the landscape kernel.

The ``k``-th layer is ``lambda_k(t) = k-th largest of max(0, min(t - b, d - t))``
over the diagram points.  Between consecutive critical abscissae (births,
deaths and the crossings ``(b_i + d_j) / 2`` of a rising with a falling tent
side, which include the tent peaks) the order of the tents is fixed and every
layer is linear, so evaluating the sorted tent values at those abscissae gives
each layer exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import as_points, format_real
from .errors import TooLarge

__all__ = [
    "PiecewiseLinear",
    "Landscape",
    "build_landscape",
    "landscape_kernel",
    "landscape_distance",
    "landscape_stability_rhs",
    "tent_values",
]

BIJECTION_LIMIT = 7


@dataclass(frozen=True)
class PiecewiseLinear:
    """Compactly supported piecewise-linear function given by its breakpoints."""

    t: np.ndarray
    y: np.ndarray

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.t.size == 0:
            return np.zeros_like(s)
        return np.interp(s, self.t, self.y, left=0.0, right=0.0)

    @property
    def support(self) -> tuple[float, float]:
        return (float(self.t[0]), float(self.t[-1]))


@dataclass(frozen=True)
class Landscape:
    layers: tuple[PiecewiseLinear, ...]

    def __len__(self) -> int:
        return len(self.layers)

    def __call__(self, k: int, s):
        """Value of layer ``k`` (1-based); layers beyond the last are zero."""
        if k < 1:
            raise ValueError("layers are numbered from 1")
        if k > len(self.layers):
            return np.zeros_like(np.asarray(s, dtype=np.float64))
        return self.layers[k - 1](s)

    def to_csv(self, precision: int = 17) -> str:
        lines = ["layer,t,y\n"]
        for k, layer in enumerate(self.layers, start=1):
            for t, y in zip(layer.t, layer.y):
                lines.append(f"{k},{format_real(t, precision)},{format_real(y, precision)}\n")
        return "".join(lines)


def tent_values(points: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Matrix of tent heights, shape ``(len(s), len(points))``."""
    s = np.asarray(s, dtype=np.float64)[:, None]
    return np.maximum(0.0, np.minimum(s - points[None, :, 0], points[None, :, 1] - s))


def _simplify(t: np.ndarray, y: np.ndarray) -> PiecewiseLinear:
    # trim to support, keeping one zero at each end
    nz = np.flatnonzero(y > 0.0)
    lo, hi = max(nz[0] - 1, 0), min(nz[-1] + 1, t.size - 1)
    t, y = t[lo:hi + 1], y[lo:hi + 1]
    keep = [0]
    for i in range(1, t.size - 1):
        t0, y0 = t[keep[-1]], y[keep[-1]]
        t2, y2 = t[i + 1], y[i + 1]
        interp = y0 + (y2 - y0) * (t[i] - t0) / (t2 - t0)
        scale = max(abs(y0), abs(y[i]), abs(y2), 1e-300)
        if abs(interp - y[i]) > 1e-12 * scale:
            keep.append(i)
    keep.append(t.size - 1)
    return PiecewiseLinear(t[keep].copy(), y[keep].copy())


def build_landscape(D) -> Landscape:
    P = as_points(D)
    P = P[P[:, 1] > P[:, 0]]
    n = P.shape[0]
    if n == 0:
        return Landscape(())
    b, d = P[:, 0], P[:, 1]
    crit = np.unique(np.concatenate([b, d, ((b[:, None] + d[None, :]) / 2.0).ravel()]))
    H = tent_values(P, crit)
    H = -np.sort(-H, axis=1)
    layers = []
    for k in range(n):
        yk = H[:, k]
        if not np.any(yk > 0.0):
            break
        layers.append(_simplify(crit, yk))
    return Landscape(tuple(layers))


def _linear_product_integral(t: np.ndarray, f: np.ndarray, g: np.ndarray) -> float:
    """Exact integral of the product of two piecewise-linear interpolants on nodes ``t``."""
    h = np.diff(t)
    f0, f1, g0, g1 = f[:-1], f[1:], g[:-1], g[1:]
    return float(np.sum(h * (2.0 * f0 * g0 + f0 * g1 + f1 * g0 + 2.0 * f1 * g1)) / 6.0)


def _layer_inner(a: PiecewiseLinear, b: PiecewiseLinear) -> float:
    lo = max(a.t[0], b.t[0])
    hi = min(a.t[-1], b.t[-1])
    if not hi > lo:
        return 0.0
    t = np.unique(np.concatenate([a.t, b.t]))
    t = t[(t >= lo) & (t <= hi)]
    return _linear_product_integral(t, a(t), b(t))


def _as_landscape(X) -> Landscape:
    return X if isinstance(X, Landscape) else build_landscape(X)


def landscape_kernel(F, G) -> float:
    """Sum over layers of the L2 inner products of the landscape layers."""
    LF, LG = _as_landscape(F), _as_landscape(G)
    return float(sum(_layer_inner(a, b) for a, b in zip(LF.layers, LG.layers)))


def landscape_distance(F, G) -> float:
    LF, LG = _as_landscape(F), _as_landscape(G)
    kff = landscape_kernel(LF, LF)
    kgg = landscape_kernel(LG, LG)
    kfg = landscape_kernel(LF, LG)
    return math.sqrt(max(0.0, kff + kgg - 2.0 * kfg))


def stability_cost_matrix(F, G) -> np.ndarray:
    """Augmented matching costs for the persistence-weighted bound.

    Rows are the points of ``F`` followed by ``|G|`` diagonal slots, columns the
    points of ``G`` followed by ``|F|`` diagonal slots.  A point sent to the
    diagonal goes to its nearest diagonal point (l-inf distance ``pers/2``);
    a diagonal slot has persistence 0; diagonal-to-diagonal pairs cost 0.
    """
    P, Q = as_points(F), as_points(G)
    n, m = P.shape[0], Q.shape[0]
    W = np.zeros((n + m, n + m))
    pp = P[:, 1] - P[:, 0]
    pq = Q[:, 1] - Q[:, 0]
    if n and m:
        dist = np.maximum(np.abs(P[:, None, 0] - Q[None, :, 0]), np.abs(P[:, None, 1] - Q[None, :, 1]))
        W[:n, :m] = pp[:, None] * dist ** 2 + (2.0 / 3.0) * dist ** 3
    if n:
        W[:n, m:] = (pp * (pp / 2.0) ** 2 + (2.0 / 3.0) * (pp / 2.0) ** 3)[:, None]
    if m:
        W[n:, :m] = ((2.0 / 3.0) * (pq / 2.0) ** 3)[None, :]
    return W


def landscape_stability_rhs(F, G) -> float:
    """Minimal persistence-weighted matching cost bounding the landscape distance.

    Minimises ``sum_u pers(u) |u - gamma(u)|^2 + (2/3) |u - gamma(u)|^3`` (l-inf
    norms) over bijections of the diagonal-augmented diagrams.  Bijections that
    only permute interchangeable diagonal slots have equal cost, so it suffices
    to enumerate every partial injection ``F -> G`` exhaustively; unmatched
    points go to the diagonal.
    """
    P, Q = as_points(F), as_points(G)
    n, m = P.shape[0], Q.shape[0]
    if n > BIJECTION_LIMIT or m > BIJECTION_LIMIT:
        raise TooLarge(f"exhaustive bijections limited to {BIJECTION_LIMIT} points per diagram")
    W = stability_cost_matrix(P, Q)
    to_diag = W[:n, m].tolist() if n else []
    from_diag = W[n, :m].tolist() if m else []
    cross = W[:n, :m].tolist()
    best = math.inf
    used = [False] * m

    def search(i: int, acc: float) -> None:
        nonlocal best
        if acc >= best:
            return
        if i == n:
            total = acc + sum(from_diag[j] for j in range(m) if not used[j])
            if total < best:
                best = total
            return
        search(i + 1, acc + to_diag[i])
        for j in range(m):
            if not used[j]:
                used[j] = True
                search(i + 1, acc + cross[i][j])
                used[j] = False

    search(0, 0.0)
    return math.sqrt(max(best, 0.0)) if math.isfinite(best) else 0.0
