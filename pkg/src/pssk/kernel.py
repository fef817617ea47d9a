"""Persistence scale-space kernel, its feature map and the induced distance.

The feature map of a diagram ``D`` at scale ``sigma`` is the heat-diffused
measure ``sum_p delta_p`` on the half plane ``x2 >= x1`` with zero boundary
values on the diagonal::

    Phi(D)(x) = 1/(4 pi sigma) * sum_p [exp(-|x-p|^2/(4 sigma)) - exp(-|x-p'|^2/(4 sigma))]

with ``p'`` the reflection of ``p`` across the diagonal.  The L2 inner product
of two such maps has the closed form::

    k(F, G) = 1/(8 pi sigma) * sum_{p in F, q in G} [exp(-|p-q|^2/(8 sigma)) - exp(-|p-q'|^2/(8 sigma))]

which is what :func:`pssk_eval` computes, in ``O(|F| |G|)``.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .diagram import as_points
from .errors import BadGrid, NonPositiveScale, OutsideDomain

__all__ = [
    "check_scale",
    "pssk_eval",
    "pssk_distance",
    "feature_map_eval",
    "feature_map_values",
    "feature_map_raster",
    "stability_constant",
]


def check_scale(sigma: float) -> float:
    sigma = float(sigma)
    if not (sigma > 0.0) or not math.isfinite(sigma):
        raise NonPositiveScale(f"scale must be a positive finite number, got {sigma}")
    return sigma


def pssk_eval(F, G, sigma: float) -> float:
    """Kernel value ``k_sigma(F, G)`` by direct summation over point pairs."""
    sigma = check_scale(sigma)
    P, Q = as_points(F), as_points(G)
    if P.shape[0] == 0 or Q.shape[0] == 0:
        return 0.0
    return float(_backend.pssk_sum(P, Q, sigma))


def pssk_distance(F, G, sigma: float) -> float:
    """Feature-space distance; negative round-off under the root is clamped to 0."""
    kff = pssk_eval(F, F, sigma)
    kgg = pssk_eval(G, G, sigma)
    kfg = pssk_eval(F, G, sigma)
    return math.sqrt(max(0.0, kff + kgg - 2.0 * kfg))


def stability_constant(sigma: float) -> float:
    """Lipschitz constant of the feature map w.r.t. the 1-Wasserstein distance."""
    sigma = check_scale(sigma)
    return 1.0 / (2.0 * sigma * math.sqrt(math.pi))


def feature_map_values(D, sigma: float, X: np.ndarray) -> np.ndarray:
    """Evaluate the feature map at many plane points (no domain check)."""
    sigma = check_scale(sigma)
    P = as_points(D)
    X = np.asarray(X, dtype=np.float64).reshape(-1, 2)
    out = np.zeros(X.shape[0])
    if P.shape[0] == 0:
        return out
    inv = 1.0 / (4.0 * sigma)
    # chunk over evaluation points to bound memory
    step = max(1, 2_000_000 // max(1, P.shape[0]))
    for s in range(0, X.shape[0], step):
        x1 = X[s:s + step, 0, None]
        x2 = X[s:s + step, 1, None]
        d_direct = (x1 - P[None, :, 0]) ** 2 + (x2 - P[None, :, 1]) ** 2
        d_mirror = (x1 - P[None, :, 1]) ** 2 + (x2 - P[None, :, 0]) ** 2
        out[s:s + step] = (np.exp(-d_direct * inv) - np.exp(-d_mirror * inv)).sum(axis=1)
    return out / (4.0 * math.pi * sigma)


def feature_map_eval(D, sigma: float, x) -> float:
    """Feature map value at a single point ``x`` of the closed upper half plane."""
    x1, x2 = float(x[0]), float(x[1])
    if x2 < x1:
        raise OutsideDomain(f"point ({x1}, {x2}) lies below the diagonal")
    return float(feature_map_values(D, sigma, np.array([[x1, x2]]))[0])


def feature_map_raster(D, sigma: float, xmin: float, xmax: float, ymin: float, ymax: float,
                       nx: int, ny: int) -> np.ndarray:
    """Sample the feature map at cell centres of an ``ny x nx`` grid.

    Row 0 is the top of the window (``y`` near ``ymax``), column 0 the left
    (``x`` near ``xmin``).  Cells whose centre lies strictly below the diagonal
    are 0.
    """
    if not (xmax > xmin and ymax > ymin):
        raise BadGrid("grid window must satisfy xmax > xmin and ymax > ymin")
    if int(nx) != nx or int(ny) != ny or nx < 1 or ny < 1:
        raise BadGrid("grid sizes must be positive integers")
    nx, ny = int(nx), int(ny)
    xs = xmin + (np.arange(nx) + 0.5) * ((xmax - xmin) / nx)
    ys = ymax - (np.arange(ny) + 0.5) * ((ymax - ymin) / ny)
    XX, YY = np.meshgrid(xs, ys)
    vals = feature_map_values(D, sigma, np.column_stack([XX.ravel(), YY.ravel()])).reshape(ny, nx)
    vals[YY < XX] = 0.0
    return vals
