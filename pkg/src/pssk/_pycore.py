"""Reference implementations of the compiled inner loops (numpy / pure Python)."""
import math

import numpy as np

from .errors import NoConvergence


def pssk_sum(F: np.ndarray, G: np.ndarray, sigma: float) -> float:
    F = np.asarray(F, dtype=np.float64)
    G = np.asarray(G, dtype=np.float64)
    if F.shape[0] == 0 or G.shape[0] == 0:
        return 0.0
    inv = 1.0 / (8.0 * sigma)
    a1 = F[:, 0, None] - G[None, :, 0]
    a2 = F[:, 1, None] - G[None, :, 1]
    b1 = F[:, 0, None] - G[None, :, 1]
    b2 = F[:, 1, None] - G[None, :, 0]
    terms = np.exp(-(a1 * a1 + a2 * a2) * inv) - np.exp(-(b1 * b1 + b2 * b2) * inv)
    return float(terms.sum()) / (8.0 * math.pi * sigma)


def hungarian(cost):
    a = np.asarray(cost, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("cost matrix must be square")
    result = np.empty(n, dtype=np.intp)
    if n == 0:
        return result, 0.0
    rows = a.tolist()
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = rows[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    for j in range(1, n + 1):
        result[p[j] - 1] = j - 1
    total = 0.0
    for i in range(n):
        total += rows[i][result[i]]
    return result, total


def jacobi_eigenvalues(A, rtol: float = 1e-12, max_sweeps: int = 100):
    a = np.array(A, dtype=np.float64, copy=True)
    n = a.shape[0]
    norm = math.sqrt(float(np.sum(a * a)))
    sweep = 0
    iu = np.triu_indices(n, 1)
    while True:
        off = math.sqrt(2.0 * float(np.sum(a[iu] ** 2)))
        if off <= rtol * norm:
            break
        if sweep >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                g = a[:, p].copy()
                h = a[:, q].copy()
                newp = g - s * (h + g * tau)
                newq = h + s * (g - h * tau)
                a[:, p] = newp
                a[p, :] = newp
                a[:, q] = newq
                a[q, :] = newq
                a[p, p] = g[p] - t * apq
                a[q, q] = h[q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.diag(a).copy(), sweep
