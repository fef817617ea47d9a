"""Bottleneck and p-Wasserstein distances between persistence diagrams.

Both diagrams are augmented with diagonal slots so that every bijection of the
augmented sets is a partial matching of the originals.  With ``n = |F|`` and
``m = |G|`` the ``(n+m) x (n+m)`` cost matrix is::

                 G points          diagonal slots (n)
    F points     |u - v|_inf       pers(u) / 2
    diag (m)     pers(v) / 2       0

where ``pers(u) / 2`` is the l-inf distance from ``u`` to its nearest diagonal
point ``((b+d)/2, (b+d)/2)``.  The ground metric is l-inf throughout.
"""
from __future__ import annotations

import itertools
import math
from collections import deque

import numpy as np

from . import _backend
from .diagram import as_points
from .errors import BadExponent, TooLarge

__all__ = [
    "augmented_costs",
    "bottleneck_distance",
    "wasserstein_distance",
    "wasserstein_bruteforce",
    "parse_exponent",
    "hopcroft_karp",
]

BRUTEFORCE_LIMIT = 8


def parse_exponent(p) -> float:
    """Accept a real ``p >= 1`` or ``inf`` (also the strings ``"inf"``/``"infinity"``)."""
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity", "+inf"):
            return math.inf
        try:
            p = float(p)
        except ValueError:
            raise BadExponent(f"bad Wasserstein exponent {p!r}") from None
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise BadExponent(f"Wasserstein exponent must be >= 1, got {p}")
    return p


def augmented_costs(F, G) -> np.ndarray:
    """Square matrix of l-inf matching costs between the augmented diagrams."""
    P, Q = as_points(F), as_points(G)
    n, m = P.shape[0], Q.shape[0]
    C = np.zeros((n + m, n + m))
    if n and m:
        C[:n, :m] = np.maximum(np.abs(P[:, None, 0] - Q[None, :, 0]),
                               np.abs(P[:, None, 1] - Q[None, :, 1]))
    if n:
        C[:n, m:] = ((P[:, 1] - P[:, 0]) / 2.0)[:, None]
    if m:
        C[n:, :m] = ((Q[:, 1] - Q[:, 0]) / 2.0)[None, :]
    return C


def hopcroft_karp(adj: list[list[int]], n_right: int) -> int:
    """Size of a maximum matching in a bipartite graph given by left adjacency lists."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    INF = n_left + n_right + 1
    size = 0
    while True:
        dist = [INF] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return size
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] >= 0:
                continue
            # iterative DFS along the BFS layering
            stack = [root]
            path_found = False
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < len(adj[u]):
                    v = adj[u][ptr[u]]
                    ptr[u] += 1
                    w = match_r[v]
                    if w < 0:
                        # augment along the stack
                        for x in reversed(stack):
                            nxt = match_l[x]
                            match_l[x] = v
                            match_r[v] = x
                            v = nxt
                        path_found = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if path_found:
                    break
                if not advanced:
                    dist[u] = INF
                    stack.pop()
            if path_found:
                size += 1


def _has_perfect_matching(C: np.ndarray, t: float) -> bool:
    N = C.shape[0]
    adj = [np.flatnonzero(C[i] <= t).tolist() for i in range(N)]
    return hopcroft_karp(adj, N) == N


def bottleneck_distance(F, G) -> float:
    """Exact bottleneck distance by binary search over the candidate costs."""
    C = augmented_costs(F, G)
    if C.size == 0:
        return 0.0
    candidates = np.unique(C)
    lo, hi = 0, candidates.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(C, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def wasserstein_distance(F, G, p=1.0) -> float:
    """Exact p-Wasserstein distance (``p = inf`` gives the bottleneck distance)."""
    p = parse_exponent(p)
    if math.isinf(p):
        return bottleneck_distance(F, G)
    C = augmented_costs(F, G)
    if C.size == 0:
        return 0.0
    _, total = _backend.hungarian(C ** p)
    return float(max(total, 0.0) ** (1.0 / p))


def wasserstein_bruteforce(F, G, p=1.0) -> float:
    """Minimum over all permutations of the augmented problem (test oracle)."""
    p = parse_exponent(p)
    C = augmented_costs(F, G)
    N = C.shape[0]
    if N > BRUTEFORCE_LIMIT:
        raise TooLarge(f"augmented size {N} exceeds brute-force limit {BRUTEFORCE_LIMIT}")
    if N == 0:
        return 0.0
    rows = range(N)
    best = math.inf
    for perm in itertools.permutations(range(N)):
        costs = [C[i, perm[i]] for i in rows]
        val = max(costs) if math.isinf(p) else sum(c ** p for c in costs)
        if val < best:
            best = val
    return float(best) if math.isinf(p) else float(best ** (1.0 / p))
