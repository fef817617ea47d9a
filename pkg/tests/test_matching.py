import itertools
import math

import numpy as np
import pytest

from pssk import _backend
from pssk.errors import BadExponent, TooLarge
from pssk.matching import (
    augmented_costs,
    bottleneck_distance,
    hopcroft_karp,
    parse_exponent,
    wasserstein_bruteforce,
    wasserstein_distance,
)

from conftest import random_points


def partial_matchings(n, m):
    """All injective partial maps from range(n) to range(m), as lists of pairs."""
    def rec(i, used):
        if i == n:
            yield []
            return
        yield from rec(i + 1, used)
        for j in range(m):
            if j not in used:
                for rest in rec(i + 1, used | {j}):
                    yield [(i, j)] + rest
    yield from rec(0, frozenset())


def oracle(F, G, p):
    F, G = np.asarray(F).reshape(-1, 2), np.asarray(G).reshape(-1, 2)
    half = lambda x: (x[1] - x[0]) / 2  # noqa: E731
    best = math.inf
    for pairs in partial_matchings(len(F), len(G)):
        mf = {i for i, _ in pairs}
        mg = {j for _, j in pairs}
        costs = [float(np.max(np.abs(F[i] - G[j]))) for i, j in pairs]
        costs += [half(F[i]) for i in range(len(F)) if i not in mf]
        costs += [half(G[j]) for j in range(len(G)) if j not in mg]
        if not costs:
            val = 0.0
        elif p == math.inf:
            val = max(costs)
        else:
            val = sum(c ** p for c in costs) ** (1 / p)
        best = min(best, val)
    return best


def test_examples():
    assert bottleneck_distance([(0, 10)], [(1, 9)]) == 1
    assert bottleneck_distance([(0, 10)], []) == 5
    assert wasserstein_distance([(0, 10)], [(1, 9)], 1) == 1
    assert wasserstein_distance([], [], 2) == 0


def test_exponents():
    assert parse_exponent("inf") == math.inf
    assert parse_exponent("2") == 2.0
    for bad in ("0.5", "x", "-1", "nan"):
        with pytest.raises(BadExponent):
            parse_exponent(bad)


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_against_partial_matching_oracle(rng, backend, p):
    for _ in range(60):
        F = random_points(rng, rng.integers(0, 4))
        G = random_points(rng, rng.integers(0, 4))
        assert wasserstein_distance(F, G, p) == pytest.approx(oracle(F, G, p), abs=1e-10)
        assert wasserstein_bruteforce(F, G, p) == pytest.approx(oracle(F, G, p), abs=1e-10)


def test_bruteforce_limit():
    with pytest.raises(TooLarge):
        wasserstein_bruteforce(np.zeros((5, 2)), np.zeros((4, 2)))


def test_metric_axioms(rng):
    for p in (1.0, 2.0, math.inf):
        for _ in range(30):
            A, B, C = (random_points(rng, rng.integers(0, 6)) for _ in range(3))
            dab = wasserstein_distance(A, B, p)
            assert dab == pytest.approx(wasserstein_distance(B, A, p), abs=1e-12)
            assert wasserstein_distance(A, A, p) == pytest.approx(0.0, abs=1e-12)
            assert wasserstein_distance(A, C, p) <= dab + wasserstein_distance(B, C, p) + 1e-12


def test_diagonal_points_are_free(rng):
    for p in (1.0, 2.0, math.inf):
        F, G = random_points(rng, 4), random_points(rng, 3)
        a = rng.random(3)
        F2 = np.vstack([F, np.column_stack([a, a])])
        assert wasserstein_distance(F2, G, p) == pytest.approx(wasserstein_distance(F, G, p), abs=1e-12)


def test_wasserstein_dominates_bottleneck(rng):
    for _ in range(50):
        F, G = random_points(rng, rng.integers(0, 7)), random_points(rng, rng.integers(0, 7))
        dB = bottleneck_distance(F, G)
        assert wasserstein_distance(F, G, 1) >= dB - 1e-12
        assert wasserstein_distance(F, G, 2) >= dB - 1e-12


def test_hungarian_matches_scipy(rng, backend):
    from scipy.optimize import linear_sum_assignment
    for n in (1, 2, 5, 17, 40):
        C = rng.random((n, n))
        col, total = _backend.hungarian(C)
        r, c = linear_sum_assignment(C)
        assert total == pytest.approx(C[r, c].sum(), abs=1e-10)
        assert sorted(col) == list(range(n))


def test_hopcroft_karp_sizes():
    assert hopcroft_karp([[0, 1], [0], [1]], 2) == 2
    assert hopcroft_karp([[0], [0], [0]], 1) == 1
    assert hopcroft_karp([[], []], 3) == 0


def test_augmented_matrix_shape():
    C = augmented_costs([(0, 2)], [(0, 4), (1, 2)])
    assert C.shape == (3, 3)
    assert C[0, 0] == pytest.approx(2.0)  # (0,2) vs (0,4)
    assert C[0, 1] == pytest.approx(1.0)  # (0,2) vs (1,2)
