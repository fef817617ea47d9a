import math

import numpy as np
import pytest

from pssk.errors import TooLarge
from pssk.kernel import pssk_distance
from pssk.landscape import (
    build_landscape,
    landscape_distance,
    landscape_kernel,
    landscape_stability_rhs,
)

from conftest import random_points


def kth_max_oracle(P, k, s):
    P = np.asarray(P, float).reshape(-1, 2)
    vals = sorted((max(0.0, min(s - b, d - s)) for b, d in P), reverse=True)
    return vals[k - 1] if k <= len(vals) else 0.0


def test_single_tent():
    L = build_landscape([(0, 2)])
    assert len(L) == 1
    assert L.layers[0].t.tolist() == [0, 1, 2] and L.layers[0].y.tolist() == [0, 1, 0]


def test_nested_tents():
    L = build_landscape([(0, 4), (1, 3)])
    assert L.layers[0].t.tolist() == [0, 2, 4] and L.layers[0].y.tolist() == [0, 2, 0]
    assert L.layers[1].t.tolist() == [1, 2, 3] and L.layers[1].y.tolist() == [0, 1, 0]


def test_empty():
    assert len(build_landscape([])) == 0
    assert landscape_kernel([], [(0, 1)]) == 0.0


def test_against_kth_max_oracle(rng):
    for _ in range(20):
        P = random_points(rng, rng.integers(1, 8), 0, 5)
        L = build_landscape(P)
        s = rng.uniform(-1, 6, 1000)
        for k in range(1, len(P) + 2):
            got = L(k, s)
            want = np.array([kth_max_oracle(P, k, x) for x in s])
            assert np.max(np.abs(got - want)) <= 1e-12


def test_layers_are_ordered(rng):
    for _ in range(20):
        P = random_points(rng, rng.integers(2, 8), 0, 5)
        L = build_landscape(P)
        s = np.concatenate([np.concatenate([l.t for l in L.layers]), rng.uniform(0, 5, 100)])
        for k in range(1, len(L)):
            assert np.all(L(k, s) >= L(k + 1, s) - 1e-15)
        for layer in L.layers:
            assert np.all(np.diff(layer.t) > 0) and layer.y[0] == 0 and layer.y[-1] == 0


def test_kernel_values():
    assert landscape_kernel([(0, 2)], [(0, 2)]) == pytest.approx(2 / 3, rel=1e-15)
    assert landscape_distance([(0, 2)], []) == pytest.approx(math.sqrt(2 / 3), rel=1e-15)


def test_kernel_against_dense_quadrature(rng):
    for _ in range(15):
        P = random_points(rng, rng.integers(1, 6), 0, 3)
        Q = random_points(rng, rng.integers(1, 6), 0, 3)
        LP, LQ = build_landscape(P), build_landscape(Q)
        s = np.linspace(0, 3, 200001)
        trap = getattr(np, "trapezoid", None) or np.trapz
        want = sum(trap(LP(k, s) * LQ(k, s), s) for k in range(1, 7))
        assert landscape_kernel(P, Q) == pytest.approx(want, rel=1e-6, abs=1e-9)
        assert landscape_kernel(P, Q) == landscape_kernel(Q, P)


def test_rhs_examples():
    assert landscape_stability_rhs([(0, 2)], [(0, 2.2)]) == pytest.approx(math.sqrt(2 * 0.04 + (2 / 3) * 0.008),
                                                                         rel=1e-12)
    assert landscape_stability_rhs([(0, 1), (2, 5)], [(0, 1), (2, 5)]) == 0.0
    with pytest.raises(TooLarge):
        landscape_stability_rhs(np.zeros((8, 2)), [])


def test_bound_small(rng):
    for _ in range(50):
        F = random_points(rng, rng.integers(0, 4), 0, 2)
        G = random_points(rng, rng.integers(0, 4), 0, 2)
        assert landscape_distance(F, G) <= landscape_stability_rhs(F, G) + 1e-9


def low_persistence_classes(rng):
    """Two classes that share one high-persistence point and differ only near the diagonal.

    Class A has small features born at 10, 20, 30, 40; class B at 60, 70, 80, 90
    (persistence 0.5, positions jittered).  The query F' (class A) carries
    exactly G's high point, while the class-A reference F has its high point
    moved by (1, 1).
    """
    def low(births):
        b = np.asarray(births, float) + rng.normal(0, 0.01, len(births))
        return np.column_stack([b, b + 0.5])

    high = np.array([[0.0, 100.0]])
    F = np.vstack([high + 1.0, low([10, 20, 30, 40])])
    Fq = np.vstack([high, low([10, 20, 30, 40])])
    G = np.vstack([high, low([60, 70, 80, 90])])
    return F, Fq, G


def test_low_persistence_thought_experiment():
    F, Fq, G = low_persistence_classes(np.random.default_rng(7))
    sigma = 0.01
    # scale-space kernel: nearest reference is F, the right class
    assert pssk_distance(Fq, F, sigma) < pssk_distance(Fq, G, sigma)
    # landscapes are dominated by the high point: nearest reference is G, the wrong class
    assert landscape_distance(Fq, G) < landscape_distance(Fq, F)
