"""Soft-margin C-SVM on a precomputed kernel, trained by SMO.

The binary dual ``min 1/2 a'Qa - e'a`` s.t. ``0 <= a <= C``, ``y'a = 0`` with
``Q = (y y') * K`` is solved by sequential minimal optimisation using the
maximal-violating-pair working set.  Multiclass problems use one-vs-one
machines and majority vote, ties going to the smallest class label.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NoConvergence, NotPSDWarning, SingleClass, TooFewItems
from .gram import GramMatrix, gram_matrix
from .linalg import sym_eigenvalues

__all__ = [
    "BinarySvm",
    "SvmModel",
    "smo_solve",
    "svm_train",
    "svm_predict",
    "psd_shift",
    "stratified_folds",
    "CVResult",
    "cross_validate",
]

KKT_TOL = 1e-3
MAX_ITER = 100_000
NOT_PSD_RTOL = 1e-6


@dataclass
class BinarySvm:
    """One binary machine; ``coef[t] = alpha_t * y_t`` over its training items."""

    positive: object
    negative: object
    indices: np.ndarray
    coef: np.ndarray
    bias: float
    iterations: int

    @property
    def support_indices(self) -> np.ndarray:
        return self.indices[self.coef != 0.0]

    def decision(self, K_rows: np.ndarray) -> np.ndarray:
        """Decision values for test rows of the kernel against *all* training items."""
        return K_rows[:, self.indices] @ self.coef + self.bias


@dataclass
class SvmModel:
    classes: list
    machines: list[BinarySvm]
    C: float
    shift: float = 0.0
    n_train: int = 0

    @property
    def dual_coefficients(self) -> np.ndarray:
        """Per-training-item dual coefficients (binary models only)."""
        if len(self.machines) != 1:
            raise AttributeError("dual_coefficients is defined for binary models")
        m = self.machines[0]
        out = np.zeros(self.n_train)
        out[m.indices] = m.coef
        return out

    @property
    def bias(self) -> float:
        if len(self.machines) != 1:
            raise AttributeError("bias is defined for binary models")
        return self.machines[0].bias

    @property
    def support_indices(self) -> np.ndarray:
        idx = set()
        for m in self.machines:
            idx.update(m.support_indices.tolist())
        return np.array(sorted(idx), dtype=np.intp)


def smo_solve(K: np.ndarray, y: np.ndarray, C: float, tol: float = KKT_TOL,
              max_iter: int = MAX_ITER) -> tuple[np.ndarray, float, int]:
    """Solve the binary dual; returns ``(alpha, bias, iterations)``."""
    n = y.size
    y = y.astype(np.float64)
    alpha = np.zeros(n)
    grad = -np.ones(n)
    diag = np.diag(K).copy()
    it = 0
    while True:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        score = -y * grad
        i = int(np.argmax(np.where(up, score, -np.inf)))
        j = int(np.argmin(np.where(low, score, np.inf)))
        m_up, m_low = score[i], score[j]
        if not (np.any(up) and np.any(low)) or m_up - m_low < tol:
            break
        if it >= max_iter:
            raise NoConvergence(f"SMO did not reach KKT tolerance {tol} in {max_iter} iterations")
        it += 1
        quad = diag[i] + diag[j] - 2.0 * K[i, j]
        if quad <= 0.0:
            quad = 1e-12
        t = (m_up - m_low) / quad
        t = min(t, C - alpha[i] if y[i] > 0 else alpha[i])
        t = min(t, alpha[j] if y[j] > 0 else C - alpha[j])
        ai = alpha[i] + y[i] * t
        aj = alpha[j] - y[j] * t
        alpha[i] = min(max(ai, 0.0), C)
        alpha[j] = min(max(aj, 0.0), C)
        grad += t * y * (K[:, i] - K[:, j])
    score = -y * grad
    free = (alpha > 0) & (alpha < C)
    if np.any(free):
        bias = float(np.mean(score[free]))
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        hi = np.max(score[up]) if np.any(up) else 0.0
        lo = np.min(score[low]) if np.any(low) else 0.0
        bias = float((hi + lo) / 2.0)
    return alpha, bias, it


def psd_shift(K: np.ndarray) -> float:
    """Diagonal shift needed to make ``K`` PSD (0 if already PSD within tolerance)."""
    eig = sym_eigenvalues(K)
    if eig.size == 0:
        return 0.0
    lo, hi = float(eig[0]), float(np.max(np.abs(eig)))
    if lo < -NOT_PSD_RTOL * hi:
        return abs(lo) + 1e-10
    return 0.0


def _sorted_classes(labels) -> list:
    return sorted(set(labels))


def svm_train(G, labels: Sequence, C: float, check_psd: bool = True,
              tol: float = KKT_TOL, max_iter: int = MAX_ITER) -> SvmModel:
    K = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=np.float64)
    labels = list(labels)
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")
    if len(labels) != K.shape[0]:
        raise ValueError("one label per Gram row is required")
    classes = _sorted_classes(labels)
    if len(classes) < 2:
        raise SingleClass("training data contains a single class")
    shift = psd_shift(K) if check_psd else 0.0
    if shift > 0.0:
        warnings.warn(f"Gram matrix is not PSD; adding {shift:.3g} to the diagonal", NotPSDWarning,
                      stacklevel=2)
        K = K + shift * np.eye(K.shape[0])
    lab = np.array([classes.index(l) for l in labels])
    machines = []
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            idx = np.flatnonzero((lab == a) | (lab == b))
            y = np.where(lab[idx] == a, 1.0, -1.0)
            alpha, bias, it = smo_solve(K[np.ix_(idx, idx)], y, C, tol, max_iter)
            machines.append(BinarySvm(classes[a], classes[b], idx, alpha * y, bias, it))
    return SvmModel(classes, machines, float(C), shift, len(labels))


def svm_decision(model: SvmModel, K_test: np.ndarray) -> np.ndarray:
    """Decision values, one column per binary machine (positive = first class)."""
    K_test = np.atleast_2d(np.asarray(K_test, dtype=np.float64))
    return np.column_stack([m.decision(K_test) for m in model.machines])


def svm_predict(model: SvmModel, K_test: np.ndarray) -> list:
    """Predict from kernel rows ``K(test_i, train_j)``."""
    dec = svm_decision(model, K_test)
    ncls = len(model.classes)
    out = []
    for row in dec:
        votes = np.zeros(ncls, dtype=np.int64)
        for val, m in zip(row, model.machines):
            winner = m.positive if val >= 0 else m.negative
            votes[model.classes.index(winner)] += 1
        out.append(model.classes[int(np.argmax(votes))])
    return out


def stratified_folds(labels: Sequence, folds: int, seed: int) -> np.ndarray:
    """Fold index per item; classes are shuffled and dealt round-robin.

    ``folds == len(labels)`` is leave-one-out.  Otherwise every class must
    have at least ``folds`` members.
    """
    labels = list(labels)
    n = len(labels)
    if folds < 2:
        raise ValueError("need at least two folds")
    if folds > n:
        raise TooFewItems(f"{folds} folds requested for {n} items")
    rng = np.random.Generator(np.random.Philox(seed))
    if folds == n:
        return rng.permutation(n)
    assign = np.empty(n, dtype=np.intp)
    offset = 0
    for c in _sorted_classes(labels):
        members = np.array([i for i, l in enumerate(labels) if l == c], dtype=np.intp)
        if members.size < folds:
            raise TooFewItems(f"class {c!r} has {members.size} items, fewer than {folds} folds")
        perm = rng.permutation(members)
        assign[perm] = (offset + np.arange(perm.size)) % folds
        offset = (offset + perm.size) % folds
    return assign


@dataclass
class CVResult:
    best_C: float
    best_sigma: float | None
    best_accuracy: float
    fold_accuracies: list[float]
    table: list[tuple[float | None, float, float]] = field(default_factory=list)

    def sigma_curve(self) -> list[tuple[float, float]]:
        """Best mean accuracy over ``C`` for each scale."""
        best: dict[float, float] = {}
        for s, _, acc in self.table:
            if s is not None:
                best[s] = max(best.get(s, -1.0), acc)
        return sorted(best.items())

    def curve_csv(self) -> str:
        from .diagram import format_real
        lines = ["sigma,accuracy\n"]
        lines += [f"{format_real(s)},{format_real(a)}\n" for s, a in self.sigma_curve()]
        return "".join(lines)


def _fold_accuracies(K: np.ndarray, labels: list, assign: np.ndarray, folds: int, C: float) -> list[float]:
    accs = []
    for f in range(folds):
        test = np.flatnonzero(assign == f)
        train = np.flatnonzero(assign != f)
        if test.size == 0:
            continue
        ytr = [labels[i] for i in train]
        if len(set(ytr)) < 2:
            pred = [ytr[0]] * test.size
        else:
            model = svm_train(K[np.ix_(train, train)], ytr, C, check_psd=False)
            pred = svm_predict(model, K[np.ix_(test, train)])
        accs.append(float(np.mean([p == labels[i] for p, i in zip(pred, test)])))
    return accs


def cross_validate(diagrams, labels: Sequence, kernel_family: str = "pssk",
                   C_grid: Sequence[float] = (1.0,), sigma_grid: Sequence[float] = (1.0,),
                   folds: int = 10, seed: int = 0, threads: int = 1) -> CVResult:
    """Grid search over ``(C, sigma)`` by stratified k-fold accuracy.

    The Gram matrix is computed once per scale and sliced per fold.  Ties
    prefer the smaller ``C``, then the smaller ``sigma``.
    """
    labels = list(labels)
    if not C_grid or (kernel_family == "pssk" and not sigma_grid):
        raise ValueError("parameter grids must be nonempty")
    assign = stratified_folds(labels, folds, seed)
    scales = sorted(float(s) for s in sigma_grid) if kernel_family == "pssk" else [None]
    Cs = sorted(float(c) for c in C_grid)
    table = []
    best = None
    for s in scales:
        K = gram_matrix(diagrams, kernel_family, s, threads=threads).entries
        shift = psd_shift(K)
        if shift > 0.0:
            warnings.warn(f"Gram matrix is not PSD; adding {shift:.3g} to the diagonal", NotPSDWarning,
                          stacklevel=2)
            K = K + shift * np.eye(K.shape[0])
        for C in Cs:
            accs = _fold_accuracies(K, labels, assign, folds, C)
            mean = float(np.mean(accs))
            table.append((s, C, mean))
            key = (-mean, C, -math.inf if s is None else s)
            if best is None or key < best[0]:
                best = (key, C, s, mean, accs)
    _, C, s, mean, accs = best
    return CVResult(C, s, mean, accs, table)
