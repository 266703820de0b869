"""RBF-kernel support vector machines trained with sequential minimal
optimization, reduced to multiclass by one-vs-rest margin argmax.

The binary solver follows Platt's algorithm: alternate full sweeps and
non-bound sweeps, pick the second index by maximum error difference with
seeded random fallbacks, and keep an incremental error cache. Training
finishes when a from-scratch KKT audit shows no violation above ``tol``
(or the pass budget runs out).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

DEFAULTS = {
    "C": 1.0,
    "gamma": None,  # None -> 1 / (n_features * Var(X))
    "tol": 1e-3,
    "max_passes": 10000,
}

ALPHA_EPS = 1e-10  # below this a dual coefficient counts as zero
STEP_EPS = 1e-12


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq = (
        np.sum(a * a, axis=1)[:, np.newaxis]
        + np.sum(b * b, axis=1)[np.newaxis, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def resolve_gamma(x: np.ndarray, gamma: float | None) -> float:
    if gamma is not None:
        if gamma <= 0:
            raise ConfigError(f"gamma must be > 0, got {gamma}")
        return float(gamma)
    var = float(x.var())
    if var <= 0.0:
        var = 1.0
    return 1.0 / (x.shape[1] * var)


@dataclass
class BinarySVM:
    """Dual solution of one binary subproblem (labels in {-1, +1})."""

    alphas: np.ndarray
    bias: float
    support_idx: np.ndarray
    support_vectors: np.ndarray
    support_coef: np.ndarray  # alpha_i * y_i for support vectors
    gamma: float
    c: float
    converged: bool

    def decision(self, x: np.ndarray) -> np.ndarray:
        if len(self.support_idx) == 0:
            return np.full(x.shape[0], self.bias)
        k = rbf_kernel(x, self.support_vectors, self.gamma)
        return k @ self.support_coef + self.bias


def kkt_violations(kernel: np.ndarray, y: np.ndarray, alphas: np.ndarray, bias: float, c: float) -> np.ndarray:
    """Per-example KKT violation magnitudes, computed from scratch."""
    f = kernel @ (alphas * y) + bias
    margins = y * f
    at_zero = alphas <= ALPHA_EPS
    at_c = alphas >= c - ALPHA_EPS
    interior = ~(at_zero | at_c)
    viol = np.zeros_like(margins)
    viol[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
    viol[at_c] = np.maximum(0.0, margins[at_c] - 1.0)
    viol[interior] = np.abs(margins[interior] - 1.0)
    return viol


class _SMOSolver:
    def __init__(self, kernel: np.ndarray, y: np.ndarray, c: float, tol: float, rng: np.random.Generator):
        self.k = kernel
        self.y = y.astype(np.float64)
        self.c = c
        self.tol = tol
        self.rng = rng
        self.n = len(y)
        self.alphas = np.zeros(self.n)
        self.bias = 0.0
        self.errors = -self.y.copy()  # f(x) - y with all alphas zero

    def _objective_at(self, i1: int, i2: int, a1: float, a2: float) -> float:
        # dual objective restricted to the (i1, i2) pair, all else fixed
        k = self.k
        y1, y2 = self.y[i1], self.y[i2]
        f1 = self.errors[i1] + y1 - self.bias
        f2 = self.errors[i2] + y2 - self.bias
        v1 = f1 - self.alphas[i1] * y1 * k[i1, i1] - self.alphas[i2] * y2 * k[i1, i2]
        v2 = f2 - self.alphas[i1] * y1 * k[i1, i2] - self.alphas[i2] * y2 * k[i2, i2]
        return (
            a1
            + a2
            - 0.5 * k[i1, i1] * a1 * a1
            - 0.5 * k[i2, i2] * a2 * a2
            - y1 * y2 * k[i1, i2] * a1 * a2
            - y1 * a1 * v1
            - y2 * a2 * v2
        )

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1_old, a2_old = self.alphas[i1], self.alphas[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1_old + a2_old - self.c), min(self.c, a1_old + a2_old)
        else:
            lo, hi = max(0.0, a2_old - a1_old), min(self.c, self.c + a2_old - a1_old)
        if lo >= hi:
            return False
        k11, k12, k22 = self.k[i1, i1], self.k[i1, i2], self.k[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2 = a2_old + y2 * (e1 - e2) / eta
            a2 = min(max(a2, lo), hi)
        else:
            obj_lo = self._objective_at(i1, i2, a1_old + s * (a2_old - lo), lo)
            obj_hi = self._objective_at(i1, i2, a1_old + s * (a2_old - hi), hi)
            if obj_lo > obj_hi + STEP_EPS:
                a2 = lo
            elif obj_hi > obj_lo + STEP_EPS:
                a2 = hi
            else:
                return False
        if abs(a2 - a2_old) < STEP_EPS * (a2 + a2_old + STEP_EPS):
            return False
        a1 = a1_old + s * (a2_old - a2)
        if a1 < 0.0:
            a1 = 0.0
        elif a1 > self.c:
            a1 = self.c

        # decision uses f(x) = sum alpha*y*K + b, so thresholds move opposite
        # to the accumulated error terms
        b1 = self.bias - (e1 + y1 * (a1 - a1_old) * k11 + y2 * (a2 - a2_old) * k12)
        b2 = self.bias - (e2 + y1 * (a1 - a1_old) * k12 + y2 * (a2 - a2_old) * k22)
        if 0.0 < a1 < self.c:
            b_new = b1
        elif 0.0 < a2 < self.c:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        # incremental error-cache update for all examples
        self.errors += (
            y1 * (a1 - a1_old) * self.k[i1]
            + y2 * (a2 - a2_old) * self.k[i2]
            + (b_new - self.bias)
        )
        self.bias = b_new
        self.alphas[i1] = a1
        self.alphas[i2] = a2
        self.errors[i1] = self.decision_row(i1) - y1
        self.errors[i2] = self.decision_row(i2) - y2
        return True

    def decision_row(self, i: int) -> float:
        return float(self.k[i] @ (self.alphas * self.y) + self.bias)

    def _examine(self, i2: int) -> bool:
        y2 = self.y[i2]
        a2 = self.alphas[i2]
        e2 = self.errors[i2]
        r2 = e2 * y2
        if (r2 < -self.tol and a2 < self.c) or (r2 > self.tol and a2 > 0.0):
            non_bound = np.where((self.alphas > ALPHA_EPS) & (self.alphas < self.c - ALPHA_EPS))[0]
            if len(non_bound) > 1:
                i1 = int(non_bound[np.argmax(np.abs(self.errors[non_bound] - e2))])
                if self._take_step(i1, i2):
                    return True
            if len(non_bound) > 0:
                start = int(self.rng.integers(len(non_bound)))
                for offset in range(len(non_bound)):
                    i1 = int(non_bound[(start + offset) % len(non_bound)])
                    if self._take_step(i1, i2):
                        return True
            start = int(self.rng.integers(self.n))
            for offset in range(self.n):
                i1 = (start + offset) % self.n
                if self._take_step(i1, i2):
                    return True
        return False

    def solve(self, max_passes: int) -> bool:
        passes = 0
        examine_all = True
        while passes < max_passes:
            passes += 1
            changed = 0
            if examine_all:
                for i in range(self.n):
                    changed += self._examine(i)
            else:
                for i in np.where((self.alphas > ALPHA_EPS) & (self.alphas < self.c - ALPHA_EPS))[0]:
                    changed += self._examine(int(i))
            if examine_all:
                if changed == 0:
                    # audit from scratch; cache drift can hide late violations
                    self.errors = self.k @ (self.alphas * self.y) + self.bias - self.y
                    viol = kkt_violations(self.k, self.y, self.alphas, self.bias, self.c)
                    if float(viol.max(initial=0.0)) < self.tol:
                        return True
                else:
                    examine_all = False
            elif changed == 0:
                examine_all = True
        return False


def fit_binary(
    x: np.ndarray,
    y_signed: np.ndarray,
    kernel: np.ndarray,
    gamma: float,
    c: float = DEFAULTS["C"],
    tol: float = DEFAULTS["tol"],
    max_passes: int = DEFAULTS["max_passes"],
    seed: int = 0,
) -> BinarySVM:
    """Solve one binary subproblem given a precomputed kernel matrix."""
    if c <= 0 or tol <= 0:
        raise ConfigError("SVM requires C > 0 and tol > 0")
    solver = _SMOSolver(kernel, y_signed, c, tol, np.random.default_rng(seed))
    converged = solver.solve(max_passes)
    support = np.where(solver.alphas > ALPHA_EPS)[0]
    return BinarySVM(
        alphas=solver.alphas,
        bias=solver.bias,
        support_idx=support,
        support_vectors=x[support],
        support_coef=solver.alphas[support] * y_signed[support],
        gamma=gamma,
        c=c,
        converged=converged,
    )
