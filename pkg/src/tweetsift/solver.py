"""Binary linear SVM trained by dual coordinate descent.

Solves the L2-regularized hinge-loss problem

    min_w  1/2 ||w||^2  +  sum_i C_i * max(0, 1 - y_i * w.x_i)

through its dual (one box-constrained variable per example, optimized one
coordinate at a time to its exact minimum). The bias is handled by
augmenting every vector with a constant-1 feature, which keeps the update
purely coordinate-wise at the cost of a (documented) regularized bias.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .features import SparseVector


@dataclass
class DualState:
    """Solver internals kept for inspection: alphas stay inside [0, C_i]."""

    alphas: np.ndarray
    caps: np.ndarray
    epochs: int
    converged: bool
    dual_objective: float
    dual_history: list[float] = field(default_factory=list)
    max_violation: float = 0.0


@dataclass
class LinearModel:
    """Weights of one binary classifier; positive sign favors positive_class."""

    weights: np.ndarray
    bias: float
    positive_class: str = "+1"
    negative_class: str = "-1"
    dual: DualState | None = None

    def decision(self, x: SparseVector) -> float:
        if len(x.indices) == 0:
            return self.bias
        return float(self.weights[x.indices] @ x.values) + self.bias

    def predict_sign(self, x: SparseVector) -> int:
        return 1 if self.decision(x) > 0 else -1


def primal_objective(weights: np.ndarray, bias: float, X: list[SparseVector],
                     y: np.ndarray, costs: np.ndarray,
                     regularize_bias: bool = True) -> float:
    """Objective the solver minimizes, for diagnostics and oracle checks."""
    obj = 0.5 * float(weights @ weights)
    if regularize_bias:
        obj += 0.5 * bias * bias
    for i, x in enumerate(X):
        margin = y[i] * ((float(weights[x.indices] @ x.values) if len(x.indices) else 0.0) + bias)
        obj += costs[i] * max(0.0, 1.0 - margin)
    return obj


def train_binary_svm(X: list[SparseVector], y, C: float = 1.0,
                     class_weights: dict | None = None,
                     n_features: int | None = None,
                     fit_bias: bool = True,
                     tol: float = 1e-4, max_epochs: int = 1000,
                     seed: int = 0,
                     positive_class: str = "+1", negative_class: str = "-1",
                     keep_dual_state: bool = False) -> LinearModel:
    """Train one hinge-loss SVM with per-class cost scaling.

    ``y`` holds +1/-1 labels; ``class_weights`` maps +1/-1 to a multiplier
    on C. Training stops when the largest projected dual gradient over an
    epoch drops below ``tol`` or after ``max_epochs`` sweeps.
    """
    y = np.asarray(y, dtype=np.float64)
    n = len(X)
    if n != len(y) or n < 2:
        raise ValueError("need at least two examples with matching labels")
    if set(np.unique(y)) != {-1.0, 1.0}:
        raise ValueError("labels must contain both +1 and -1")
    if C <= 0:
        raise ValueError("C must be positive")

    if n_features is None:
        n_features = 1 + max((int(x.indices[-1]) for x in X if len(x.indices)), default=-1)
    dim = n_features + (1 if fit_bias else 0)

    caps = np.full(n, C)
    if class_weights:
        caps *= np.array([class_weights.get(1 if yi > 0 else -1, 1.0) for yi in y])

    # Per-example flat views; the constant bias feature adds 1 to every Q_ii.
    idx = [np.asarray(x.indices, dtype=np.intp) for x in X]
    val = [np.asarray(x.values, dtype=np.float64) for x in X]
    qii = np.array([float(v @ v) for v in val]) + (1.0 if fit_bias else 0.0)

    w = np.zeros(dim)
    alphas = np.zeros(n)
    rng = np.random.default_rng(seed)

    dual_history: list[float] = []
    converged = False
    max_violation = np.inf
    epoch = 0
    for epoch in range(1, max_epochs + 1):
        max_violation = 0.0
        for i in rng.permutation(n):
            if qii[i] == 0.0:
                continue
            xi_idx, xi_val, yi = idx[i], val[i], y[i]
            score = float(w[xi_idx] @ xi_val)
            if fit_bias:
                score += w[-1]
            g = yi * score - 1.0
            a = alphas[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= caps[i]:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg != 0.0:
                max_violation = max(max_violation, abs(pg))
                a_new = min(max(a - g / qii[i], 0.0), caps[i])
                delta = a_new - a
                if delta != 0.0:
                    alphas[i] = a_new
                    w[xi_idx] += delta * yi * xi_val
                    if fit_bias:
                        w[-1] += delta * yi
        dual_history.append(float(alphas.sum() - 0.5 * (w @ w)))
        if max_violation < tol:
            converged = True
            break

    weights = w[:-1].copy() if fit_bias else w
    bias = float(w[-1]) if fit_bias else 0.0
    state = DualState(
        alphas=alphas, caps=caps, epochs=epoch, converged=converged,
        dual_objective=dual_history[-1], dual_history=dual_history,
        max_violation=float(max_violation),
    )
    return LinearModel(weights=weights, bias=bias,
                       positive_class=positive_class, negative_class=negative_class,
                       dual=state if keep_dual_state else _strip_history(state))


def _strip_history(state: DualState) -> DualState:
    # Keep the cheap scalars; drop per-epoch history and per-example arrays
    # are small enough to retain for invariant checks.
    state.dual_history = []
    return state
