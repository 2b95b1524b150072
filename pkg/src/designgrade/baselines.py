"""Comparison regressors: least squares, sigmoid-linear and a CART regression tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, EmptyDataset
from .regressors import TrainConfig, TrainingTrace, check_dataset, run_adam_training, sigmoid

RIDGE_JITTER = 1e-8


def _as_matrix(X, d):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[-1] != d:
        raise DimensionMismatch(f"expected {d} features, got {X.shape[-1]}")
    return X


@dataclass
class LinearModel:
    weights: np.ndarray
    intercept: float
    degenerate: bool = False

    def predict(self, X) -> np.ndarray:
        X = _as_matrix(X, len(self.weights))
        return X @ self.weights + self.intercept


def fit_linear_regression(X, y) -> LinearModel:
    """Ordinary least squares through the normal equations.

    A rank-deficient design gets ``1e-8 * I`` added to its Gram matrix and the
    model is flagged ``degenerate``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(y) == 0:
        raise EmptyDataset("cannot fit on zero examples")
    A = np.hstack([X, np.ones((len(y), 1))])
    gram = A.T @ A
    rhs = A.T @ y
    degenerate = np.linalg.matrix_rank(A) < A.shape[1]
    if degenerate:
        gram = gram + RIDGE_JITTER * np.eye(A.shape[1])
    beta = np.linalg.solve(gram, rhs)
    return LinearModel(beta[:-1], float(beta[-1]), bool(degenerate))


def linear_predict(model: LinearModel, x) -> float:
    """Unclamped affine prediction; may fall outside [0, 1]."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != len(model.weights):
        raise DimensionMismatch(f"expected {len(model.weights)} features")
    return float(model.predict(x)[0])


@dataclass
class SigmoidLinearModel:
    weights: np.ndarray
    intercept: float = 0.0

    def predict(self, X) -> np.ndarray:
        X = _as_matrix(X, len(self.weights))
        return sigmoid(X @ self.weights + self.intercept)


def _sigmoid_linear_loss_and_grads(l2_lambda):
    def fn(arrays, X, y):
        w, b = arrays["weights"], arrays["intercept"][0]
        pred = sigmoid(X @ w + b)
        n = len(y)
        loss = float(np.mean((y - pred) ** 2)) + l2_lambda * float(np.sum(w**2))
        d_logit = (2.0 / n) * (pred - y) * pred * (1.0 - pred)
        grads = {
            "weights": X.T @ d_logit + 2.0 * l2_lambda * w,
            "intercept": np.array([np.sum(d_logit)]),
        }
        return loss, grads

    return fn


def _sigmoid_linear_predict(arrays, X):
    return sigmoid(X @ arrays["weights"] + arrays["intercept"][0])


def fit_sigmoid_linear(train, dev, config: TrainConfig) -> tuple[SigmoidLinearModel, TrainingTrace]:
    """Logistic-link linear model under MSE, same ADAM/best-dev protocol as the MLP.

    Weights start at zero (prediction 0.5 everywhere), so the seed has no effect.
    """
    X, _ = check_dataset(train, "train set")
    init = {"weights": np.zeros(X.shape[1]), "intercept": np.zeros(1)}
    frozen = () if config.use_bias else ("intercept",)
    best, trace = run_adam_training(
        init,
        _sigmoid_linear_loss_and_grads(config.l2_lambda),
        _sigmoid_linear_predict,
        train,
        dev,
        config,
        frozen,
    )
    return SigmoidLinearModel(best["weights"], float(best["intercept"][0])), trace


@dataclass
class TreeNode:
    value: float
    n_samples: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value, "n_samples": self.n_samples}
        return {
            "value": self.value,
            "n_samples": self.n_samples,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "feature" not in data:
            return cls(float(data["value"]), int(data["n_samples"]))
        return cls(
            float(data["value"]),
            int(data["n_samples"]),
            int(data["feature"]),
            float(data["threshold"]),
            cls.from_dict(data["left"]),
            cls.from_dict(data["right"]),
        )


@dataclass
class RegressionTree:
    root: TreeNode
    n_features: int
    max_depth: int
    min_leaf: int = 2

    def predict(self, X) -> np.ndarray:
        X = _as_matrix(X, self.n_features)
        return np.array([_route(self.root, row).value for row in X])

    def leaves(self) -> list[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend([node.right, node.left])
        return out


def _route(node: TreeNode, x) -> TreeNode:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node


# Split scores within this relative distance of the best count as ties.
SPLIT_TIE_RTOL = 1e-12


@dataclass(frozen=True, order=True)
class Split:
    sse: float
    feature: int
    threshold: float


def candidate_splits(X: np.ndarray, y: np.ndarray, min_leaf: int) -> list[Split]:
    """Every admissible (feature, midpoint) split with its summed child SSE.

    Thresholds are midpoints between consecutive distinct sorted values; both
    children must hold at least ``min_leaf`` samples.
    """
    n, d = X.shape
    out = []
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs, ys = X[order, j], y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        total, total_sq = csum[-1], csq[-1]
        for i in range(min_leaf, n - min_leaf + 1):
            # left = first i samples
            if xs[i - 1] == xs[i]:
                continue
            nl, nr = i, n - i
            sl, sr = csum[i - 1], total - csum[i - 1]
            ql, qr = csq[i - 1], total_sq - csq[i - 1]
            sse = max(ql - sl * sl / nl, 0.0) + max(qr - sr * sr / nr, 0.0)
            out.append(Split(float(sse), j, float((xs[i - 1] + xs[i]) / 2.0)))
    return out


def choose_split(candidates: list[Split]) -> Optional[Split]:
    """Lowest SSE; near-ties go to the lowest feature index, then smallest threshold."""
    if not candidates:
        return None
    best = min(c.sse for c in candidates)
    tol = SPLIT_TIE_RTOL * max(abs(best), 1.0)
    tied = [c for c in candidates if c.sse <= best + tol]
    return min(tied, key=lambda c: (c.feature, c.threshold))


def _grow(X, y, depth, max_depth, min_leaf) -> TreeNode:
    constant = bool(np.all(y == y[0]))
    # a constant node predicts its target exactly, free of summation rounding
    node = TreeNode(float(y[0]) if constant else float(np.mean(y)), len(y))
    if depth >= max_depth or len(y) < 2 * min_leaf or constant:
        return node
    split = choose_split(candidate_splits(X, y, min_leaf))
    parent_sse = float(np.sum((y - node.value) ** 2))
    if split is None or split.sse >= parent_sse:
        return node
    mask = X[:, split.feature] <= split.threshold
    node.feature, node.threshold = split.feature, split.threshold
    node.left = _grow(X[mask], y[mask], depth + 1, max_depth, min_leaf)
    node.right = _grow(X[~mask], y[~mask], depth + 1, max_depth, min_leaf)
    return node


def fit_cart(X, y, max_depth: int = 10, min_leaf: int = 2) -> RegressionTree:
    """Greedy CART regression tree minimizing the summed squared error of the children.

    Growth stops at ``max_depth``, when a node holds fewer than ``2 * min_leaf``
    samples, when its targets are constant, or when no split lowers the error.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(y) == 0:
        raise EmptyDataset("cannot fit on zero examples")
    if X.ndim != 2 or X.shape[0] != len(y):
        raise DimensionMismatch(f"X has shape {X.shape} for {len(y)} targets")
    if max_depth < 0 or min_leaf < 1:
        raise ValueError("max_depth must be >= 0 and min_leaf >= 1")
    root = _grow(X, y, 0, max_depth, min_leaf)
    return RegressionTree(root, X.shape[1], max_depth, min_leaf)


def cart_predict(tree: RegressionTree, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != tree.n_features:
        raise DimensionMismatch(f"expected {tree.n_features} features")
    return _route(tree.root, x).value


@dataclass
class DepthSweep:
    depths: list[int]
    dev_mse: list[float] = field(default_factory=list)
    best_depth: int = 10


def sweep_cart_depth(train, dev, depths, min_leaf: int = 2) -> tuple[RegressionTree, DepthSweep]:
    """Fit one tree per depth and keep the one with the lowest dev MSE (shallowest on ties)."""
    X, y = check_dataset(train, "train set")
    Xd, yd = check_dataset(dev, "dev set")
    depths = list(depths)
    if not depths:
        raise ValueError("no depths to sweep")
    sweep = DepthSweep(depths)
    best_tree, best_mse = None, np.inf
    for depth in depths:
        tree = fit_cart(X, y, depth, min_leaf)
        mse = float(np.mean((yd - tree.predict(Xd)) ** 2))
        sweep.dev_mse.append(mse)
        if mse < best_mse:
            best_tree, best_mse, sweep.best_depth = tree, mse, depth
    return best_tree, sweep
