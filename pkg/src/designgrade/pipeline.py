"""Train/evaluate glue shared by the CLI and the end-to-end tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .artifact import ModelArtifact
from .baselines import fit_cart, fit_linear_regression, fit_sigmoid_linear, sweep_cart_depth
from .corpus import LabeledExample, SplitSpec, as_arrays, avg_accuracy, fit_standardizer, mse_metric, split_corpus
from .errors import NoGoodPrograms
from .feedback import GOOD_THRESHOLD, compute_good_profile
from .regressors import TrainConfig, train_ensemble, train_mlp

DEFAULT_CART_DEPTH = 10


@dataclass(frozen=True)
class Metrics:
    mse: float
    accuracy: float
    n: int

    def to_dict(self) -> dict:
        return {"mse": self.mse, "accuracy": self.accuracy, "n": self.n}

    def row(self, label: str) -> str:
        return f"{label:<8} MSE {self.mse:.3f}  Accuracy {self.accuracy * 100:.2f}%  (n={self.n})"


def evaluate(artifact: ModelArtifact, examples: Sequence[LabeledExample]) -> Metrics:
    X, y = as_arrays(examples)
    preds = artifact.predict_raw(X)
    return Metrics(mse_metric(preds, y), avg_accuracy(preds, y), len(y))


def train_pipeline(
    examples: Sequence[LabeledExample],
    kind: str = "ensemble",
    config: TrainConfig = TrainConfig(),
    ensemble_size: int = 10,
    split: SplitSpec = SplitSpec(),
    cart_depth: int = DEFAULT_CART_DEPTH,
    depth_sweep: Optional[Sequence[int]] = None,
    min_leaf: int = 2,
    workers: int = 1,
    good_threshold: float = GOOD_THRESHOLD,
):
    """Split, standardize on train, fit ``kind``, profile good train programs.

    Returns ``(artifact, {"train": Metrics, "dev": ..., "test": ...})``. A corpus
    with no train program above ``good_threshold`` still trains; its artifact
    simply carries no good profile.
    """
    train, dev, test = split_corpus(list(examples), split)
    X_train_raw, y_train = as_arrays(train)
    standardizer = fit_standardizer(X_train_raw)
    X_train = standardizer.transform(X_train_raw)
    X_dev_raw, y_dev = as_arrays(dev)
    X_dev = standardizer.transform(X_dev_raw)

    meta = {
        "config": config.to_dict(),
        "split": {"train": split.train, "dev": split.dev, "test": split.test, "seed": split.seed},
        "sizes": {"train": len(train), "dev": len(dev), "test": len(test)},
    }
    if kind == "mlp":
        model, trace = train_mlp((X_train, y_train), (X_dev, y_dev), config)
        meta["best_epochs"] = [trace.best_epoch]
        meta["seeds"] = [config.seed]
    elif kind == "ensemble":
        model = train_ensemble((X_train, y_train), (X_dev, y_dev), config, ensemble_size, config.seed, workers)
        meta["best_epochs"] = [t.best_epoch for t in model.traces]
        meta["seeds"] = list(model.member_seeds)
    elif kind == "sigmoid-linear":
        model, trace = fit_sigmoid_linear((X_train, y_train), (X_dev, y_dev), config)
        meta["best_epochs"] = [trace.best_epoch]
    elif kind == "linear":
        model = fit_linear_regression(X_train, y_train)
        meta["degenerate"] = model.degenerate
    elif kind == "cart":
        if depth_sweep:
            model, sweep = sweep_cart_depth((X_train, y_train), (X_dev, y_dev), depth_sweep, min_leaf)
            meta["depth_sweep"] = {"depths": sweep.depths, "dev_mse": sweep.dev_mse, "best_depth": sweep.best_depth}
        else:
            model = fit_cart(X_train, y_train, cart_depth, min_leaf)
        meta["max_depth"] = model.max_depth
        meta["min_leaf"] = min_leaf
    else:
        raise ValueError(f"unknown model kind {kind!r}")

    try:
        profile = compute_good_profile(train, good_threshold)
    except NoGoodPrograms:
        profile = None

    artifact = ModelArtifact(kind, model, standardizer, profile, meta)
    metrics = {name: evaluate(artifact, part) for name, part in (("train", train), ("dev", dev), ("test", test))}
    artifact.train_meta["metrics"] = {k: m.to_dict() for k, m in metrics.items()}
    return artifact, metrics


def single_member_mses(artifact: ModelArtifact, examples) -> list[float]:
    """Test MSE of each ensemble member on its own."""
    X, y = as_arrays(examples)
    Xs = artifact.standardizer.transform(X)
    return [mse_metric(member.predict(Xs), y) for member in artifact.model.members]


def constant_mean_accuracy(y) -> float:
    y = np.asarray(y, dtype=float)
    return avg_accuracy(np.full_like(y, y.mean()), y)
