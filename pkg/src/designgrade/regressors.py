"""Single-hidden-layer regressor with a sigmoid output, trained by full-batch ADAM.

The network maps a standardized feature vector ``x`` (length ``d``) to a score::

    hidden = relu(W1 @ x + b1)          # W1: (h, d)
    score  = sigmoid(w2 @ hidden + b2)  # w2: (h,)

Loss is mean squared error plus ``l2_lambda`` times the squared norm of the
weights (biases are not penalized). One ADAM step is taken per epoch over the
whole training set, and the epoch whose parameters reach the lowest dev-set MSE
is kept.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, EmptyBatch, EmptyDataset

# sigmoid(+-36) is still strictly inside (0, 1) in float64
LOGIT_CLAMP = 36.0


def sigmoid(z):
    z = np.clip(z, -LOGIT_CLAMP, LOGIT_CLAMP)
    return 1.0 / (1.0 + np.exp(-z))


@dataclass(frozen=True)
class TrainConfig:
    hidden_size: int = 32
    epochs: int = 250
    learning_rate: float = 0.001
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    l2_lambda: float = 1e-4
    seed: int = 0
    use_bias: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.hidden_size < 1:
            raise ValueError("hidden_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise ValueError("ADAM betas must lie in [0, 1)")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MlpParameters:
    hidden_weights: np.ndarray
    hidden_bias: np.ndarray
    output_weights: np.ndarray
    output_bias: float = 0.0

    @property
    def input_size(self) -> int:
        return self.hidden_weights.shape[1]

    @property
    def hidden_size(self) -> int:
        return self.hidden_weights.shape[0]

    def to_arrays(self) -> dict[str, np.ndarray]:
        return {
            "hidden_weights": self.hidden_weights,
            "hidden_bias": self.hidden_bias,
            "output_weights": self.output_weights,
            "output_bias": np.array([self.output_bias], dtype=float),
        }

    @classmethod
    def from_arrays(cls, arrays) -> "MlpParameters":
        return cls(
            hidden_weights=np.array(arrays["hidden_weights"], dtype=float),
            hidden_bias=np.array(arrays["hidden_bias"], dtype=float),
            output_weights=np.array(arrays["output_weights"], dtype=float),
            output_bias=float(np.asarray(arrays["output_bias"], dtype=float).reshape(-1)[0]),
        )

    def predict(self, X) -> np.ndarray:
        return mlp_predict(self, X)


WEIGHT_KEYS = ("hidden_weights", "output_weights", "weights")
BIAS_KEYS = ("hidden_bias", "output_bias", "intercept")


def glorot_bound(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def init_mlp(seed: int, d: int, h: int) -> MlpParameters:
    """Uniform fan-based initialization with zero biases.

    Draws come from ``numpy.random.default_rng(seed)`` (PCG64): first the
    ``h*d`` hidden weights in row-major order, then the ``h`` output weights.
    """
    if d < 1 or h < 1:
        raise ValueError("d and h must be >= 1")
    rng = np.random.default_rng(_seed_bits(seed))
    b1 = glorot_bound(d, h)
    b2 = glorot_bound(h, 1)
    return MlpParameters(
        hidden_weights=rng.uniform(-b1, b1, size=(h, d)),
        hidden_bias=np.zeros(h),
        output_weights=rng.uniform(-b2, b2, size=h),
        output_bias=0.0,
    )


def _seed_bits(seed: int) -> int:
    return int(seed) & 0xFFFFFFFFFFFFFFFF


def _as_matrix(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[-1] != d:
        raise DimensionMismatch(f"expected {d} features, got {X.shape[-1]}")
    return X


def _hidden_pre(params: MlpParameters, X: np.ndarray) -> np.ndarray:
    return X @ params.hidden_weights.T + params.hidden_bias


def mlp_predict(params: MlpParameters, X) -> np.ndarray:
    X = _as_matrix(X, params.input_size)
    hidden = np.maximum(_hidden_pre(params, X), 0.0)
    return sigmoid(hidden @ params.output_weights + params.output_bias)


def mlp_forward(params: MlpParameters, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("mlp_forward takes a single feature vector")
    return float(mlp_predict(params, x)[0])


def _l2_penalty(arrays: dict, l2_lambda: float) -> float:
    if not l2_lambda:
        return 0.0
    return l2_lambda * sum(float(np.sum(arrays[k] ** 2)) for k in WEIGHT_KEYS if k in arrays)


def _check_batch(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim == 1:
        X = X[None, :]
    if len(y) == 0 or X.shape[0] == 0:
        raise EmptyBatch("batch is empty")
    if X.shape[0] != len(y):
        raise DimensionMismatch(f"{X.shape[0]} inputs but {len(y)} targets")
    return X, y


def mlp_loss(params: MlpParameters, X, y, l2_lambda: float) -> float:
    X, y = _check_batch(X, y)
    pred = mlp_predict(params, X)
    return float(np.mean((y - pred) ** 2)) + _l2_penalty(params.to_arrays(), l2_lambda)


def mlp_gradients(params: MlpParameters, X, y, l2_lambda: float) -> MlpParameters:
    """Analytic gradient of :func:`mlp_loss`, returned in parameter layout.

    The ReLU derivative at exactly zero is taken as 0.
    """
    X, y = _check_batch(X, y)
    X = _as_matrix(X, params.input_size)
    n = len(y)
    pre = _hidden_pre(params, X)
    hidden = np.maximum(pre, 0.0)
    pred = sigmoid(hidden @ params.output_weights + params.output_bias)

    d_logit = (2.0 / n) * (pred - y) * pred * (1.0 - pred)
    d_w2 = hidden.T @ d_logit + 2.0 * l2_lambda * params.output_weights
    d_b2 = float(np.sum(d_logit))
    d_hidden = np.outer(d_logit, params.output_weights) * (pre > 0)
    d_w1 = d_hidden.T @ X + 2.0 * l2_lambda * params.hidden_weights
    d_b1 = d_hidden.sum(axis=0)
    return MlpParameters(d_w1, d_b1, d_w2, d_b2)


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]

    @classmethod
    def zeros_like(cls, arrays: dict) -> "AdamState":
        return cls(
            {k: np.zeros_like(a, dtype=float) for k, a in arrays.items()},
            {k: np.zeros_like(a, dtype=float) for k, a in arrays.items()},
        )


def adam_update(state: AdamState, params: dict, grads: dict, config: TrainConfig, step_index: int):
    """One ADAM step on a dict of arrays; returns ``(new_params, new_state)``.

    Inputs are not modified.
    """
    if step_index < 1:
        raise ValueError("step_index starts at 1")
    b1, b2, eps, lr = config.adam_beta1, config.adam_beta2, config.adam_epsilon, config.learning_rate
    new_params, new_m, new_v = {}, {}, {}
    for key, theta in params.items():
        g = grads[key]
        m = b1 * state.m[key] + (1.0 - b1) * g
        v = b2 * state.v[key] + (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**step_index)
        v_hat = v / (1.0 - b2**step_index)
        new_params[key] = theta - lr * m_hat / (np.sqrt(v_hat) + eps)
        new_m[key], new_v[key] = m, v
    return new_params, AdamState(new_m, new_v)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    dev_mse: float


@dataclass
class TrainingTrace:
    records: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    initial_train_loss: float = float("nan")

    @property
    def dev_mse(self) -> list[float]:
        return [r.dev_mse for r in self.records]

    @property
    def train_loss(self) -> list[float]:
        return [r.train_loss for r in self.records]


def best_epoch_index(dev_mse) -> int:
    """1-based epoch with the lowest dev MSE; the earliest wins ties."""
    if len(dev_mse) == 0:
        raise ValueError("empty trace")
    return int(np.argmin(np.asarray(dev_mse, dtype=float))) + 1


def check_dataset(data, what="dataset"):
    X, y = data
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(y) == 0:
        raise EmptyDataset(f"{what} is empty")
    if X.ndim != 2 or X.shape[0] != len(y):
        raise DimensionMismatch(f"{what}: X has shape {X.shape} for {len(y)} targets")
    return X, y


def run_adam_training(
    initial: dict,
    loss_and_grads: Callable[[dict, np.ndarray, np.ndarray], tuple[float, dict]],
    predict: Callable[[dict, np.ndarray], np.ndarray],
    train,
    dev,
    config: TrainConfig,
    frozen: tuple[str, ...] = (),
):
    """Shared epoch loop: one full-batch ADAM step per epoch, keep best-dev snapshot.

    ``frozen`` names parameters whose gradient is forced to zero (used for the
    bias-free variant).
    """
    X, y = check_dataset(train, "train set")
    Xd, yd = check_dataset(dev, "dev set")
    params = {k: np.array(v, dtype=float) for k, v in initial.items()}
    state = AdamState.zeros_like(params)
    trace = TrainingTrace(initial_train_loss=loss_and_grads(params, X, y)[0])

    best, best_mse = None, np.inf
    for epoch in range(1, config.epochs + 1):
        _, grads = loss_and_grads(params, X, y)
        for key in frozen:
            grads[key] = np.zeros_like(grads[key])
        params, state = adam_update(state, params, grads, config, epoch)
        train_loss = loss_and_grads(params, X, y)[0]
        dev_mse = float(np.mean((yd - predict(params, Xd)) ** 2))
        trace.records.append(EpochRecord(epoch, train_loss, dev_mse))
        if dev_mse < best_mse:
            best, best_mse = params, dev_mse
            trace.best_epoch = epoch
    return best, trace


def _mlp_loss_and_grads(l2_lambda):
    def fn(arrays, X, y):
        params = MlpParameters.from_arrays(arrays)
        return mlp_loss(params, X, y, l2_lambda), mlp_gradients(params, X, y, l2_lambda).to_arrays()

    return fn


def _mlp_predict_arrays(arrays, X):
    return mlp_predict(MlpParameters.from_arrays(arrays), X)


def train_mlp(train, dev, config: TrainConfig) -> tuple[MlpParameters, TrainingTrace]:
    """Train one network on ``train = (X, y)`` and select the best epoch on ``dev``.

    Features must already be standardized with statistics from the train split.
    """
    X, _ = check_dataset(train, "train set")
    init = init_mlp(config.seed, X.shape[1], config.hidden_size)
    frozen = () if config.use_bias else ("hidden_bias", "output_bias")
    best, trace = run_adam_training(
        init.to_arrays(),
        _mlp_loss_and_grads(config.l2_lambda),
        _mlp_predict_arrays,
        train,
        dev,
        config,
        frozen,
    )
    return MlpParameters.from_arrays(best), trace


def member_seed(base_seed: int, index: int) -> int:
    """Seed of ensemble member ``index``: the first 64-bit word of
    ``numpy.random.SeedSequence([base_seed, index])``."""
    seq = np.random.SeedSequence([_seed_bits(base_seed), int(index)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass
class Ensemble:
    members: list[MlpParameters]
    member_seeds: list[int]
    traces: list[TrainingTrace] = field(default_factory=list)

    def __post_init__(self):
        if not self.members:
            raise ValueError("an ensemble needs at least one member")
        shapes = {m.hidden_weights.shape for m in self.members}
        if len(shapes) != 1:
            raise ValueError(f"members disagree on shape: {sorted(shapes)}")

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def input_size(self) -> int:
        return self.members[0].input_size

    def predict(self, X) -> np.ndarray:
        return ensemble_predict_batch(self, X)


def train_ensemble(train, dev, config: TrainConfig, m: int = 10, base_seed: Optional[int] = None, workers: int = 1) -> Ensemble:
    """Train ``m`` independently seeded networks.

    Member ``l`` uses ``member_seed(base_seed, l)``; with ``workers > 1`` the
    members train on a thread pool, which cannot change the result.
    """
    if m < 1:
        raise ValueError("ensemble size must be >= 1")
    base = config.seed if base_seed is None else base_seed
    seeds = [member_seed(base, i) for i in range(m)]
    configs = [TrainConfig(**{**config.to_dict(), "seed": s}) for s in seeds]

    def fit(cfg):
        return train_mlp(train, dev, cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fit, configs))
    else:
        results = [fit(cfg) for cfg in configs]
    return Ensemble([p for p, _ in results], seeds, [t for _, t in results])


def ensemble_predict_batch(ensemble: Ensemble, X) -> np.ndarray:
    # members are summed in order, then divided once
    total = None
    for member in ensemble.members:
        pred = mlp_predict(member, X)
        total = pred if total is None else total + pred
    return total / ensemble.size


def ensemble_predict(ensemble: Ensemble, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("ensemble_predict takes a single feature vector")
    return float(ensemble_predict_batch(ensemble, x)[0])
