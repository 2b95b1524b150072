"""Finite-difference oracle for the network gradient, shared by unit and acceptance tests."""

import numpy as np

from designgrade.regressors import MlpParameters, mlp_gradients, mlp_loss

STEP = 1e-5
KINK_MARGIN = 1e-3


def random_config(rng, d=None, h=None, n=None):
    d = d or int(rng.integers(1, 6))
    h = h or int(rng.integers(1, 5))
    n = n or int(rng.integers(1, 8))
    params = MlpParameters(
        hidden_weights=rng.normal(size=(h, d)),
        hidden_bias=rng.normal(size=h),
        output_weights=rng.normal(size=h),
        output_bias=float(rng.normal()),
    )
    X = rng.normal(size=(n, d))
    y = rng.uniform(size=n)
    return params, X, y


def away_from_kinks(params, X) -> bool:
    pre = X @ params.hidden_weights.T + params.hidden_bias
    return bool(np.min(np.abs(pre)) > KINK_MARGIN)


def numeric_gradient(params, X, y, l2):
    arrays = {k: np.array(v, dtype=float) for k, v in params.to_arrays().items()}
    grads = {}
    for key, theta in arrays.items():
        g = np.zeros_like(theta)
        for idx in np.ndindex(theta.shape):
            saved = theta[idx]
            theta[idx] = saved + STEP
            up = mlp_loss(MlpParameters.from_arrays(arrays), X, y, l2)
            theta[idx] = saved - STEP
            down = mlp_loss(MlpParameters.from_arrays(arrays), X, y, l2)
            theta[idx] = saved
            g[idx] = (up - down) / (2 * STEP)
        grads[key] = g
    return grads


def max_relative_error(params, X, y, l2) -> float:
    analytic = mlp_gradients(params, X, y, l2).to_arrays()
    numeric = numeric_gradient(params, X, y, l2)
    worst = 0.0
    for key in analytic:
        a, b = np.asarray(analytic[key], dtype=float), numeric[key]
        # relative error with an absolute floor for near-zero components
        err = np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-6)
        worst = max(worst, float(err.max()))
    return worst


def sample_checkable(rng, count, l2_choices=(0.0, 1e-3, 0.1)):
    """``count`` random configurations whose hidden pre-activations avoid 0."""
    out = []
    while len(out) < count:
        params, X, y = random_config(rng)
        if away_from_kinks(params, X):
            out.append((params, X, y, float(rng.choice(l2_choices))))
    return out
