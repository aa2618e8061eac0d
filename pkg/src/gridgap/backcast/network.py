"""Small fully-connected regression network trained with full-batch Adam.

Four weight layers with rectified-linear activations between them, squared
error loss. Everything is plain numpy so a fixed random stream fully
determines the trained weights.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError


def init_params(rng: np.random.Generator, sizes) -> list[tuple[np.ndarray, np.ndarray]]:
    """He-scaled Gaussian weights, zero biases; sizes = (in, h1, h2, h3, out)."""
    sizes = [int(s) for s in sizes]
    if len(sizes) != 5:
        raise ParameterError(f"expected 5 layer sizes (4 weight layers), got {len(sizes)}")
    if min(sizes) < 1:
        raise ParameterError(f"layer sizes must be positive, got {sizes}")
    params = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        w = rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)
        params.append((w, np.zeros(fan_out)))
    return params


def forward(params, x: np.ndarray) -> np.ndarray:
    """Predicted values, shape (rows,); input shape (rows, features)."""
    h = x
    last = len(params) - 1
    for i, (w, b) in enumerate(params):
        h = h @ w + b
        if i != last:
            h = np.maximum(h, 0.0)
    return h[:, 0]


def loss_and_grads(params, x: np.ndarray, y: np.ndarray):
    """Mean squared error and its gradient for every weight and bias."""
    acts = [x]
    pre = []
    h = x
    last = len(params) - 1
    for i, (w, b) in enumerate(params):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0) if i != last else z
        acts.append(h)
    rows = x.shape[0]
    err = acts[-1][:, 0] - y
    loss = float(err @ err) / rows
    grads = [None] * len(params)
    delta = (2.0 / rows) * err[:, None]
    for i in range(last, -1, -1):
        w, _ = params[i]
        grads[i] = (acts[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            delta = (delta @ w.T) * (pre[i - 1] > 0.0)
    return loss, grads


def gradient_check(params, x: np.ndarray, y: np.ndarray, samples: int = 24,
                   eps: float = 1e-6, rng: np.random.Generator | None = None) -> float:
    """Largest relative gap between backprop and central differences.

    Probes ``samples`` randomly chosen coordinates; exhaustive checking is
    quadratic in parameter count and only worth it on toy problems. Probes
    whose perturbation flips a rectifier on or off are skipped: the loss has
    a kink there and the two-sided difference measures nothing meaningful.
    """
    rng = rng or np.random.default_rng(0)
    _, grads = loss_and_grads(params, x, y)
    worst = 0.0
    flat = []
    for i, (w, b) in enumerate(params):
        flat.extend((i, 0, idx) for idx in range(w.size))
        flat.extend((i, 1, idx) for idx in range(b.size))
    chosen = rng.choice(len(flat), size=min(samples, len(flat)), replace=False)
    for c in chosen:
        layer, part, idx = flat[int(c)]
        arrays = [(np.array(w), np.array(b)) for w, b in params]
        target = arrays[layer][part].reshape(-1)
        target[idx] += eps
        up, pattern_up = _loss_and_pattern(arrays, x, y)
        target[idx] -= 2 * eps
        down, pattern_down = _loss_and_pattern(arrays, x, y)
        target[idx] += eps
        if pattern_up != pattern_down:
            continue
        numeric = (up - down) / (2 * eps)
        analytic = grads[layer][part].reshape(-1)[idx]
        scale = max(abs(numeric), abs(analytic), 1e-8)
        worst = max(worst, abs(numeric - analytic) / scale)
    return worst


def _loss_and_pattern(params, x, y):
    """Loss plus a hashable record of which rectifier units were active."""
    h = x
    last = len(params) - 1
    pattern = []
    for i, (w, b) in enumerate(params):
        z = h @ w + b
        if i != last:
            pattern.append((z > 0.0).tobytes())
            h = np.maximum(z, 0.0)
        else:
            h = z
    err = h[:, 0] - y
    return float(err @ err) / x.shape[0], tuple(pattern)


def train_network(
    x: np.ndarray,
    y: np.ndarray,
    widths,
    rng: np.random.Generator,
    epochs: int = 400,
    learning_rate: float = 0.01,
    check_gradients: bool = False,
):
    """Fit the network; returns (params, final training loss).

    Full-batch Adam with a fixed epoch budget. ``check_gradients`` inserts a
    finite-difference probe after the first step and refuses to continue on a
    relative gap above 1e-4.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.ndim != 2 or x.shape[0] != len(y):
        raise ParameterError(f"x {x.shape} and y {y.shape} do not align")
    if epochs < 1:
        raise ParameterError(f"epochs must be >= 1, got {epochs}")
    sizes = (x.shape[1], *widths, 1)
    params = init_params(rng, sizes)
    m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    loss = np.inf
    for t in range(1, epochs + 1):
        loss, grads = loss_and_grads(params, x, y)
        if check_gradients and t == 2:
            gap = gradient_check(params, x, y, rng=np.random.default_rng(1))
            if gap > 1e-4:
                raise ParameterError(f"gradient check failed: relative gap {gap:.2e}")
        new_params = []
        for i, ((w, b), (gw, gb)) in enumerate(zip(params, grads)):
            mw = beta1 * m[i][0] + (1 - beta1) * gw
            mb = beta1 * m[i][1] + (1 - beta1) * gb
            vw = beta2 * v[i][0] + (1 - beta2) * gw**2
            vb = beta2 * v[i][1] + (1 - beta2) * gb**2
            m[i] = (mw, mb)
            v[i] = (vw, vb)
            corr1 = 1 - beta1**t
            corr2 = 1 - beta2**t
            step_w = learning_rate * (mw / corr1) / (np.sqrt(vw / corr2) + eps)
            step_b = learning_rate * (mb / corr1) / (np.sqrt(vb / corr2) + eps)
            new_params.append((w - step_w, b - step_b))
        params = new_params
    return params, float(loss)
