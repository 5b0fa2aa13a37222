"""Stochastic and categorical helpers built on the tensor ops."""

from __future__ import annotations

import numpy as np

from ..rng import Rng
from .tensor import Tensor, add, log_softmax, mul, softmax, tsum


def one_hot(indices: np.ndarray, depth: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    out = np.zeros(idx.shape + (depth,), dtype=np.float64)
    np.put_along_axis(out, idx[..., None], 1.0, axis=-1)
    return out


def gumbel_softmax(logits: Tensor, temperature: float, hard: bool, rng: Rng) -> Tensor:
    """Differentiable categorical sample on the simplex.

    With ``hard`` the value is an exact one-hot (argmax of the relaxed
    sample) while gradients follow the soft relaxation (straight-through).
    """
    if temperature <= 0:
        raise ValueError("gumbel-softmax temperature must be positive")
    u = np.maximum(rng.uniform_array(logits.shape), 1e-12)
    noise = -np.log(-np.log(u))
    soft = softmax(mul(add(logits, noise), 1.0 / temperature))
    if not hard:
        return soft
    hard_value = one_hot(soft.data.argmax(axis=-1), logits.shape[-1])
    # value = hard one-hot, gradient = gradient of the soft sample
    return add(soft, Tensor(hard_value - soft.data))


def categorical_entropy(logits: Tensor) -> Tensor:
    """Mean entropy of the categorical distributions in the last axis."""
    logp = log_softmax(logits)
    p = softmax(logits)
    return -tsum(mul(p, logp), axis=-1).mean()


def sample_categorical(probs: np.ndarray, rng: Rng) -> np.ndarray:
    """Sample indices from rows of probabilities (numpy, not differentiable)."""
    flat = probs.reshape(-1, probs.shape[-1])
    out = np.empty(flat.shape[0], dtype=np.int64)
    for i, row in enumerate(flat):
        r = rng.random()
        acc = 0.0
        pick = len(row) - 1
        for j, p in enumerate(row):
            acc += p
            if r < acc:
                pick = j
                break
        out[i] = pick
    return out.reshape(probs.shape[:-1])
