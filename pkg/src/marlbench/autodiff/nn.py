"""Fully-connected networks and the parameter checkpoint format."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..rng import Rng
from .tensor import Tensor, add, matmul, relu, tanh

_MAGIC = b"MBCK"
_VERSION = 1


class Linear:
    """Affine layer; weights initialised U(-1/sqrt(in), 1/sqrt(in))."""

    def __init__(self, in_dim: int, out_dim: int, rng: Rng):
        bound = 1.0 / np.sqrt(in_dim)
        self.weight = Tensor(rng.uniform_array((in_dim, out_dim), -bound, bound), requires_grad=True)
        self.bias = Tensor(rng.uniform_array((out_dim,), -bound, bound), requires_grad=True)

    def __call__(self, x: Tensor) -> Tensor:
        return add(matmul(x, self.weight), self.bias)

    def parameters(self) -> list[Tensor]:
        return [self.weight, self.bias]


_ACTIVATIONS = {"relu": relu, "tanh": tanh}


class Mlp:
    """Stack of Linear layers with a hidden activation (ReLU by default)."""

    def __init__(self, widths: list[int], rng: Rng, activation: str = "relu"):
        if len(widths) < 2:
            raise ValueError("need at least input and output widths")
        self.widths = list(widths)
        self.activation = _ACTIVATIONS[activation]
        self.layers = [Linear(widths[i], widths[i + 1], rng) for i in range(len(widths) - 1)]

    def __call__(self, x) -> Tensor:
        out = x if isinstance(x, Tensor) else Tensor(x)
        for layer in self.layers[:-1]:
            out = self.activation(layer(out))
        return self.layers[-1](out)

    def parameters(self) -> list[Tensor]:
        return [p for layer in self.layers for p in layer.parameters()]


def parameter_count(params: list[Tensor]) -> int:
    return sum(p.data.size for p in params)


def copy_params(src: list[Tensor], dst: list[Tensor]) -> None:
    for s, d in zip(src, dst):
        d.data = s.data.copy()


def clone_structure(params: list[Tensor]) -> list[Tensor]:
    """Non-trainable copies with the same shapes and values (target nets)."""
    return [Tensor(p.data.copy()) for p in params]


def save_params(path: str | Path, params: list[Tensor]) -> None:
    """Versioned binary checkpoint: shapes then little-endian float32 data."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(params)))
        for p in params:
            fh.write(struct.pack("<I", p.data.ndim))
            fh.write(struct.pack(f"<{p.data.ndim}I", *p.data.shape))
            fh.write(p.data.astype("<f4").tobytes())


def load_params(path: str | Path) -> list[np.ndarray]:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError(f"{path}: not a marlbench checkpoint")
        version, count = struct.unpack("<II", fh.read(8))
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {version}")
        arrays = []
        for _ in range(count):
            (ndim,) = struct.unpack("<I", fh.read(4))
            shape = struct.unpack(f"<{ndim}I", fh.read(4 * ndim))
            n = int(np.prod(shape)) if shape else 1
            data = np.frombuffer(fh.read(4 * n), dtype="<f4").reshape(shape)
            arrays.append(data.astype(np.float64))
        return arrays


def restore_params(path: str | Path, params: list[Tensor]) -> None:
    arrays = load_params(path)
    if len(arrays) != len(params):
        raise ValueError("checkpoint parameter count mismatch")
    for arr, p in zip(arrays, params):
        if arr.shape != p.data.shape:
            raise ValueError(f"checkpoint shape {arr.shape} != parameter shape {p.data.shape}")
        p.data = arr
