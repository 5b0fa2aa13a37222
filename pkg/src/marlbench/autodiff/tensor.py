"""Dense-tensor reverse-mode automatic differentiation on numpy arrays.

A Tensor wraps a float64 ndarray plus the tape bookkeeping needed for
backpropagation: parent tensors and a closure that routes the incoming
gradient to them.  Graphs are built eagerly by the op functions below and
collapsed by :meth:`Tensor.backward`, which topologically sorts the tape
and accumulates ``grad`` on every tensor that requires it.  Subgraphs with
no trainable inputs are pruned at construction, so running a frozen
(target) network costs no tape overhead.
"""

from __future__ import annotations

import numpy as np

Arrayish = "Tensor | np.ndarray | float | int"


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Reduce a broadcasted gradient back to the operand's shape."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self._parents: tuple[Tensor, ...] = ()
        self._backward = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # operator sugar -----------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def reshape(self, *shape):
        return reshape(self, shape)

    def sum(self, axis=None):
        return tsum(self, axis)

    def mean(self, axis=None):
        return tmean(self, axis)

    def backward(self) -> None:
        """Populate ``grad`` on every requires-grad tensor reachable from
        this scalar loss."""
        if self.data.size != 1:
            raise ValueError("backward() requires a scalar loss tensor")
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in seen:
                    stack.append((parent, False))

        grads: dict[int, np.ndarray] = {id(self): np.ones_like(self.data)}
        for node in reversed(order):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node.requires_grad:
                node.grad = g if node.grad is None else node.grad + g
            if node._backward is None:
                continue
            for parent, pg in node._backward(g):
                if not (parent.requires_grad or parent._parents):
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + pg
                else:
                    grads[key] = pg


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _needs_grad(t: Tensor) -> bool:
    return t.requires_grad or bool(t._parents)


def _make(data: np.ndarray, parents: tuple[Tensor, ...], backward) -> Tensor:
    out = Tensor(data)
    if any(_needs_grad(p) for p in parents):
        out._parents = parents
        out._backward = backward
    return out


# -- arithmetic ----------------------------------------------------------

def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    data = a.data + b.data
    need_a, need_b = _needs_grad(a), _needs_grad(b)

    def back(g):
        out = []
        if need_a:
            out.append((a, _unbroadcast(g, a.shape)))
        if need_b:
            out.append((b, _unbroadcast(g, b.shape)))
        return out

    return _make(data, (a, b), back)


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    data = a.data - b.data
    need_a, need_b = _needs_grad(a), _needs_grad(b)

    def back(g):
        out = []
        if need_a:
            out.append((a, _unbroadcast(g, a.shape)))
        if need_b:
            out.append((b, _unbroadcast(-g, b.shape)))
        return out

    return _make(data, (a, b), back)


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    data = a.data * b.data
    need_a, need_b = _needs_grad(a), _needs_grad(b)

    def back(g):
        out = []
        if need_a:
            out.append((a, _unbroadcast(g * b.data, a.shape)))
        if need_b:
            out.append((b, _unbroadcast(g * a.data, b.shape)))
        return out

    return _make(data, (a, b), back)


def div(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    data = a.data / b.data
    need_a, need_b = _needs_grad(a), _needs_grad(b)

    def back(g):
        out = []
        if need_a:
            out.append((a, _unbroadcast(g / b.data, a.shape)))
        if need_b:
            out.append((b, _unbroadcast(-g * a.data / (b.data ** 2), b.shape)))
        return out

    return _make(data, (a, b), back)


def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    data = a.data @ b.data
    need_a, need_b = _needs_grad(a), _needs_grad(b)

    def back(g):
        out = []
        if need_a:
            out.append((a, _unbroadcast(g @ np.swapaxes(b.data, -1, -2), a.shape)))
        if need_b:
            out.append((b, _unbroadcast(np.swapaxes(a.data, -1, -2) @ g, b.shape)))
        return out

    return _make(data, (a, b), back)


# -- elementwise nonlinearities -------------------------------------------

def relu(a) -> Tensor:
    a = as_tensor(a)
    data = np.maximum(a.data, 0.0)

    def back(g):
        return ((a, g * (a.data > 0.0)),)

    return _make(data, (a,), back)


def elu(a, alpha: float = 1.0) -> Tensor:
    a = as_tensor(a)
    neg = alpha * (np.exp(np.minimum(a.data, 0.0)) - 1.0)
    data = np.where(a.data > 0.0, a.data, neg)

    def back(g):
        return ((a, g * np.where(a.data > 0.0, 1.0, neg + alpha)),)

    return _make(data, (a,), back)


def tanh(a) -> Tensor:
    a = as_tensor(a)
    data = np.tanh(a.data)

    def back(g):
        return ((a, g * (1.0 - data ** 2)),)

    return _make(data, (a,), back)


def exp(a) -> Tensor:
    a = as_tensor(a)
    data = np.exp(a.data)

    def back(g):
        return ((a, g * data),)

    return _make(data, (a,), back)


def log(a) -> Tensor:
    a = as_tensor(a)
    data = np.log(a.data)

    def back(g):
        return ((a, g / a.data),)

    return _make(data, (a,), back)


def tabs(a) -> Tensor:
    a = as_tensor(a)
    data = np.abs(a.data)

    def back(g):
        return ((a, g * np.sign(a.data)),)

    return _make(data, (a,), back)


def square(a) -> Tensor:
    a = as_tensor(a)
    data = a.data ** 2

    def back(g):
        return ((a, g * 2.0 * a.data),)

    return _make(data, (a,), back)


def clip(a, lo: float, hi: float) -> Tensor:
    a = as_tensor(a)
    data = np.clip(a.data, lo, hi)

    def back(g):
        return ((a, g * ((a.data >= lo) & (a.data <= hi))),)

    return _make(data, (a,), back)


def minimum(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    take_a = a.data <= b.data
    data = np.where(take_a, a.data, b.data)

    def back(g):
        return (
            (a, _unbroadcast(g * take_a, a.shape)),
            (b, _unbroadcast(g * ~take_a, b.shape)),
        )

    return _make(data, (a, b), back)


def maximum(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    take_a = a.data >= b.data
    data = np.where(take_a, a.data, b.data)

    def back(g):
        return (
            (a, _unbroadcast(g * take_a, a.shape)),
            (b, _unbroadcast(g * ~take_a, b.shape)),
        )

    return _make(data, (a, b), back)


# -- softmax family --------------------------------------------------------

def softmax(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    data = e / e.sum(axis=axis, keepdims=True)

    def back(g):
        inner = (g * data).sum(axis=axis, keepdims=True)
        return ((a, data * (g - inner)),)

    return _make(data, (a,), back)


def log_softmax(a, axis: int = -1) -> Tensor:
    a = as_tensor(a)
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    data = shifted - lse
    probs = np.exp(data)

    def back(g):
        return ((a, g - probs * g.sum(axis=axis, keepdims=True)),)

    return _make(data, (a,), back)


# -- indexing / shaping ------------------------------------------------------

def gather(a, index: np.ndarray) -> Tensor:
    """Select one entry along the last axis per leading position."""
    a = as_tensor(a)
    idx = np.asarray(index, dtype=np.int64)
    if idx.shape != a.shape[:-1]:
        raise ValueError(f"gather index shape {idx.shape} != leading shape {a.shape[:-1]}")
    data = np.take_along_axis(a.data, idx[..., None], axis=-1)[..., 0]

    def back(g):
        full = np.zeros_like(a.data)
        np.put_along_axis(full, idx[..., None], g[..., None], axis=-1)
        return ((a, full),)

    return _make(data, (a,), back)


def narrow(a, axis: int, start: int, length: int) -> Tensor:
    """Contiguous slice [start, start+length) along one axis."""
    a = as_tensor(a)
    index = [slice(None)] * a.data.ndim
    index[axis] = slice(start, start + length)
    index = tuple(index)
    data = a.data[index]

    def back(g):
        full = np.zeros_like(a.data)
        full[index] = g
        return ((a, full),)

    return _make(data, (a,), back)


def reshape(a, shape) -> Tensor:
    a = as_tensor(a)
    data = a.data.reshape(shape)

    def back(g):
        return ((a, g.reshape(a.shape)),)

    return _make(data, (a,), back)


def concat(tensors, axis: int = -1) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def back(g):
        pieces = np.split(g, splits, axis=axis)
        return tuple((t, p) for t, p in zip(tensors, pieces))

    return _make(data, tuple(tensors), back)


# -- reductions ----------------------------------------------------------------

def tsum(a, axis=None) -> Tensor:
    a = as_tensor(a)
    data = a.data.sum(axis=axis)

    def back(g):
        if axis is None:
            return ((a, np.broadcast_to(g, a.shape).copy()),)
        expanded = np.expand_dims(g, axis)
        return ((a, np.broadcast_to(expanded, a.shape).copy()),)

    return _make(data, (a,), back)


def tmean(a, axis=None) -> Tensor:
    a = as_tensor(a)
    data = a.data.mean(axis=axis)
    count = a.data.size if axis is None else a.shape[axis]

    def back(g):
        if axis is None:
            return ((a, np.broadcast_to(g / count, a.shape).copy()),)
        expanded = np.expand_dims(g / count, axis)
        return ((a, np.broadcast_to(expanded, a.shape).copy()),)

    return _make(data, (a,), back)


def mse(a, b) -> Tensor:
    """Mean squared error over all elements."""
    return tmean(square(sub(a, b)))
