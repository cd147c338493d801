"""Reverse-mode automatic differentiation over dense float64 arrays.

Every op builds a graph node holding a closure that propagates the upstream
gradient to its parents. Calling ``backward()`` on a scalar loss walks the
graph once in reverse topological order. All values are checked for
NaN/Inf as they are produced; violations raise instead of propagating.
"""

from __future__ import annotations

import numpy as np


class ShapeMismatch(ValueError):
    pass


class RankError(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NotScalar(ValueError):
    pass


class NonFiniteError(ArithmeticError):
    pass


class GraphError(RuntimeError):
    """Misuse of the graph protocol, e.g. backward() called twice."""


# Probability floor for cross_entropy; keeps -log finite on collapsed heads.
PROB_FLOOR = 1e-12


class Tensor:
    """A shape-tagged float64 array participating in the autodiff graph."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "_backward_ran")

    def __init__(self, data, requires_grad=False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self._parents = ()
        self._backward = None
        self._backward_ran = False

    @property
    def shape(self):
        return self.data.shape

    def zero_grad(self):
        self.grad = None

    def backward(self):
        """Populate ``grad`` on every tracked tensor reachable from this scalar."""
        if self.data.ndim != 0:
            raise NotScalar(f"backward() needs a scalar, got shape {self.shape}")
        if self._backward_ran:
            raise GraphError("backward() already ran on this node; build a fresh graph")
        self._backward_ran = True

        order = []
        visited = set()
        stack = [(self, False)]
        while stack:  # iterative DFS; deep LSTM graphs overflow recursion limits
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))

        self.grad = np.ones((), dtype=np.float64)
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


def _check_finite(values, op_name):
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"{op_name} produced a non-finite value")
    return values


def _node(data, parents, backward, op_name):
    """Build an output tensor, wiring the backward closure if any input is tracked."""
    out = Tensor(_check_finite(np.asarray(data, dtype=np.float64), op_name))
    if any(p.requires_grad or p._parents for p in parents):
        out.requires_grad = any(p.requires_grad for p in parents) or any(
            p._parents for p in parents
        )
        out._parents = tuple(parents)
        out._backward = backward
    return out


def _accumulate(tensor, delta):
    if not (tensor.requires_grad or tensor._parents):
        return
    if tensor.grad is None:
        tensor.grad = np.zeros_like(tensor.data)
    tensor.grad = tensor.grad + delta


def constant(data):
    return Tensor(data, requires_grad=False)


def parameter(data):
    return Tensor(data, requires_grad=True)


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeMismatch(f"add: {a.shape} vs {b.shape}")

    def backward(g):
        _accumulate(a, g)
        _accumulate(b, g)

    return _node(a.data + b.data, (a, b), backward, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeMismatch(f"sub: {a.shape} vs {b.shape}")

    def backward(g):
        _accumulate(a, g)
        _accumulate(b, -g)

    return _node(a.data - b.data, (a, b), backward, "sub")


def elementwise_mul(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeMismatch(f"elementwise_mul: {a.shape} vs {b.shape}")

    def backward(g):
        _accumulate(a, g * b.data)
        _accumulate(b, g * a.data)

    return _node(a.data * b.data, (a, b), backward, "elementwise_mul")


def scale(a: Tensor, c: float) -> Tensor:
    c = float(c)

    def backward(g):
        _accumulate(a, g * c)

    return _node(a.data * c, (a,), backward, "scale")


def add_n(tensors) -> Tensor:
    """Sum of same-shape tensors as a single graph node."""
    tensors = list(tensors)
    if not tensors:
        raise ShapeMismatch("add_n: empty input")
    shape = tensors[0].shape
    for t in tensors[1:]:
        if t.shape != shape:
            raise ShapeMismatch(f"add_n: {t.shape} vs {shape}")

    def backward(g):
        for t in tensors:
            _accumulate(t, g)

    total = tensors[0].data.copy()
    for t in tensors[1:]:
        total += t.data
    return _node(total, tuple(tensors), backward, "add_n")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim not in (1, 2) or b.data.ndim not in (1, 2):
        raise RankError("matmul supports rank-1 and rank-2 operands")
    inner_a = a.shape[-1]
    inner_b = b.shape[0]
    if inner_a != inner_b:
        raise ShapeMismatch(f"matmul: inner dims {inner_a} vs {inner_b}")

    def backward(g):
        # Promote to 2-D so one gradient rule covers vector and matrix cases.
        a2 = np.atleast_2d(a.data)
        b2 = b.data.reshape(b.shape[0], -1)
        g2 = np.asarray(g).reshape(a2.shape[0], b2.shape[1])
        _accumulate(a, (g2 @ b2.T).reshape(a.shape))
        _accumulate(b, (a2.T @ g2).reshape(b.shape))

    return _node(a.data @ b.data, (a, b), backward, "matmul")


def concat(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 1 or b.data.ndim != 1:
        raise RankError("concat expects rank-1 tensors")
    p = a.shape[0]

    def backward(g):
        _accumulate(a, g[:p])
        _accumulate(b, g[p:])

    return _node(np.concatenate([a.data, b.data]), (a, b), backward, "concat")


def sigmoid(a: Tensor) -> Tensor:
    x = a.data
    out = np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))

    def backward(g):
        _accumulate(a, g * out * (1.0 - out))

    return _node(out, (a,), backward, "sigmoid")


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)

    def backward(g):
        _accumulate(a, g * (1.0 - out * out))

    return _node(out, (a,), backward, "tanh")


def relu(a: Tensor) -> Tensor:
    out = np.maximum(a.data, 0.0)

    def backward(g):
        # gradient at exactly 0 is defined as 0
        _accumulate(a, g * (a.data > 0.0))

    return _node(out, (a,), backward, "relu")


def softmax(z: Tensor) -> Tensor:
    if z.data.ndim != 1:
        raise RankError("softmax expects a rank-1 tensor")
    if z.shape[0] < 1:
        raise ShapeMismatch("softmax needs at least one unit")
    shifted = z.data - np.max(z.data)
    e = np.exp(shifted)
    out = e / e.sum()

    def backward(g):
        # J^T g where J = diag(s) - s s^T
        dot = float(np.dot(g, out))
        _accumulate(z, out * (g - dot))

    return _node(out, (z,), backward, "softmax")


def cross_entropy(probs: Tensor, target: int) -> Tensor:
    if probs.data.ndim != 1:
        raise RankError("cross_entropy expects a probability vector")
    m = probs.shape[0]
    if not 0 <= target < m:
        raise IndexOutOfRange(f"target {target} outside [0, {m})")
    p = float(probs.data[target])
    clipped = max(p, PROB_FLOOR)

    def backward(g):
        delta = np.zeros_like(probs.data)
        if p > PROB_FLOOR:  # inside the clip region the loss is constant
            delta[target] = -1.0 / p
        _accumulate(probs, g * delta)

    return _node(-np.log(clipped), (probs,), backward, "cross_entropy")


def dropout(a: Tensor, rate: float, training: bool, rng: np.random.Generator | None = None) -> Tensor:
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return a
    if rng is None:
        raise ValueError("training-mode dropout needs an rng")
    keep = (rng.random(a.shape) >= rate).astype(np.float64)
    scale_factor = 1.0 / (1.0 - rate)
    mask = keep * scale_factor

    def backward(g):
        _accumulate(a, g * mask)

    return _node(a.data * mask, (a,), backward, "dropout")


def temporal_max_pool(h: Tensor, true_length: int) -> Tensor:
    """Per-column max over the first ``true_length`` rows; pad rows never count."""
    if h.data.ndim != 2:
        raise RankError("temporal_max_pool expects an n x d matrix")
    n, d = h.shape
    if not 0 <= true_length <= n:
        raise ShapeMismatch(f"true_length {true_length} outside [0, {n}]")
    if true_length == 0:
        return constant(np.zeros(d))
    window = h.data[:true_length]
    argmax = np.argmax(window, axis=0)  # first occurrence wins ties
    out = window[argmax, np.arange(d)]

    def backward(g):
        delta = np.zeros_like(h.data)
        delta[argmax, np.arange(d)] = g
        _accumulate(h, delta)

    return _node(out, (h,), backward, "temporal_max_pool")


def take_row(a: Tensor, i: int) -> Tensor:
    if a.data.ndim != 2:
        raise RankError("take_row expects a matrix")
    if not 0 <= i < a.shape[0]:
        raise IndexOutOfRange(f"row {i} outside [0, {a.shape[0]})")

    def backward(g):
        delta = np.zeros_like(a.data)
        delta[i] = g
        _accumulate(a, delta)

    return _node(a.data[i], (a,), backward, "take_row")


def stack_rows(rows) -> Tensor:
    rows = list(rows)
    if not rows:
        raise ShapeMismatch("stack_rows: empty input")
    width = rows[0].shape
    for r in rows:
        if r.data.ndim != 1 or r.shape != width:
            raise ShapeMismatch("stack_rows: all rows must be equal-length vectors")

    def backward(g):
        for t, row in enumerate(rows):
            _accumulate(row, g[t])

    return _node(np.stack([r.data for r in rows]), tuple(rows), backward, "stack_rows")


def gather_rows(table: Tensor, ids, freeze_row: int | None = None) -> Tensor:
    """Row gather with scatter-add backward; ``freeze_row`` receives no gradient."""
    if table.data.ndim != 2:
        raise RankError("gather_rows expects a matrix table")
    ids = np.asarray(ids, dtype=np.int64)
    if ids.ndim != 1:
        raise RankError("gather_rows expects a flat id list")
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise IndexOutOfRange("gather id outside table")

    def backward(g):
        delta = np.zeros_like(table.data)
        np.add.at(delta, ids, g)
        if freeze_row is not None:
            delta[freeze_row] = 0.0
        _accumulate(table, delta)

    return _node(table.data[ids], (table,), backward, "gather_rows")


def sum_all(a: Tensor) -> Tensor:
    def backward(g):
        _accumulate(a, np.full_like(a.data, float(g)))

    return _node(a.data.sum(), (a,), backward, "sum_all")


def mean_of(losses) -> Tensor:
    """Arithmetic mean of scalar tensors, e.g. per-example losses in a batch."""
    losses = list(losses)
    return scale(add_n(losses), 1.0 / len(losses))
