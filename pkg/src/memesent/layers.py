"""LSTM cell, sequence encoders, and dense layers on the autograd substrate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .autograd import (
    ShapeMismatch,
    Tensor,
    add,
    add_n,
    concat,
    constant,
    elementwise_mul,
    matmul,
    parameter,
    relu,
    sigmoid,
    stack_rows,
    take_row,
    tanh,
)

_GATES = ("input", "forget", "cell", "output")


def glorot_uniform(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (rows + cols))
    return rng.uniform(-limit, limit, size=(rows, cols))


class Activation(Enum):
    RELU = "relu"
    NONE = "none"


@dataclass
class DenseParams:
    W: Tensor  # out x in
    b: Tensor  # out
    activation: Activation

    @property
    def in_dim(self) -> int:
        return int(self.W.data.shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.W.data.shape[0])

    def named_parameters(self, prefix: str):
        yield f"{prefix}.W", self.W
        yield f"{prefix}.b", self.b


def init_dense(in_dim: int, out_dim: int, activation: Activation,
               rng: np.random.Generator) -> DenseParams:
    return DenseParams(
        W=parameter(glorot_uniform(rng, out_dim, in_dim)),
        b=parameter(np.zeros(out_dim)),
        activation=activation,
    )


def dense(x: Tensor, p: DenseParams) -> Tensor:
    if x.data.shape != (p.in_dim,):
        raise ShapeMismatch(f"dense expects ({p.in_dim},), got {x.data.shape}")
    z = add(matmul(p.W, x), p.b)
    return relu(z) if p.activation is Activation.RELU else z


@dataclass
class LSTMParams:
    """Per-gate weights: W_g maps the input, U_g the previous hidden state."""

    W: dict[str, Tensor]  # gate -> h x d
    U: dict[str, Tensor]  # gate -> h x h
    b: dict[str, Tensor]  # gate -> h

    @property
    def hidden(self) -> int:
        return int(self.W["input"].data.shape[0])

    @property
    def in_dim(self) -> int:
        return int(self.W["input"].data.shape[1])

    def named_parameters(self, prefix: str):
        for gate in _GATES:
            yield f"{prefix}.W_{gate}", self.W[gate]
            yield f"{prefix}.U_{gate}", self.U[gate]
            yield f"{prefix}.b_{gate}", self.b[gate]


def init_lstm(in_dim: int, hidden: int, rng: np.random.Generator) -> LSTMParams:
    """Glorot-uniform W/U, zero biases except the forget gate's, set to 1."""
    W = {g: parameter(glorot_uniform(rng, hidden, in_dim)) for g in _GATES}
    U = {g: parameter(glorot_uniform(rng, hidden, hidden)) for g in _GATES}
    b = {g: parameter(np.full(hidden, 1.0) if g == "forget" else np.zeros(hidden))
         for g in _GATES}
    return LSTMParams(W=W, U=U, b=b)


def lstm_step(x_t: Tensor, h_prev: Tensor, c_prev: Tensor,
              p: LSTMParams) -> tuple[Tensor, Tensor]:
    h, d = p.hidden, p.in_dim
    if x_t.data.shape != (d,):
        raise ShapeMismatch(f"lstm_step input must be ({d},), got {x_t.data.shape}")
    if h_prev.data.shape != (h,) or c_prev.data.shape != (h,):
        raise ShapeMismatch(f"lstm_step state must be ({h},)")

    def gate(name: str) -> Tensor:
        return add_n([matmul(p.W[name], x_t), matmul(p.U[name], h_prev), p.b[name]])

    i = sigmoid(gate("input"))
    f = sigmoid(gate("forget"))
    o = sigmoid(gate("output"))
    c_hat = tanh(gate("cell"))
    c_t = add(elementwise_mul(f, c_prev), elementwise_mul(i, c_hat))
    h_t = elementwise_mul(o, tanh(c_t))
    return h_t, c_t


def lstm_encode(X: Tensor, true_length: int, p: LSTMParams,
                reverse: bool = False) -> tuple[Tensor, Tensor]:
    """Run the recurrence over rows 0..true_length-1 of X from zero state.

    Returns the n x h output matrix (pad rows zero; reverse=True iterates
    back-to-front but writes outputs to their original positions) and the
    final non-pad hidden state.
    """
    n, d = X.data.shape
    if not 0 <= true_length <= n:
        raise ShapeMismatch(f"true_length {true_length} outside [0, {n}]")
    if d != p.in_dim:
        raise ShapeMismatch(f"input dim {d} does not match params ({p.in_dim})")
    h_dim = p.hidden
    zero_row = constant(np.zeros(h_dim))
    h_state, c_state = zero_row, zero_row
    outputs: list[Tensor] = [zero_row] * n
    steps = range(true_length - 1, -1, -1) if reverse else range(true_length)
    for t in steps:
        h_state, c_state = lstm_step(take_row(X, t), h_state, c_state, p)
        outputs[t] = h_state
    h_last = h_state if true_length > 0 else zero_row
    return stack_rows(outputs), h_last


def bilstm_encode(X: Tensor, true_length: int, p_fwd: LSTMParams,
                  p_bwd: LSTMParams) -> Tensor:
    """Row t is concat(forward output at t, backward output at t); width 2h."""
    if p_fwd.hidden != p_bwd.hidden:
        raise ShapeMismatch(
            f"direction hidden sizes differ: {p_fwd.hidden} vs {p_bwd.hidden}"
        )
    H_fwd, _ = lstm_encode(X, true_length, p_fwd, reverse=False)
    H_bwd, _ = lstm_encode(X, true_length, p_bwd, reverse=True)
    n = X.data.shape[0]
    rows = [concat(take_row(H_fwd, t), take_row(H_bwd, t)) for t in range(n)]
    return stack_rows(rows)
