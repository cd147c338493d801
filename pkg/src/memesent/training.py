"""Mini-batch training, optimizers, model selection on dev macro F1, grid search."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .autograd import NonFiniteError, Tensor, cross_entropy, mean_of
from .dataset import TaskHead, TokenSequence, oversample_minority, pad_or_truncate
from .embeddings import Vocabulary
from .metrics import confusion, score_card
from .models import Architecture, Model, ModelConfig, build_model, forward
from .textnorm import ContractionDict, normalize


class NonFiniteLoss(RuntimeError):
    pass


class OptimizerKind(Enum):
    SGD = "sgd"
    ADAM = "adam"


@dataclass(frozen=True)
class GridSpec:
    lstm_layers: tuple[int, ...] = (1, 2)
    epochs: tuple[int, ...] = (10, 20, 30)
    learning_rates: tuple[float, ...] = (1e-3, 3e-4)

    def __post_init__(self):
        if not (self.lstm_layers and self.epochs and self.learning_rates):
            raise ValueError("every grid axis needs at least one value")
        if any(l < 1 for l in self.lstm_layers) or any(e < 1 for e in self.epochs):
            raise ValueError("grid counts must be positive")
        if any(lr <= 0 for lr in self.learning_rates):
            raise ValueError("grid learning rates must be positive")

    def cells(self):
        return itertools.product(self.lstm_layers, self.epochs, self.learning_rates)

    @property
    def size(self) -> int:
        return len(self.lstm_layers) * len(self.epochs) * len(self.learning_rates)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 1e-3
    optimizer: OptimizerKind = OptimizerKind.ADAM
    seed: int = 0
    oversample: bool = False
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be positive, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")


@dataclass
class TrainReport:
    train_loss: list[float]
    dev_macro_f1: list[float]
    dev_micro_f1: list[float]
    best_epoch: int
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "train_loss": self.train_loss,
            "dev_macro_f1": self.dev_macro_f1,
            "dev_micro_f1": self.dev_micro_f1,
            "best_epoch": self.best_epoch,
            "wall_time_s": self.wall_time_s,
        }


@dataclass(frozen=True)
class Example:
    """One training item: padded token ids, optional image vector, gold class."""

    seq: TokenSequence
    image: np.ndarray | None
    label: int


def prepare_examples(records, head: TaskHead, vocab: Vocabulary, n: int,
                     contractions: ContractionDict, images: dict | None = None,
                     word_list=None) -> list[Example]:
    """Normalize descriptions, map to padded id sequences, attach image vectors.

    ``images`` maps meme id to a 2048-vector holder; ids absent from the map
    get the zero vector (modality absent).
    """
    out = []
    for rec in records:
        tokens = normalize(rec.description, contractions, word_list)
        seq = pad_or_truncate(tokens, vocab, n)
        image = None
        if images is not None:
            entry = images.get(rec.id)
            if entry is None:
                image = None
            else:
                image = np.asarray(
                    entry.vector if hasattr(entry, "vector") else entry,
                    dtype=np.float64,
                )
        out.append(Example(seq=seq, image=image, label=head.extract(rec)))
    return out


class SGD:
    def __init__(self, params: list[Tensor], lr: float):
        self.params = params
        self.lr = lr

    def step(self) -> None:
        for p in self.params:
            if p.grad is not None:
                p.data = p.data - self.lr * p.grad

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None


class Adam:
    def __init__(self, params: list[Tensor], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m = [np.zeros_like(p.data) for p in params]
        self.v = [np.zeros_like(p.data) for p in params]

    def step(self) -> None:
        self.t += 1
        b1t = 1.0 - self.beta1 ** self.t
        b2t = 1.0 - self.beta2 ** self.t
        for i, p in enumerate(self.params):
            grad = p.grad if p.grad is not None else 0.0
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * np.square(grad)
            m_hat = self.m[i] / b1t
            v_hat = self.v[i] / b2t
            p.data = p.data - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None


def make_optimizer(kind: OptimizerKind, params: list[Tensor], lr: float):
    return Adam(params, lr) if kind is OptimizerKind.ADAM else SGD(params, lr)


def evaluate(model: Model, examples) -> tuple[float, float]:
    """(macro F1, micro F1) of argmax predictions over the examples."""
    m = model.config.head.num_classes
    gold, pred = [], []
    for ex in examples:
        probs = forward(model, ex.seq, ex.image, training=False)
        gold.append(ex.label)
        pred.append(int(np.argmax(probs.data)))
    card = score_card(confusion(gold, pred, m))
    return card.macro_f1, card.micro_f1


def train(model: Model, train_examples, dev_examples,
          cfg: TrainConfig) -> tuple[Model, TrainReport]:
    """Run the full loop and leave the model at its best-dev-epoch parameters.

    Shuffling, dropout, and oversampling all derive from cfg.seed, so a rerun
    with the same inputs reproduces every parameter value exactly.
    """
    if not train_examples or not dev_examples:
        raise ValueError("train and dev sets must both be nonempty")
    started = time.monotonic()
    train_examples = list(train_examples)
    if cfg.oversample:
        train_examples = oversample_minority(
            train_examples, lambda ex: ex.label, seed=cfg.seed)

    params = model.trainable_parameters()
    optimizer = make_optimizer(cfg.optimizer, params, cfg.learning_rate)

    losses, macros, micros = [], [], []
    best_macro = -1.0
    best_epoch = 0
    best_state = {name: t.data.copy() for name, t in model.named_tensors()}

    for epoch in range(cfg.epochs):
        order = np.random.default_rng([cfg.seed, epoch, 0]).permutation(len(train_examples))
        drop_rng = np.random.default_rng([cfg.seed, epoch, 1])
        loss_sum = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch = [train_examples[i] for i in order[start:start + cfg.batch_size]]
            try:
                per_item = [
                    cross_entropy(
                        forward(model, ex.seq, ex.image, training=True, rng=drop_rng),
                        ex.label,
                    )
                    for ex in batch
                ]
                loss = mean_of(per_item)
                if not np.isfinite(loss.data):
                    raise NonFiniteError("loss is not finite")
                loss.backward()
            except NonFiniteError as exc:
                raise NonFiniteLoss(
                    f"epoch {epoch}, batch at offset {start}: {exc}"
                ) from exc
            optimizer.step()
            optimizer.zero_grad()
            loss_sum += float(loss.data) * len(batch)
        losses.append(loss_sum / len(train_examples))

        macro, micro = evaluate(model, dev_examples)
        macros.append(macro)
        micros.append(micro)
        if macro > best_macro:
            best_macro = macro
            best_epoch = epoch
            best_state = {name: t.data.copy() for name, t in model.named_tensors()}

    for name, tensor in model.named_tensors():
        tensor.data = best_state[name]

    report = TrainReport(
        train_loss=losses,
        dev_macro_f1=macros,
        dev_micro_f1=micros,
        best_epoch=best_epoch,
        wall_time_s=time.monotonic() - started,
    )
    return model, report


def derived_seed(base: int, cell_index: int) -> int:
    return base * 1_000_003 + cell_index


@dataclass
class GridCell:
    lstm_layers: int
    epochs: int
    learning_rate: float
    seed: int
    dev_macro_f1: float
    dev_micro_f1: float
    best_epoch: int


@dataclass
class GridResult:
    cells: list[GridCell]
    best_index: int

    @property
    def best(self) -> GridCell:
        return self.cells[self.best_index]

    def to_dict(self) -> dict:
        return {
            "cells": [vars(c) for c in self.cells],
            "best_index": self.best_index,
        }


def grid_search(model_factory, train_examples, dev_examples,
                cfg: TrainConfig) -> GridResult:
    """Exhaustive sweep over the grid axes; ties keep the earliest cell.

    ``model_factory(lstm_layers, seed)`` must return a fresh model; every cell
    trains from scratch with a seed derived from cfg.seed and its position.
    """
    cells: list[GridCell] = []
    best_index = 0
    best_macro = -1.0
    for index, (layers, epochs, lr) in enumerate(cfg.grid.cells()):
        seed = derived_seed(cfg.seed, index)
        cell_cfg = TrainConfig(
            epochs=epochs,
            batch_size=cfg.batch_size,
            learning_rate=lr,
            optimizer=cfg.optimizer,
            seed=seed,
            oversample=cfg.oversample,
            grid=cfg.grid,
        )
        model = model_factory(layers, seed)
        _, report = train(model, train_examples, dev_examples, cell_cfg)
        macro = report.dev_macro_f1[report.best_epoch]
        micro = report.dev_micro_f1[report.best_epoch]
        cells.append(GridCell(
            lstm_layers=layers,
            epochs=epochs,
            learning_rate=lr,
            seed=seed,
            dev_macro_f1=macro,
            dev_micro_f1=micro,
            best_epoch=report.best_epoch,
        ))
        if macro > best_macro:
            best_macro = macro
            best_index = index
    return GridResult(cells=cells, best_index=best_index)
