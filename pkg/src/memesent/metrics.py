"""Competition scoring: confusion matrices, macro/micro F1, task-average scores."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class LengthMismatch(ValueError):
    pass


class ClassOutOfRange(ValueError):
    pass


def confusion(gold, pred, m: int) -> np.ndarray:
    """m x m count matrix, rows = gold class, columns = predicted class."""
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold vs {len(pred)} predictions")
    cm = np.zeros((m, m), dtype=np.int64)
    for g, p in zip(gold, pred):
        if not (0 <= g < m and 0 <= p < m):
            raise ClassOutOfRange(f"class pair ({g}, {p}) outside [0, {m})")
        cm[g, p] += 1
    return cm


def _per_class(cm: np.ndarray):
    m = cm.shape[0]
    precision, recall, f1 = [], [], []
    for c in range(m):
        tp = float(cm[c, c])
        fp = float(cm[:, c].sum() - cm[c, c])
        fn = float(cm[c, :].sum() - cm[c, c])
        p = tp / (tp + fp) if tp + fp > 0 else 0.0
        r = tp / (tp + fn) if tp + fn > 0 else 0.0
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        precision.append(p)
        recall.append(r)
        f1.append(f)
    return precision, recall, f1


def macro_f1(cm: np.ndarray) -> float:
    """Unweighted mean of per-class F1; absent classes contribute 0."""
    _, _, f1 = _per_class(cm)
    return float(np.mean(f1))


def micro_f1(cm: np.ndarray) -> float:
    """Globally pooled F1: TP / (TP + (FP + FN) / 2); accuracy for single-label tasks."""
    tp = float(np.trace(cm))
    total = float(cm.sum())
    fp_fn = (total - tp) * 2  # every miss is one FP and one FN
    denom = tp + fp_fn / 2
    return tp / denom if denom > 0 else 0.0


@dataclass
class ScoreCard:
    precision: list[float] = field(default_factory=list)
    recall: list[float] = field(default_factory=list)
    f1: list[float] = field(default_factory=list)
    macro_f1: float = 0.0
    micro_f1: float = 0.0

    def to_dict(self):
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "macro_f1": self.macro_f1,
            "micro_f1": self.micro_f1,
        }


def score_card(cm: np.ndarray) -> ScoreCard:
    precision, recall, f1 = _per_class(cm)
    return ScoreCard(precision, recall, f1, macro_f1(cm), micro_f1(cm))


def score(gold, pred, m: int) -> ScoreCard:
    return score_card(confusion(gold, pred, m))


def task_bc_score(cards) -> float:
    """Arithmetic mean of subtask macro-F1 values (Tasks B and C are averaged)."""
    cards = list(cards)
    if not cards:
        raise LengthMismatch("need at least one subtask score card")
    return float(np.mean([c.macro_f1 for c in cards]))
