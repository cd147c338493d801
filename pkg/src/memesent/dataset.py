"""Corpus ingestion, the three-task label schema, splitting, oversampling, padding.

The corpus is a UTF-8 CSV with a header row. Required columns are
``id,image,description``; optional label columns are ``sentiment``,
``humorous,sarcastic,offensive,motivational`` (yes/no flags) and
``humour_scale,sarcasm_scale,offense_scale`` (intensity scales). Rows whose
labels cannot be mapped are reported and skipped, never silently dropped.
"""

from __future__ import annotations

import csv
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum, IntEnum


class MissingColumn(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


class BadLabel(ValueError):
    pass


class Sentiment(IntEnum):
    POSITIVE = 0
    NEUTRAL = 1
    NEGATIVE = 2


class HumourScale(IntEnum):
    NOT_FUNNY = 0
    FUNNY = 1
    VERY_FUNNY = 2
    HILARIOUS = 3


class SarcasmScale(IntEnum):
    NOT_SARCASTIC = 0
    GENERAL = 1
    TWISTED_MEANING = 2
    VERY_TWISTED = 3


class OffenseScale(IntEnum):
    NOT_OFFENSIVE = 0
    SLIGHT = 1
    VERY_OFFENSIVE = 2
    HATEFUL_OFFENSIVE = 3


class MotivationalScale(IntEnum):
    NOT_MOTIVATIONAL = 0
    MOTIVATIONAL = 1


@dataclass(frozen=True)
class TaskBLabels:
    humorous: bool
    sarcastic: bool
    offensive: bool
    motivational: bool


@dataclass(frozen=True)
class TaskCLabels:
    humour_scale: HumourScale
    sarcasm_scale: SarcasmScale
    offense_scale: OffenseScale
    motivational: MotivationalScale | None  # None when the corpus lacks the column


@dataclass(frozen=True)
class MemeLabels:
    sentiment: Sentiment | None = None
    task_b: TaskBLabels | None = None
    task_c: TaskCLabels | None = None


@dataclass(frozen=True)
class MemeRecord:
    id: str
    image_ref: str
    description: str
    labels: MemeLabels | None = None


@dataclass(frozen=True)
class TokenSequence:
    """Fixed-length vocabulary indices; positions >= true_length hold pad id 0."""

    ids: tuple[int, ...]
    true_length: int


class TaskHead(Enum):
    """One output head per task/subtask; value is (name, class count, class enum)."""

    A = ("a", 3, Sentiment)
    B_HUMOUR = ("b-humour", 2, None)
    B_SARCASM = ("b-sarcasm", 2, None)
    B_OFFENSE = ("b-offense", 2, None)
    B_MOTIVATIONAL = ("b-motivational", 2, None)
    C_HUMOUR = ("c-humour", 4, HumourScale)
    C_SARCASM = ("c-sarcasm", 4, SarcasmScale)
    C_OFFENSE = ("c-offense", 4, OffenseScale)
    C_MOTIVATIONAL = ("c-motivational", 2, MotivationalScale)

    @property
    def key(self) -> str:
        return self.value[0]

    @property
    def num_classes(self) -> int:
        return self.value[1]

    @classmethod
    def from_key(cls, key: str) -> "TaskHead":
        for head in cls:
            if head.key == key.lower():
                return head
        raise KeyError(f"unknown task head {key!r}")

    def extract(self, record: MemeRecord) -> int:
        """Class index of this head's gold label; KeyError when absent."""
        labels = record.labels
        if labels is None:
            raise KeyError(f"record {record.id} has no labels")
        if self is TaskHead.A:
            if labels.sentiment is None:
                raise KeyError(f"record {record.id} lacks a sentiment label")
            return int(labels.sentiment)
        if self.key.startswith("b-"):
            if labels.task_b is None:
                raise KeyError(f"record {record.id} lacks task-b labels")
            flag = {
                TaskHead.B_HUMOUR: labels.task_b.humorous,
                TaskHead.B_SARCASM: labels.task_b.sarcastic,
                TaskHead.B_OFFENSE: labels.task_b.offensive,
                TaskHead.B_MOTIVATIONAL: labels.task_b.motivational,
            }[self]
            return int(flag)
        if labels.task_c is None:
            raise KeyError(f"record {record.id} lacks task-c labels")
        value = {
            TaskHead.C_HUMOUR: labels.task_c.humour_scale,
            TaskHead.C_SARCASM: labels.task_c.sarcasm_scale,
            TaskHead.C_OFFENSE: labels.task_c.offense_scale,
            TaskHead.C_MOTIVATIONAL: labels.task_c.motivational,
        }[self]
        if value is None:
            raise KeyError(f"record {record.id} lacks a motivational label")
        return int(value)


def _canon(text: str) -> str:
    return "".join(ch for ch in text.lower() if ch.isalnum())


_SENTIMENT = {
    "positive": Sentiment.POSITIVE,
    "neutral": Sentiment.NEUTRAL,
    "negative": Sentiment.NEGATIVE,
}
_HUMOUR = {
    "notfunny": HumourScale.NOT_FUNNY,
    "funny": HumourScale.FUNNY,
    "veryfunny": HumourScale.VERY_FUNNY,
    "hilarious": HumourScale.HILARIOUS,
}
_SARCASM = {
    "notsarcastic": SarcasmScale.NOT_SARCASTIC,
    "general": SarcasmScale.GENERAL,
    "twistedmeaning": SarcasmScale.TWISTED_MEANING,
    "verytwisted": SarcasmScale.VERY_TWISTED,
}
_OFFENSE = {
    "notoffensive": OffenseScale.NOT_OFFENSIVE,
    "slight": OffenseScale.SLIGHT,
    "slightly": OffenseScale.SLIGHT,
    "slightlyoffensive": OffenseScale.SLIGHT,
    "veryoffensive": OffenseScale.VERY_OFFENSIVE,
    "hatefuloffensive": OffenseScale.HATEFUL_OFFENSIVE,
    "hateful": OffenseScale.HATEFUL_OFFENSIVE,
}
_MOTIVATIONAL = {
    "motivational": MotivationalScale.MOTIVATIONAL,
    "notmotivational": MotivationalScale.NOT_MOTIVATIONAL,
}
_BOOL = {
    "yes": True, "true": True, "1": True,
    "no": False, "false": False, "0": False,
}

_B_COLUMNS = ("humorous", "sarcastic", "offensive", "motivational")
_C_COLUMNS = ("humour_scale", "sarcasm_scale", "offense_scale")


def _parse_bool(raw: str) -> bool:
    key = _canon(raw)
    if key in _BOOL:
        return _BOOL[key]
    raise ValueError(raw)


def _parse_motivational(raw: str) -> MotivationalScale:
    key = _canon(raw)
    if key in _MOTIVATIONAL:
        return _MOTIVATIONAL[key]
    return MotivationalScale.MOTIVATIONAL if _parse_bool(raw) else MotivationalScale.NOT_MOTIVATIONAL


def parse_label(head: TaskHead, raw: str) -> int:
    """Map one label cell to its class index, accepting the same spelling
    variants as load_corpus. Raises BadLabel on anything unmappable."""
    try:
        if head is TaskHead.A:
            return int(_SENTIMENT[_canon(raw)])
        if head in (TaskHead.B_HUMOUR, TaskHead.B_SARCASM, TaskHead.B_OFFENSE):
            return int(_parse_bool(raw))
        if head is TaskHead.B_MOTIVATIONAL:
            return int(bool(_parse_motivational(raw)))
        if head is TaskHead.C_HUMOUR:
            return int(_HUMOUR[_canon(raw)])
        if head is TaskHead.C_SARCASM:
            return int(_SARCASM[_canon(raw)])
        if head is TaskHead.C_OFFENSE:
            return int(_OFFENSE[_canon(raw)])
        return int(_parse_motivational(raw))
    except (KeyError, ValueError):
        raise BadLabel(f"cannot map {raw!r} to a {head.key} class") from None


def _check_bc_consistency(b: TaskBLabels, c: TaskCLabels) -> str | None:
    pairs = [
        ("humorous", b.humorous, c.humour_scale != HumourScale.NOT_FUNNY),
        ("sarcastic", b.sarcastic, c.sarcasm_scale != SarcasmScale.NOT_SARCASTIC),
        ("offensive", b.offensive, c.offense_scale != OffenseScale.NOT_OFFENSIVE),
        ("motivational", b.motivational, c.motivational == MotivationalScale.MOTIVATIONAL),
    ]
    for name, flag, scale_says in pairs:
        if flag != scale_says:
            return f"{name} flag contradicts its scale"
    return None


def load_corpus(path, tasks: str = "auto", report=None) -> list[MemeRecord]:
    """Parse a corpus CSV into records.

    ``tasks`` selects which label groups to read: any subset of "abc", or
    "auto" to read whatever label columns the header provides, or "none" for
    an unlabeled corpus. ``report`` (a callable, default no-op) receives one
    message per skipped row.
    """
    report = report or (lambda msg: None)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip().lower() for h in reader.fieldnames or []]
        for required in ("id", "image", "description"):
            if required not in header:
                raise MissingColumn(f"corpus is missing required column {required!r}")

        tasks = tasks.lower()
        want_a = ("a" in tasks or tasks == "auto") and "sentiment" in header
        want_b = ("b" in tasks or tasks == "auto") and all(c in header for c in _B_COLUMNS)
        want_c = ("c" in tasks or tasks == "auto") and all(c in header for c in _C_COLUMNS)
        if tasks not in ("auto", "none"):
            if "a" in tasks and not want_a:
                raise MissingColumn("task A requested but 'sentiment' column absent")
            if "b" in tasks and not want_b:
                raise MissingColumn("task B requested but flag columns absent")
            if "c" in tasks and not want_c:
                raise MissingColumn("task C requested but scale columns absent")

        records = []
        seen_ids = set()
        for line_no, row in enumerate(reader, start=2):
            row = {(k or "").strip().lower(): (v or "").strip() for k, v in row.items()}
            rec_id = row.get("id", "")
            if not rec_id:
                report(f"line {line_no}: empty id, skipped")
                continue
            if rec_id in seen_ids:
                report(f"line {line_no}: duplicate id {rec_id!r}, skipped")
                continue
            try:
                sentiment = _SENTIMENT[_canon(row["sentiment"])] if want_a else None
                task_b = None
                if want_b:
                    task_b = TaskBLabels(
                        humorous=_parse_bool(row["humorous"]),
                        sarcastic=_parse_bool(row["sarcastic"]),
                        offensive=_parse_bool(row["offensive"]),
                        # shared column: accepts yes/no and the scale names
                        motivational=bool(_parse_motivational(row["motivational"])),
                    )
                task_c = None
                if want_c:
                    task_c = TaskCLabels(
                        humour_scale=_HUMOUR[_canon(row["humour_scale"])],
                        sarcasm_scale=_SARCASM[_canon(row["sarcasm_scale"])],
                        offense_scale=_OFFENSE[_canon(row["offense_scale"])],
                        motivational=_parse_motivational(row["motivational"])
                        if "motivational" in row
                        else None,
                    )
            except (KeyError, ValueError):
                report(f"line {line_no}: unmappable label, skipped")
                continue
            if task_b is not None and task_c is not None:
                problem = _check_bc_consistency(task_b, task_c)
                if problem:
                    report(f"line {line_no}: {problem}, skipped")
                    continue
            labels = None
            if want_a or want_b or want_c:
                labels = MemeLabels(sentiment=sentiment, task_b=task_b, task_c=task_c)
            seen_ids.add(rec_id)
            records.append(
                MemeRecord(id=rec_id, image_ref=row["image"], description=row["description"], labels=labels)
            )
    if not records:
        raise EmptyCorpus(f"no valid rows in {path}")
    return records


def split_train_dev(records, dev_fraction: float, seed: int):
    """Seed-deterministic disjoint partition with |dev| = round(dev_fraction * N)."""
    if not 0 < dev_fraction < 1:
        raise ValueError(f"dev_fraction must be in (0, 1), got {dev_fraction}")
    records = list(records)
    if not records:
        raise ValueError("cannot split an empty record list")
    dev_size = round(dev_fraction * len(records))
    order = list(range(len(records)))
    random.Random(seed).shuffle(order)
    dev_idx = set(order[:dev_size])
    train = [records[i] for i in order[dev_size:]]
    dev = [records[i] for i in order[:dev_size]]
    return train, dev


def oversample_minority(records, label_projector, seed: int):
    """Pad every non-majority class with seeded uniform duplicates until all
    class counts equal the majority count. Originals are all retained."""
    records = list(records)
    by_class: dict[int, list[MemeRecord]] = {}
    for rec in records:
        by_class.setdefault(label_projector(rec), []).append(rec)
    if not by_class:
        return records
    target = max(len(group) for group in by_class.values())
    rng = random.Random(seed)
    out = list(records)
    for cls in sorted(by_class):
        group = by_class[cls]
        deficit = target - len(group)
        out.extend(rng.choice(group) for _ in range(deficit))
    return out


def pad_or_truncate(tokens, vocab, n: int) -> TokenSequence:
    """Map tokens to indices (OOV -> unknown), right-pad with 0 or keep the first n."""
    if n < 1:
        raise ValueError(f"sequence length must be >= 1, got {n}")
    ids = [vocab.index_of(tok) for tok in tokens[:n]]
    true_length = len(ids)
    ids.extend([0] * (n - true_length))
    return TokenSequence(ids=tuple(ids), true_length=true_length)


def class_distribution(records, head: TaskHead) -> dict[int, int]:
    """Exact per-class counts for one head; keys cover all classes, even empty ones."""
    counts = Counter(head.extract(rec) for rec in records)
    return {cls: counts.get(cls, 0) for cls in range(head.num_classes)}
