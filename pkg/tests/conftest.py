"""Shared fixtures: synthetic corpora, embedding files, tiny model configs."""

from __future__ import annotations

import csv

import numpy as np
import pytest

from memesent.dataset import TaskHead
from memesent.embeddings import ImageEmbedding, write_image_embeddings
from memesent.models import Architecture, ModelConfig
from memesent.textnorm import ContractionDict

SENTIMENT_NAMES = ("positive", "neutral", "negative")

# Planted-signal vocabulary for the synthetic multimodal corpus.
CLASS_WORDS = (
    ("alpha", "bravo", "charlie"),
    ("delta", "echo", "foxtrot"),
    ("golf", "hotel", "india"),
)
FILLER_WORDS = ("the", "meme", "when", "this", "that", "so", "very", "much")


@pytest.fixture(scope="session")
def contractions() -> ContractionDict:
    return ContractionDict.bundled()


def synthesize_multimodal(n_records: int, seed: int, image_dim: int = 2048,
                          text_noise: float = 0.35, image_shift: float = 2.0):
    """Rows of (id, description, label) plus planted-signal image vectors.

    Labels cycle through the three classes. Text carries a noisy class signal
    (with probability text_noise the words come from a random other class);
    image vectors carry a clean mean shift in a per-class block of
    coordinates, so fusing both modalities beats text alone by construction.
    """
    rng = np.random.default_rng(seed)
    rows = []
    vectors = {}
    block = 16
    for i in range(n_records):
        label = i % 3
        text_label = label
        if rng.random() < text_noise:
            text_label = int(rng.integers(0, 3))
        tokens = []
        for _ in range(8):
            if rng.random() < 0.5:
                tokens.append(CLASS_WORDS[text_label][int(rng.integers(0, 3))])
            else:
                tokens.append(FILLER_WORDS[int(rng.integers(0, len(FILLER_WORDS)))])
        meme_id = f"m{i:04d}"
        rows.append((meme_id, " ".join(tokens), label))
        vec = rng.normal(0.0, 0.5, size=image_dim)
        vec[label * block:(label + 1) * block] += image_shift
        vectors[meme_id] = vec.astype(np.float32)
    return rows, vectors


def write_corpus_csv(path, rows, with_sentiment: bool = True) -> None:
    """rows: (id, description, label index) triples."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["id", "image", "description"]
        if with_sentiment:
            header.append("sentiment")
        writer.writerow(header)
        for meme_id, description, label in rows:
            row = [meme_id, f"{meme_id}.jpg", description]
            if with_sentiment:
                row.append(SENTIMENT_NAMES[label])
            writer.writerow(row)


def write_memb(path, vectors: dict[str, np.ndarray]) -> None:
    entries = [ImageEmbedding(meme_id=k, vector=v) for k, v in vectors.items()]
    write_image_embeddings(entries, path)


@pytest.fixture()
def surrogate_corpus(tmp_path):
    """300-record multimodal corpus with planted signal, on disk."""
    rows, vectors = synthesize_multimodal(300, seed=20)
    corpus = tmp_path / "surrogate.csv"
    memb = tmp_path / "surrogate.memb"
    write_corpus_csv(corpus, rows)
    write_memb(memb, vectors)
    return corpus, memb, rows


def tiny_config(arch: Architecture, head: TaskHead = TaskHead.A,
                seed: int = 0, **overrides) -> ModelConfig:
    """Gradcheck-scale dims: n=6, d=8, h=4, m per head."""
    base = dict(
        n=6, d_semantic=8, d_sentiment=5, image_dim=10,
        lstm_hidden=4, dense_hidden=5, image_proj_dim=4,
        text_fusion_dim=6, fusion_hidden=5, seed=seed,
    )
    base.update(overrides)
    return ModelConfig(architecture=arch, head=head, **base)
