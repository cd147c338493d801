"""Batch image-embedding extraction with a pretrained classification backbone.

A corpus CSV (``id`` and ``image`` columns; anything else is ignored) names
the images to embed, relative to an image directory. Each image runs through
the backbone's pooled penultimate layer, yielding one 2048-wide float32
vector per corpus id, written in corpus order to the binary embedding format.
Undecodable or missing images get the zero vector plus a failure entry in the
manifest; the run aborts only when nothing decodes at all. A JSON manifest
sidecar records the weights, preprocessing, and failures of every run.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np
import torch
from PIL import Image
from torchvision.models import Inception_V3_Weights, inception_v3

from .membfile import write_embeddings

__version__ = "0.1.0"

EMBED_DIM = 2048
# the backbone's native input resolution; --resize overrides it
CANONICAL_INPUT = 299
MIN_INPUT = 75
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


class MissingColumn(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


class NoDecodableImages(RuntimeError):
    pass


@dataclass
class ExtractionManifest:
    """Everything needed to audit or reproduce one extraction run."""

    model: str
    weights: str
    input_size: int
    normalization: dict
    corpus_rows: int
    embedded: int
    decoded: int
    failures: list = field(default_factory=list)
    rows_skipped: dict = field(default_factory=dict)
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "weights": self.weights,
            "preprocessing": {
                "input_size": self.input_size,
                "interpolation": "bilinear",
                "normalization": self.normalization,
            },
            "corpus_rows": self.corpus_rows,
            "embedded": self.embedded,
            "decoded": self.decoded,
            "failures": self.failures,
            "rows_skipped": self.rows_skipped,
            "tool_version": self.tool_version,
        }


def read_corpus_refs(path):
    """(id, image ref) pairs in corpus order, first occurrence of each id."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip().lower() for h in reader.fieldnames or []]
        for required in ("id", "image"):
            if required not in header:
                raise MissingColumn(f"corpus is missing required column {required!r}")
        refs = []
        seen: set[str] = set()
        skipped = {"duplicate_id": 0, "empty_id": 0}
        for row in reader:
            row = {(k or "").strip().lower(): (v or "").strip() for k, v in row.items()}
            meme_id = row["id"]
            if not meme_id:
                skipped["empty_id"] += 1
                continue
            if meme_id in seen:
                skipped["duplicate_id"] += 1
                continue
            seen.add(meme_id)
            refs.append((meme_id, row["image"]))
    if not refs:
        raise EmptyCorpus(f"no usable rows in {path}")
    return refs, skipped


def load_backbone(seed: int = 0):
    """The backbone with its classifier head removed, frozen in eval mode.

    Pretrained weights are attempted first; without network access the model
    falls back to seeded random weights, and the returned tag records which
    one a run actually used.
    """
    try:
        model = inception_v3(weights=Inception_V3_Weights.IMAGENET1K_V1)
        tag = "IMAGENET1K_V1"
    except Exception:  # the hub raises URLError, RuntimeError, or OSError
        torch.manual_seed(seed)
        model = inception_v3(weights=None, init_weights=False)
        tag = f"random-init seed={seed} (pretrained weights unavailable)"
    model.fc = torch.nn.Identity()
    model.eval()
    for p in model.parameters():
        p.requires_grad_(False)
    return model, tag


def decode_image(path, size: int):
    """(3, size, size) normalized tensor, or None if the file will not decode."""
    try:
        with Image.open(path) as im:
            im = im.convert("RGB").resize((size, size), Image.BILINEAR)
            arr = np.asarray(im, dtype=np.float32) / 255.0
    except Exception:  # undecodable bytes raise a zoo of PIL/OS errors
        return None
    arr = (arr - np.array(IMAGENET_MEAN, dtype=np.float32)) / np.array(
        IMAGENET_STD, dtype=np.float32)
    return torch.from_numpy(arr.transpose(2, 0, 1))


def extract(images_dir, corpus_path, out_path, resize: int = CANONICAL_INPUT,
            batch_size: int = 16, seed: int = 0) -> ExtractionManifest:
    """Embed every corpus image and write the embedding file plus manifest."""
    if resize < MIN_INPUT:
        raise ValueError(f"input size must be >= {MIN_INPUT}, got {resize}")
    if batch_size < 1:
        raise ValueError(f"batch size must be >= 1, got {batch_size}")
    if not os.path.isdir(images_dir):
        raise FileNotFoundError(f"image directory not found: {images_dir}")

    refs, rows_skipped = read_corpus_refs(corpus_path)
    model, weights_tag = load_backbone(seed)

    vectors = {meme_id: np.zeros(EMBED_DIM, dtype=np.float32) for meme_id, _ in refs}
    failures = []
    pending: list[tuple[str, torch.Tensor]] = []
    decoded = 0

    def flush():
        nonlocal decoded
        if not pending:
            return
        with torch.no_grad():
            out = model(torch.stack([tensor for _, tensor in pending]))
        for (meme_id, _), row in zip(pending, out.numpy().astype(np.float32)):
            vectors[meme_id] = row
        decoded += len(pending)
        pending.clear()

    for meme_id, image_ref in refs:
        image_path = os.path.join(images_dir, image_ref)
        if not image_ref or not os.path.isfile(image_path):
            failures.append({"id": meme_id, "image": image_ref, "reason": "file not found"})
            continue
        tensor = decode_image(image_path, resize)
        if tensor is None:
            failures.append({"id": meme_id, "image": image_ref, "reason": "undecodable"})
            continue
        pending.append((meme_id, tensor))
        if len(pending) >= batch_size:
            flush()
    flush()

    if decoded == 0:
        raise NoDecodableImages(f"none of the {len(refs)} corpus images decoded")

    write_embeddings(((meme_id, vectors[meme_id]) for meme_id, _ in refs), out_path)
    manifest = ExtractionManifest(
        model="inception_v3",
        weights=weights_tag,
        input_size=resize,
        normalization={"mean": list(IMAGENET_MEAN), "std": list(IMAGENET_STD)},
        corpus_rows=len(refs),
        embedded=len(refs),
        decoded=decoded,
        failures=failures,
        rows_skipped=rows_skipped,
    )
    with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
