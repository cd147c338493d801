"""Offline image-embedding extractor.

Runs a pretrained vision backbone over the images a corpus CSV references
and writes pooled 2048-d penultimate-layer vectors in the binary embedding
format the classification toolkit consumes, plus a JSON manifest that makes
every run auditable.
"""

from .extractor import (
    CANONICAL_INPUT,
    EMBED_DIM,
    EmptyCorpus,
    ExtractionManifest,
    MissingColumn,
    NoDecodableImages,
    __version__,
    decode_image,
    extract,
    load_backbone,
    read_corpus_refs,
)
from .membfile import write_embeddings

__all__ = [
    "__version__",
    "CANONICAL_INPUT",
    "EMBED_DIM",
    "EmptyCorpus",
    "ExtractionManifest",
    "MissingColumn",
    "NoDecodableImages",
    "decode_image",
    "extract",
    "load_backbone",
    "read_corpus_refs",
    "write_embeddings",
]
