"""Vocabulary, word-vector tables (semantic and sentiment-specific), image-embedding I/O.

Word vectors arrive as whitespace-separated text, one ``token v1 .. vd`` line
each. Image embeddings travel in a small binary container: magic ``MEMB``,
version u16, dim u32, count u32, then per entry an id-length u16, the UTF-8
id bytes, and dim little-endian 32-bit floats.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

PAD_INDEX = 0
UNK_INDEX = 1

MEMB_MAGIC = b"MEMB"
MEMB_VERSION = 1


class UnreadableFile(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class BadMagic(ValueError):
    pass


class DuplicateId(ValueError):
    pass


class TruncatedFile(ValueError):
    pass


class EmbeddingFamily(Enum):
    SEMANTIC = "semantic"
    SENTIMENT_SPECIFIC = "sentiment-specific"


@dataclass(frozen=True)
class Vocabulary:
    """token -> index map with reserved slots: 0 is padding, 1 is unknown."""

    _index: dict[str, int]

    @property
    def size(self) -> int:
        return len(self._index) + 2

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index_of(self, token: str) -> int:
        return self._index.get(token, UNK_INDEX)

    def tokens(self) -> list[str]:
        """Non-reserved tokens in index order."""
        return sorted(self._index, key=self._index.__getitem__)

    def content_hash(self) -> str:
        import hashlib

        digest = hashlib.sha256()
        for token in self.tokens():
            digest.update(token.encode("utf-8"))
            digest.update(b"\x00")
        return digest.hexdigest()


def build_vocab(corpus, min_count: int = 1) -> Vocabulary:
    """Tokens with frequency >= min_count, ordered by frequency desc then lexicographic."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for text in corpus:
        counts.update(text.split() if isinstance(text, str) else text)
    kept = [tok for tok, cnt in counts.items() if cnt >= min_count]
    kept.sort(key=lambda tok: (-counts[tok], tok))
    return Vocabulary({tok: i + 2 for i, tok in enumerate(kept)})


@dataclass
class EmbeddingTable:
    """V x d word-vector matrix; row 0 (padding) is all-zero and stays that way."""

    matrix: np.ndarray
    family: EmbeddingFamily
    trainable: bool = False
    loaded_tokens: int = field(default=0, repr=False)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])


def load_word_vectors(path, vocab: Vocabulary, d: int,
                      family: EmbeddingFamily, seed: int = 0) -> EmbeddingTable:
    """Read pretrained vectors for in-vocab tokens.

    Tokens missing from the file get seeded uniform values in [-0.05, 0.05];
    the unknown-token row gets the mean of all loaded vectors; padding stays
    zero. File-loaded tables come back frozen.
    """
    matrix = np.zeros((vocab.size, d), dtype=np.float64)
    filled = np.zeros(vocab.size, dtype=bool)
    loaded_sum = np.zeros(d, dtype=np.float64)
    loaded = 0
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise UnreadableFile(f"cannot open word vectors: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != d:
                raise DimensionMismatch(
                    f"line {line_no}: expected {d} values, found {len(values)}"
                )
            try:
                vec = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise DimensionMismatch(f"line {line_no}: non-numeric value") from exc
            loaded_sum += vec
            loaded += 1
            idx = vocab.index_of(token)
            if idx != UNK_INDEX and token in vocab:
                matrix[idx] = vec
                filled[idx] = True
    rng = np.random.default_rng(seed)
    for idx in range(2, vocab.size):
        if not filled[idx]:
            matrix[idx] = rng.uniform(-0.05, 0.05, size=d)
    if loaded:
        matrix[UNK_INDEX] = loaded_sum / loaded
    table = EmbeddingTable(matrix=matrix, family=family, trainable=False)
    table.loaded_tokens = int(filled.sum())
    return table


def random_table(vocab: Vocabulary, d: int, family: EmbeddingFamily,
                 seed: int = 0) -> EmbeddingTable:
    """Seeded uniform init in [-0.05, 0.05], trainable; padding row zero.

    Stand-in for a pretrained family when no vector file is supplied.
    """
    rng = np.random.default_rng(seed)
    matrix = rng.uniform(-0.05, 0.05, size=(vocab.size, d))
    matrix[PAD_INDEX] = 0.0
    return EmbeddingTable(matrix=matrix, family=family, trainable=True)


def lookup_sequence(seq, table: EmbeddingTable) -> np.ndarray:
    """n x d matrix whose row t is the table row for seq.ids[t]."""
    ids = np.asarray(seq.ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.size):
        raise IndexError("token id outside embedding table")
    return table.matrix[ids]


@dataclass(frozen=True)
class ImageEmbedding:
    meme_id: str
    vector: np.ndarray  # float32, fixed length

    def __post_init__(self):
        vec = np.ascontiguousarray(self.vector, dtype="<f4")
        if vec.ndim != 1:
            raise DimensionMismatch(f"embedding for {self.meme_id!r} is not a vector")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"non-finite value in embedding for {self.meme_id!r}")
        object.__setattr__(self, "vector", vec)


def write_image_embeddings(entries, path) -> None:
    entries = list(entries)
    if not entries:
        raise ValueError("refusing to write an empty embedding file")
    dim = entries[0].vector.shape[0]
    seen: set[str] = set()
    for entry in entries:
        if entry.vector.shape[0] != dim:
            raise DimensionMismatch(
                f"entry {entry.meme_id!r} has dim {entry.vector.shape[0]}, expected {dim}"
            )
        if entry.meme_id in seen:
            raise DuplicateId(entry.meme_id)
        seen.add(entry.meme_id)
    with open(path, "wb") as fh:
        fh.write(MEMB_MAGIC)
        fh.write(struct.pack("<HII", MEMB_VERSION, dim, len(entries)))
        for entry in entries:
            raw_id = entry.meme_id.encode("utf-8")
            if len(raw_id) > 0xFFFF:
                raise ValueError(f"id too long: {entry.meme_id!r}")
            fh.write(struct.pack("<H", len(raw_id)))
            fh.write(raw_id)
            fh.write(entry.vector.astype("<f4", copy=False).tobytes())


def _read_exact(fh, n: int, what: str) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise TruncatedFile(f"file ends inside {what}")
    return buf


def read_image_embeddings(path, expected_dim: int | None = 2048) -> dict[str, ImageEmbedding]:
    """Parse an embedding file back into a map keyed by meme id.

    The header dimension must equal expected_dim; pass None to accept any.
    Truncation anywhere is an error, never a partial result.
    """
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise UnreadableFile(f"cannot open image embeddings: {exc}") from exc
    with fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != MEMB_MAGIC:
            raise BadMagic(f"expected {MEMB_MAGIC!r}, found {magic!r}")
        version, dim, count = struct.unpack("<HII", _read_exact(fh, 10, "header"))
        if version != MEMB_VERSION:
            raise BadMagic(f"unsupported format version {version}")
        if expected_dim is not None and dim != expected_dim:
            raise DimensionMismatch(f"header dim {dim}, expected {expected_dim}")
        out: dict[str, ImageEmbedding] = {}
        for _ in range(count):
            (id_len,) = struct.unpack("<H", _read_exact(fh, 2, "id length"))
            meme_id = _read_exact(fh, id_len, "id bytes").decode("utf-8")
            if meme_id in out:
                raise DuplicateId(meme_id)
            raw = _read_exact(fh, 4 * dim, f"vector for {meme_id!r}")
            vec = np.frombuffer(raw, dtype="<f4").copy()
            out[meme_id] = ImageEmbedding(meme_id=meme_id, vector=vec)
        trailing = fh.read(1)
        if trailing:
            raise TruncatedFile("trailing bytes after final entry")
    return out
