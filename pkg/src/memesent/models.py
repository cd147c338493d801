"""The three classifier architectures, per-task heads, and checkpoint I/O.

All three models end in a hidden ReLU layer and a linear projection to the
head's class count, followed by softmax. Checkpoints are self-contained: the
vocabulary rides along with the parameters so a saved model can tokenize new
text without the original corpus.
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .autograd import (
    ShapeMismatch,
    Tensor,
    concat,
    constant,
    dropout,
    gather_rows,
    softmax,
    temporal_max_pool,
)
from .dataset import MemeRecord, TaskHead, TokenSequence, pad_or_truncate
from .dataset import MemeLabels, TaskBLabels, TaskCLabels
from .dataset import (
    HumourScale,
    MotivationalScale,
    OffenseScale,
    SarcasmScale,
    Sentiment,
)
from .embeddings import PAD_INDEX, EmbeddingTable, Vocabulary
from .layers import (
    Activation,
    DenseParams,
    LSTMParams,
    bilstm_encode,
    dense,
    init_dense,
    init_lstm,
    lstm_encode,
)

CHECKPOINT_MAGIC = b"MMCK"
CHECKPOINT_VERSION = 1


class VersionMismatch(ValueError):
    pass


class CorruptFile(ValueError):
    pass


class MissingHead(KeyError):
    pass


class Architecture(Enum):
    BILSTM_GLOVE = "bilstm-glove"
    MNN1 = "mnn1"
    MNN2 = "mnn2"


@dataclass(frozen=True)
class ModelConfig:
    architecture: Architecture
    head: TaskHead
    n: int = 75
    d_semantic: int = 200
    d_sentiment: int = 50
    image_dim: int = 2048
    lstm_hidden: int | None = None  # BiLSTM derives d/2; MNN branches default 128
    lstm_layers: int = 1
    dense_hidden: int = 128
    image_proj_dim: int | None = None  # MNN1 defaults 128, MNN2 defaults 256
    text_fusion_dim: int | None = None  # MNN2 defaults 256
    fusion_dim: int | None = None  # derived when omitted; checked when given
    fusion_hidden: int = 128
    dropout_in: float = 0.2
    dropout_out: float = 0.1
    seed: int = 0

    def to_dict(self) -> dict:
        raw = asdict(self)
        raw["architecture"] = self.architecture.value
        raw["head"] = self.head.key
        return raw

    @classmethod
    def from_dict(cls, raw: dict) -> "ModelConfig":
        raw = dict(raw)
        raw["architecture"] = Architecture(raw["architecture"])
        raw["head"] = TaskHead.from_key(raw["head"])
        return cls(**raw)


@dataclass
class Model:
    config: ModelConfig
    vocab: Vocabulary
    tensors: dict[str, Tensor] = field(default_factory=dict)
    # structural handles, filled in by build_model
    table_semantic: Tensor | None = None
    table_sentiment: Tensor | None = None
    bilstm: list[tuple[LSTMParams, LSTMParams]] = field(default_factory=list)
    lstm_stack: list[LSTMParams] = field(default_factory=list)
    sem_stack: list[LSTMParams] = field(default_factory=list)
    sent_stack: list[LSTMParams] = field(default_factory=list)
    image_proj: DenseParams | None = None
    text_fusion: DenseParams | None = None
    dense1: DenseParams | None = None
    dense2: DenseParams | None = None
    fusion_dense: DenseParams | None = None
    head_layer: DenseParams | None = None

    @property
    def vocab_hash(self) -> str:
        return self.vocab.content_hash()

    def named_tensors(self):
        return self.tensors.items()

    def trainable_parameters(self) -> list[Tensor]:
        return [t for _, t in self.tensors.items() if t.requires_grad]

    def parameter_count(self) -> int:
        return sum(t.data.size for t in self.trainable_parameters())


def _register(model: Model, name: str, tensor: Tensor) -> Tensor:
    if name in model.tensors:
        raise ValueError(f"duplicate tensor name {name!r}")
    model.tensors[name] = tensor
    return tensor


def _register_dense(model: Model, prefix: str, p: DenseParams) -> DenseParams:
    for name, tensor in p.named_parameters(prefix):
        _register(model, name, tensor)
    return p


def _register_lstm(model: Model, prefix: str, p: LSTMParams) -> LSTMParams:
    for name, tensor in p.named_parameters(prefix):
        _register(model, name, tensor)
    return p


def _table_tensor(table: EmbeddingTable) -> Tensor:
    tensor = Tensor(table.matrix.astype(np.float64, copy=True),
                    requires_grad=table.trainable)
    return tensor


def _mnn_dims(config: ModelConfig) -> tuple[int, int, int, int]:
    """Resolve (image_proj, lstm_hidden, text_width, fused) and check the wiring."""
    if config.architecture is Architecture.MNN1:
        image_proj = config.image_proj_dim if config.image_proj_dim is not None else 128
        hidden = config.lstm_hidden if config.lstm_hidden is not None else 128
        text_width = hidden
    else:
        image_proj = config.image_proj_dim if config.image_proj_dim is not None else 256
        hidden = config.lstm_hidden if config.lstm_hidden is not None else 128
        text_width = (config.text_fusion_dim
                      if config.text_fusion_dim is not None else 256)
    fused = image_proj + text_width
    if config.fusion_dim is not None and config.fusion_dim != fused:
        raise ShapeMismatch(
            f"fusion dim {config.fusion_dim} inconsistent with branches "
            f"({image_proj} image + {text_width} text = {fused})"
        )
    return image_proj, hidden, text_width, fused


def build_model(config: ModelConfig, vocab: Vocabulary,
                semantic: EmbeddingTable | None = None,
                sentiment: EmbeddingTable | None = None) -> Model:
    """Construct a model with freshly initialized layers.

    Word tables default to seeded random trainable tables when none are
    supplied. Branch widths are checked against each other here so a wiring
    mistake fails at build time, not inside a forward pass.
    """
    from .embeddings import EmbeddingFamily, random_table

    rng = np.random.default_rng(config.seed)
    model = Model(config=config, vocab=vocab)
    m = config.head.num_classes

    if semantic is None:
        semantic = random_table(vocab, config.d_semantic,
                                EmbeddingFamily.SEMANTIC, seed=config.seed)
    if semantic.dim != config.d_semantic:
        raise ShapeMismatch(
            f"semantic table dim {semantic.dim} != configured {config.d_semantic}"
        )
    if semantic.size != vocab.size:
        raise ShapeMismatch("semantic table rows do not match the vocabulary")
    model.table_semantic = _register(model, "embedding.semantic", _table_tensor(semantic))

    arch = config.architecture
    if arch is Architecture.BILSTM_GLOVE:
        if config.d_semantic % 2:
            raise ShapeMismatch("pooled output must match d, so d must be even")
        hidden = config.lstm_hidden if config.lstm_hidden is not None else config.d_semantic // 2
        if 2 * hidden != config.d_semantic:
            raise ShapeMismatch(
                f"pooled width 2*{hidden} != embedding dim {config.d_semantic}"
            )
        in_dim = config.d_semantic
        for layer in range(config.lstm_layers):
            fwd = _register_lstm(model, f"bilstm{layer}.fwd", init_lstm(in_dim, hidden, rng))
            bwd = _register_lstm(model, f"bilstm{layer}.bwd", init_lstm(in_dim, hidden, rng))
            model.bilstm.append((fwd, bwd))
            in_dim = 2 * hidden
        model.dense1 = _register_dense(
            model, "dense1", init_dense(2 * hidden, config.dense_hidden, Activation.RELU, rng))
        model.dense2 = _register_dense(
            model, "dense2", init_dense(config.dense_hidden, config.dense_hidden, Activation.RELU, rng))
        model.head_layer = _register_dense(
            model, "head", init_dense(config.dense_hidden, m, Activation.NONE, rng))
        return model

    image_proj, hidden, text_width, fused = _mnn_dims(config)
    model.image_proj = _register_dense(
        model, "image_proj", init_dense(config.image_dim, image_proj, Activation.RELU, rng))

    if arch is Architecture.MNN1:
        in_dim = config.d_semantic
        for layer in range(config.lstm_layers):
            model.lstm_stack.append(
                _register_lstm(model, f"lstm{layer}", init_lstm(in_dim, hidden, rng)))
            in_dim = hidden
    else:
        if sentiment is None:
            sentiment = random_table(vocab, config.d_sentiment,
                                     EmbeddingFamily.SENTIMENT_SPECIFIC,
                                     seed=config.seed + 1)
        if sentiment.dim != config.d_sentiment:
            raise ShapeMismatch(
                f"sentiment table dim {sentiment.dim} != configured {config.d_sentiment}"
            )
        if sentiment.size != vocab.size:
            raise ShapeMismatch("sentiment table rows do not match the vocabulary")
        model.table_sentiment = _register(
            model, "embedding.sentiment", _table_tensor(sentiment))
        in_sem, in_sent = config.d_semantic, config.d_sentiment
        for layer in range(config.lstm_layers):
            model.sem_stack.append(
                _register_lstm(model, f"sem_lstm{layer}", init_lstm(in_sem, hidden, rng)))
            model.sent_stack.append(
                _register_lstm(model, f"sent_lstm{layer}", init_lstm(in_sent, hidden, rng)))
            in_sem = in_sent = hidden
        model.text_fusion = _register_dense(
            model, "text_fusion", init_dense(2 * hidden, text_width, Activation.RELU, rng))

    model.fusion_dense = _register_dense(
        model, "fusion_dense", init_dense(fused, config.fusion_hidden, Activation.RELU, rng))
    model.head_layer = _register_dense(
        model, "head", init_dense(config.fusion_hidden, m, Activation.NONE, rng))
    return model


def _embed(seq: TokenSequence, table: Tensor) -> Tensor:
    ids = np.asarray(seq.ids, dtype=np.int64)
    return gather_rows(table, ids, freeze_row=PAD_INDEX)


def _lstm_summary(X: Tensor, true_length: int, stack: list[LSTMParams]) -> Tensor:
    h_last = None
    H = X
    for params in stack:
        H, h_last = lstm_encode(H, true_length, params, reverse=False)
    return h_last


def _image_tensor(img, dim: int) -> Tensor:
    if img is None:
        return constant(np.zeros(dim))
    vector = img.vector if hasattr(img, "vector") else img
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (dim,):
        raise ShapeMismatch(f"image embedding must be ({dim},), got {vector.shape}")
    return constant(vector)


def forward_bilstm_glove(seq: TokenSequence, model: Model,
                         training: bool = False, rng=None) -> Tensor:
    cfg = model.config
    if cfg.architecture is not Architecture.BILSTM_GLOVE:
        raise ShapeMismatch(f"model is {cfg.architecture.value}, not bilstm-glove")
    x = dropout(_embed(seq, model.table_semantic), cfg.dropout_in, training, rng)
    H = x
    for fwd, bwd in model.bilstm:
        H = bilstm_encode(H, seq.true_length, fwd, bwd)
    H = dropout(H, cfg.dropout_out, training, rng)
    pooled = temporal_max_pool(H, seq.true_length)
    hid = dense(dense(pooled, model.dense1), model.dense2)
    return softmax(dense(hid, model.head_layer))


def forward_mnn1(seq: TokenSequence, img, model: Model,
                 training: bool = False, rng=None) -> Tensor:
    cfg = model.config
    if cfg.architecture is not Architecture.MNN1:
        raise ShapeMismatch(f"model is {cfg.architecture.value}, not mnn1")
    img_vec = dense(_image_tensor(img, cfg.image_dim), model.image_proj)
    x = dropout(_embed(seq, model.table_semantic), cfg.dropout_in, training, rng)
    text_vec = _lstm_summary(x, seq.true_length, model.lstm_stack)
    fused = concat(text_vec, img_vec)
    return softmax(dense(dense(fused, model.fusion_dense), model.head_layer))


def forward_mnn2(seq: TokenSequence, img, model: Model,
                 training: bool = False, rng=None) -> Tensor:
    cfg = model.config
    if cfg.architecture is not Architecture.MNN2:
        raise ShapeMismatch(f"model is {cfg.architecture.value}, not mnn2")
    img_vec = dense(_image_tensor(img, cfg.image_dim), model.image_proj)
    sem = dropout(_embed(seq, model.table_semantic), cfg.dropout_in, training, rng)
    sent = dropout(_embed(seq, model.table_sentiment), cfg.dropout_in, training, rng)
    sem_vec = _lstm_summary(sem, seq.true_length, model.sem_stack)
    sent_vec = _lstm_summary(sent, seq.true_length, model.sent_stack)
    text_vec = dense(concat(sem_vec, sent_vec), model.text_fusion)
    fused = concat(text_vec, img_vec)
    return softmax(dense(dense(fused, model.fusion_dense), model.head_layer))


def forward(model: Model, seq: TokenSequence, img=None,
            training: bool = False, rng=None) -> Tensor:
    arch = model.config.architecture
    if arch is Architecture.BILSTM_GLOVE:
        return forward_bilstm_glove(seq, model, training, rng)
    if arch is Architecture.MNN1:
        return forward_mnn1(seq, img, model, training, rng)
    return forward_mnn2(seq, img, model, training, rng)


def predict_class(model: Model, seq: TokenSequence, img=None) -> int:
    """Argmax of the forward distribution; ties go to the lowest class index."""
    probs = forward(model, seq, img, training=False)
    return int(np.argmax(probs.data))


@dataclass(frozen=True)
class MemePrediction:
    sentiment: Sentiment
    task_b: TaskBLabels
    task_c: TaskCLabels


def predict_all_tasks(tokens, image_vector, models: dict[TaskHead, Model]) -> MemePrediction:
    """Run all nine heads over one meme's tokens and image vector."""
    for head in TaskHead:
        if head not in models:
            raise MissingHead(head.key)

    def run(head: TaskHead) -> int:
        model = models[head]
        seq = pad_or_truncate(tokens, model.vocab, model.config.n)
        img = None
        if model.config.architecture is not Architecture.BILSTM_GLOVE:
            img = (image_vector if image_vector is not None
                   else np.zeros(model.config.image_dim))
        return predict_class(model, seq, img)

    return MemePrediction(
        sentiment=Sentiment(run(TaskHead.A)),
        task_b=TaskBLabels(
            humorous=bool(run(TaskHead.B_HUMOUR)),
            sarcastic=bool(run(TaskHead.B_SARCASM)),
            offensive=bool(run(TaskHead.B_OFFENSE)),
            motivational=bool(run(TaskHead.B_MOTIVATIONAL)),
        ),
        task_c=TaskCLabels(
            humour_scale=HumourScale(run(TaskHead.C_HUMOUR)),
            sarcasm_scale=SarcasmScale(run(TaskHead.C_SARCASM)),
            offense_scale=OffenseScale(run(TaskHead.C_OFFENSE)),
            motivational=MotivationalScale(run(TaskHead.C_MOTIVATIONAL)),
        ),
    )


def save_checkpoint(model: Model, path) -> None:
    header = {
        "config": model.config.to_dict(),
        "vocab_tokens": model.vocab.tokens(),
        "vocab_hash": model.vocab_hash,
    }
    payload = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<H", CHECKPOINT_VERSION))
        fh.write(struct.pack("<I", len(payload)))
        fh.write(payload)
        fh.write(struct.pack("<I", len(model.tensors)))
        for name, tensor in model.named_tensors():
            raw_name = name.encode("utf-8")
            fh.write(struct.pack("<H", len(raw_name)))
            fh.write(raw_name)
            fh.write(struct.pack("<B", 1 if tensor.requires_grad else 0))
            fh.write(struct.pack("<B", tensor.data.ndim))
            for dim in tensor.data.shape:
                fh.write(struct.pack("<I", dim))
            fh.write(np.ascontiguousarray(tensor.data, dtype="<f8").tobytes())


def _read_exact(fh, count: int, what: str) -> bytes:
    buf = fh.read(count)
    if len(buf) != count:
        raise CorruptFile(f"file ends inside {what}")
    return buf


def load_checkpoint(path) -> Model:
    with open(path, "rb") as fh:
        if _read_exact(fh, 4, "magic") != CHECKPOINT_MAGIC:
            raise CorruptFile("not a checkpoint file")
        (version,) = struct.unpack("<H", _read_exact(fh, 2, "version"))
        if version != CHECKPOINT_VERSION:
            raise VersionMismatch(f"checkpoint version {version}, expected {CHECKPOINT_VERSION}")
        (hdr_len,) = struct.unpack("<I", _read_exact(fh, 4, "header length"))
        try:
            header = json.loads(_read_exact(fh, hdr_len, "header").decode("utf-8"))
            config = ModelConfig.from_dict(header["config"])
            tokens = header["vocab_tokens"]
            stored_hash = header["vocab_hash"]
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptFile(f"unreadable checkpoint header: {exc}") from exc
        vocab = Vocabulary({tok: i + 2 for i, tok in enumerate(tokens)})
        if vocab.content_hash() != stored_hash:
            raise CorruptFile("vocabulary hash mismatch")
        model = build_model(config, vocab)
        (n_blocks,) = struct.unpack("<I", _read_exact(fh, 4, "block count"))
        if n_blocks != len(model.tensors):
            raise CorruptFile(
                f"checkpoint has {n_blocks} tensors, model expects {len(model.tensors)}"
            )
        for _ in range(n_blocks):
            (name_len,) = struct.unpack("<H", _read_exact(fh, 2, "tensor name length"))
            name = _read_exact(fh, name_len, "tensor name").decode("utf-8")
            (trainable,) = struct.unpack("<B", _read_exact(fh, 1, "trainable flag"))
            (ndim,) = struct.unpack("<B", _read_exact(fh, 1, "rank"))
            shape = tuple(
                struct.unpack("<I", _read_exact(fh, 4, "dimension"))[0]
                for _ in range(ndim)
            )
            size = int(np.prod(shape)) if shape else 1
            raw = _read_exact(fh, 8 * size, f"data for {name!r}")
            if name not in model.tensors:
                raise CorruptFile(f"unexpected tensor {name!r}")
            tensor = model.tensors[name]
            if tensor.data.shape != shape:
                raise CorruptFile(
                    f"tensor {name!r} has shape {shape}, model expects {tensor.data.shape}"
                )
            tensor.data = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
            tensor.requires_grad = bool(trainable)
        if fh.read(1):
            raise CorruptFile("trailing bytes after final tensor")
    return model


def checkpoint_digest(path) -> str:
    import hashlib

    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
