"""Multimodal meme sentiment and affect classification toolkit.

Text descriptions are normalized, embedded, and encoded with LSTM variants;
precomputed image embeddings join through late fusion. One model is trained
per task head and scored with macro-averaged and micro-averaged F1.
"""

__version__ = "0.1.0"

from .dataset import (
    HumourScale,
    MemeLabels,
    MemeRecord,
    MotivationalScale,
    OffenseScale,
    SarcasmScale,
    Sentiment,
    TaskBLabels,
    TaskCLabels,
    TaskHead,
    TokenSequence,
    load_corpus,
    oversample_minority,
    pad_or_truncate,
    split_train_dev,
)
from .embeddings import (
    EmbeddingFamily,
    EmbeddingTable,
    ImageEmbedding,
    Vocabulary,
    build_vocab,
    load_word_vectors,
    read_image_embeddings,
    write_image_embeddings,
)
from .metrics import ScoreCard, confusion, macro_f1, micro_f1, score, task_bc_score
from .models import (
    Architecture,
    Model,
    ModelConfig,
    build_model,
    forward,
    load_checkpoint,
    predict_all_tasks,
    save_checkpoint,
)
from .textnorm import ContractionDict, normalize
from .training import GridSpec, TrainConfig, TrainReport, grid_search, prepare_examples, train

__all__ = [
    "__version__",
    "Architecture",
    "ContractionDict",
    "EmbeddingFamily",
    "EmbeddingTable",
    "GridSpec",
    "HumourScale",
    "ImageEmbedding",
    "MemeLabels",
    "MemeRecord",
    "Model",
    "ModelConfig",
    "MotivationalScale",
    "OffenseScale",
    "SarcasmScale",
    "ScoreCard",
    "Sentiment",
    "TaskBLabels",
    "TaskCLabels",
    "TaskHead",
    "TokenSequence",
    "TrainConfig",
    "TrainReport",
    "Vocabulary",
    "build_model",
    "build_vocab",
    "confusion",
    "forward",
    "grid_search",
    "load_checkpoint",
    "load_corpus",
    "load_word_vectors",
    "macro_f1",
    "micro_f1",
    "normalize",
    "oversample_minority",
    "pad_or_truncate",
    "predict_all_tasks",
    "prepare_examples",
    "read_image_embeddings",
    "save_checkpoint",
    "score",
    "split_train_dev",
    "task_bc_score",
    "train",
    "write_image_embeddings",
]
