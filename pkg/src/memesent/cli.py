"""Command-line front end: normalize, stats, build-vocab, train, gridsearch, predict, evaluate.

Exit codes: 0 ok, 2 bad arguments, 3 missing input, 4 schema error,
5 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .autograd import NonFiniteError
from .dataset import (
    BadLabel,
    EmptyCorpus,
    HumourScale,
    MissingColumn,
    MotivationalScale,
    OffenseScale,
    SarcasmScale,
    Sentiment,
    TaskHead,
    class_distribution,
    load_corpus,
    pad_or_truncate,
    parse_label,
    split_train_dev,
)
from .embeddings import (
    BadMagic,
    DimensionMismatch,
    DuplicateId,
    EmbeddingFamily,
    TruncatedFile,
    UnreadableFile,
    build_vocab,
    load_word_vectors,
    random_table,
    read_image_embeddings,
)
from .metrics import ClassOutOfRange, LengthMismatch, confusion, score_card, task_bc_score
from .models import (
    Architecture,
    CorruptFile,
    ModelConfig,
    VersionMismatch,
    build_model,
    checkpoint_digest,
    forward,
    load_checkpoint,
    save_checkpoint,
)
from .textnorm import ContractionDict, normalize
from .training import (
    GridSpec,
    NonFiniteLoss,
    OptimizerKind,
    TrainConfig,
    grid_search,
    prepare_examples,
    train,
)

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_MISSING_INPUT = 3
EXIT_SCHEMA = 4
EXIT_NUMERIC = 5

_SCHEMA_ERRORS = (
    MissingColumn, EmptyCorpus, BadLabel, BadMagic, DimensionMismatch,
    DuplicateId, TruncatedFile, CorruptFile, VersionMismatch, LengthMismatch,
    ClassOutOfRange,
)

PREDICTION_COLUMNS = (
    "id", "sentiment", "humorous", "sarcastic", "offensive",
    "motivational", "humour_scale", "sarcasm_scale", "offense_scale",
)

_SENTIMENT_NAMES = {s: s.name.lower() for s in Sentiment}
_SCALE_NAMES = {
    HumourScale: {v: v.name.lower() for v in HumourScale},
    SarcasmScale: {v: v.name.lower() for v in SarcasmScale},
    OffenseScale: {v: v.name.lower() for v in OffenseScale},
}


class MissingModality(FileNotFoundError):
    pass


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` lines; # starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {line_no}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip().lower()] = value.strip()
    return out


def _config_int(cfg: dict, key: str, default: int) -> int:
    return int(cfg[key]) if key in cfg else default


def _config_float(cfg: dict, key: str, default: float) -> float:
    return float(cfg[key]) if key in cfg else default


def _config_bool(cfg: dict, key: str, default: bool) -> bool:
    if key not in cfg:
        return default
    return cfg[key].lower() in ("1", "true", "yes", "on")


def _config_list(cfg: dict, key: str, cast, default):
    if key not in cfg:
        return default
    return tuple(cast(part.strip()) for part in cfg[key].split(",") if part.strip())


def _contractions(path):
    return ContractionDict.from_file(path) if path else ContractionDict.bundled()


def _word_list(path):
    if not path:
        return None
    with open(path, encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}


def cmd_normalize(args) -> int:
    contractions = _contractions(args.dict)
    vocab = _word_list(args.vocab)
    for line in sys.stdin:
        print(" ".join(normalize(line.rstrip("\n"), contractions, vocab)))
    return EXIT_OK


def cmd_stats(args) -> int:
    report_lines: list[str] = []
    records = load_corpus(args.corpus, tasks=args.task, report=report_lines.append)
    heads = [h for h in TaskHead if _head_available(records[0], h)]
    stats = {}
    for head in heads:
        dist = class_distribution(records, head)
        stats[head.key] = {str(k): v for k, v in dist.items()}
    payload = {
        "records": len(records),
        "skipped": len(report_lines),
        "distributions": stats,
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"records: {len(records)}  skipped rows: {len(report_lines)}")
        for head in heads:
            dist = class_distribution(records, head)
            parts = " ".join(f"{k}:{v}" for k, v in sorted(dist.items()))
            print(f"{head.key:16s} {parts}")
        for line in report_lines:
            print(f"note: {line}", file=sys.stderr)
    return EXIT_OK


def _head_available(record, head: TaskHead) -> bool:
    try:
        head.extract(record)
        return True
    except KeyError:
        return False


def cmd_build_vocab(args) -> int:
    contractions = _contractions(args.dict)
    records = load_corpus(args.corpus, tasks="none")
    token_lists = [normalize(r.description, contractions) for r in records]
    vocab = build_vocab(token_lists, min_count=args.min_count)
    with open(args.out, "w", encoding="utf-8") as fh:
        for token in vocab.tokens():
            fh.write(token + "\n")
    print(f"wrote {vocab.size - 2} tokens to {args.out}")
    return EXIT_OK


def _parse_arch(name: str) -> Architecture:
    try:
        return Architecture(name.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown architecture {name!r}")


def _parse_head(name: str) -> TaskHead:
    try:
        return TaskHead.from_key(name)
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown task head {name!r}")


def _assemble_configs(args, head: TaskHead, arch: Architecture):
    cfg = _load_config_file(args.config) if args.config else {}
    seed = args.seed if args.seed is not None else _config_int(cfg, "seed", 0)
    model_cfg = ModelConfig(
        architecture=arch,
        head=head,
        n=_config_int(cfg, "n", 75),
        d_semantic=_config_int(cfg, "d_semantic", 200),
        d_sentiment=_config_int(cfg, "d_sentiment", 50),
        image_dim=_config_int(cfg, "image_dim", 2048),
        lstm_hidden=_config_int(cfg, "lstm_hidden", 0) or None,
        lstm_layers=_config_int(cfg, "lstm_layers", 1),
        dense_hidden=_config_int(cfg, "dense_hidden", 128),
        image_proj_dim=_config_int(cfg, "image_proj_dim", 0) or None,
        text_fusion_dim=_config_int(cfg, "text_fusion_dim", 0) or None,
        fusion_dim=_config_int(cfg, "fusion_dim", 0) or None,
        fusion_hidden=_config_int(cfg, "fusion_hidden", 128),
        dropout_in=_config_float(cfg, "dropout_in", 0.2),
        dropout_out=_config_float(cfg, "dropout_out", 0.1),
        seed=seed,
    )
    grid = GridSpec(
        lstm_layers=_config_list(cfg, "grid_lstm_layers", int, (1, 2)),
        epochs=_config_list(cfg, "grid_epochs", int, (10, 20, 30)),
        learning_rates=_config_list(cfg, "grid_learning_rates", float, (1e-3, 3e-4)),
    )
    train_cfg = TrainConfig(
        epochs=args.epochs if args.epochs is not None else _config_int(cfg, "epochs", 10),
        batch_size=_config_int(cfg, "batch_size", 32),
        learning_rate=(args.learning_rate if args.learning_rate is not None
                       else _config_float(cfg, "learning_rate", 1e-3)),
        optimizer=OptimizerKind(cfg.get("optimizer", "adam").lower()),
        seed=seed,
        oversample=args.oversample or _config_bool(cfg, "oversample", False),
        grid=grid,
    )
    dev_fraction = _config_float(cfg, "dev_fraction", 0.15)
    min_count = _config_int(cfg, "min_count", 1)
    return model_cfg, train_cfg, dev_fraction, min_count


def _load_tables(args, model_cfg: ModelConfig, vocab):
    semantic = None
    if args.embeddings:
        semantic = load_word_vectors(
            args.embeddings, vocab, model_cfg.d_semantic,
            EmbeddingFamily.SEMANTIC, seed=model_cfg.seed)
    sentiment = None
    if model_cfg.architecture is Architecture.MNN2 and args.sentiment_embeddings:
        sentiment = load_word_vectors(
            args.sentiment_embeddings, vocab, model_cfg.d_sentiment,
            EmbeddingFamily.SENTIMENT_SPECIFIC, seed=model_cfg.seed + 1)
    return semantic, sentiment


def _load_images(args, arch: Architecture):
    if arch is Architecture.BILSTM_GLOVE:
        return None
    if not args.image_embeddings:
        raise MissingModality(
            f"architecture {arch.value} needs --image-embeddings")
    return read_image_embeddings(args.image_embeddings, expected_dim=None)


def _training_inputs(args, head: TaskHead, model_cfg: ModelConfig,
                     dev_fraction: float, min_count: int):
    notes: list[str] = []
    records = load_corpus(args.corpus, tasks=head.key[0], report=notes.append)
    for note in notes:
        print(f"note: {note}", file=sys.stderr)
    train_recs, dev_recs = split_train_dev(records, dev_fraction, model_cfg.seed)
    if not train_recs or not dev_recs:
        raise EmptyCorpus("corpus too small to split")
    contractions = _contractions(args.dict)
    token_lists = [normalize(r.description, contractions) for r in train_recs]
    vocab = build_vocab(token_lists, min_count=min_count)
    images = _load_images(args, model_cfg.architecture)
    train_ex = prepare_examples(train_recs, head, vocab, model_cfg.n,
                                contractions, images)
    dev_ex = prepare_examples(dev_recs, head, vocab, model_cfg.n,
                              contractions, images)
    return vocab, train_ex, dev_ex


def _write_manifest(path, args, model_cfg: ModelConfig, train_cfg: TrainConfig,
                    artifacts: dict[str, str]) -> None:
    inputs = {}
    for name in ("corpus", "embeddings", "sentiment_embeddings",
                 "image_embeddings", "config", "dict"):
        value = getattr(args, name, None)
        if value:
            inputs[name] = {"path": str(value), "sha256": _sha256(value)}
    manifest = {
        "tool_version": __version__,
        "seed": train_cfg.seed,
        "model_config": model_cfg.to_dict(),
        "train_config": {
            "epochs": train_cfg.epochs,
            "batch_size": train_cfg.batch_size,
            "learning_rate": train_cfg.learning_rate,
            "optimizer": train_cfg.optimizer.value,
            "oversample": train_cfg.oversample,
        },
        "inputs": inputs,
        "artifacts": artifacts,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_train(args) -> int:
    head = _parse_head(args.task)
    arch = _parse_arch(args.arch)
    model_cfg, train_cfg, dev_fraction, min_count = _assemble_configs(args, head, arch)
    vocab, train_ex, dev_ex = _training_inputs(args, head, model_cfg,
                                               dev_fraction, min_count)
    semantic, sentiment = _load_tables(args, model_cfg, vocab)
    model = build_model(model_cfg, vocab, semantic, sentiment)
    model, report = train(model, train_ex, dev_ex, train_cfg)
    save_checkpoint(model, args.out)
    report_path = args.out + ".report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(args.out + ".manifest.json", args, model_cfg, train_cfg,
                    {"checkpoint": str(args.out), "report": report_path})
    best = report.best_epoch
    summary = {
        "checkpoint": str(args.out),
        "checkpoint_sha256": checkpoint_digest(args.out),
        "best_epoch": best,
        "dev_macro_f1": report.dev_macro_f1[best],
        "dev_micro_f1": report.dev_micro_f1[best],
    }
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"best epoch {best}: dev macro F1 {report.dev_macro_f1[best]:.4f}, "
              f"micro F1 {report.dev_micro_f1[best]:.4f}")
        print(f"checkpoint written to {args.out}")
    return EXIT_OK


def cmd_gridsearch(args) -> int:
    head = _parse_head(args.task)
    arch = _parse_arch(args.arch)
    model_cfg, train_cfg, dev_fraction, min_count = _assemble_configs(args, head, arch)
    vocab, train_ex, dev_ex = _training_inputs(args, head, model_cfg,
                                               dev_fraction, min_count)

    def factory(lstm_layers: int, seed: int):
        from dataclasses import replace

        cell_cfg = replace(model_cfg, lstm_layers=lstm_layers, seed=seed)
        semantic, sentiment = _load_tables(args, cell_cfg, vocab)
        return build_model(cell_cfg, vocab, semantic, sentiment)

    result = grid_search(factory, train_ex, dev_ex, train_cfg)
    if args.json:
        print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    else:
        for i, cell in enumerate(result.cells):
            marker = "*" if i == result.best_index else " "
            print(f"{marker} layers={cell.lstm_layers} epochs={cell.epochs} "
                  f"lr={cell.learning_rate:g} -> dev macro F1 {cell.dev_macro_f1:.4f}")
    if args.out:
        from dataclasses import replace

        best = result.best
        cell_model_cfg = replace(model_cfg, lstm_layers=best.lstm_layers, seed=best.seed)
        cell_train_cfg = TrainConfig(
            epochs=best.epochs, batch_size=train_cfg.batch_size,
            learning_rate=best.learning_rate, optimizer=train_cfg.optimizer,
            seed=best.seed, oversample=train_cfg.oversample, grid=train_cfg.grid)
        semantic, sentiment = _load_tables(args, cell_model_cfg, vocab)
        model = build_model(cell_model_cfg, vocab, semantic, sentiment)
        model, _ = train(model, train_ex, dev_ex, cell_train_cfg)
        save_checkpoint(model, args.out)
        _write_manifest(args.out + ".manifest.json", args, cell_model_cfg,
                        cell_train_cfg, {"checkpoint": str(args.out)})
        print(f"best-cell checkpoint written to {args.out}")
    return EXIT_OK


_HEAD_COLUMN = {
    TaskHead.A: "sentiment",
    TaskHead.B_HUMOUR: "humorous",
    TaskHead.B_SARCASM: "sarcastic",
    TaskHead.B_OFFENSE: "offensive",
    TaskHead.B_MOTIVATIONAL: "motivational",
    TaskHead.C_HUMOUR: "humour_scale",
    TaskHead.C_SARCASM: "sarcasm_scale",
    TaskHead.C_OFFENSE: "offense_scale",
    TaskHead.C_MOTIVATIONAL: "motivational",
}


def _format_prediction(head: TaskHead, cls: int) -> str:
    if head is TaskHead.A:
        return _SENTIMENT_NAMES[Sentiment(cls)]
    if head.key.startswith("b-"):
        return "yes" if cls else "no"
    if head is TaskHead.C_MOTIVATIONAL:
        return "yes" if cls == MotivationalScale.MOTIVATIONAL else "no"
    enum_cls = {TaskHead.C_HUMOUR: HumourScale, TaskHead.C_SARCASM: SarcasmScale,
                TaskHead.C_OFFENSE: OffenseScale}[head]
    return _SCALE_NAMES[enum_cls][enum_cls(cls)]


def cmd_predict(args) -> int:
    models = {}
    for path in args.checkpoint:
        model = load_checkpoint(path)
        head = model.config.head
        if head in models:
            raise ValueError(f"two checkpoints for head {head.key}")
        models[head] = model
    records = load_corpus(args.corpus, tasks="none")
    contractions = _contractions(args.dict)
    images = None
    if args.image_embeddings:
        images = read_image_embeddings(args.image_embeddings, expected_dim=None)

    # b-motivational wins the shared column when both motivational heads run
    ordered_heads = [h for h in TaskHead if h in models]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_COLUMNS)
        for rec in records:
            tokens = normalize(rec.description, contractions)
            image_vec = None
            if images is not None and rec.id in images:
                image_vec = np.asarray(images[rec.id].vector, dtype=np.float64)
            row = {col: "" for col in PREDICTION_COLUMNS}
            row["id"] = rec.id
            for head in ordered_heads:
                model = models[head]
                seq = pad_or_truncate(tokens, model.vocab, model.config.n)
                img = None
                if model.config.architecture is not Architecture.BILSTM_GLOVE:
                    img = (image_vec if image_vec is not None
                           else np.zeros(model.config.image_dim))
                cls = int(np.argmax(forward(model, seq, img, training=False).data))
                column = _HEAD_COLUMN[head]
                if head is TaskHead.C_MOTIVATIONAL and row[column]:
                    continue
                row[column] = _format_prediction(head, cls)
            writer.writerow([row[col] for col in PREDICTION_COLUMNS])
    print(f"wrote {len(records)} predictions to {args.out}")
    return EXIT_OK


def _read_label_table(path, heads) -> dict[str, dict[TaskHead, int]]:
    """id -> per-head class from a prediction CSV (id + label columns only);
    a full corpus CSV works too since its label columns share these names."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip().lower() for h in reader.fieldnames or []]
        if "id" not in header:
            raise MissingColumn("predictions are missing required column 'id'")
        for head in heads:
            if _HEAD_COLUMN[head] not in header:
                raise MissingColumn(
                    f"predictions are missing column {_HEAD_COLUMN[head]!r}")
        table: dict[str, dict[TaskHead, int]] = {}
        for line_no, row in enumerate(reader, start=2):
            row = {(k or "").strip().lower(): (v or "").strip() for k, v in row.items()}
            rec_id = row["id"]
            if not rec_id:
                raise BadLabel(f"predictions line {line_no}: empty id")
            if rec_id in table:
                raise BadLabel(f"predictions line {line_no}: duplicate id {rec_id!r}")
            table[rec_id] = {h: parse_label(h, row[_HEAD_COLUMN[h]]) for h in heads}
    if not table:
        raise EmptyCorpus(f"no prediction rows in {path}")
    return table


def cmd_evaluate(args) -> int:
    task = args.task.lower()
    if task not in ("a", "b", "c"):
        raise argparse.ArgumentTypeError(f"task must be a, b, or c, not {args.task!r}")

    if task == "a":
        heads = [TaskHead.A]
    elif task == "b":
        heads = [TaskHead.B_HUMOUR, TaskHead.B_SARCASM,
                 TaskHead.B_OFFENSE, TaskHead.B_MOTIVATIONAL]
    else:
        heads = [TaskHead.C_HUMOUR, TaskHead.C_SARCASM, TaskHead.C_OFFENSE]
        if not args.exclude_motivational:
            heads.append(TaskHead.C_MOTIVATIONAL)

    gold_records = load_corpus(args.gold, tasks=task)
    pred_table = _read_label_table(args.pred, heads)
    if len(gold_records) != len(pred_table):
        raise LengthMismatch(
            f"gold has {len(gold_records)} rows, predictions {len(pred_table)}")
    missing = [r.id for r in gold_records if r.id not in pred_table]
    if missing:
        raise LengthMismatch(
            f"{len(missing)} gold ids missing from predictions "
            f"(first: {missing[0]!r})")

    cards = {}
    for head in heads:
        gold = [head.extract(rec) for rec in gold_records]
        pred = [pred_table[rec.id][head] for rec in gold_records]
        cards[head.key] = score_card(confusion(gold, pred, head.num_classes))

    payload = {key: card.to_dict() for key, card in cards.items()}
    if task == "a":
        card = cards["a"]
        payload["summary"] = {"macro_f1": card.macro_f1, "micro_f1": card.micro_f1}
    else:
        payload["summary"] = {
            "averaged_macro_f1": task_bc_score(list(cards.values())),
        }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, card in cards.items():
            print(f"{key}: macro F1 {card.macro_f1:.4f}  micro F1 {card.micro_f1:.4f}")
            for cls, (p, r, f1) in enumerate(
                    zip(card.precision, card.recall, card.f1)):
                print(f"  class {cls}: P {p:.4f}  R {r:.4f}  F1 {f1:.4f}")
        if task != "a":
            print(f"averaged macro F1: {payload['summary']['averaged_macro_f1']:.4f}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memesent",
        description="Meme sentiment and affect classification toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize text lines from stdin")
    p.add_argument("--dict", help="contraction dictionary (TSV)")
    p.add_argument("--vocab", help="word list for elongation collapse")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("stats", help="label distributions of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--task", default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("build-vocab", help="write the vocabulary of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--dict")
    p.set_defaults(fn=cmd_build_vocab)

    def add_train_flags(p):
        p.add_argument("--corpus", required=True)
        p.add_argument("--task", required=True, help="a, b-humour, ... c-motivational")
        p.add_argument("--arch", required=True, help="bilstm-glove, mnn1, mnn2")
        p.add_argument("--embeddings", help="semantic word-vector text file")
        p.add_argument("--sentiment-embeddings", help="sentiment word-vector text file")
        p.add_argument("--image-embeddings", help="image-embedding binary file")
        p.add_argument("--config", help="flat key = value settings file")
        p.add_argument("--dict", help="contraction dictionary (TSV)")
        p.add_argument("--seed", type=int)
        p.add_argument("--epochs", type=int)
        p.add_argument("--learning-rate", type=float)
        p.add_argument("--oversample", action="store_true")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("train", help="train one task head")
    add_train_flags(p)
    p.add_argument("--out", required=True, help="checkpoint path")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("gridsearch", help="sweep layers/epochs/learning rate")
    add_train_flags(p)
    p.add_argument("--out", help="write the winning cell's checkpoint here")
    p.set_defaults(fn=cmd_gridsearch)

    p = sub.add_parser("predict", help="write a predictions CSV")
    p.add_argument("--checkpoint", action="append", required=True,
                   help="repeat for multiple task heads")
    p.add_argument("--corpus", required=True)
    p.add_argument("--image-embeddings")
    p.add_argument("--dict")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--task", required=True, help="a, b, or c")
    p.add_argument("--exclude-motivational", action="store_true",
                   help="drop the motivational subtask from the task-c average")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except (ValueError,) as exc:
        if isinstance(exc, _SCHEMA_ERRORS):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        if isinstance(exc, UnreadableFile):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MISSING_INPUT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except (NonFiniteLoss, NonFiniteError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except KeyError as exc:
        print(f"error: label/head mismatch: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (FileNotFoundError, MissingModality, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT


if __name__ == "__main__":
    sys.exit(main())
