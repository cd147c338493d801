"""Corpus loading, splitting, oversampling, and padding tests."""

import csv

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memesent.dataset import (
    BadLabel,
    EmptyCorpus,
    HumourScale,
    MemeLabels,
    MemeRecord,
    MissingColumn,
    MotivationalScale,
    OffenseScale,
    SarcasmScale,
    Sentiment,
    TaskBLabels,
    TaskCLabels,
    TaskHead,
    class_distribution,
    load_corpus,
    oversample_minority,
    pad_or_truncate,
    parse_label,
    split_train_dev,
)
from memesent.embeddings import PAD_INDEX, UNK_INDEX, build_vocab

FULL_COLUMNS = [
    "id", "image", "description", "sentiment",
    "humorous", "sarcastic", "offensive", "motivational",
    "humour_scale", "sarcasm_scale", "offense_scale",
]

CONSISTENT_ROW = {
    "id": "m1", "image": "m1.jpg", "description": "some text",
    "sentiment": "positive",
    "humorous": "yes", "sarcastic": "no", "offensive": "no", "motivational": "no",
    "humour_scale": "funny", "sarcasm_scale": "not_sarcastic",
    "offense_scale": "not_offensive",
}


def write_full_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FULL_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def row(**overrides):
    merged = dict(CONSISTENT_ROW)
    merged.update(overrides)
    return merged


def labeled(rec_id, sentiment):
    return MemeRecord(
        id=rec_id, image_ref=f"{rec_id}.jpg", description="x",
        labels=MemeLabels(sentiment=sentiment),
    )


class TestLoadCorpus:
    def test_three_row_file_gives_three_records(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(id="a"), row(id="b"), row(id="c")])
        records = load_corpus(path)
        assert [r.id for r in records] == ["a", "b", "c"]

    def test_all_label_groups_parsed(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(
            sentiment="Negative",
            humorous="yes", sarcastic="yes", offensive="yes", motivational="yes",
            humour_scale="hilarious", sarcasm_scale="twisted_meaning",
            offense_scale="hateful_offensive",
        )])
        rec = load_corpus(path)[0]
        assert rec.labels.sentiment is Sentiment.NEGATIVE
        assert rec.labels.task_b == TaskBLabels(True, True, True, True)
        assert rec.labels.task_c == TaskCLabels(
            HumourScale.HILARIOUS, SarcasmScale.TWISTED_MEANING,
            OffenseScale.HATEFUL_OFFENSIVE, MotivationalScale.MOTIVATIONAL,
        )

    def test_label_spelling_variants(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(
            sentiment="POSITIVE",
            humorous="TRUE", sarcastic="1", offensive="Yes", motivational="0",
            humour_scale="Very Funny", sarcasm_scale="very_twisted",
            offense_scale="slightly offensive",
        )])
        rec = load_corpus(path)[0]
        assert rec.labels.task_b == TaskBLabels(True, True, True, False)
        assert rec.labels.task_c.humour_scale is HumourScale.VERY_FUNNY
        assert rec.labels.task_c.sarcasm_scale is SarcasmScale.VERY_TWISTED
        assert rec.labels.task_c.offense_scale is OffenseScale.SLIGHT

    def test_shared_motivational_column_accepts_scale_names(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [
            row(id="m1", motivational="not_motivational"),
            row(id="m2", motivational="motivational"),
        ])
        records = load_corpus(path)
        assert records[0].labels.task_b.motivational is False
        assert records[0].labels.task_c.motivational is MotivationalScale.NOT_MOTIVATIONAL
        assert records[1].labels.task_b.motivational is True
        assert records[1].labels.task_c.motivational is MotivationalScale.MOTIVATIONAL

    def test_unmappable_label_skipped_and_reported(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(id="bad", humour_scale="superfunny"), row(id="ok")])
        messages = []
        records = load_corpus(path, report=messages.append)
        assert [r.id for r in records] == ["ok"]
        assert any("unmappable" in m for m in messages)

    def test_empty_id_skipped(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(id=""), row(id="ok")])
        messages = []
        records = load_corpus(path, report=messages.append)
        assert [r.id for r in records] == ["ok"]
        assert any("empty id" in m for m in messages)

    def test_duplicate_id_keeps_first(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(id="m1", description="first"), row(id="m1", description="second")])
        messages = []
        records = load_corpus(path, report=messages.append)
        assert len(records) == 1
        assert records[0].description == "first"
        assert any("duplicate" in m for m in messages)

    def test_flag_scale_contradiction_rejected(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [
            row(id="bad", humorous="yes", humour_scale="not_funny"),
            row(id="ok"),
        ])
        messages = []
        records = load_corpus(path, report=messages.append)
        assert [r.id for r in records] == ["ok"]
        assert any("contradicts" in m for m in messages)

    @pytest.mark.parametrize("column,flag,scale", [
        ("sarcastic", "no", "general"),
        ("offensive", "yes", "not_offensive"),
    ])
    def test_other_contradictions_rejected(self, tmp_path, column, flag, scale):
        scale_column = {"sarcastic": "sarcasm_scale", "offensive": "offense_scale"}[column]
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(**{column: flag, scale_column: scale}), row(id="ok")])
        records = load_corpus(path)
        assert [r.id for r in records] == ["ok"]

    def test_sentiment_only_corpus(self, tmp_path):
        path = tmp_path / "c.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "image", "description", "sentiment"])
            writer.writerow(["m1", "m1.jpg", "text", "neutral"])
        rec = load_corpus(path)[0]
        assert rec.labels.sentiment is Sentiment.NEUTRAL
        assert rec.labels.task_b is None
        assert rec.labels.task_c is None

    def test_unlabeled_corpus(self, tmp_path):
        path = tmp_path / "c.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "image", "description"])
            writer.writerow(["m1", "m1.jpg", "hello, \"world\""])
        rec = load_corpus(path)[0]
        assert rec.labels is None
        assert rec.description == 'hello, "world"'

    def test_tasks_none_ignores_label_columns(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row()])
        assert load_corpus(path, tasks="none")[0].labels is None

    def test_requested_task_missing_column(self, tmp_path):
        path = tmp_path / "c.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "image", "description"])
            writer.writerow(["m1", "m1.jpg", "text"])
        with pytest.raises(MissingColumn):
            load_corpus(path, tasks="a")
        with pytest.raises(MissingColumn):
            load_corpus(path, tasks="bc")

    def test_missing_required_column(self, tmp_path):
        path = tmp_path / "c.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "description"])
            writer.writerow(["m1", "text"])
        with pytest.raises(MissingColumn):
            load_corpus(path)

    def test_missing_file_raises_filenotfound(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_corpus(tmp_path / "absent.csv")

    def test_all_rows_invalid_is_empty_corpus(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [row(id="", description="x"), row(id="bad", sentiment="meh")])
        with pytest.raises(EmptyCorpus):
            load_corpus(path)

    def test_zero_data_rows_is_empty_corpus(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [])
        with pytest.raises(EmptyCorpus):
            load_corpus(path)


class TestSplitTrainDev:
    def test_documented_corpus_size(self):
        records = [labeled(str(i), Sentiment.POSITIVE) for i in range(6990)]
        train, dev = split_train_dev(records, 0.15, seed=0)
        assert len(train) == 5942
        assert len(dev) == 1048

    def test_hundred_records_split_85_15(self):
        records = [labeled(str(i), Sentiment.POSITIVE) for i in range(100)]
        train, dev = split_train_dev(records, 0.15, seed=3)
        assert len(train) == 85
        assert len(dev) == 15
        assert not {r.id for r in train} & {r.id for r in dev}

    def test_same_seed_same_partition(self):
        records = [labeled(str(i), Sentiment.POSITIVE) for i in range(10)]
        first = split_train_dev(records, 0.15, seed=9)
        second = split_train_dev(records, 0.15, seed=9)
        assert [r.id for r in first[0]] == [r.id for r in second[0]]
        assert [r.id for r in first[1]] == [r.id for r in second[1]]

    def test_different_seed_usually_differs(self):
        records = [labeled(str(i), Sentiment.POSITIVE) for i in range(50)]
        a = split_train_dev(records, 0.3, seed=1)
        b = split_train_dev(records, 0.3, seed=2)
        assert {r.id for r in a[1]} != {r.id for r in b[1]}

    @given(st.integers(min_value=1, max_value=1000), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, size, seed):
        records = [labeled(str(i), Sentiment.POSITIVE) for i in range(size)]
        train, dev = split_train_dev(records, 0.15, seed=seed)
        assert len(dev) == round(0.15 * size)
        train_ids = {r.id for r in train}
        dev_ids = {r.id for r in dev}
        assert not train_ids & dev_ids
        assert train_ids | dev_ids == {str(i) for i in range(size)}
        assert len(train) + len(dev) == size

    def test_bad_fraction_rejected(self):
        records = [labeled("0", Sentiment.POSITIVE)]
        for fraction in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                split_train_dev(records, fraction, seed=0)

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            split_train_dev([], 0.15, seed=0)


def sentiment_of(record):
    return int(record.labels.sentiment)


class TestOversampleMinority:
    def test_documented_class_counts(self):
        records = (
            [labeled(f"p{i}", Sentiment.POSITIVE) for i in range(4160)]
            + [labeled(f"u{i}", Sentiment.NEUTRAL) for i in range(2200)]
            + [labeled(f"n{i}", Sentiment.NEGATIVE) for i in range(630)]
        )
        out = oversample_minority(records, sentiment_of, seed=0)
        counts = class_distribution(out, TaskHead.A)
        assert counts == {0: 4160, 1: 4160, 2: 4160}
        # originals all retained, duplicates add no new ids
        assert out[: len(records)] == records
        assert {r.id for r in out} == {r.id for r in records}

    def test_two_class_deficit_drawn_from_minority(self):
        records = [
            labeled("a", Sentiment.POSITIVE),
            labeled("b", Sentiment.POSITIVE),
            labeled("c", Sentiment.POSITIVE),
            labeled("d", Sentiment.NEUTRAL),
        ]
        out = oversample_minority(records, sentiment_of, seed=5)
        assert len(out) == 6
        added = out[4:]
        assert all(r.id == "d" for r in added)

    def test_balanced_input_unchanged(self):
        records = [labeled("a", Sentiment.POSITIVE), labeled("b", Sentiment.NEUTRAL)]
        assert oversample_minority(records, sentiment_of, seed=0) == records

    def test_deterministic_for_fixed_seed(self):
        records = [labeled(str(i), Sentiment(i % 3)) for i in range(30)]
        first = oversample_minority(records, sentiment_of, seed=4)
        second = oversample_minority(records, sentiment_of, seed=4)
        assert [r.id for r in first] == [r.id for r in second]

    @given(st.lists(st.integers(0, 2), min_size=1, max_size=60),
           st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=80, deadline=None)
    def test_counts_equalized_and_ids_preserved(self, classes, seed):
        records = [labeled(str(i), Sentiment(c)) for i, c in enumerate(classes)]
        out = oversample_minority(records, sentiment_of, seed=seed)
        pre = class_distribution(records, TaskHead.A)
        post = class_distribution(out, TaskHead.A)
        target = max(pre.values())
        for cls, count in pre.items():
            assert post[cls] == (target if count else 0)
        assert {r.id for r in out} == {r.id for r in records}
        assert out[: len(records)] == records


class TestPadOrTruncate:
    @pytest.fixture()
    def vocab(self):
        return build_vocab(["alpha beta gamma delta"], min_count=1)

    def test_pad_short_sequence(self, vocab):
        seq = pad_or_truncate(["alpha", "beta", "gamma"], vocab, n=5)
        assert len(seq.ids) == 5
        assert seq.true_length == 3
        assert seq.ids[3:] == (PAD_INDEX, PAD_INDEX)
        assert seq.ids[:3] == tuple(vocab.index_of(t) for t in ["alpha", "beta", "gamma"])

    def test_truncate_long_sequence(self, vocab):
        tokens = ["alpha"] * 80
        seq = pad_or_truncate(tokens, vocab, n=75)
        assert len(seq.ids) == 75
        assert seq.true_length == 75
        assert all(i == vocab.index_of("alpha") for i in seq.ids)

    def test_empty_tokens(self, vocab):
        seq = pad_or_truncate([], vocab, n=4)
        assert seq.ids == (PAD_INDEX,) * 4
        assert seq.true_length == 0

    def test_oov_maps_to_unknown(self, vocab):
        seq = pad_or_truncate(["alpha", "zzz"], vocab, n=3)
        assert seq.ids[1] == UNK_INDEX

    def test_invalid_length_rejected(self, vocab):
        with pytest.raises(ValueError):
            pad_or_truncate(["alpha"], vocab, n=0)

    @given(st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta"]), max_size=12),
           st.integers(min_value=1, max_value=8))
    @settings(max_examples=100, deadline=None)
    def test_round_trip_below_true_length(self, tokens, n):
        vocab = build_vocab(["alpha beta gamma delta"], min_count=1)
        seq = pad_or_truncate(tokens, vocab, n)
        assert len(seq.ids) == n
        assert seq.true_length == min(len(tokens), n)
        recovered = [vocab.tokens()[i - 2] for i in seq.ids[: seq.true_length]]
        assert recovered == tokens[:n]
        assert all(i == PAD_INDEX for i in seq.ids[seq.true_length:])


class TestClassDistribution:
    def test_documented_histogram(self):
        records = (
            [labeled(f"p{i}", Sentiment.POSITIVE) for i in range(4160)]
            + [labeled(f"u{i}", Sentiment.NEUTRAL) for i in range(2200)]
            + [labeled(f"n{i}", Sentiment.NEGATIVE) for i in range(630)]
        )
        assert class_distribution(records, TaskHead.A) == {0: 4160, 1: 2200, 2: 630}

    def test_empty_selection_all_zero(self):
        assert class_distribution([], TaskHead.C_HUMOUR) == {0: 0, 1: 0, 2: 0, 3: 0}

    @given(st.lists(st.integers(0, 2), max_size=50))
    @settings(max_examples=60, deadline=None)
    def test_total_equals_record_count(self, classes):
        records = [labeled(str(i), Sentiment(c)) for i, c in enumerate(classes)]
        counts = class_distribution(records, TaskHead.A)
        assert sum(counts.values()) == len(records)
        assert set(counts) == {0, 1, 2}


class TestTaskHead:
    def test_class_counts(self):
        assert TaskHead.A.num_classes == 3
        for head in (TaskHead.B_HUMOUR, TaskHead.B_SARCASM,
                     TaskHead.B_OFFENSE, TaskHead.B_MOTIVATIONAL):
            assert head.num_classes == 2
        for head in (TaskHead.C_HUMOUR, TaskHead.C_SARCASM, TaskHead.C_OFFENSE):
            assert head.num_classes == 4
        assert TaskHead.C_MOTIVATIONAL.num_classes == 2

    def test_key_round_trip(self):
        for head in TaskHead:
            assert TaskHead.from_key(head.key) is head
            assert TaskHead.from_key(head.key.upper()) is head

    def test_unknown_key(self):
        with pytest.raises(KeyError):
            TaskHead.from_key("d")

    def test_extract_each_group(self):
        record = MemeRecord(
            id="m", image_ref="m.jpg", description="x",
            labels=MemeLabels(
                sentiment=Sentiment.NEGATIVE,
                task_b=TaskBLabels(True, False, True, False),
                task_c=TaskCLabels(
                    HumourScale.FUNNY, SarcasmScale.NOT_SARCASTIC,
                    OffenseScale.VERY_OFFENSIVE, MotivationalScale.NOT_MOTIVATIONAL,
                ),
            ),
        )
        assert TaskHead.A.extract(record) == 2
        assert TaskHead.B_HUMOUR.extract(record) == 1
        assert TaskHead.B_SARCASM.extract(record) == 0
        assert TaskHead.B_OFFENSE.extract(record) == 1
        assert TaskHead.B_MOTIVATIONAL.extract(record) == 0
        assert TaskHead.C_HUMOUR.extract(record) == 1
        assert TaskHead.C_SARCASM.extract(record) == 0
        assert TaskHead.C_OFFENSE.extract(record) == 2
        assert TaskHead.C_MOTIVATIONAL.extract(record) == 0

    def test_extract_missing_labels(self):
        bare = MemeRecord(id="m", image_ref="m.jpg", description="x")
        with pytest.raises(KeyError):
            TaskHead.A.extract(bare)
        partial = MemeRecord(
            id="m", image_ref="m.jpg", description="x",
            labels=MemeLabels(sentiment=Sentiment.POSITIVE),
        )
        with pytest.raises(KeyError):
            TaskHead.B_HUMOUR.extract(partial)
        with pytest.raises(KeyError):
            TaskHead.C_OFFENSE.extract(partial)

    def test_extract_missing_motivational_scale(self):
        record = MemeRecord(
            id="m", image_ref="m.jpg", description="x",
            labels=MemeLabels(
                task_c=TaskCLabels(
                    HumourScale.FUNNY, SarcasmScale.GENERAL,
                    OffenseScale.SLIGHT, None,
                ),
            ),
        )
        assert TaskHead.C_HUMOUR.extract(record) == 1
        with pytest.raises(KeyError):
            TaskHead.C_MOTIVATIONAL.extract(record)


class TestParseLabel:
    def test_every_head_maps_its_vocabulary(self):
        assert parse_label(TaskHead.A, "Negative") == 2
        assert parse_label(TaskHead.B_HUMOUR, "yes") == 1
        assert parse_label(TaskHead.B_SARCASM, "No") == 0
        assert parse_label(TaskHead.B_OFFENSE, "TRUE") == 1
        assert parse_label(TaskHead.B_MOTIVATIONAL, "motivational") == 1
        assert parse_label(TaskHead.B_MOTIVATIONAL, "no") == 0
        assert parse_label(TaskHead.C_HUMOUR, "very_funny") == 2
        assert parse_label(TaskHead.C_SARCASM, "twisted meaning") == 2
        assert parse_label(TaskHead.C_OFFENSE, "hateful_offensive") == 3
        assert parse_label(TaskHead.C_MOTIVATIONAL, "not_motivational") == 0
        assert parse_label(TaskHead.C_MOTIVATIONAL, "yes") == 1

    def test_agrees_with_corpus_extraction(self, tmp_path):
        path = tmp_path / "c.csv"
        write_full_csv(path, [CONSISTENT_ROW])
        record = load_corpus(path)[0]
        cells = {
            TaskHead.A: CONSISTENT_ROW["sentiment"],
            TaskHead.B_HUMOUR: CONSISTENT_ROW["humorous"],
            TaskHead.B_SARCASM: CONSISTENT_ROW["sarcastic"],
            TaskHead.B_OFFENSE: CONSISTENT_ROW["offensive"],
            TaskHead.B_MOTIVATIONAL: CONSISTENT_ROW["motivational"],
            TaskHead.C_HUMOUR: CONSISTENT_ROW["humour_scale"],
            TaskHead.C_SARCASM: CONSISTENT_ROW["sarcasm_scale"],
            TaskHead.C_OFFENSE: CONSISTENT_ROW["offense_scale"],
            TaskHead.C_MOTIVATIONAL: CONSISTENT_ROW["motivational"],
        }
        for head, raw in cells.items():
            assert parse_label(head, raw) == head.extract(record), head

    @pytest.mark.parametrize("head,raw", [
        (TaskHead.A, "meh"),
        (TaskHead.A, ""),
        (TaskHead.B_HUMOUR, "funny"),
        (TaskHead.C_HUMOUR, "yes"),
        (TaskHead.C_OFFENSE, "offensive"),
        (TaskHead.C_MOTIVATIONAL, "sort of"),
    ])
    def test_unmappable_cells_rejected(self, head, raw):
        with pytest.raises(BadLabel):
            parse_label(head, raw)
