"""Adapter acceptance: contract round-trips, stub wiring into the primary
toolkit's evaluate command, and a completed toy fine-tune."""

import json
import random
import subprocess
import sys

import pytest

from cloze_adapter.encoding import decode_blank_position, encode_for_token_labeling
from cloze_adapter.examples_io import read_example_records
from cloze_adapter.model import TrainSettings, predict, train
from cloze_adapter.stub import constant_predictions

from conftest import make_examples_file, synthetic_record, write_records


def _pass(name):
    print(f"\nACCEPTANCE PASS: {name}")


def test_encode_decode_round_trip_1000():
    """encode -> decode recovers the blank position on 1,000 varied examples."""
    rng = random.Random(77)
    for i in range(1000):
        obj = synthetic_record(i, rng, prev_len=rng.randint(1, 6), next_len=rng.randint(1, 6))
        from cloze_adapter.examples_io import parse_example_record

        record = parse_example_record(obj)
        seq = encode_for_token_labeling(record)
        assert decode_blank_position(seq) == seq.blank_position
        assert seq.labels[seq.blank_position] == record.gold
    _pass("encode/decode round trip on 1000 examples")


def _write_annotations_for(records, path, annotators=5):
    rows = []
    for record in records:
        for a in range(annotators):
            rows.append(
                {
                    "example_id": record["id"],
                    "annotator_id": f"ann{a}",
                    "choice": record["gold"],
                    "is_quality_control": False,
                    "session_id": f"sess{a}",
                    "elapsed_ms": 1000,
                }
            )
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def test_stub_predictions_feed_primary_evaluate(tmp_path):
    """A constant predictor's output file is ingested by the primary
    toolkit's evaluate subcommand without error (file contract only)."""
    examples = tmp_path / "pool.jsonl"
    rng = random.Random(3)
    records = [synthetic_record(i, rng) for i in range(40)]
    write_records(records, examples)
    preds = tmp_path / "stub_preds.jsonl"
    n = constant_predictions(examples, preds, label="The")
    assert n == 40
    parsed = [json.loads(l) for l in preds.read_text().splitlines()]
    assert all(row["label"] == "The" for row in parsed)  # constant predictor

    annotations = tmp_path / "annotations.jsonl"
    _write_annotations_for(records, annotations)
    result = subprocess.run(
        [
            sys.executable, "-m", "articlecloze.cli", "evaluate",
            "--examples", str(examples),
            "--annotations", str(annotations),
            "--predictions", str(preds),
            "--out-dir", str(tmp_path / "eval"),
        ],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr
    view = json.loads((tmp_path / "eval" / "view_BERT_L.json").read_text())
    assert set(view["labels"].values()) == {"The"}
    _pass("stub predictions file ingested by the primary evaluate subcommand")


def test_toy_fine_tune_completes_and_validates(tmp_path):
    """<=1k synthetic examples, small model, 1 epoch: the run completes and
    its predictions file validates against the contract."""
    train_file = tmp_path / "train.jsonl"
    dev_file = tmp_path / "dev.jsonl"
    make_examples_file(train_file, 800, seed=5)
    make_examples_file(dev_file, 100, seed=6)
    settings = TrainSettings(
        epochs=1, batch_size=32, hidden_size=32, num_layers=2, num_heads=2,
        intermediate_size=64, seeds=(0,),
    )
    report = train(train_file, dev_file, tmp_path / "model", settings)
    assert report["settings"]["epochs"] == 1
    assert report["train_examples"] == 800

    preds = tmp_path / "preds.jsonl"
    n = predict(tmp_path / "model", dev_file, preds)
    assert n == 100
    dev_ids = {r.example_id for r in read_example_records(dev_file)}
    seen = set()
    for line in preds.read_text().splitlines():
        row = json.loads(line)
        assert set(row) == {"example_id", "label", "scores"}
        assert row["label"] in ("A", "The", "Zero", "O")
        assert sum(row["scores"].values()) == pytest.approx(1.0, abs=1e-6)
        seen.add(row["example_id"])
    assert seen == dev_ids
    _pass(
        f"toy fine-tune completed (dev F1 {report['best_dev_f1']:.3f}), "
        "predictions validate against the contract"
    )
