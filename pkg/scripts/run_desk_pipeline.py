#!/usr/bin/env python3
"""End-to-end desk-scale pipeline on a synthetic corpus.

Generates a seeded 1,000-sentence POS-tagged corpus, then drives the real
CLI stage by stage: zero-tagging, dataset building, difficulty-stratified
pool selection against a stub base model, a simulated 15-participant
annotation run (with one deliberately careless participant who fails a
quality-control item), export, and the final Phi report.

Usage: python3 scripts/run_desk_pipeline.py [workdir]
"""

import random
import sys
from pathlib import Path

from articlecloze.agreement import read_annotations
from articlecloze.cli import main as cli
from articlecloze.corpus import ArticleLabel, serialize_corpus
from articlecloze.dataset import read_examples, write_examples
from articlecloze.fixtures import (
    simulate_participants,
    stub_predictions,
    synthetic_corpus,
    write_predictions,
)
from articlecloze.service import AnnotationService
from articlecloze.store import AnnotationLogStore

N_SENTENCES = 1000
TRAIN_N, DEV_N = 250, 80
POOL_SIZE, WRONG_FRACTION = 150, 0.30
N_ITEMS, QC_COUNT, COVERAGE_TARGET = 30, 2, 5
N_PARTICIPANTS = 26  # 25 honest completions cover 150 items x 5; one QC-fails


def step(title):
    print(f"\n=== {title} ===")


def main() -> int:
    work = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/desk_run")
    work.mkdir(parents=True, exist_ok=True)

    step("synthetic corpus")
    docs = synthetic_corpus(n_sentences=N_SENTENCES, seed=31)
    corpus = work / "corpus.vert"
    corpus.write_text(serialize_corpus(docs, "vertical"), encoding="utf-8")
    print(f"wrote {N_SENTENCES} sentences -> {corpus}")

    step("tag-zero")
    tagged = work / "tagged.vert"
    assert cli(["tag-zero", "--corpus", str(corpus), "--out", str(tagged)]) == 0

    step("build-dataset")
    data_dir = work / "dataset"
    assert cli([
        "build-dataset", "--corpus", str(tagged), "--out-dir", str(data_dir),
        "--train-n", str(TRAIN_N), "--dev-n", str(DEV_N), "--seed-split", "13",
    ]) == 0

    step("base-model predictions (stub) + select-pool")
    candidates = read_examples(data_dir / "pool_candidates.jsonl")
    base_preds = work / "base_predictions.jsonl"
    write_predictions(stub_predictions(candidates, seed=17, accuracy=0.55), base_preds)
    pool_file = work / "pool.jsonl"
    assert cli([
        "select-pool", "--candidates", str(data_dir / "pool_candidates.jsonl"),
        "--predictions", str(base_preds), "--out", str(pool_file),
        "--pool-size", str(POOL_SIZE), "--wrong-fraction", str(WRONG_FRACTION),
        "--seed-pool", "17",
    ]) == 0

    step("annotation sessions (simulated participants)")
    pool = read_examples(pool_file)
    dev = read_examples(data_dir / "dev.jsonl")
    qc_file = work / "qc.jsonl"
    write_examples(dev[:8], qc_file)
    store_path = work / "store.jsonl"
    service = AnnotationService(
        pool, dev[:8], AnnotationLogStore(store_path),
        n_items=N_ITEMS, qc_count=QC_COUNT, coverage_target=COVERAGE_TARGET, seed=29,
    )

    rng = random.Random(99)

    def imperfect(participant, example):
        # ~85% gold, otherwise a uniformly wrong article
        if rng.random() < 0.85:
            return example.gold
        return rng.choice([l for l in ArticleLabel if l is not example.gold])

    outcomes = simulate_participants(
        service, N_PARTICIPANTS, answer=imperfect, fail_qc=["p013"]
    )
    service.store.close()
    states = sorted(outcomes.values())
    print(f"session outcomes: {states.count('completed')} completed, "
          f"{states.count('qc_failed')} qc_failed")

    step("export")
    annotations = work / "annotations.jsonl"
    assert cli([
        "export", "--pool", str(pool_file), "--qc", str(qc_file),
        "--store", str(store_path), "--out", str(annotations),
        "--items-per-session", str(N_ITEMS), "--qc-count", str(QC_COUNT),
    ]) == 0
    print(f"{len(read_annotations(annotations))} records exported")

    step("model predictions (stub stand-in for the fine-tuned model)")
    model_preds = work / "model_predictions.jsonl"
    write_predictions(stub_predictions(pool, seed=41, accuracy=0.9), model_preds)
    print(f"wrote {model_preds}")

    step("evaluate + report")
    assert cli([
        "evaluate", "--examples", str(pool_file), "--annotations", str(annotations),
        "--predictions", str(model_preds), "--out-dir", str(work / "eval"),
        "--seed-control", "23",
    ]) == 0
    assert cli([
        "report", "--examples", str(pool_file), "--annotations", str(annotations),
        "--predictions", str(model_preds), "--out", str(work / "report.txt"),
        "--seed-control", "23",
    ]) == 0
    print(f"\nartifacts in {work}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
