"""Builds synthetic files in the frozen contracts, with no imports from the
dataset toolkit: the adapter is developed purely against the file formats."""

import json
import random

import pytest

NOUN_GOLD = {
    "proposal": "A", "landmark": "A", "idea": "A",
    "river": "The", "station": "The", "garden": "The",
    "tigers": "Zero", "engineers": "Zero", "pasta": "Zero", "rice": "Zero",
}
VERBS = ["saw", "admired", "crossed", "described", "visited"]
FILLERS = ["yesterday", "quietly", "again", "downtown"]


def synthetic_record(i, rng, prev_len=5, next_len=5):
    noun = rng.choice(list(NOUN_GOLD))
    gold = NOUN_GOLD[noun]
    prev = ["They", "arrived", "at", "the", "office", "."][:prev_len]
    target = ["He", VERBS[i % len(VERBS)], "[BLANK]", noun, rng.choice(FILLERS), "."]
    nxt = ["Nothing", "else", "happened", "that", "day", "."][:next_len]
    return {
        "id": f"syn{i:05d}",
        "prev": {"id": "s1", "tokens": prev, "pos": ["X"] * len(prev)},
        "target": {"id": "s2", "tokens": target, "pos": ["X"] * len(target)},
        "next": {"id": "s3", "tokens": nxt, "pos": ["X"] * len(nxt)},
        "blank_index": 2,
        "gold": gold,
        "corpus_ref": {"document": f"d{i // 10}", "sentence": "s2"},
    }


def write_records(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def make_examples_file(path, n, seed=0, **kwargs):
    rng = random.Random(seed)
    records = [synthetic_record(i, rng, **kwargs) for i in range(n)]
    write_records(records, path)
    return records


@pytest.fixture(scope="session")
def small_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("adapter_data")
    train = root / "train.jsonl"
    dev = root / "dev.jsonl"
    make_examples_file(train, 400, seed=1)
    make_examples_file(dev, 80, seed=2)
    return {"root": root, "train": train, "dev": dev}
