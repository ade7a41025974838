"""Training and inference for the token-labeling article predictor.

Runs a BERT-style token-classification model over word-level inputs. By
default the model is small and randomly initialized (vocabulary built from
the training file); pass ``pretrained_path`` to fine-tune a local
checkpoint instead. One epoch is the default: more quickly overfits this
task. Multiple seeds can be trained in one call; the best dev-F1 seed's
weights become the artifact.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import torch
from torch.utils.data import DataLoader, Dataset
from transformers import BertConfig, BertForTokenClassification

from .encoding import DEFAULT_MAX_LEN, LABELS, LabeledSequence, O_LABEL, encode_for_token_labeling
from .examples_io import ClozeRecord, read_example_records
from .vocab import Vocab

LABEL_TO_ID = {label: i for i, label in enumerate(LABELS)}


@dataclass
class TrainSettings:
    epochs: int = 1
    max_sequence_length: int = DEFAULT_MAX_LEN
    batch_size: int = 16
    learning_rate: float = 1e-3
    seeds: tuple[int, ...] = (0,)
    hidden_size: int = 64
    num_layers: int = 2
    num_heads: int = 2
    intermediate_size: int = 128
    min_token_count: int = 1
    pretrained_path: Optional[str] = None  # local checkpoint dir, if any

    def to_json(self) -> dict:
        return asdict(self)


class _SequenceDataset(Dataset):
    def __init__(self, sequences: Sequence[LabeledSequence], vocab: Vocab, max_len: int):
        self.items = []
        for seq in sequences:
            ids = vocab.encode(seq.tokens)[:max_len]
            labels = [LABEL_TO_ID[l] for l in seq.labels][:max_len]
            self.items.append((ids, labels, min(seq.blank_position, max_len - 1)))
        self.pad_id = vocab.pad_id

    def __len__(self):
        return len(self.items)

    def __getitem__(self, idx):
        return self.items[idx]

    def collate(self, batch):
        width = max(len(ids) for ids, _, _ in batch)
        input_ids, attention, labels, blanks = [], [], [], []
        for ids, labs, blank in batch:
            pad = width - len(ids)
            input_ids.append(ids + [self.pad_id] * pad)
            attention.append([1] * len(ids) + [0] * pad)
            labels.append(labs + [-100] * pad)  # ignore padding in the loss
            blanks.append(blank)
        return (
            torch.tensor(input_ids),
            torch.tensor(attention),
            torch.tensor(labels),
            torch.tensor(blanks),
        )


def _encode_all(records: Sequence[ClozeRecord], max_len: int) -> list[LabeledSequence]:
    return [encode_for_token_labeling(r, max_len) for r in records]


def _new_model(settings: TrainSettings, vocab_size: int) -> BertForTokenClassification:
    if settings.pretrained_path:
        return BertForTokenClassification.from_pretrained(
            settings.pretrained_path, num_labels=len(LABELS)
        )
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=settings.hidden_size,
        num_hidden_layers=settings.num_layers,
        num_attention_heads=settings.num_heads,
        intermediate_size=settings.intermediate_size,
        max_position_embeddings=settings.max_sequence_length + 2,
        num_labels=len(LABELS),
    )
    return BertForTokenClassification(config)


def token_f1(pred_labels: Sequence[str], gold_labels: Sequence[str]) -> float:
    """Micro F1 over non-O positions (a predict-nothing model scores 0)."""
    tp = sum(1 for p, g in zip(pred_labels, gold_labels) if p == g != O_LABEL)
    pred_n = sum(1 for p in pred_labels if p != O_LABEL)
    gold_n = sum(1 for g in gold_labels if g != O_LABEL)
    if pred_n + gold_n == 0:
        return 0.0
    return 2 * tp / (pred_n + gold_n)


def _evaluate(model, loader) -> float:
    model.eval()
    preds, golds = [], []
    with torch.no_grad():
        for input_ids, attention, labels, _ in loader:
            logits = model(input_ids=input_ids, attention_mask=attention).logits
            best = logits.argmax(dim=-1)
            mask = labels != -100
            preds.extend(LABELS[i] for i in best[mask].tolist())
            golds.extend(LABELS[i] for i in labels[mask].tolist())
    return token_f1(preds, golds)


def _train_one(model, loader, settings: TrainSettings) -> None:
    optimizer = torch.optim.AdamW(model.parameters(), lr=settings.learning_rate)
    model.train()
    for _ in range(settings.epochs):
        for input_ids, attention, labels, _ in loader:
            out = model(input_ids=input_ids, attention_mask=attention, labels=labels)
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()


def train(
    train_file: str | Path,
    dev_file: str | Path,
    out_dir: str | Path,
    settings: Optional[TrainSettings] = None,
) -> dict:
    """Train per seed, keep the best dev-F1 weights, write the artifact.

    The artifact directory holds the model weights, the vocabulary, and
    ``adapter_config.json`` (settings, label set, per-seed dev F1).
    Returns the dev report.
    """
    settings = settings or TrainSettings()
    train_records = read_example_records(train_file)
    dev_records = read_example_records(dev_file)
    max_len = settings.max_sequence_length
    train_seqs = _encode_all(train_records, max_len)
    dev_seqs = _encode_all(dev_records, max_len)
    vocab = Vocab.build([s.tokens for s in train_seqs], min_count=settings.min_token_count)

    train_data = _SequenceDataset(train_seqs, vocab, max_len)
    dev_data = _SequenceDataset(dev_seqs, vocab, max_len)
    dev_loader = DataLoader(
        dev_data, batch_size=settings.batch_size, collate_fn=dev_data.collate
    )

    per_seed: dict[int, float] = {}
    best = None
    for seed in settings.seeds:
        torch.manual_seed(seed)
        random.seed(seed)
        loader = DataLoader(
            train_data,
            batch_size=settings.batch_size,
            shuffle=True,
            generator=torch.Generator().manual_seed(seed),
            collate_fn=train_data.collate,
        )
        model = _new_model(settings, len(vocab))
        _train_one(model, loader, settings)
        f1 = _evaluate(model, dev_loader)
        per_seed[seed] = f1
        if best is None or f1 > best[1]:
            best = (seed, f1, model)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed, f1, model = best
    model.save_pretrained(out_dir)
    vocab.save(out_dir / "vocab.txt")
    report = {
        "dev_f1_per_seed": {str(s): per_seed[s] for s in settings.seeds},
        "best_seed": seed,
        "best_dev_f1": f1,
        "train_examples": len(train_records),
        "dev_examples": len(dev_records),
        "vocab_size": len(vocab),
        "settings": settings.to_json(),
        "labels": list(LABELS),
    }
    (out_dir / "adapter_config.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return report


def load_artifact(artifact_dir: str | Path):
    artifact_dir = Path(artifact_dir)
    config = json.loads((artifact_dir / "adapter_config.json").read_text(encoding="utf-8"))
    model = BertForTokenClassification.from_pretrained(artifact_dir)
    vocab = Vocab.load(artifact_dir / "vocab.txt")
    return model, vocab, config


def predict(
    artifact_dir: str | Path,
    examples_file: str | Path,
    out_path: str | Path,
    batch_size: int = 32,
) -> int:
    """Write one prediction record per input example; returns the count.

    The label is the argmax over {A, The, Zero, O} at the blank position;
    an O win is recorded as-is, not remapped. Scores are the softmax over
    the four labels (they sum to 1).
    """
    model, vocab, config = load_artifact(artifact_dir)
    max_len = config["settings"]["max_sequence_length"]
    records = read_example_records(examples_file)
    sequences = _encode_all(records, max_len)
    data = _SequenceDataset(sequences, vocab, max_len)
    loader = DataLoader(data, batch_size=batch_size, collate_fn=data.collate)

    model.eval()
    rows = []
    position = 0
    with torch.no_grad():
        for input_ids, attention, _, blanks in loader:
            logits = model(input_ids=input_ids, attention_mask=attention).logits
            probs = torch.softmax(logits, dim=-1)
            for row in range(input_ids.shape[0]):
                record = records[position]
                blank = blanks[row].item()
                scores = probs[row, blank].tolist()
                total = sum(scores)
                scores = [s / total for s in scores]
                label = LABELS[max(range(len(LABELS)), key=lambda i: scores[i])]
                rows.append(
                    {
                        "example_id": record.example_id,
                        "label": label,
                        "scores": dict(zip(LABELS, scores)),
                    }
                )
                position += 1
    with open(out_path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return len(rows)
