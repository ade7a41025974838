"""Three-sentence cloze examples: construction, splits, and pool selection.

Every article occurrence (a/an, the, or an explicit zero marker) in a
sentence with both neighbours yields one example: the occurrence is replaced
by a placeholder token, the neighbours keep all their articles and markers
visible. Splits are seeded and deterministic; the annotation pool is drawn
difficulty-stratified, fixing the fraction of examples a base model got
wrong.

Examples serialize one JSON record per line with token/POS arrays for the
three sentences, the blank index, the gold label, and the corpus reference.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .agreement import RaterView
from .corpus import ArticleLabel, Document, Sentence, Token, ZERO_MARKER, make_token

#: Stored surface of the blanked token; rendered "BLANK" in survey style.
PLACEHOLDER = "[BLANK]"
PLACEHOLDER_POS = "BLANK"
RENDER_STYLES = ("survey", "training")


class DatasetError(ValueError):
    pass


def _placeholder_token() -> Token:
    return Token(surface=PLACEHOLDER, pos=PLACEHOLDER_POS)


def _count_placeholders(sentence: Sentence) -> int:
    return sum(1 for t in sentence.tokens if t.surface == PLACEHOLDER)


@dataclass(frozen=True)
class ClozeExample:
    """Three sentences with exactly one blanked article slot in the middle."""

    id: str
    prev: Sentence
    target: Sentence
    next: Sentence
    blank_index: int
    gold: ArticleLabel
    corpus_ref: tuple[str, str]  # (document id, target sentence id)

    def __post_init__(self):
        if not (0 <= self.blank_index < len(self.target.tokens)):
            raise DatasetError(f"{self.id}: blank_index out of range")
        if self.target.tokens[self.blank_index].surface != PLACEHOLDER:
            raise DatasetError(f"{self.id}: token at blank_index is not the placeholder")
        total = sum(_count_placeholders(s) for s in (self.prev, self.target, self.next))
        if total != 1:
            raise DatasetError(f"{self.id}: expected exactly one placeholder, found {total}")


def build_examples(document: Document) -> list[ClozeExample]:
    """One example per article occurrence in sentences with both neighbours."""
    examples: list[ClozeExample] = []
    sentences = document.sentences
    for idx in range(1, len(sentences) - 1):
        target = sentences[idx]
        for token_idx, token in enumerate(target.tokens):
            if token.article is None:
                continue
            tokens = list(target.tokens)
            tokens[token_idx] = _placeholder_token()
            blanked = replace(target, tokens=tuple(tokens))
            examples.append(
                ClozeExample(
                    id=f"{document.id}:{target.id}:{token_idx}",
                    prev=sentences[idx - 1],
                    target=blanked,
                    next=sentences[idx + 1],
                    blank_index=token_idx,
                    gold=token.article,
                    corpus_ref=(document.id, target.id),
                )
            )
    return examples


def build_all_examples(documents: Iterable[Document]) -> list[ClozeExample]:
    examples: list[ClozeExample] = []
    for document in documents:
        examples.extend(build_examples(document))
    return examples


def render_example_text(example: ClozeExample, style: str = "survey") -> str:
    """Render an example for people (survey) or as a flat token stream.

    Survey style prints the three sentences on separate lines with ``BLANK``
    at the placeholder and zero markers visible; nothing in the text depends
    on the gold label. Training style emits one space-joined token stream
    with the placeholder token kept verbatim.
    """
    if style not in RENDER_STYLES:
        raise ValueError(f"unknown render style {style!r}; expected one of {RENDER_STYLES}")
    if style == "survey":
        lines = []
        for sentence in (example.prev, example.target, example.next):
            words = ["BLANK" if t.surface == PLACEHOLDER else t.surface for t in sentence.tokens]
            lines.append(" ".join(words))
        return "\n".join(lines)
    stream = [t.surface for s in (example.prev, example.target, example.next) for t in s.tokens]
    return " ".join(stream)


@dataclass
class SplitManifest:
    """Seeded split of examples into train / dev / annotation-pool candidates.

    ``excluded_ids`` holds pool candidates discarded because their target
    sentence also produced a training example (leakage control).
    """

    seed: int
    train_ids: list[str]
    dev_ids: list[str]
    pool_ids: list[str]
    excluded_ids: list[str]
    class_counts: dict[str, dict[str, int]]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "train_ids": self.train_ids,
            "dev_ids": self.dev_ids,
            "pool_ids": self.pool_ids,
            "excluded_ids": self.excluded_ids,
            "class_counts": self.class_counts,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SplitManifest":
        return cls(
            seed=obj["seed"],
            train_ids=list(obj["train_ids"]),
            dev_ids=list(obj["dev_ids"]),
            pool_ids=list(obj["pool_ids"]),
            excluded_ids=list(obj.get("excluded_ids", [])),
            class_counts={k: dict(v) for k, v in obj["class_counts"].items()},
        )


def _class_counts(examples: Iterable[ClozeExample]) -> dict[str, int]:
    counts = Counter(e.gold.value for e in examples)
    return {label.value: counts.get(label.value, 0) for label in ArticleLabel}


def split_dataset(
    examples: Sequence[ClozeExample], seed: int, train_n: int, dev_n: int
) -> SplitManifest:
    """Deterministic seeded split into train, dev, and pool candidates.

    Examples sharing a target sentence never straddle the train/pool
    boundary: leftovers whose sentence fed training are excluded from the
    pool and listed separately.
    """
    ids = [e.id for e in examples]
    if len(set(ids)) != len(ids):
        raise DatasetError("duplicate example ids in input")
    if train_n + dev_n > len(examples):
        raise DatasetError(
            f"need train_n+dev_n={train_n + dev_n} examples, have {len(examples)} "
            f"(short by {train_n + dev_n - len(examples)})"
        )
    ordered = sorted(examples, key=lambda e: e.id)
    random.Random(seed).shuffle(ordered)
    by_id = {e.id: e for e in examples}
    train: list[str] = []
    dev: list[str] = []
    pool: list[str] = []
    excluded: list[str] = []
    train_sentences: set[tuple[str, str]] = set()
    for example in ordered:
        if len(train) < train_n:
            train.append(example.id)
            train_sentences.add(example.corpus_ref)
        elif len(dev) < dev_n:
            dev.append(example.id)
        elif example.corpus_ref in train_sentences:
            excluded.append(example.id)
        else:
            pool.append(example.id)
    counts = {
        "train": _class_counts(by_id[i] for i in train),
        "dev": _class_counts(by_id[i] for i in dev),
        "pool": _class_counts(by_id[i] for i in pool),
    }
    return SplitManifest(
        seed=seed,
        train_ids=train,
        dev_ids=dev,
        pool_ids=pool,
        excluded_ids=excluded,
        class_counts=counts,
    )


def select_annotation_pool(
    candidates: Sequence[ClozeExample],
    base_predictions: RaterView,
    target_size: int,
    wrong_fraction: float,
    seed: int,
) -> list[str]:
    """Draw a difficulty-stratified annotation pool from the candidates.

    ``round(wrong_fraction * target_size)`` of the selected examples carry
    a base prediction different from gold; the rest a matching one. Within
    each stratum the draw is seeded-uniform. Returns sorted example ids.
    """
    if not 0.0 <= wrong_fraction <= 1.0:
        raise DatasetError(f"wrong_fraction must be in [0, 1], got {wrong_fraction}")
    missing = [e.id for e in candidates if not base_predictions.defined_on(e.id)]
    if missing:
        raise DatasetError(
            f"base predictions missing for {len(missing)} candidates, e.g. {missing[:3]}"
        )
    wrong = sorted(
        e.id for e in candidates if base_predictions.labels[e.id] != e.gold.value
    )
    right = sorted(
        e.id for e in candidates if base_predictions.labels[e.id] == e.gold.value
    )
    n_wrong = round(wrong_fraction * target_size)
    n_right = target_size - n_wrong
    if n_wrong > len(wrong) or n_right > len(right):
        achievable_lo = max(0, target_size - len(right)) / target_size
        achievable_hi = min(len(wrong), target_size) / target_size
        raise DatasetError(
            f"cannot draw {n_wrong} wrong + {n_right} right from "
            f"{len(wrong)} wrong / {len(right)} right candidates; "
            f"achievable wrong_fraction range is [{achievable_lo:.3f}, {achievable_hi:.3f}]"
        )
    rng = random.Random(seed)
    chosen = rng.sample(wrong, n_wrong) + rng.sample(right, n_right)
    return sorted(chosen)


def corpus_view(examples: Iterable[ClozeExample], name: str = "Corpus") -> RaterView:
    """The rater view of the source text: each example's gold label."""
    return RaterView(name, {e.id: e.gold.value for e in examples})


def _sentence_to_json(sentence: Sentence) -> dict:
    return {
        "id": sentence.id,
        "tokens": [t.surface for t in sentence.tokens],
        "pos": [t.pos for t in sentence.tokens],
    }


def _sentence_from_json(obj: Mapping, zero_marker: str) -> Sentence:
    tokens = []
    for surface, pos in zip(obj["tokens"], obj["pos"]):
        if surface == PLACEHOLDER:
            tokens.append(_placeholder_token())
        else:
            tokens.append(make_token(surface, pos, zero_marker))
    return Sentence(id=obj["id"], tokens=tuple(tokens))


def example_to_json(example: ClozeExample) -> dict:
    return {
        "id": example.id,
        "prev": _sentence_to_json(example.prev),
        "target": _sentence_to_json(example.target),
        "next": _sentence_to_json(example.next),
        "blank_index": example.blank_index,
        "gold": example.gold.value,
        "corpus_ref": {"document": example.corpus_ref[0], "sentence": example.corpus_ref[1]},
    }


def example_from_json(obj: Mapping, zero_marker: str = ZERO_MARKER) -> ClozeExample:
    return ClozeExample(
        id=obj["id"],
        prev=_sentence_from_json(obj["prev"], zero_marker),
        target=_sentence_from_json(obj["target"], zero_marker),
        next=_sentence_from_json(obj["next"], zero_marker),
        blank_index=obj["blank_index"],
        gold=ArticleLabel(obj["gold"]),
        corpus_ref=(obj["corpus_ref"]["document"], obj["corpus_ref"]["sentence"]),
    )


def write_examples(examples: Iterable[ClozeExample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for example in examples:
            fh.write(json.dumps(example_to_json(example), ensure_ascii=False) + "\n")


def read_examples(path: str | Path, zero_marker: str = ZERO_MARKER) -> list[ClozeExample]:
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                examples.append(example_from_json(json.loads(line), zero_marker))
    return examples


def write_manifest(manifest: SplitManifest, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(manifest.to_json(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def read_manifest(path: str | Path) -> SplitManifest:
    return SplitManifest.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
