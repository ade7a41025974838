"""Synthetic data generators for desk-scale runs, demos, and tests.

Everything here is seeded and deterministic: a small synthetic POS-tagged
corpus with a realistic mix of overt and zero articles, stub prediction
files in the model-predictions contract, and scripted survey participants
for exercising the annotation service end to end.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .agreement import VIEW_LABELS
from .corpus import ArticleLabel, Document, Sentence, make_token
from .dataset import ClozeExample
from .service import AnnotationService, SubmitOutcome

# Small CLAWS5-tagged vocabulary for sentence templates.
_PLURAL_NOUNS = ["tigers", "engineers", "shoes", "ideas", "flats", "reports", "gardens"]
_SINGULAR_NOUNS = ["cat", "proposal", "landmark", "scene", "meal", "city", "house"]
_MASS_NOUNS = ["pasta", "rice", "soup", "recognition", "business", "care"]
_ADJECTIVES = ["radical", "local", "magnificent", "derelict", "quiet", "formal"]
_VERBS_PAST = ["received", "produced", "admired", "ordered", "demanded", "studied"]
_PREPOSITIONS = ["in", "near", "against", "without"]


def _np(rng: random.Random, allow_bare: bool = True) -> list[tuple[str, str]]:
    """A noun phrase as (surface, pos) pairs, with a seeded determiner choice."""
    adj = [(rng.choice(_ADJECTIVES), "AJ0")] if rng.random() < 0.4 else []
    kind = rng.random()
    if kind < 0.45:
        noun = (rng.choice(_SINGULAR_NOUNS), "NN1")
        det = "a" if rng.random() < 0.5 else "the"
        first = adj[0][0] if adj else noun[0]
        if det == "a" and first[0] in "aeiou":
            det = "an"
        return [(det, "AT0")] + adj + [noun]
    if kind < 0.75:
        noun = (rng.choice(_PLURAL_NOUNS), "NN2")
        if allow_bare and rng.random() < 0.6:
            return adj + [noun]  # bare plural: zero-article site
        return [("the", "AT0")] + adj + [noun]
    noun = (rng.choice(_MASS_NOUNS), "NN1")
    if allow_bare and rng.random() < 0.6:
        return adj + [noun]  # bare mass noun: zero-article site
    return [("the", "AT0")] + adj + [noun]


def synthetic_sentence(rng: random.Random, sentence_id: str) -> Sentence:
    pairs = _np(rng)
    pairs.append((rng.choice(_VERBS_PAST), "VVD"))
    pairs.extend(_np(rng))
    if rng.random() < 0.5:
        pairs.append((rng.choice(_PREPOSITIONS), "PRP"))
        pairs.extend(_np(rng))
    pairs.append((".", "PUN"))
    return Sentence(id=sentence_id, tokens=tuple(make_token(s, p) for s, p in pairs))


def synthetic_corpus(
    n_sentences: int = 1000, seed: int = 0, sentences_per_doc: int = 5
) -> list[Document]:
    """Deterministic synthetic corpus; articles appear in most sentences."""
    rng = random.Random(seed)
    docs: list[Document] = []
    made = 0
    doc_no = 0
    while made < n_sentences:
        take = min(sentences_per_doc, n_sentences - made)
        sentences = tuple(
            synthetic_sentence(rng, f"s{i + 1}") for i in range(take)
        )
        docs.append(Document(id=f"doc{doc_no:04d}", sentences=sentences, source="synthetic"))
        made += take
        doc_no += 1
    return docs


def stub_predictions(
    examples: Sequence[ClozeExample],
    seed: int = 0,
    accuracy: float = 0.7,
    o_fraction: float = 0.0,
) -> list[dict]:
    """Prediction records in the model-output file contract.

    Each example gets the gold label with probability ``accuracy``, an O
    label with probability ``o_fraction``, otherwise a uniformly wrong
    article. Scores put most of the mass on the chosen label and are
    normalized to sum to 1.
    """
    rng = random.Random(seed)
    records = []
    for example in examples:
        roll = rng.random()
        if roll < accuracy:
            label = example.gold.value
        elif roll < accuracy + o_fraction:
            label = "O"
        else:
            others = [l.value for l in ArticleLabel if l is not example.gold]
            label = rng.choice(others)
        raw = {name: 0.1 for name in VIEW_LABELS}
        raw[label] = 0.7
        total = sum(raw.values())
        scores = {name: value / total for name, value in raw.items()}
        records.append({"example_id": example.id, "label": label, "scores": scores})
    return records


def constant_predictions(examples: Sequence[ClozeExample], label: str = "The") -> list[dict]:
    """A constant-label predictor; useful as the simplest contract producer."""
    if label not in VIEW_LABELS:
        raise ValueError(f"label must be one of {VIEW_LABELS}")
    scores = {name: (0.97 if name == label else 0.01) for name in VIEW_LABELS}
    return [{"example_id": e.id, "label": label, "scores": scores} for e in examples]


def write_predictions(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def simulate_participants(
    service: AnnotationService,
    n_participants: int,
    answer: Optional[Callable[[str, ClozeExample], ArticleLabel]] = None,
    fail_qc: Sequence[str] = (),
    seed: int = 0,
) -> dict[str, str]:
    """Run scripted participants through whole sessions.

    ``answer(participant_id, example)`` picks each pool-item response
    (default: the gold label, i.e. perfectly attentive annotators).
    Quality-control items are deliberately unambiguous, so participants
    always answer them correctly, except those listed in ``fail_qc``, who
    answer their first one wrongly and get gated out. Returns the final
    session state per participant.
    """
    rng = random.Random(seed)
    outcomes: dict[str, str] = {}
    for p in range(n_participants):
        participant = f"p{p:03d}"
        session = service.create_session(participant)
        sabotage = participant in fail_qc
        while True:
            item = service.next_item(session.session_id)
            if item is None:
                break
            example = service.example_for_token(item.item_token)
            if service.is_quality_control_token(item.item_token):
                if sabotage:
                    choice = rng.choice([l for l in ArticleLabel if l is not example.gold])
                else:
                    choice = example.gold
            elif answer is None:
                choice = example.gold
            else:
                choice = answer(participant, example)
            outcome = service.submit_response(session.session_id, item.item_token, choice)
            if outcome is not SubmitOutcome.CONTINUE:
                break
        outcomes[participant] = service.session_state(session.session_id)
    return outcomes
