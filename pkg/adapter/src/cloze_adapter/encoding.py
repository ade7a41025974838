"""Encode cloze examples as token-labeling sequences.

The three sentences become one word sequence; the blanked position is
rendered as the reserved mask word ``[BLANK]`` (model-agnostic on purpose:
pre-trained mask tokens know nothing about a zero article). The label
sequence is O everywhere except the blank, which carries the gold article.

Sequences longer than the configured maximum are trimmed from the left of
the preceding sentence first, then from the right of the following one; the
target sentence is never cut, even if it alone exceeds the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .examples_io import ClozeRecord, ContractError

BLANK_TOKEN = "[BLANK]"
LABELS = ("O", "A", "The", "Zero")
O_LABEL = "O"
DEFAULT_MAX_LEN = 150


@dataclass(frozen=True)
class LabeledSequence:
    tokens: tuple[str, ...]
    labels: tuple[str, ...]
    example_id: str
    blank_position: int
    truncated: bool = False

    def __post_init__(self):
        if len(self.tokens) != len(self.labels):
            raise ValueError(f"{self.example_id}: tokens/labels length mismatch")
        if not 0 <= self.blank_position < len(self.tokens):
            raise ValueError(f"{self.example_id}: blank_position out of range")
        if self.labels[self.blank_position] == O_LABEL:
            raise ValueError(f"{self.example_id}: blank must carry an article label")
        for i, label in enumerate(self.labels):
            if i != self.blank_position and label != O_LABEL:
                raise ValueError(f"{self.example_id}: non-O label off the blank at {i}")


def encode_for_token_labeling(
    record: ClozeRecord, max_len: int = DEFAULT_MAX_LEN
) -> LabeledSequence:
    """Deterministic encoding of one example; see the module docstring."""
    target = list(record.target_tokens)
    if target[record.blank_index] != BLANK_TOKEN:
        # tolerate files produced before blanking: render the blank ourselves
        target[record.blank_index] = BLANK_TOKEN
    prev = list(record.prev_tokens)
    nxt = list(record.next_tokens)
    truncated = False
    while len(prev) + len(target) + len(nxt) > max_len:
        if prev:
            prev.pop(0)
        elif nxt:
            nxt.pop()
        else:
            break  # the target sentence is never cut
        truncated = True
    tokens = prev + target + nxt
    blank_position = len(prev) + record.blank_index
    labels = [O_LABEL] * len(tokens)
    labels[blank_position] = record.gold
    return LabeledSequence(
        tokens=tuple(tokens),
        labels=tuple(labels),
        example_id=record.example_id,
        blank_position=blank_position,
        truncated=truncated,
    )


def decode_blank_position(sequence: LabeledSequence) -> int:
    """Recover the blank position from the token stream alone."""
    positions = [i for i, t in enumerate(sequence.tokens) if t == BLANK_TOKEN]
    if len(positions) != 1:
        raise ContractError(
            f"{sequence.example_id}: expected exactly one {BLANK_TOKEN}, found {len(positions)}"
        )
    return positions[0]
