"""Word-level vocabulary for from-scratch models.

Training runs in environments without access to pretrained checkpoints, so
the default model is randomly initialized and tokenized at the word level
over a vocabulary built from the training file. Any local pretrained
directory can be used instead (see model.TrainSettings.pretrained_path).
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

PAD, UNK, BLANK = "[PAD]", "[UNK]", "[BLANK]"
SPECIALS = (PAD, UNK, BLANK)


class Vocab:
    def __init__(self, tokens: Sequence[str]):
        if list(tokens[: len(SPECIALS)]) != list(SPECIALS):
            raise ValueError(f"vocabulary must start with {SPECIALS}")
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate vocabulary entries")

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, words: Iterable[str]) -> list[int]:
        unk = self.index[UNK]
        return [self.index.get(w, unk) for w in words]

    @property
    def pad_id(self) -> int:
        return self.index[PAD]

    @classmethod
    def build(cls, sequences: Iterable[Sequence[str]], min_count: int = 1) -> "Vocab":
        counts = Counter(w for seq in sequences for w in seq)
        for special in SPECIALS:
            counts.pop(special, None)
        kept = [w for w, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
                if c >= min_count]
        return cls(list(SPECIALS) + kept)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        return cls(Path(path).read_text(encoding="utf-8").splitlines())
