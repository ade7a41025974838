"""Reader for the example-file contract (one JSON record per line)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

GOLD_LABELS = ("A", "The", "Zero")


class ContractError(ValueError):
    """An example record violates the file contract; names the record."""


@dataclass(frozen=True)
class ClozeRecord:
    example_id: str
    prev_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    next_tokens: tuple[str, ...]
    blank_index: int
    gold: str


def _sentence_tokens(obj, example_id, field):
    try:
        tokens = tuple(obj[field]["tokens"])
    except (KeyError, TypeError) as exc:
        raise ContractError(f"record {example_id!r}: bad sentence field {field!r}") from exc
    if not tokens:
        raise ContractError(f"record {example_id!r}: empty sentence {field!r}")
    return tokens


def parse_example_record(obj: dict) -> ClozeRecord:
    example_id = obj.get("id")
    if not example_id:
        raise ContractError(f"record without id: {str(obj)[:80]}")
    record = ClozeRecord(
        example_id=example_id,
        prev_tokens=_sentence_tokens(obj, example_id, "prev"),
        target_tokens=_sentence_tokens(obj, example_id, "target"),
        next_tokens=_sentence_tokens(obj, example_id, "next"),
        blank_index=obj.get("blank_index", -1),
        gold=obj.get("gold", ""),
    )
    if record.gold not in GOLD_LABELS:
        raise ContractError(f"record {example_id!r}: gold must be one of {GOLD_LABELS}")
    if not 0 <= record.blank_index < len(record.target_tokens):
        raise ContractError(f"record {example_id!r}: blank_index out of range")
    return record


def read_example_records(path: str | Path) -> list[ClozeRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ContractError(f"{path}:{line_no}: not JSON: {exc}") from exc
            records.append(parse_example_record(obj))
    ids = [r.example_id for r in records]
    if len(set(ids)) != len(ids):
        raise ContractError(f"{path}: duplicate example ids")
    return records
