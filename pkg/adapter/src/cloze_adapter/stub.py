"""Contract-producing stub predictors (no model, no torch at import time).

Useful for wiring checks: a constant predictor exercises every consumer of
the predictions file without any training.
"""

from __future__ import annotations

import json
from pathlib import Path

from .encoding import LABELS
from .examples_io import read_example_records


def constant_predictions(examples_file: str | Path, out_path: str | Path,
                         label: str = "The") -> int:
    """Predict the same label for every example; returns the record count."""
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")
    records = read_example_records(examples_file)
    scores = {name: (0.97 if name == label else 0.01) for name in LABELS}
    with open(out_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(
                json.dumps(
                    {"example_id": record.example_id, "label": label, "scores": scores},
                    ensure_ascii=False,
                )
                + "\n"
            )
    return len(records)
