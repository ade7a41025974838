"""Run configuration: seeds, paths, and scale parameters.

Precedence, lowest to highest: dataclass defaults, config file (JSON),
``ARTICLECLOZE_*`` environment variables, command-line flags. Every seed is
explicit so identical configuration and inputs give identical artifacts.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

ENV_PREFIX = "ARTICLECLOZE_"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    # Seeds, one per pipeline stage.
    seed_split: int = 13
    seed_pool: int = 17
    seed_control: int = 23
    seed_session: int = 29
    # Paths. Empty lexicon_path selects the packaged starter lexicon.
    corpus_path: str = ""
    corpus_format: str = "vertical"
    lexicon_path: str = ""
    output_dir: str = "out"
    # Scale parameters; defaults are full-study scale, override for desk runs.
    train_n: int = 150_000
    dev_n: int = 30_000
    target_size: int = 2_500
    wrong_fraction: float = 0.30
    n_items: int = 160
    qc_count: int = 4
    coverage_target: int = 5
    max_sequence_length: int = 150

    _INT_FIELDS = (
        "seed_split", "seed_pool", "seed_control", "seed_session",
        "train_n", "dev_n", "target_size", "n_items", "qc_count",
        "coverage_target", "max_sequence_length",
    )

    def validate(self) -> None:
        for name in (
            "train_n", "dev_n", "target_size", "n_items", "qc_count",
            "coverage_target", "max_sequence_length",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.wrong_fraction <= 1.0:
            raise ConfigError(f"wrong_fraction must be in [0, 1], got {self.wrong_fraction}")
        if self.corpus_format not in ("vertical", "inline-slash"):
            raise ConfigError("corpus_format must be vertical or inline-slash")

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def seeds(self) -> dict[str, int]:
        return {
            "split": self.seed_split,
            "pool": self.seed_pool,
            "control": self.seed_control,
            "session": self.seed_session,
        }

    def apply_mapping(self, values: Mapping[str, object]) -> None:
        for key, value in values.items():
            if not hasattr(self, key) or key.startswith("_"):
                raise ConfigError(f"unknown config key {key!r}")
            if key in self._INT_FIELDS:
                value = int(value)  # type: ignore[arg-type]
            elif key == "wrong_fraction":
                value = float(value)  # type: ignore[arg-type]
            else:
                value = str(value)
            setattr(self, key, value)

    def apply_env(self, environ: Optional[Mapping[str, str]] = None) -> None:
        environ = os.environ if environ is None else environ
        values = {}
        for key, value in environ.items():
            if key.startswith(ENV_PREFIX):
                values[key[len(ENV_PREFIX):].lower()] = value
        if values:
            self.apply_mapping(values)

    @classmethod
    def load(
        cls,
        config_file: Optional[str | Path] = None,
        environ: Optional[Mapping[str, str]] = None,
        overrides: Optional[Mapping[str, object]] = None,
    ) -> "RunConfig":
        config = cls()
        if config_file:
            try:
                obj = json.loads(Path(config_file).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config file {config_file}: {exc}") from exc
            config.apply_mapping(obj)
        config.apply_env(environ)
        if overrides:
            config.apply_mapping(overrides)
        config.validate()
        return config
