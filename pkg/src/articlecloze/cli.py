"""Command-line pipeline driver.

Subcommands mirror the pipeline stages::

    ingest         parse a tagged corpus and write it back normalized
    tag-zero       insert zero-article markers into a corpus
    build-dataset  build cloze examples and the seeded train/dev/pool split
    select-pool    draw the difficulty-stratified annotation pool
    serve          run the annotation survey service
    export         dump annotations from a service store
    evaluate       aggregate annotations and build the four rater views
    report         compute the per-article, per-stratum Phi report

Every artifact gets a sibling ``*.manifest.json`` recording the config hash
and seeds; identical config and inputs produce byte-identical artifacts.
Partial outputs are removed when a command fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional

from . import agreement, dataset, zerotag
from .config import ConfigError, RunConfig
from .corpus import CorpusFormatError, parse_corpus, serialize_corpus


class _Outputs:
    """Tracks declared output paths so failures can clean up partial files."""

    def __init__(self):
        self.paths: list[Path] = []

    def declare(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.paths.append(path)
        return path

    def write_text(self, path: str | Path, text: str) -> Path:
        path = self.declare(path)
        tmp = path.with_name(path.name + ".part")
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(path)
        return path

    def cleanup(self) -> None:
        for path in self.paths:
            path.unlink(missing_ok=True)
            path.with_name(path.name + ".part").unlink(missing_ok=True)


def _write_manifest(out: _Outputs, path: Path, config: RunConfig, command: str, **extra) -> None:
    manifest = {
        "command": command,
        "config_hash": config.config_hash(),
        "seeds": config.seeds(),
        **extra,
    }
    out.write_text(
        path.with_name(path.name + ".manifest.json"),
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
    )


def _read_corpus(config: RunConfig, path: Optional[str] = None):
    corpus_path = path or config.corpus_path
    if not corpus_path:
        raise ConfigError("no corpus path given (flag --corpus or config corpus_path)")
    text = Path(corpus_path).read_text(encoding="utf-8")
    return parse_corpus(text, config.corpus_format, source=str(corpus_path))


def _rule_config(config: RunConfig) -> zerotag.TagRuleConfig:
    return zerotag.default_config(config.lexicon_path or None)


def cmd_ingest(config: RunConfig, args, out: _Outputs) -> int:
    docs = _read_corpus(config, args.corpus)
    target = out.write_text(args.out, serialize_corpus(docs, config.corpus_format))
    n_tokens = sum(1 for d in docs for _ in d.tokens())
    _write_manifest(
        out, target, config, "ingest",
        documents=len(docs), tokens=n_tokens, source=str(args.corpus or config.corpus_path),
    )
    print(f"ingested {len(docs)} documents, {n_tokens} tokens -> {target}")
    return 0


def cmd_tag_zero(config: RunConfig, args, out: _Outputs) -> int:
    docs = _read_corpus(config, args.corpus)
    rules = _rule_config(config)
    tagged = zerotag.tag_documents(docs, rules)
    n_markers = sum(1 for d in tagged for t in d.tokens() if t.is_zero_marker)
    target = out.write_text(args.out, serialize_corpus(tagged, config.corpus_format))
    _write_manifest(out, target, config, "tag-zero", markers_inserted=n_markers)
    print(f"inserted {n_markers} zero markers -> {target}")
    return 0


def cmd_build_dataset(config: RunConfig, args, out: _Outputs) -> int:
    docs = _read_corpus(config, args.corpus)
    examples = dataset.build_all_examples(docs)
    manifest = dataset.split_dataset(examples, config.seed_split, config.train_n, config.dev_n)
    by_id = {e.id: e for e in examples}
    out_dir = Path(args.out_dir)
    for name, ids in (
        ("train", manifest.train_ids),
        ("dev", manifest.dev_ids),
        ("pool_candidates", manifest.pool_ids),
    ):
        path = out.declare(out_dir / f"{name}.jsonl")
        tmp = path.with_name(path.name + ".part")
        dataset.write_examples((by_id[i] for i in ids), tmp)
        tmp.replace(path)
    manifest_path = out.declare(out_dir / "split_manifest.json")
    dataset.write_manifest(manifest, manifest_path)
    _write_manifest(
        out, out_dir / "dataset", config, "build-dataset",
        examples=len(examples),
        train=len(manifest.train_ids), dev=len(manifest.dev_ids),
        pool_candidates=len(manifest.pool_ids), excluded=len(manifest.excluded_ids),
        class_counts=manifest.class_counts,
    )
    print(
        f"built {len(examples)} examples: {len(manifest.train_ids)} train, "
        f"{len(manifest.dev_ids)} dev, {len(manifest.pool_ids)} pool candidates "
        f"({len(manifest.excluded_ids)} excluded) -> {out_dir}"
    )
    return 0


def cmd_select_pool(config: RunConfig, args, out: _Outputs) -> int:
    candidates = dataset.read_examples(args.candidates)
    predictions = agreement.load_predictions(args.predictions, name="BERT_B")
    chosen = dataset.select_annotation_pool(
        candidates, predictions, config.target_size, config.wrong_fraction, config.seed_pool
    )
    by_id = {e.id: e for e in candidates}
    target = out.declare(args.out)
    tmp = target.with_name(target.name + ".part")
    dataset.write_examples((by_id[i] for i in chosen), tmp)
    tmp.replace(target)
    n_wrong = sum(1 for i in chosen if predictions.labels[i] != by_id[i].gold.value)
    _write_manifest(
        out, target, config, "select-pool",
        pool_size=len(chosen), wrong=n_wrong, wrong_fraction=n_wrong / len(chosen),
    )
    print(f"selected {len(chosen)} pool items ({n_wrong} base-model misses) -> {target}")
    return 0


def cmd_serve(config: RunConfig, args, out: _Outputs) -> int:
    import uvicorn

    from .service import AnnotationService
    from .store import AnnotationLogStore
    from .webapi import create_app

    pool = dataset.read_examples(args.pool)
    qc_items = dataset.read_examples(args.qc)
    store = AnnotationLogStore(args.store)
    service = AnnotationService(
        pool, qc_items, store,
        n_items=config.n_items, qc_count=config.qc_count,
        coverage_target=config.coverage_target, seed=config.seed_session,
    )
    app = create_app(service, frontend_dir=args.frontend_dir)
    print(f"serving {len(pool)} pool items on {args.host}:{args.port} (store: {args.store})")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_export(config: RunConfig, args, out: _Outputs) -> int:
    from .service import AnnotationService
    from .store import AnnotationLogStore

    pool = dataset.read_examples(args.pool)
    qc_items = dataset.read_examples(args.qc)
    with AnnotationLogStore(args.store) as store:
        service = AnnotationService(
            pool, qc_items, store,
            n_items=config.n_items, qc_count=config.qc_count,
            coverage_target=config.coverage_target, seed=config.seed_session,
        )
        records = service.export_annotations()
    target = out.declare(args.out)
    tmp = target.with_name(target.name + ".part")
    agreement.write_annotations(records, tmp)
    tmp.replace(target)
    _write_manifest(out, target, config, "export", records=len(records))
    print(f"exported {len(records)} annotation records -> {target}")
    return 0


def _build_views_and_summaries(config: RunConfig, args):
    examples = dataset.read_examples(args.examples)
    records = agreement.read_annotations(args.annotations)
    result = agreement.aggregate(records, config.seed_control)
    views = {
        "BERT_L": agreement.load_predictions(args.predictions, name="BERT_L"),
        "FourHuman": result.four_human,
        "Control": result.control,
        "Corpus": dataset.corpus_view(examples),
    }
    return examples, result, views


def cmd_evaluate(config: RunConfig, args, out: _Outputs) -> int:
    _, result, views = _build_views_and_summaries(config, args)
    out_dir = Path(args.out_dir)
    summaries_path = out.write_text(
        out_dir / "summaries.jsonl",
        "".join(
            json.dumps(
                {
                    "example_id": s.example_id,
                    "votes": s.votes,
                    "annotator_ids": list(s.annotator_ids),
                    "control_annotator_id": s.control_annotator_id,
                    "majority": s.majority,
                    "agreement_level": s.agreement_level,
                    "tie": s.tie,
                },
                ensure_ascii=False,
            )
            + "\n"
            for s in result.summaries
        ),
    )
    for name, view in views.items():
        path = out.declare(out_dir / f"view_{name}.json")
        tmp = path.with_name(path.name + ".part")
        agreement.save_view(view, tmp)
        tmp.replace(path)
    strata = agreement.stratify(result.summaries)
    _write_manifest(
        out, summaries_path, config, "evaluate",
        aggregated=len(result.summaries),
        dropped_below_five=len(result.dropped),
        ties=sum(1 for s in result.summaries if s.tie),
        strata={k: len(v) for k, v in strata.items()},
    )
    print(
        f"aggregated {len(result.summaries)} examples "
        f"({len(result.dropped)} dropped with <5 annotations) -> {out_dir}"
    )
    return 0


def cmd_report(config: RunConfig, args, out: _Outputs) -> int:
    _, result, views = _build_views_and_summaries(config, args)
    report = agreement.build_report(views, result.summaries)
    text_path = out.write_text(args.out, report.render())
    out.write_text(
        Path(args.out).with_suffix(".jsonl"),
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in report.to_records()),
    )
    _write_manifest(
        out, text_path, config, "report",
        cells=len(report.results), skipped=len(report.skipped),
        stratum_sizes=report.stratum_sizes,
    )
    print(report.render())
    return 0


_COMMANDS: dict[str, Callable] = {
    "ingest": cmd_ingest,
    "tag-zero": cmd_tag_zero,
    "build-dataset": cmd_build_dataset,
    "select-pool": cmd_select_pool,
    "serve": cmd_serve,
    "export": cmd_export,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}

_CONFIG_FLAGS = {
    "seed_split": int, "seed_pool": int, "seed_control": int, "seed_session": int,
    "train_n": int, "dev_n": int, "pool_size": int, "wrong_fraction": float,
    "items_per_session": int, "qc_count": int, "coverage_target": int,
    "max_sequence_length": int, "corpus_format": str, "lexicon_path": str,
}
# Flag spellings that differ from the config field they set.
_FLAG_ALIASES = {"pool_size": "target_size", "items_per_session": "n_items"}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    for flag, kind in _CONFIG_FLAGS.items():
        parser.add_argument(f"--{flag.replace('_', '-')}", type=kind, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="articlecloze", description="Article-prediction study pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and normalize a tagged corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("tag-zero", help="insert zero-article markers")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("build-dataset", help="build cloze examples and splits")
    p.add_argument("--corpus", required=True, help="zero-tagged corpus file")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("select-pool", help="draw the annotation pool")
    p.add_argument("--candidates", required=True, help="pool_candidates.jsonl")
    p.add_argument("--predictions", required=True, help="base-model predictions file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the annotation survey service")
    p.add_argument("--pool", required=True, help="annotation pool examples file")
    p.add_argument("--qc", required=True, help="curated quality-control examples file")
    p.add_argument("--store", required=True, help="append-only store path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--frontend-dir", default=None,
                   help="serve a built survey frontend from this directory at /")

    p = sub.add_parser("export", help="export annotations from a store")
    p.add_argument("--pool", required=True)
    p.add_argument("--qc", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)

    for name in ("evaluate", "report"):
        p = sub.add_parser(name, help=f"{name} annotations against model and corpus")
        p.add_argument("--examples", required=True, help="annotation pool examples file")
        p.add_argument("--annotations", required=True, help="exported annotations file")
        p.add_argument("--predictions", required=True, help="model predictions file")
        if name == "evaluate":
            p.add_argument("--out-dir", required=True)
        else:
            p.add_argument("--out", required=True, help="report text file")

    for p in sub.choices.values():
        _add_common_flags(p)
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {}
    for flag in _CONFIG_FLAGS:
        value = getattr(args, flag, None)
        if value is not None:
            overrides[_FLAG_ALIASES.get(flag, flag)] = value
    return RunConfig.load(config_file=args.config, overrides=overrides)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Outputs()
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config, args, out)
    except (ConfigError, CorpusFormatError, dataset.DatasetError, agreement.MissingViewError,
            FileNotFoundError) as exc:
        out.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        out.cleanup()
        raise


if __name__ == "__main__":
    sys.exit(main())
