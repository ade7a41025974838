"""Adapter command line: train, predict, stub.

Examples::

    articlecloze-adapter train --train train.jsonl --dev dev.jsonl \
        --out model/ --seeds 0 1 2 --epochs 1
    articlecloze-adapter predict --model model/ --examples pool.jsonl \
        --out predictions.jsonl
    articlecloze-adapter stub --examples pool.jsonl --out predictions.jsonl
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="articlecloze-adapter")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a token-labeling article predictor")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--out", required=True, help="artifact directory")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--max-sequence-length", type=int, default=150)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--learning-rate", type=float, default=1e-3,
                   help="default suits the scratch model; use ~5e-5 when fine-tuning a checkpoint")
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--num-layers", type=int, default=2)
    p.add_argument("--num-heads", type=int, default=2)
    p.add_argument("--pretrained-path", default=None,
                   help="local checkpoint directory to fine-tune instead of a scratch model")

    p = sub.add_parser("predict", help="emit predictions for an examples file")
    p.add_argument("--model", required=True, help="artifact directory from train")
    p.add_argument("--examples", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stub", help="constant-label predictions (no model)")
    p.add_argument("--examples", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="The")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "stub":
        from .stub import constant_predictions

        n = constant_predictions(args.examples, args.out, label=args.label)
        print(f"wrote {n} constant '{args.label}' predictions -> {args.out}")
        return 0

    # torch imports live behind the subcommands that need them
    from .model import TrainSettings, predict, train

    if args.command == "train":
        settings = TrainSettings(
            epochs=args.epochs,
            max_sequence_length=args.max_sequence_length,
            batch_size=args.batch_size,
            learning_rate=args.learning_rate,
            seeds=tuple(args.seeds),
            hidden_size=args.hidden_size,
            num_layers=args.num_layers,
            num_heads=args.num_heads,
            pretrained_path=args.pretrained_path,
        )
        report = train(args.train, args.dev, args.out, settings)
        print(json.dumps(report["dev_f1_per_seed"], indent=2))
        print(f"best seed {report['best_seed']} (dev F1 {report['best_dev_f1']:.4f}) -> {args.out}")
        return 0

    n = predict(args.model, args.examples, args.out)
    print(f"wrote {n} predictions -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
