"""Command line: train, finetune, predict, evaluate."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .model import ModelConfig
from .training import TrainConfig, evaluate_metrics, fine_tune, predict_file, train


def _model_config(args: argparse.Namespace) -> ModelConfig:
    return ModelConfig(
        hidden_dim=args.hidden,
        attention_heads=args.heads,
        lsa_patches=args.patches,
        classifier_hidden=args.classifier_hidden,
    )


def _train_config(args: argparse.Namespace) -> TrainConfig:
    return TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
    )


def _add_train_options(parser: argparse.ArgumentParser, default_epochs: int) -> None:
    parser.add_argument("--epochs", type=int, default=default_epochs)
    parser.add_argument("--lr", type=float, default=1e-4)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)


def _cmd_train(args: argparse.Namespace) -> int:
    history = train(args.data, _model_config(args), _train_config(args), args.out)
    print(f"trained {args.epochs} epochs, final loss {history[-1]:.6f}" if history else "trained")
    return 0


def _cmd_finetune(args: argparse.Namespace) -> int:
    history = fine_tune(args.ckpt, args.data, _train_config(args), args.out)
    print(f"fine-tuned {args.epochs} epochs, final loss {history[-1]:.6f}" if history else "fine-tuned")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    predict_file(args.ckpt, args.graph, args.output)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    report = dataclasses.asdict(evaluate_metrics(args.ckpt, args.data))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh)
    print(json.dumps(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbtrain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train from scratch on labeled NBG graphs")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _add_train_options(p, default_epochs=40)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--patches", type=int, default=4)
    p.add_argument("--classifier-hidden", type=int, default=64)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("finetune", help="continue training from a checkpoint")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _add_train_options(p, default_epochs=60)
    p.set_defaults(func=_cmd_finetune)

    p = sub.add_parser("predict", help="write NBH hints for one NBG graph")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="precision/recall/F1/accuracy on labeled graphs")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
