"""Command-line front end.

Reports (JSON or aligned tables) go to stdout, log lines to stderr.
Exit codes: 0 success, 1 configuration error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness, losses, metrics, synth
from .dataio import read_matrix
from .errors import ConfigError, DataFormatError, DegenerateInputError, NumericFailure
from .labelspace import load_gerund_exceptions, make_prompts, parse_class_list


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", required=True, help="features container (float32)")
    p.add_argument("--labels", required=True, help="labels container (int8 +1/-1)")
    p.add_argument("--classes", required=True, help="class-list text file")
    p.add_argument("--out", required=True, help="output directory for checkpoints")
    p.add_argument("--init", choices=harness.INIT_KINDS, default="random")
    p.add_argument("--embeddings", help="embedding container for init=embeddings")
    p.add_argument("--loss", choices=losses.LOSS_KINDS, default="lse-sign")
    p.add_argument("--gamma", type=float, default=100.0)
    p.add_argument(
        "--base-lr", type=float, default=1e-4,
        help="peak learning rate (1e-5 suits strongly pre-aligned features)",
    )
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--min-per-class", type=int, default=40)
    p.add_argument("--val-fraction", type=float, default=0.10)
    p.add_argument("--restart-period", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-features")
    p.add_argument("--test-labels")


def _config_from(args) -> harness.TrainConfig:
    return harness.TrainConfig(
        features_path=args.features,
        labels_path=args.labels,
        classes_path=args.classes,
        out_dir=args.out,
        init=args.init,
        embeddings_path=args.embeddings,
        loss=args.loss,
        gamma=args.gamma,
        base_lr=args.base_lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        min_per_class=args.min_per_class,
        val_fraction=args.val_fraction,
        restart_period=args.restart_period,
        seed=args.seed,
        test_features_path=args.test_features,
        test_labels_path=args.test_labels,
    )


def cmd_prompt(args) -> None:
    classes = parse_class_list(Path(args.classes).read_text(encoding="utf-8"))
    exceptions = None
    if args.exceptions:
        exceptions = load_gerund_exceptions(
            Path(args.exceptions).read_text(encoding="utf-8")
        )
    lines = [p.text for p in make_prompts(classes, exceptions)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_train(args) -> None:
    record = harness.train(_config_from(args))
    print(json.dumps(record.to_json_dict(), indent=2))


def cmd_eval(args) -> None:
    report = harness.evaluate(args.weights, args.features, args.labels, args.gamma)
    print(json.dumps(report.to_json_dict(), indent=2))


def cmd_gradcheck(args) -> None:
    kinds = losses.LOSS_KINDS if args.loss == "all" else [args.loss]
    for kind in kinds:
        report = losses.gradcheck(
            kind, trials=args.trials, C_max=args.c_max, epsilon=args.epsilon,
            seed=args.seed,
        )
        print(
            f"{kind:10s} trials={report['trials']} seed={report['seed']} "
            f"max_rel_err={report['max_rel_err']:.3e}"
        )


def cmd_analyze(args) -> None:
    W_init, _ = read_matrix(args.init_weights)
    W_final, _ = read_matrix(args.final_weights)
    report = metrics.structure_drift(W_init, W_final, k=args.k)
    print(json.dumps(report.to_json_dict(), indent=2))


def cmd_sweep_gamma(args) -> None:
    gammas = [float(g) for g in args.gammas.split(",")]
    rows = harness.sweep_gamma(_config_from(args), gammas)
    print(f"{'gamma':>8s} {'val_mAP':>8s}")
    for row in rows:
        print(f"{row['gamma']:8g} {row['val_map']:8.4f}")


def cmd_ablate(args) -> None:
    grid = harness.ablate(_config_from(args))
    print(f"{'init':<12s} {'loss':<10s} {'val_mAP':>8s} {'nn_overlap':>11s}")
    for (init, loss), cell in grid.items():
        print(
            f"{init:<12s} {loss:<10s} {cell['val_map']:8.4f} {cell['nn_overlap']:11.4f}"
        )


def cmd_synth(args) -> None:
    if args.kind == "benchmark":
        data = synth.make_benchmark(
            n_images=args.n_images,
            C=args.num_classes,
            D=args.dim,
            seed=args.seed,
            alpha=args.alpha,
            feature_noise=args.feature_noise,
            embed_noise=args.embed_noise,
        )
    else:
        data = synth.make_separable(
            n_images=args.n_images, C=args.num_classes, D=args.dim, seed=args.seed
        )
    paths = data.write(args.out)
    print(json.dumps(paths, indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoihead",
        description="Train and evaluate cosine classifier heads on precomputed features.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prompt", help="compile a class list into prompt sentences")
    p.add_argument("--classes", required=True)
    p.add_argument("--exceptions", help="custom irregular-gerund table")
    p.add_argument("--out", help="write prompts here instead of stdout")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("train", help="train a classifier head")
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint")
    p.add_argument("--weights", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--gamma", type=float, help="override the sidecar gamma")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gradcheck", help="check analytic gradients numerically")
    p.add_argument("--loss", choices=list(losses.LOSS_KINDS) + ["all"], default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--c-max", type=int, default=16)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("analyze", help="structure drift between two weight files")
    p.add_argument("--init-weights", required=True)
    p.add_argument("--final-weights", required=True)
    p.add_argument("-k", type=int, default=5)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep-gamma", help="retrain across logit scales")
    _add_train_flags(p)
    p.add_argument("--gammas", required=True, help="comma-separated, e.g. 50,100,150")
    p.set_defaults(func=cmd_sweep_gamma)

    p = sub.add_parser("ablate", help="2x2 grid over init and loss")
    _add_train_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("synth", help="generate a synthetic benchmark")
    p.add_argument("--out", required=True)
    p.add_argument("--kind", choices=["benchmark", "separable"], default="benchmark")
    p.add_argument("--n-images", type=int, default=synth.BENCHMARK_N)
    p.add_argument("--num-classes", type=int, default=synth.BENCHMARK_C)
    p.add_argument("--dim", type=int, default=synth.BENCHMARK_D)
    p.add_argument("--alpha", type=float, default=synth.BENCHMARK_ALPHA)
    p.add_argument("--feature-noise", type=float, default=synth.BENCHMARK_FEATURE_NOISE)
    p.add_argument("--embed-noise", type=float, default=synth.BENCHMARK_EMBED_NOISE)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, DataFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericFailure, DegenerateInputError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
