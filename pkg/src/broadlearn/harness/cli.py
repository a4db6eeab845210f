"""Command-line interface.

Verbs:

* ``train``   -- fit a network on a dataset, report accuracy, save state
* ``run``     -- execute a schedule file and write its report
* ``verify``  -- compare a saved state against a from-scratch solve
* ``bench``   -- time a removal step against full retraining
* ``convert`` -- inspect or convert between CSV and IDX dataset formats

Exit codes: 0 success, 2 configuration or parse problem, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ..errors import (
    ConfigurationError,
    DimensionMismatch,
    InvalidConfig,
    NumericalError,
)
from ..model import build_network, expand
from ..ridge import NodeState, init_input_state, init_node_state, ridge_solve
from .bench import bench, render_bench
from .config import load_config
from .data import csv_to_idx, idx_to_csv, inspect_file, load_dataset
from .persist import load_state, save_state
from .runner import accuracy_percent, relative_deviation, render_table, run_schedule


def _parse_features(text: str) -> tuple[int, int]:
    try:
        groups, per_group = text.lower().split("x")
        return int(groups), int(per_group)
    except ValueError as exc:
        raise InvalidConfig(
            f"--features expects GROUPSxNODES (e.g. 10x10), got {text!r}"
        ) from exc


def _add_dataset_args(sub, test: bool = False):
    sub.add_argument("--data", required=True, help="dataset path (CSV or IDX images)")
    sub.add_argument("--labels", help="IDX labels path (idx format only)")
    sub.add_argument("--format", default="csv", choices=("csv", "idx"),
                     dest="fmt", help="dataset format")
    if test:
        sub.add_argument("--test", help="held-out dataset path")
        sub.add_argument("--test-labels", help="held-out IDX labels path")
        sub.add_argument("--test-format", default="csv", choices=("csv", "idx"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="broadlearn",
        description="Broad learning networks with exact grow/shrink training.",
    )
    subs = parser.add_subparsers(dest="verb", required=True)

    p_train = subs.add_parser("train", help="fit a network and save its state")
    _add_dataset_args(p_train, test=True)
    p_train.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--features", default="10x10",
                         help="feature sizing GROUPSxNODES")
    p_train.add_argument("--enhancement", type=int, default=100)
    p_train.add_argument("--train-samples", type=int, default=None)
    p_train.add_argument("--state", help="write the trained state here")
    p_train.add_argument("--state-kind", default="node",
                         choices=("node", "input-q", "input-f"))
    p_train.add_argument("--out", help="write the text summary here")
    p_train.set_defaults(func=cmd_train)

    p_run = subs.add_parser("run", help="execute a schedule file")
    p_run.add_argument("config", help="flat key-value schedule file")
    p_run.add_argument("--lambda", dest="lam", type=float, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="override the report path")
    p_run.set_defaults(func=cmd_run)

    p_verify = subs.add_parser("verify", help="check a saved state against retraining")
    p_verify.add_argument("--state", required=True)
    _add_dataset_args(p_verify)
    p_verify.add_argument("--train-samples", type=int, default=None,
                          help="rows of the dataset the state was trained on "
                               "(input states only; default: all)")
    p_verify.set_defaults(func=cmd_verify)

    p_bench = subs.add_parser("bench", help="time removal against retraining")
    p_bench.add_argument("--mode", default="inputs", choices=("nodes", "inputs"))
    p_bench.add_argument("--samples", type=int, default=10000)
    p_bench.add_argument("--nodes", type=int, default=1000)
    p_bench.add_argument("--removed", type=int, default=100)
    p_bench.add_argument("--lambda", dest="lam", type=float, default=1e-3)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_bench)

    p_conv = subs.add_parser("convert", help="inspect or convert dataset files")
    p_conv.add_argument("input", help="CSV file or IDX images file")
    p_conv.add_argument("--labels", help="IDX labels file")
    p_conv.add_argument("--out", help="output path (omit to inspect only)")
    p_conv.add_argument("--format", default=None, choices=("csv", "idx"),
                        dest="fmt", help="target format for --out")
    p_conv.set_defaults(func=cmd_convert)

    return parser


def cmd_train(args) -> int:
    train = load_dataset(args.data, args.fmt, args.labels)
    rows = train.samples if args.train_samples is None else args.train_samples
    if rows < 1 or rows > train.samples:
        raise InvalidConfig(
            f"--train-samples {rows} outside [1, {train.samples}]"
        )
    groups, per_group = _parse_features(args.features)
    net = build_network(train.x.shape[1], groups, per_group,
                        args.enhancement, args.seed)
    design = expand(net, train.x[:rows])
    targets = train.y[:rows]
    if args.state_kind == "node":
        state = init_node_state(design, targets, args.lam)
    else:
        state = init_input_state(design, targets, args.lam,
                                 kind=args.state_kind.split("-")[1])

    lines = [
        f"trained on {rows} samples, {net.node_count} nodes "
        f"({net.feature_count} feature + {net.enhancement_nodes} enhancement), "
        f"lambda={args.lam:g}, seed={args.seed}",
        "train accuracy: "
        f"{accuracy_percent(design.values @ state.weights, train.labels[:rows], train.classes):.2f}%",
    ]
    if args.test:
        test = load_dataset(args.test, args.test_format, args.test_labels)
        scores = expand(net, test.x).values @ state.weights
        lines.append(
            f"test accuracy: {accuracy_percent(scores, test.labels, train.classes):.2f}%"
        )
    if args.state:
        save_state(state, args.state, net)
        lines.append(f"state written to {args.state}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def cmd_run(args) -> int:
    config = load_config(args.config).with_overrides(
        lam=args.lam, seed=args.seed, report=args.out
    )
    reports = run_schedule(config)
    sys.stdout.write(render_table(reports))
    if config.report:
        sys.stdout.write(f"report written to {config.report}\n")
    if config.report_csv:
        sys.stdout.write(f"csv written to {config.report_csv}\n")
    return 0


def cmd_verify(args) -> int:
    state, net = load_state(args.state)
    data = load_dataset(args.data, args.fmt, args.labels)
    if isinstance(state, NodeState):
        rows = state.sample_count
        if data.samples < rows:
            raise DimensionMismatch(
                f"state was trained on {rows} rows, dataset has {data.samples}"
            )
        design = state.design
    else:
        if net is None:
            raise InvalidConfig(
                "state file carries no network metadata; activations for an "
                "input state cannot be rebuilt"
            )
        rows = data.samples if args.train_samples is None else args.train_samples
        if rows < 1 or rows > data.samples:
            raise InvalidConfig(f"--train-samples {rows} outside [1, {data.samples}]")
        design = expand(net, data.x[:rows]).values
    targets = data.y[:rows]
    if targets.shape[1] != state.weights.shape[1]:
        raise DimensionMismatch(
            f"dataset has {targets.shape[1]} classes, state outputs "
            f"{state.weights.shape[1]}"
        )
    oracle = ridge_solve(design, targets, state.lam).weights
    deviation = relative_deviation(state.weights, oracle)
    sys.stdout.write(
        f"oracle deviation over {rows} rows: {deviation:.3e} "
        f"({'OK' if deviation <= 1e-8 else 'EXCEEDS 1e-8'})\n"
    )
    return 0


def cmd_bench(args) -> int:
    result = bench(
        mode=args.mode,
        samples=args.samples,
        width=args.nodes,
        removed=args.removed,
        lam=args.lam,
        seed=args.seed,
    )
    sys.stdout.write(render_bench(result))
    return 0


def cmd_convert(args) -> int:
    if args.out is None:
        info = inspect_file(args.input, labels_path=args.labels)
        for key, value in info.items():
            sys.stdout.write(f"{key}: {value}\n")
        return 0
    if args.fmt is None:
        raise InvalidConfig("--out needs --format to pick the target format")
    if args.fmt == "csv":
        if args.labels is None:
            raise InvalidConfig("idx-to-csv conversion needs --labels")
        n = idx_to_csv(args.input, args.labels, args.out)
        sys.stdout.write(f"wrote {n} samples to {args.out}\n")
    else:
        images = f"{args.out}-images.idx"
        labels = f"{args.out}-labels.idx"
        n = csv_to_idx(args.input, images, labels)
        sys.stdout.write(f"wrote {n} samples to {images} and {labels}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except np.linalg.LinAlgError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
