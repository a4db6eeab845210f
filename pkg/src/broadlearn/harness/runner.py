"""Schedule execution: drive the update algorithms over a dataset.

A node-track schedule maintains one :class:`NodeState` ("proposed" column);
an input-track schedule maintains both sample-dimension algorithms side by
side (the Gram-inverse form as "alg1" and the factor form as "alg2").  The
"standard" column always comes from a from-scratch ridge solve on whatever
data is active, so every report row can be compared against retraining.

``verify`` steps record the largest relative Frobenius deviation of any
maintained weight matrix from the retrain oracle; ``evaluate`` steps record
training and testing accuracy for the standard solution and every
maintained algorithm.  Within one schedule position the oracle solve is
shared between verify and evaluate.
"""

from __future__ import annotations

import csv as _csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..decremental import (
    InputRemovalBatch,
    NodeRemovalPlan,
    remove_inputs_f,
    remove_inputs_q,
    remove_nodes,
)
from ..incremental import add_inputs_f, add_inputs_q, add_nodes
from ..model import (
    build_network,
    enhancement_activations,
    expand,
    grow_enhancement,
    prune_enhancement,
)
from ..ridge import init_input_state, init_node_state, ridge_solve
from .config import ExperimentConfig, validate_schedule
from .data import load_dataset
from .persist import save_state


@dataclass(frozen=True)
class UpdateReport:
    """Provenance record of one schedule step."""

    step: str
    kind: str
    samples_before: int
    nodes_before: int
    samples_after: int
    nodes_after: int
    wall_ms: float
    train_accuracy: dict[str, float] | None = None
    test_accuracy: dict[str, float] | None = None
    oracle_deviation: float | None = None


def relative_deviation(w: np.ndarray, reference: np.ndarray) -> float:
    """Relative Frobenius distance, falling back to absolute for zero reference."""
    scale = float(np.linalg.norm(reference))
    diff = float(np.linalg.norm(w - reference))
    return diff / scale if scale > 0.0 else diff


def accuracy_percent(scores: np.ndarray, labels: np.ndarray, classes: np.ndarray) -> float:
    """Percentage of rows whose argmax score names the true class.

    ``np.argmax`` returns the first maximal column, so ties resolve toward
    the lowest class index.
    """
    pred = classes[np.argmax(scores, axis=1)]
    return 100.0 * float(np.mean(pred == labels))


class _Session:
    """Mutable execution context for one schedule run."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.pool = load_dataset(
            config.dataset, config.dataset_format, config.dataset_labels
        )
        self.test = None
        if config.test_dataset is not None:
            self.test = load_dataset(
                config.test_dataset, config.test_dataset_format,
                config.test_dataset_labels,
            )
        self.net = build_network(
            input_dim=self.pool.x.shape[1],
            feature_groups=config.feature_groups,
            nodes_per_group=config.nodes_per_group,
            enhancement_nodes=config.enhancement_nodes,
            seed=config.seed,
        )
        self.track = validate_schedule(
            config, self.pool.samples, self.net.feature_count
        )
        self.active_idx = np.array([], dtype=np.intp)
        self.cursor = 0
        self.node_state = None
        self.input_states: dict[str, object] = {}
        self.grow_stream = 0
        self.version = 0
        self._design_cache = None   # (version, values)
        self._oracle_cache = None   # (version, weights)
        self._test_cache = None     # (net, values)

    # -- bookkeeping --------------------------------------------------

    @property
    def active_count(self) -> int:
        return int(self.active_idx.size)

    @property
    def node_count(self) -> int:
        if self.track == "node":
            return self.node_state.node_count if self.node_state else self.net.node_count
        if self.input_states:
            return next(iter(self.input_states.values())).node_count
        return self.net.node_count

    @property
    def algorithms(self) -> dict[str, object]:
        if self.track == "node":
            return {"proposed": self.node_state} if self.node_state else {}
        return dict(self.input_states)

    def bump(self) -> None:
        self.version += 1

    def active_labels(self) -> np.ndarray:
        return self.pool.labels[self.active_idx]

    def active_targets(self) -> np.ndarray:
        return self.pool.y[self.active_idx]

    def active_design(self) -> np.ndarray:
        if self.track == "node":
            return self.node_state.design
        if self._design_cache is None or self._design_cache[0] != self.version:
            values = expand(self.net, self.pool.x[self.active_idx]).values
            self._design_cache = (self.version, values)
        return self._design_cache[1]

    def oracle_weights(self) -> np.ndarray:
        if self._oracle_cache is None or self._oracle_cache[0] != self.version:
            weights = ridge_solve(
                self.active_design(), self.active_targets(), self.config.lam
            ).weights
            self._oracle_cache = (self.version, weights)
        return self._oracle_cache[1]

    def test_design(self) -> np.ndarray:
        if self._test_cache is None or self._test_cache[0] is not self.net:
            self._test_cache = (self.net, expand(self.net, self.test.x).values)
        return self._test_cache[1]

    # -- steps ---------------------------------------------------------

    def do_train(self) -> None:
        initial = self.config.train_samples
        if initial is None:
            initial = self.pool.samples
        self.active_idx = np.arange(initial, dtype=np.intp)
        self.cursor = initial
        design = expand(self.net, self.pool.x[self.active_idx])
        targets = self.active_targets()
        if self.track == "node":
            self.node_state = init_node_state(design, targets, self.config.lam)
        else:
            self.input_states = {
                "alg1": init_input_state(design, targets, self.config.lam, kind="q"),
                "alg2": init_input_state(design, targets, self.config.lam, kind="f"),
            }
        self.bump()

    def do_add_nodes(self, amount: int) -> None:
        grown = grow_enhancement(self.net, amount, self.grow_stream)
        self.grow_stream += 1
        features = self.node_state.design[:, : grown.feature_count]
        new_cols = enhancement_activations(
            grown.enh_weights[:, -amount:], grown.enh_bias[-amount:], features
        )
        self.node_state = add_nodes(self.node_state, new_cols, self.active_targets())
        self.net = grown
        self.bump()

    def do_remove_nodes(self, step) -> None:
        k = self.node_state.node_count
        if step.indices is not None:
            columns = list(step.indices)
        else:
            columns = list(range(k - step.amount, k))
        self.node_state = remove_nodes(self.node_state, NodeRemovalPlan(tuple(columns)))
        nf = self.net.feature_count
        self.net = prune_enhancement(self.net, [c - nf for c in columns])
        self.bump()

    def do_add_inputs(self, amount: int) -> None:
        new_idx = np.arange(self.cursor, self.cursor + amount, dtype=np.intp)
        rows = expand(self.net, self.pool.x[new_idx]).values
        targets = self.pool.y[new_idx]
        self.input_states = {
            "alg1": add_inputs_q(self.input_states["alg1"], rows, targets),
            "alg2": add_inputs_f(self.input_states["alg2"], rows, targets),
        }
        self.cursor += amount
        self.active_idx = np.concatenate([self.active_idx, new_idx])
        self.bump()

    def do_remove_inputs(self, amount: int) -> None:
        doomed = self.active_idx[-amount:]
        batch = InputRemovalBatch(
            rows=expand(self.net, self.pool.x[doomed]).values,
            labels=self.pool.y[doomed],
        )
        self.input_states = {
            "alg1": remove_inputs_q(self.input_states["alg1"], batch),
            "alg2": remove_inputs_f(self.input_states["alg2"], batch),
        }
        self.active_idx = self.active_idx[:-amount]
        self.bump()

    def do_verify(self) -> float:
        oracle = self.oracle_weights()
        return max(
            relative_deviation(state.weights, oracle)
            for state in self.algorithms.values()
        )

    def do_evaluate(self) -> tuple[dict[str, float], dict[str, float] | None]:
        design = self.active_design()
        labels = self.active_labels()
        classes = self.pool.classes
        weight_sets = {"standard": self.oracle_weights()}
        weight_sets.update(
            {name: state.weights for name, state in self.algorithms.items()}
        )
        train_acc = {
            name: accuracy_percent(design @ w, labels, classes)
            for name, w in weight_sets.items()
        }
        if self.test is None:
            return train_acc, None
        test_design = self.test_design()
        test_acc = {
            name: accuracy_percent(test_design @ w, self.test.labels, classes)
            for name, w in weight_sets.items()
        }
        return train_acc, test_acc


def run_schedule(config: ExperimentConfig) -> list[UpdateReport]:
    """Execute a validated schedule and return one report row per step."""
    session = _Session(config)
    reports: list[UpdateReport] = []
    for step in config.steps:
        samples_before = session.active_count
        nodes_before = session.node_count
        train_acc = test_acc = deviation = None
        started = time.perf_counter()
        if step.kind == "train":
            session.do_train()
        elif step.kind == "add-nodes":
            session.do_add_nodes(step.amount)
        elif step.kind == "remove-nodes":
            session.do_remove_nodes(step)
        elif step.kind == "add-inputs":
            session.do_add_inputs(step.amount)
        elif step.kind == "remove-inputs":
            session.do_remove_inputs(step.amount)
        elif step.kind == "verify":
            deviation = session.do_verify()
        elif step.kind == "evaluate":
            train_acc, test_acc = session.do_evaluate()
        wall_ms = 1000.0 * (time.perf_counter() - started)
        reports.append(
            UpdateReport(
                step=str(step),
                kind=step.kind,
                samples_before=samples_before,
                nodes_before=nodes_before,
                samples_after=session.active_count,
                nodes_after=session.node_count,
                wall_ms=wall_ms,
                train_accuracy=train_acc,
                test_accuracy=test_acc,
                oracle_deviation=deviation,
            )
        )

    if config.state_out is not None:
        state = session.node_state if session.track == "node" else session.input_states["alg2"]
        network = None if session.net.derived else session.net
        save_state(state, config.state_out, network)
    if config.report is not None:
        Path(config.report).write_text(render_table(reports))
    if config.report_csv is not None:
        write_csv(reports, config.report_csv)
    return reports


# --- report rendering -------------------------------------------------

def _algorithm_names(reports: list[UpdateReport]) -> list[str]:
    for rep in reports:
        if rep.train_accuracy is not None:
            ordered = [n for n in rep.train_accuracy if n != "standard"]
            return ["standard"] + ordered
    return []


def render_table(reports: list[UpdateReport]) -> str:
    """Aligned plain-text table, accuracies printed to two decimals."""
    names = _algorithm_names(reports)
    header = ["step", "samples", "nodes", "ms"]
    header += [f"train% {n}" for n in names]
    header += [f"test% {n}" for n in names]
    header += ["oracle dev"]
    rows = [header]
    for rep in reports:
        row = [
            rep.step,
            str(rep.samples_after),
            str(rep.nodes_after),
            f"{rep.wall_ms:.1f}",
        ]
        for group in (rep.train_accuracy, rep.test_accuracy):
            for name in names:
                if group is None or name not in group:
                    row.append("-")
                else:
                    row.append(f"{group[name]:.2f}")
        row.append("-" if rep.oracle_deviation is None else f"{rep.oracle_deviation:.2e}")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def write_csv(reports: list[UpdateReport], path) -> None:
    """Machine-readable sidecar with one row per schedule step."""
    names = _algorithm_names(reports)
    fields = [
        "step", "kind", "samples_before", "nodes_before",
        "samples_after", "nodes_after", "wall_ms",
    ]
    fields += [f"train_accuracy_{n}" for n in names]
    fields += [f"test_accuracy_{n}" for n in names]
    fields += ["oracle_deviation"]
    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(fields)
        for rep in reports:
            row = [
                rep.step, rep.kind, rep.samples_before, rep.nodes_before,
                rep.samples_after, rep.nodes_after, f"{rep.wall_ms:.3f}",
            ]
            for group in (rep.train_accuracy, rep.test_accuracy):
                for name in names:
                    row.append("" if group is None or name not in group
                               else f"{group[name]:.6f}")
            row.append("" if rep.oracle_deviation is None
                       else f"{rep.oracle_deviation:.3e}")
            writer.writerow(row)
