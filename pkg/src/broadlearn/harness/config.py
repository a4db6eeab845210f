"""Experiment configuration: flat key-value files and schedule validation.

A config file is plain text, one ``key = value`` per line, ``#`` comments,
with one repeatable key: every ``step =`` line appends to the schedule in
order.  Example::

    dataset = train.csv
    test_dataset = test.csv
    lambda = 1e-3
    seed = 0
    feature_groups = 10
    nodes_per_group = 10
    enhancement_nodes = 1100
    train_samples = 2000
    report = snapshots.txt
    step = train
    step = evaluate
    step = remove-nodes 100
    step = verify
    step = evaluate

Schedules must start with ``train``.  A schedule touches either the node
dimension (add-nodes / remove-nodes) or the sample dimension (add-inputs /
remove-inputs), never both: the two update families maintain different
state, and mixing them would silently require retraining.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import InvalidConfig, ScheduleInvalid

STEP_KINDS = (
    "train",
    "add-nodes",
    "add-inputs",
    "remove-nodes",
    "remove-inputs",
    "verify",
    "evaluate",
)

_NODE_STEPS = {"add-nodes", "remove-nodes"}
_INPUT_STEPS = {"add-inputs", "remove-inputs"}


@dataclass(frozen=True)
class Step:
    """One schedule entry: a kind plus an amount or explicit indices."""

    kind: str
    amount: int = 0
    indices: tuple[int, ...] | None = None

    def __str__(self) -> str:
        if self.indices is not None:
            return f"{self.kind} idx:{','.join(str(i) for i in self.indices)}"
        if self.amount:
            return f"{self.kind} {self.amount}"
        return self.kind


@dataclass
class ExperimentConfig:
    """Everything a schedule run needs, resolved and validated."""

    dataset: str
    dataset_format: str = "csv"
    dataset_labels: str | None = None
    test_dataset: str | None = None
    test_dataset_format: str = "csv"
    test_dataset_labels: str | None = None
    lam: float = 1e-3
    seed: int = 0
    feature_groups: int = 10
    nodes_per_group: int = 10
    enhancement_nodes: int = 100
    train_samples: int | None = None  # None = all rows
    steps: list[Step] = field(default_factory=list)
    report: str | None = None
    report_csv: str | None = None
    state_out: str | None = None

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates)


def parse_step(text: str) -> Step:
    """Parse one schedule entry, e.g. ``remove-nodes 100`` or ``verify``."""
    parts = text.split()
    if not parts:
        raise InvalidConfig("empty schedule step")
    kind = parts[0]
    if kind not in STEP_KINDS:
        raise InvalidConfig(f"unknown step {kind!r}, expected one of {STEP_KINDS}")
    if kind in ("train", "verify", "evaluate"):
        if len(parts) != 1:
            raise InvalidConfig(f"step {kind!r} takes no argument")
        return Step(kind=kind)
    if len(parts) != 2:
        raise InvalidConfig(f"step {kind!r} needs exactly one argument")
    arg = parts[1]
    if kind == "remove-nodes" and arg.startswith("idx:"):
        try:
            indices = tuple(sorted(int(s) for s in arg[4:].split(",")))
        except ValueError as exc:
            raise InvalidConfig(f"bad index list in {text!r}") from exc
        if len(set(indices)) != len(indices):
            raise InvalidConfig(f"duplicate indices in {text!r}")
        return Step(kind=kind, indices=indices)
    try:
        amount = int(arg)
    except ValueError as exc:
        raise InvalidConfig(f"bad amount in step {text!r}") from exc
    if amount < 1:
        raise InvalidConfig(f"step amount must be >= 1 in {text!r}")
    return Step(kind=kind, amount=amount)


_INT_KEYS = {"seed", "feature_groups", "nodes_per_group", "enhancement_nodes"}
_PATH_KEYS = {
    "dataset", "dataset_labels", "test_dataset", "test_dataset_labels",
    "report", "report_csv", "state_out",
}
_FORMAT_KEYS = {"dataset_format", "test_dataset_format"}


def parse_config(text: str, base_dir=None) -> ExperimentConfig:
    """Parse flat key-value config text into an :class:`ExperimentConfig`.

    Relative paths are resolved against ``base_dir`` when given.
    """
    values: dict[str, object] = {}
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if key == "step":
            steps.append(parse_step(value))
            continue
        if key == "lambda":
            try:
                lam = float(value)
            except ValueError as exc:
                raise InvalidConfig(f"line {lineno}: bad lambda {value!r}") from exc
            if not lam > 0.0:
                raise InvalidConfig(f"line {lineno}: lambda must be positive")
            values["lam"] = lam
        elif key == "train_samples":
            values["train_samples"] = None if value.lower() == "all" else _pos_int(value, lineno)
        elif key in _INT_KEYS:
            values[key] = _pos_int(value, lineno, allow_zero=(key == "seed"))
        elif key in _FORMAT_KEYS:
            if value not in ("csv", "idx"):
                raise InvalidConfig(f"line {lineno}: format must be csv or idx")
            values[key] = value
        elif key in _PATH_KEYS:
            path = Path(value)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            values[key] = str(path)
        else:
            raise InvalidConfig(f"line {lineno}: unknown key {key!r}")
    if "dataset" not in values:
        raise InvalidConfig("config is missing the required 'dataset' key")
    return ExperimentConfig(steps=steps, **values)


def _pos_int(value: str, lineno: int, allow_zero: bool = False) -> int:
    try:
        out = int(value)
    except ValueError as exc:
        raise InvalidConfig(f"line {lineno}: expected an integer, got {value!r}") from exc
    if out < 0 or (out == 0 and not allow_zero):
        raise InvalidConfig(f"line {lineno}: value must be positive, got {out}")
    return out


def load_config(path) -> ExperimentConfig:
    """Read and parse a config file; relative paths resolve beside it."""
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def validate_schedule(
    config: ExperimentConfig, pool_samples: int, feature_count: int
) -> str:
    """Static validation of a schedule against the loaded dataset sizes.

    Simulates the node count, enhancement count, active sample count, and
    pool cursor through every step.  Returns the schedule track, ``"node"``
    or ``"input"`` (a schedule with neither family counts as node-track).

    Raises
    ------
    ScheduleInvalid
        On an empty schedule, a schedule not starting with train, mixed
        node/sample tracks, or any step that would drive a dimension out of
        range.
    """
    steps = config.steps
    if not steps:
        raise ScheduleInvalid("schedule is empty")
    if steps[0].kind != "train":
        raise ScheduleInvalid("schedule must begin with a train step")
    if any(s.kind == "train" for s in steps[1:]):
        raise ScheduleInvalid("only the first step may be train")

    kinds = {s.kind for s in steps}
    has_node = bool(kinds & _NODE_STEPS)
    has_input = bool(kinds & _INPUT_STEPS)
    if has_node and has_input:
        raise ScheduleInvalid(
            "a schedule may change the node dimension or the sample "
            "dimension, not both"
        )
    track = "input" if has_input else "node"

    initial = config.train_samples if config.train_samples is not None else pool_samples
    if initial < 1:
        raise ScheduleInvalid("train_samples must be at least 1")
    if initial > pool_samples:
        raise ScheduleInvalid(
            f"train_samples = {initial} exceeds the {pool_samples} rows in the dataset"
        )

    active = initial
    cursor = initial
    enh = config.enhancement_nodes
    for step in steps:
        if step.kind == "add-nodes":
            enh += step.amount
        elif step.kind == "remove-nodes":
            count = len(step.indices) if step.indices is not None else step.amount
            if step.indices is not None:
                low = feature_count
                bad = [i for i in step.indices if i < low or i >= feature_count + enh]
                if bad:
                    raise ScheduleInvalid(
                        f"step '{step}': indices {bad} do not address current "
                        f"enhancement columns [{low}, {feature_count + enh})"
                    )
            if count >= enh:
                raise ScheduleInvalid(
                    f"step '{step}': removing {count} of {enh} enhancement nodes"
                )
            enh -= count
        elif step.kind == "add-inputs":
            if cursor + step.amount > pool_samples:
                raise ScheduleInvalid(
                    f"step '{step}': dataset pool exhausted "
                    f"({pool_samples - cursor} unused rows left)"
                )
            cursor += step.amount
            active += step.amount
        elif step.kind == "remove-inputs":
            if step.amount >= active:
                raise ScheduleInvalid(
                    f"step '{step}': removing {step.amount} of {active} active samples"
                )
            active -= step.amount
    return track
