"""Random feature/enhancement network and the expanded design matrix.

A :class:`BlsNetwork` holds two random maps: a linear feature map whose
columns are scaled so that inputs in ``[0, 1]`` produce features in
``[-1, 1]``, and a sigmoid enhancement layer whose weights and biases are
drawn uniformly from ``[-1, 1]``.  ``expand`` evaluates both maps and
concatenates feature and enhancement activations into one design matrix.

``expand`` processes samples one row at a time with the same vector kernel,
so expanding a stacked batch produces bit-for-bit the same rows as expanding
the pieces separately.  Sample-dimension updates rely on this: activations
recomputed later for a subset of rows are identical to the rows that were
originally trained on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidConfig

# Stream tags keeping fresh enhancement-node draws disjoint from the draws
# made at construction time (which consume the root seed directly).
_GROW_STREAM = 0x6E6F6465  # "node"


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function 1 / (1 + exp(-z)) with overflow-safe branching."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True, eq=False)
class BlsNetwork:
    """Immutable random-map parameters of a broad learning network."""

    input_dim: int
    feature_groups: int
    nodes_per_group: int
    enhancement_nodes: int
    feature_weights: np.ndarray  # (input_dim, feature_count), range-scaled
    enh_weights: np.ndarray      # (feature_count, enhancement_nodes), U[-1, 1]
    enh_bias: np.ndarray         # (enhancement_nodes,), U[-1, 1]
    rng_seed: int
    activation: str = "sigmoid"
    derived: bool = False  # True once grown or pruned after construction

    @property
    def feature_count(self) -> int:
        return self.feature_groups * self.nodes_per_group

    @property
    def node_count(self) -> int:
        return self.feature_count + self.enhancement_nodes


@dataclass(frozen=True, eq=False)
class ExpandedMatrix:
    """Node activations of a sample batch: rows are samples, columns nodes."""

    values: np.ndarray
    column_labels: tuple[tuple[str, int], ...]

    @property
    def samples(self) -> int:
        return self.values.shape[0]

    @property
    def nodes(self) -> int:
        return self.values.shape[1]


def build_network(
    input_dim: int,
    feature_groups: int,
    nodes_per_group: int,
    enhancement_nodes: int,
    seed: int,
    activation: str = "sigmoid",
) -> BlsNetwork:
    """Draw a network deterministically from ``seed``.

    Feature weights start uniform on [-1, 1] and each column is then divided
    by the largest magnitude it can produce on inputs in [0, 1]^d, so feature
    activations stay in [-1, 1].  Enhancement weights and biases are kept
    uniform on [-1, 1] unscaled.

    Raises
    ------
    InvalidConfig
        If any count is below one or the activation is unknown.
    """
    for name, value in (
        ("input_dim", input_dim),
        ("feature_groups", feature_groups),
        ("nodes_per_group", nodes_per_group),
        ("enhancement_nodes", enhancement_nodes),
    ):
        if int(value) < 1:
            raise InvalidConfig(f"{name} must be >= 1, got {value}")
    if activation != "sigmoid":
        raise InvalidConfig(f"unsupported activation {activation!r}")

    feature_count = feature_groups * nodes_per_group
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(input_dim, feature_count))
    # Largest |x . w| over x in [0, 1]^d is max(|sum of negatives|, sum of positives).
    lo = np.minimum(raw, 0.0).sum(axis=0)
    hi = np.maximum(raw, 0.0).sum(axis=0)
    scale = np.maximum(np.abs(lo), hi)
    scale[scale == 0.0] = 1.0
    feature_weights = raw / scale

    enh_weights = rng.uniform(-1.0, 1.0, size=(feature_count, enhancement_nodes))
    enh_bias = rng.uniform(-1.0, 1.0, size=enhancement_nodes)

    return BlsNetwork(
        input_dim=int(input_dim),
        feature_groups=int(feature_groups),
        nodes_per_group=int(nodes_per_group),
        enhancement_nodes=int(enhancement_nodes),
        feature_weights=feature_weights,
        enh_weights=enh_weights,
        enh_bias=enh_bias,
        rng_seed=int(seed),
        activation=activation,
    )


def _column_labels(net: BlsNetwork) -> tuple[tuple[str, int], ...]:
    labels = [
        ("feature", g)
        for g in range(net.feature_groups)
        for _ in range(net.nodes_per_group)
    ]
    labels += [("enhancement", 0)] * net.enhancement_nodes
    return tuple(labels)


def enhancement_activations(
    weights: np.ndarray, bias: np.ndarray, features: np.ndarray
) -> np.ndarray:
    """Sigmoid enhancement block for a feature batch, computed row by row.

    Kept row-wise for the same reason as ``expand``: identical rows must
    yield identical activations regardless of batch size.
    """
    features = np.ascontiguousarray(features, dtype=np.float64)
    out = np.empty((features.shape[0], weights.shape[1]))
    for i in range(features.shape[0]):
        out[i] = sigmoid(features[i] @ weights + bias)
    return out


def expand(net: BlsNetwork, x) -> ExpandedMatrix:
    """Evaluate the network on raw inputs ``x`` (rows are samples).

    Returns the expanded design matrix whose first columns are the feature
    activations and whose remaining columns are the sigmoid enhancement
    activations of the feature block.  Row i depends only on ``x[i]``.

    Raises
    ------
    DimensionMismatch
        If ``x`` does not have ``net.input_dim`` columns.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatch(f"raw input must be 2-D, got ndim={x.ndim}")
    if x.shape[1] != net.input_dim:
        raise DimensionMismatch(
            f"raw input has {x.shape[1]} columns, network expects {net.input_dim}"
        )
    nf = net.feature_count
    out = np.empty((x.shape[0], net.node_count))
    for i in range(x.shape[0]):
        feat = x[i] @ net.feature_weights
        out[i, :nf] = feat
        out[i, nf:] = sigmoid(feat @ net.enh_weights + net.enh_bias)
    return ExpandedMatrix(values=out, column_labels=_column_labels(net))


def grow_enhancement(net: BlsNetwork, extra: int, stream: int) -> BlsNetwork:
    """Return a network with ``extra`` fresh enhancement nodes appended.

    The new weights are drawn from a child stream of the network seed keyed
    by ``stream``, so repeated growth with the same stream indices is
    reproducible and never replays the construction-time draws.
    """
    if extra < 1:
        raise InvalidConfig(f"extra enhancement nodes must be >= 1, got {extra}")
    rng = np.random.default_rng([net.rng_seed, _GROW_STREAM, int(stream)])
    new_w = rng.uniform(-1.0, 1.0, size=(net.feature_count, extra))
    new_b = rng.uniform(-1.0, 1.0, size=extra)
    return BlsNetwork(
        input_dim=net.input_dim,
        feature_groups=net.feature_groups,
        nodes_per_group=net.nodes_per_group,
        enhancement_nodes=net.enhancement_nodes + extra,
        feature_weights=net.feature_weights,
        enh_weights=np.hstack([net.enh_weights, new_w]),
        enh_bias=np.concatenate([net.enh_bias, new_b]),
        rng_seed=net.rng_seed,
        activation=net.activation,
        derived=True,
    )


def prune_enhancement(net: BlsNetwork, enh_indices) -> BlsNetwork:
    """Return a network with the given enhancement nodes removed.

    ``enh_indices`` are positions within the enhancement block (0 is the
    first enhancement node, not the first network column).
    """
    idx = sorted(set(int(i) for i in enh_indices))
    if not idx:
        raise InvalidConfig("no enhancement nodes selected for pruning")
    if idx[0] < 0 or idx[-1] >= net.enhancement_nodes:
        raise InvalidConfig(
            f"enhancement indices {idx} outside [0, {net.enhancement_nodes})"
        )
    if len(idx) >= net.enhancement_nodes:
        raise InvalidConfig("cannot prune every enhancement node")
    keep = np.setdiff1d(np.arange(net.enhancement_nodes), idx)
    return BlsNetwork(
        input_dim=net.input_dim,
        feature_groups=net.feature_groups,
        nodes_per_group=net.nodes_per_group,
        enhancement_nodes=int(keep.size),
        feature_weights=net.feature_weights,
        enh_weights=net.enh_weights[:, keep],
        enh_bias=net.enh_bias[keep],
        rng_seed=net.rng_seed,
        activation=net.activation,
        derived=True,
    )
