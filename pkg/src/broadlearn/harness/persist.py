"""Binary persistence of training states.

Wire format (all integers little-endian):

    magic   4 bytes  b"BLSS"
    version u32      currently 1
    kind    u8       1 = node state, 2 = input state (Gram inverse form),
                     3 = input state (factor form)
    lam     f64
    dims    u64 each node: k, c, l          input: k, c
    data    f64 row-major
                     node:  factor (k*k), weights (k*c), design (l*k), aty (k*c)
                     input: gram_inv or factor (k*k), weights (k*c)
    net     u8       0 = absent, 1 = present
        when present: seed i64, input_dim u64, feature_groups u64,
                      nodes_per_group u64, enhancement_nodes u64,
                      activation u8 (1 = sigmoid)

The file must end exactly where the format says it does; any length or tag
inconsistency raises CorruptFile rather than producing a partial state.  The
network section stores only the seed and sizing, which reproduce the weights
bit-for-bit for networks as built; a network grown or pruned after
construction cannot be reconstructed this way and is refused at save time.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptFile, InvalidConfig, VersionMismatch
from ..model import BlsNetwork, build_network
from ..ridge import InputState, NodeState

MAGIC = b"BLSS"
VERSION = 1

_KIND_TAGS = {"node": 1, "q": 2, "f": 3}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}
_ACTIVATION_TAGS = {"sigmoid": 1}
_TAG_ACTIVATIONS = {v: k for k, v in _ACTIVATION_TAGS.items()}


def _f64_bytes(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype="<f8").tobytes()


def save_state(state, path, network: BlsNetwork | None = None) -> None:
    """Write a node or input state (plus optional network metadata) to disk."""
    if network is not None and network.derived:
        raise InvalidConfig(
            "a grown or pruned network is not reproducible from seed and "
            "sizing alone and cannot be persisted"
        )
    chunks = [MAGIC, struct.pack("<I", VERSION)]
    if isinstance(state, NodeState):
        k, c, l = state.node_count, state.output_dim, state.sample_count
        chunks.append(struct.pack("<Bd", _KIND_TAGS["node"], state.lam))
        chunks.append(struct.pack("<QQQ", k, c, l))
        chunks.append(_f64_bytes(state.factor))
        chunks.append(_f64_bytes(state.weights))
        chunks.append(_f64_bytes(state.design))
        chunks.append(_f64_bytes(state.aty))
    elif isinstance(state, InputState):
        k, c = state.node_count, state.output_dim
        chunks.append(struct.pack("<Bd", _KIND_TAGS[state.kind], state.lam))
        chunks.append(struct.pack("<QQ", k, c))
        square = state.gram_inv if state.kind == "q" else state.factor
        chunks.append(_f64_bytes(square))
        chunks.append(_f64_bytes(state.weights))
    else:
        raise InvalidConfig(f"cannot persist object of type {type(state).__name__}")

    if network is None:
        chunks.append(struct.pack("<B", 0))
    else:
        chunks.append(struct.pack("<B", 1))
        chunks.append(
            struct.pack(
                "<qQQQQB",
                network.rng_seed,
                network.input_dim,
                network.feature_groups,
                network.nodes_per_group,
                network.enhancement_nodes,
                _ACTIVATION_TAGS[network.activation],
            )
        )
    Path(path).write_bytes(b"".join(chunks))


class _Cursor:
    """Bounds-checked reader over the file bytes."""

    def __init__(self, data: bytes, path):
        self.data = data
        self.pos = 0
        self.path = path

    def take(self, n: int, what: str) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise CorruptFile(f"{self.path}: truncated while reading {what}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def matrix(self, rows: int, cols: int, what: str) -> np.ndarray:
        raw = self.take(rows * cols * 8, what)
        return np.frombuffer(raw, dtype="<f8").reshape(rows, cols).copy()

    def done(self) -> None:
        if self.pos != len(self.data):
            raise CorruptFile(
                f"{self.path}: {len(self.data) - self.pos} trailing bytes"
            )


def load_state(path):
    """Read a persisted state; returns ``(state, network_or_None)``.

    Raises
    ------
    CorruptFile
        On any structural damage: bad magic, bad tags, impossible
        dimensions, or a byte count that disagrees with the header.
    VersionMismatch
        If the format version is unsupported.
    """
    cur = _Cursor(Path(path).read_bytes(), path)
    if cur.take(4, "magic") != MAGIC:
        raise CorruptFile(f"{path}: bad magic, not a state file")
    (version,) = cur.unpack("<I", "version")
    if version != VERSION:
        raise VersionMismatch(f"{path}: format version {version}, expected {VERSION}")
    tag, lam = cur.unpack("<Bd", "kind and ridge parameter")
    if tag not in _TAG_KINDS:
        raise CorruptFile(f"{path}: unknown state kind tag {tag}")
    if not np.isfinite(lam) or lam <= 0.0:
        raise CorruptFile(f"{path}: ridge parameter {lam!r} is not a positive real")

    kind = _TAG_KINDS[tag]
    if kind == "node":
        k, c, l = cur.unpack("<QQQ", "dimensions")
        if k < 1 or c < 1:
            raise CorruptFile(f"{path}: impossible dimensions k={k}, c={c}")
        state = NodeState(
            factor=cur.matrix(k, k, "factor"),
            weights=cur.matrix(k, c, "weights"),
            design=cur.matrix(l, k, "design"),
            aty=cur.matrix(k, c, "label cross-product"),
            lam=lam,
        )
    else:
        k, c = cur.unpack("<QQ", "dimensions")
        if k < 1 or c < 1:
            raise CorruptFile(f"{path}: impossible dimensions k={k}, c={c}")
        square = cur.matrix(k, k, "square factor")
        weights = cur.matrix(k, c, "weights")
        if kind == "q":
            state = InputState(kind="q", weights=weights, lam=lam, gram_inv=square)
        else:
            state = InputState(kind="f", weights=weights, lam=lam, factor=square)

    (flag,) = cur.unpack("<B", "network flag")
    network = None
    if flag == 1:
        seed, dim, groups, per_group, enh, act = cur.unpack("<qQQQQB", "network")
        if act not in _TAG_ACTIVATIONS:
            raise CorruptFile(f"{path}: unknown activation tag {act}")
        try:
            network = build_network(
                dim, groups, per_group, enh, seed, _TAG_ACTIVATIONS[act]
            )
        except InvalidConfig as exc:
            raise CorruptFile(f"{path}: invalid network sizing ({exc})") from exc
    elif flag != 0:
        raise CorruptFile(f"{path}: bad network flag {flag}")
    cur.done()
    return state, network
