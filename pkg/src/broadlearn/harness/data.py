"""Dataset loading: CSV tables and IDX image/label files.

CSV rows are samples with the class label in the last column; values are
taken as-is (bring your own scaling).  IDX files follow the public MNIST
convention: big-endian magic 0x00000803 for rank-3 ubyte images and
0x00000801 for rank-1 ubyte labels; pixels are scaled to [0, 1].  Files
ending in ``.gz`` are decompressed transparently.

Labels are one-hot encoded (1.0/0.0) over the classes observed in the file,
ordered ascending, so argmax with first-wins tie-breaking predicts the
lowest class index on ties.
"""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidConfig, LabelMismatch, ParseError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

FORMATS = ("csv", "idx")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Raw inputs plus labels in both one-hot and class-value form."""

    x: np.ndarray          # (n, d) float64
    y: np.ndarray          # (n, c) one-hot float64
    labels: np.ndarray     # (n,) integer class values
    classes: np.ndarray    # (c,) ascending class values

    @property
    def samples(self) -> int:
        return self.x.shape[0]


def one_hot(labels: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """One-hot matrix of ``labels`` over the given ascending class values."""
    index = {int(c): j for j, c in enumerate(classes)}
    out = np.zeros((labels.shape[0], classes.shape[0]))
    for i, lab in enumerate(labels):
        out[i, index[int(lab)]] = 1.0
    return out


def _open_binary(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read_exactly(fh, n: int, path, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ParseError(f"{path}: truncated while reading {what}")
    return data


def _load_csv(path) -> tuple[np.ndarray, np.ndarray]:
    try:
        table = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except OSError:
        raise
    except Exception as exc:
        raise ParseError(f"{path}: not a numeric CSV table ({exc})") from exc
    if table.shape[1] < 2:
        raise ParseError(f"{path}: need at least one feature column plus a label")
    x = table[:, :-1]
    raw_labels = table[:, -1]
    rounded = np.rint(raw_labels)
    if np.any(np.abs(raw_labels - rounded) > 1e-9):
        raise ParseError(f"{path}: last column must hold integer class labels")
    return x, rounded.astype(np.int64)


def _load_idx_images(path) -> np.ndarray:
    with _open_binary(path) as fh:
        magic, count, rows, cols = struct.unpack(
            ">IIII", _read_exactly(fh, 16, path, "image header")
        )
        if magic != IDX_IMAGES_MAGIC:
            raise ParseError(
                f"{path}: bad image magic 0x{magic:08x}, expected 0x{IDX_IMAGES_MAGIC:08x}"
            )
        body = _read_exactly(fh, count * rows * cols, path, "pixel data")
        if fh.read(1):
            raise ParseError(f"{path}: trailing bytes after pixel data")
    pixels = np.frombuffer(body, dtype=np.uint8).astype(np.float64) / 255.0
    return pixels.reshape(count, rows * cols)


def _load_idx_labels(path) -> np.ndarray:
    with _open_binary(path) as fh:
        magic, count = struct.unpack(">II", _read_exactly(fh, 8, path, "label header"))
        if magic != IDX_LABELS_MAGIC:
            raise ParseError(
                f"{path}: bad label magic 0x{magic:08x}, expected 0x{IDX_LABELS_MAGIC:08x}"
            )
        body = _read_exactly(fh, count, path, "label data")
        if fh.read(1):
            raise ParseError(f"{path}: trailing bytes after label data")
    return np.frombuffer(body, dtype=np.uint8).astype(np.int64)


def load_dataset(path, fmt: str = "csv", labels_path=None) -> Dataset:
    """Load a dataset and one-hot encode its labels.

    Parameters
    ----------
    path : str or Path
        CSV file, or the IDX images file when ``fmt="idx"``.
    fmt : {"csv", "idx"}
    labels_path : str or Path, required for idx
        The IDX labels file.

    Raises
    ------
    ParseError, LabelMismatch, InvalidConfig
    """
    if fmt not in FORMATS:
        raise InvalidConfig(f"unknown dataset format {fmt!r}, expected one of {FORMATS}")
    if fmt == "csv":
        x, labels = _load_csv(path)
    else:
        if labels_path is None:
            raise InvalidConfig("idx datasets need a labels file")
        x = _load_idx_images(path)
        labels = _load_idx_labels(labels_path)
        if labels.shape[0] != x.shape[0]:
            raise LabelMismatch(
                f"{x.shape[0]} images but {labels.shape[0]} labels"
            )
    classes = np.unique(labels)
    return Dataset(x=x, y=one_hot(labels, classes), labels=labels, classes=classes)


# --- conversion / inspection helpers (CLI `convert` verb) ------------------

def inspect_file(path, fmt: str = "auto", labels_path=None) -> dict:
    """Header and shape summary of a CSV or IDX file, without full decode."""
    path = Path(path)
    if fmt == "auto":
        fmt = "csv" if path.suffix.lower() == ".csv" else "idx"
    if fmt == "csv":
        x, labels = _load_csv(path)
        return {
            "format": "csv",
            "samples": int(x.shape[0]),
            "features": int(x.shape[1]),
            "classes": [int(c) for c in np.unique(labels)],
        }
    with _open_binary(path) as fh:
        magic = struct.unpack(">I", _read_exactly(fh, 4, path, "magic"))[0]
        if magic == IDX_IMAGES_MAGIC:
            count, rows, cols = struct.unpack(">III", _read_exactly(fh, 12, path, "dims"))
            info = {"format": "idx-images", "samples": int(count),
                    "rows": int(rows), "cols": int(cols)}
        elif magic == IDX_LABELS_MAGIC:
            count = struct.unpack(">I", _read_exactly(fh, 4, path, "dims"))[0]
            info = {"format": "idx-labels", "samples": int(count)}
        else:
            raise ParseError(f"{path}: unrecognized IDX magic 0x{magic:08x}")
    if labels_path is not None:
        info["labels"] = inspect_file(labels_path, "idx")
    return info


def idx_to_csv(images_path, labels_path, out_path) -> int:
    """Convert an IDX image/label pair to a CSV table; returns sample count."""
    ds = load_dataset(images_path, "idx", labels_path)
    table = np.hstack([ds.x, ds.labels[:, None].astype(np.float64)])
    np.savetxt(out_path, table, delimiter=",", fmt="%.9g")
    return ds.samples


def csv_to_idx(csv_path, out_images, out_labels) -> int:
    """Convert a CSV table to an IDX pair, quantizing features to bytes.

    Features are min-max scaled to [0, 255] over the whole file (lossy);
    each sample becomes a 1-by-d "image".
    """
    x, labels = _load_csv(csv_path)
    lo, hi = float(x.min()), float(x.max())
    span = hi - lo if hi > lo else 1.0
    bytes_x = np.rint((x - lo) / span * 255.0).astype(np.uint8)
    if np.any(labels < 0) or np.any(labels > 255):
        raise ParseError(f"{csv_path}: labels outside [0, 255] cannot be stored as IDX")
    n, d = bytes_x.shape
    with open(out_images, "wb") as fh:
        fh.write(struct.pack(">IIII", IDX_IMAGES_MAGIC, n, 1, d))
        fh.write(bytes_x.tobytes())
    with open(out_labels, "wb") as fh:
        fh.write(struct.pack(">II", IDX_LABELS_MAGIC, n))
        fh.write(labels.astype(np.uint8).tobytes())
    return n
