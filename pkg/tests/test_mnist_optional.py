"""Checks that only run when real MNIST IDX files are available.

Point BROADLEARN_MNIST_DIR at a directory containing the standard four
files (train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-*-ubyte,
optionally gzipped) to enable these.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from broadlearn.harness.data import load_dataset
from broadlearn.model import build_network, expand


def _find(root: Path, stem: str):
    for name in (stem, stem + ".gz"):
        if (root / name).exists():
            return root / name
    return None


def _mnist():
    root = os.environ.get("BROADLEARN_MNIST_DIR")
    if not root:
        return None
    root = Path(root)
    files = {
        "train": _find(root, "train-images-idx3-ubyte"),
        "train_labels": _find(root, "train-labels-idx1-ubyte"),
    }
    return files if all(files.values()) else None

MNIST = _mnist()


@pytest.mark.skipif(MNIST is None, reason="BROADLEARN_MNIST_DIR not set")
def test_mnist_training_set_shapes():
    ds = load_dataset(MNIST["train"], "idx", MNIST["train_labels"])
    assert ds.x.shape == (60000, 784)
    assert ds.y.shape == (60000, 10)
    assert ds.x.min() >= 0.0 and ds.x.max() <= 1.0
    np.testing.assert_array_equal(ds.classes, np.arange(10))


@pytest.mark.skipif(MNIST is None, reason="BROADLEARN_MNIST_DIR not set")
def test_mnist_batch_expansion_activation_range():
    ds = load_dataset(MNIST["train"], "idx", MNIST["train_labels"])
    net = build_network(784, 10, 10, 200, seed=0)
    out = expand(net, ds.x[:100])
    assert out.values.shape == (100, net.node_count)
    enh = out.values[:, net.feature_count:]
    assert np.all(enh > 0.0) and np.all(enh < 1.0)
