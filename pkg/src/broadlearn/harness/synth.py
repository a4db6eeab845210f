"""Seeded synthetic classification data, a stand-in when MNIST is absent.

Samples are Gaussian blobs around per-class anchor points inside the unit
hypercube, clipped to [0, 1] so they live on the same scale as image pixels.
The anchor geometry is controlled by ``anchors_seed`` and the sampling by
``seed``, so a train/test pair drawn with different seeds but the same
anchors shares its class structure.  Classes are balanced.
"""

from __future__ import annotations

import numpy as np


def make_surrogate(
    samples: int,
    input_dim: int = 24,
    classes: int = 10,
    seed: int = 0,
    noise: float = 0.35,
    anchors_seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x, labels)`` with x in [0, 1]^d and integer labels."""
    anchor_rng = np.random.default_rng([int(anchors_seed), 0x616E6368])  # "anch"
    anchors = anchor_rng.uniform(0.15, 0.85, size=(classes, input_dim))
    rng = np.random.default_rng([int(seed), 0x73796E74])  # "synt"
    labels = np.arange(samples, dtype=np.int64) % classes
    rng.shuffle(labels)
    x = anchors[labels] + noise * rng.standard_normal((samples, input_dim))
    return np.clip(x, 0.0, 1.0), labels


def write_surrogate_csv(
    path,
    samples: int,
    input_dim: int = 24,
    classes: int = 10,
    seed: int = 0,
    noise: float = 0.35,
    anchors_seed: int = 0,
) -> None:
    """Write a surrogate dataset as a CSV table (label in the last column)."""
    x, labels = make_surrogate(samples, input_dim, classes, seed, noise, anchors_seed)
    table = np.hstack([x, labels[:, None].astype(np.float64)])
    np.savetxt(path, table, delimiter=",", fmt="%.9g")
