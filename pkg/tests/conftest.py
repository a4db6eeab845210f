"""Shared helpers for the test suite."""

import numpy as np
import pytest


def rel_fro(a, b) -> float:
    """Relative Frobenius distance of a from reference b."""
    scale = np.linalg.norm(b)
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / (scale if scale else 1.0))


def random_spd(rng, dim: int, jitter: float = 1.0) -> np.ndarray:
    """Random symmetric positive definite matrix G G.T + jitter I."""
    g = rng.standard_normal((dim, dim))
    return g @ g.T + jitter * np.eye(dim)


def random_problem(rng, samples: int, nodes: int, outputs: int):
    """Random dense (design, labels) pair."""
    return (
        rng.standard_normal((samples, nodes)),
        rng.standard_normal((samples, outputs)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
