"""Algebraic identities behind the downdate formulas.

These pin the derivations themselves, not just end-to-end oracle agreement:
the block decomposition that justifies the node-removal weight formula, and
the label-cache identity that justifies the sample-removal weight formula.
"""

import numpy as np
import pytest

from broadlearn.decremental import NodeRemovalPlan
from broadlearn.linalg import retriangularize, tri_solve
from broadlearn.ridge import init_node_state

from conftest import random_problem, rel_fro


def node_pruning_block_identity(seed: int) -> tuple[float, float]:
    """Decompose the permuted weights through the rotated factor blocks.

    With the permuted factor rotated to [[head, T], [0, G]] and the permuted
    design split as [kept | removed], the original (permuted) weights must
    satisfy

        W_top    = W_reduced + T (T.T A_kept.T Y + G.T A_removed.T Y)
        W_bottom = G (T.T A_kept.T Y + G.T A_removed.T Y)

    where W_reduced are the downdated weights.  Returns the relative error
    of both identities.
    """
    rng = np.random.default_rng(seed)
    samples = int(rng.integers(20, 60))
    nodes = int(rng.integers(4, 15))
    removed = int(rng.integers(1, nodes))
    outputs = int(rng.integers(1, 4))
    lam = float(rng.choice([1e-3, 1e-1, 1.0]))
    a, y = random_problem(rng, samples, nodes, outputs)
    state = init_node_state(a, y, lam)

    plan = NodeRemovalPlan(
        tuple(sorted(rng.choice(nodes, size=removed, replace=False).tolist()))
    )
    perm = plan.permutation(nodes)
    boundary = nodes - removed
    head, t_block, g_block = retriangularize(state.factor[perm], boundary)

    a_perm = a[:, perm]
    w_perm = state.weights[perm]
    w_reduced = w_perm[:boundary] - t_block @ tri_solve(g_block, w_perm[boundary:])

    shared = (
        t_block.T @ a_perm[:, :boundary].T @ y
        + g_block.T @ a_perm[:, boundary:].T @ y
    )
    top_err = rel_fro(w_reduced + t_block @ shared, w_perm[:boundary])
    bottom_err = rel_fro(g_block @ shared, w_perm[boundary:])
    return top_err, bottom_err


def removed_label_cache_identity(seed: int) -> float:
    """The surviving rows' label cross-product never needs the surviving
    rows: Q A_kept.T Y_kept equals W - Q A_removed.T Y_removed.

    This is what lets sample removal run without retained training rows.
    """
    rng = np.random.default_rng(seed)
    samples = int(rng.integers(10, 60))
    nodes = int(rng.integers(2, 15))
    removed = int(rng.integers(1, samples))
    outputs = int(rng.integers(1, 4))
    lam = float(rng.choice([1e-3, 1e-1, 1.0]))
    a, y = random_problem(rng, samples, nodes, outputs)

    q = np.linalg.inv(a.T @ a + lam * np.eye(nodes))
    w = q @ (a.T @ y)
    lhs = q @ (a[:-removed].T @ y[:-removed])
    rhs = w - q @ (a[-removed:].T @ y[-removed:])
    return rel_fro(lhs, rhs)


@pytest.mark.parametrize("seed", range(20))
def test_node_pruning_block_identity(seed):
    top_err, bottom_err = node_pruning_block_identity(1000 + seed)
    assert top_err <= 1e-9
    assert bottom_err <= 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_removed_label_cache_identity(seed):
    assert removed_label_cache_identity(2000 + seed) <= 1e-9
