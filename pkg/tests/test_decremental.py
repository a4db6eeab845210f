"""Node pruning and sample unlearning against the retrain oracle."""

import numpy as np
import pytest

from broadlearn.decremental import (
    InputRemovalBatch,
    NodeRemovalPlan,
    remove_inputs_f,
    remove_inputs_q,
    remove_nodes,
)
from broadlearn.errors import (
    IndexOutOfRange,
    InvalidConfig,
    NotPositiveDefinite,
)
from broadlearn.incremental import add_inputs_f, add_nodes
from broadlearn.linalg import is_upper_triangular
from broadlearn.ridge import init_input_state, init_node_state, ridge_solve

from conftest import random_problem, rel_fro


class TestNodeRemovalPlan:
    def test_orders_and_validates(self):
        plan = NodeRemovalPlan((1, 4, 6))
        np.testing.assert_array_equal(
            plan.permutation(8), [0, 2, 3, 5, 7, 6, 4, 1]
        )

    def test_rejects_unsorted_or_duplicate(self):
        with pytest.raises(InvalidConfig):
            NodeRemovalPlan((4, 1))
        with pytest.raises(InvalidConfig):
            NodeRemovalPlan((2, 2))

    def test_rejects_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            NodeRemovalPlan((1, 9)).permutation(8)
        with pytest.raises(IndexOutOfRange):
            NodeRemovalPlan((-1, 2))


class TestRemoveNodes:
    def test_zero_column_node_decouples(self):
        """Removing a node whose activations are identically zero leaves
        the other weights untouched."""
        rng = np.random.default_rng(70)
        a, y = random_problem(rng, 25, 6, 2)
        a[:, 3] = 0.0
        lam = 0.5
        state = init_node_state(a, y, lam)
        reduced = remove_nodes(state, (3,))
        kept = [0, 1, 2, 4, 5]
        np.testing.assert_allclose(
            reduced.weights, state.weights[kept], rtol=1e-10, atol=1e-12
        )

    def test_add_then_remove_is_identity(self):
        """Removing freshly added nodes restores weights and factor Gram."""
        rng = np.random.default_rng(71)
        a, y = random_problem(rng, 30, 7, 3)
        h = rng.standard_normal((30, 3))
        lam = 1e-2
        state = init_node_state(a, y, lam)
        grown = add_nodes(state, h, y)
        back = remove_nodes(grown, (7, 8, 9))
        assert rel_fro(back.weights, state.weights) <= 1e-9
        assert rel_fro(back.factor @ back.factor.T,
                       state.factor @ state.factor.T) <= 1e-9
        np.testing.assert_array_equal(back.design, a)

    def test_matches_retrain_oracle(self):
        rng = np.random.default_rng(72)
        a, y = random_problem(rng, 60, 12, 3)
        lam = 1e-3
        state = init_node_state(a, y, lam)
        reduced = remove_nodes(state, (2, 5, 9))
        kept = [i for i in range(12) if i not in (2, 5, 9)]
        oracle = ridge_solve(a[:, kept], y, lam).weights
        assert rel_fro(reduced.weights, oracle) <= 1e-8

    def test_reduced_state_invariants(self):
        rng = np.random.default_rng(73)
        a, y = random_problem(rng, 40, 10, 2)
        lam = 0.1
        reduced = remove_nodes(init_node_state(a, y, lam), (0, 4, 9))
        kept = [1, 2, 3, 5, 6, 7, 8]
        gram = a[:, kept].T @ a[:, kept] + lam * np.eye(7)
        assert is_upper_triangular(reduced.factor)
        assert np.all(np.diag(reduced.factor) > 0)
        assert rel_fro(reduced.factor @ reduced.factor.T @ gram, np.eye(7)) <= 1e-8
        np.testing.assert_array_equal(reduced.design, a[:, kept])
        np.testing.assert_allclose(reduced.aty, a[:, kept].T @ y, rtol=1e-12)

    def test_factor_equals_fresh_factor(self):
        """With positive diagonals the inverse Cholesky factor is unique, so
        the downdated factor must equal the freshly computed one."""
        rng = np.random.default_rng(74)
        a, y = random_problem(rng, 50, 9, 2)
        lam = 1e-2
        reduced = remove_nodes(init_node_state(a, y, lam), (1, 6))
        fresh = init_node_state(np.delete(a, (1, 6), axis=1), y, lam)
        np.testing.assert_allclose(reduced.factor, fresh.factor, rtol=0, atol=1e-10)

    def test_batched_equals_sequential(self):
        """Removing {i, j} at once equals removing i then the shifted j."""
        rng = np.random.default_rng(75)
        a, y = random_problem(rng, 45, 11, 2)
        lam = 1e-3
        state = init_node_state(a, y, lam)
        both = remove_nodes(state, (3, 8))
        one = remove_nodes(state, (3,))
        two = remove_nodes(one, (7,))  # old column 8 shifts left by one
        assert rel_fro(two.weights, both.weights) <= 1e-9
        assert rel_fro(two.factor @ two.factor.T,
                       both.factor @ both.factor.T) <= 1e-9

    def test_remove_everything_rejected(self):
        rng = np.random.default_rng(76)
        a, y = random_problem(rng, 10, 3, 1)
        state = init_node_state(a, y, 1.0)
        with pytest.raises(InvalidConfig):
            remove_nodes(state, (0, 1, 2))

    def test_out_of_range_rejected(self):
        rng = np.random.default_rng(77)
        a, y = random_problem(rng, 10, 3, 1)
        state = init_node_state(a, y, 1.0)
        with pytest.raises(IndexOutOfRange):
            remove_nodes(state, (0, 5))


class TestRemoveInputs:
    def _trained(self, seed, samples=50, nodes=10, outputs=3, lam=0.1):
        rng = np.random.default_rng(seed)
        a, y = random_problem(rng, samples, nodes, outputs)
        q = init_input_state(a, y, lam, kind="q")
        f = init_input_state(a, y, lam, kind="f")
        return rng, a, y, lam, q, f

    def test_zero_rows_change_nothing(self):
        rng, a, y, lam, q, f = self._trained(80)
        batch = InputRemovalBatch(rows=np.zeros((2, 10)), labels=np.zeros((2, 3)))
        q2 = remove_inputs_q(q, batch)
        np.testing.assert_allclose(q2.gram_inv, q.gram_inv, rtol=0, atol=1e-14)
        np.testing.assert_allclose(q2.weights, q.weights, rtol=0, atol=1e-14)
        f2 = remove_inputs_f(f, batch)
        np.testing.assert_allclose(f2.factor, f.factor, rtol=0, atol=1e-14)
        np.testing.assert_allclose(f2.weights, f.weights, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("removed", [3, 10, 25])  # below, at, above width
    def test_matches_retrain_oracle_both_algorithms(self, removed):
        rng, a, y, lam, q, f = self._trained(81 + removed)
        batch = InputRemovalBatch(rows=a[-removed:], labels=y[-removed:])
        oracle = ridge_solve(a[:-removed], y[:-removed], lam).weights
        q2 = remove_inputs_q(q, batch)
        f2 = remove_inputs_f(f, batch)
        assert rel_fro(q2.weights, oracle) <= 1e-8
        assert rel_fro(f2.weights, oracle) <= 1e-8
        assert rel_fro(q2.weights, f2.weights) <= 1e-9

    def test_remove_all_but_one_row(self):
        """The extreme downdate (keep a single sample) still matches."""
        rng, a, y, lam, q, f = self._trained(85, samples=30, nodes=8)
        batch = InputRemovalBatch(rows=a[1:], labels=y[1:])
        oracle = ridge_solve(a[:1], y[:1], lam).weights
        q2 = remove_inputs_q(q, batch)
        f2 = remove_inputs_f(f, batch)
        assert rel_fro(q2.weights, oracle) <= 1e-8
        assert rel_fro(f2.weights, oracle) <= 1e-8

    def test_add_then_remove_is_identity(self):
        rng, a, y, lam, q, f = self._trained(86)
        ax = rng.standard_normal((4, 10))
        ya = rng.standard_normal((4, 3))
        grown = add_inputs_f(f, ax, ya)
        back = remove_inputs_f(grown, InputRemovalBatch(rows=ax, labels=ya))
        assert rel_fro(back.weights, f.weights) <= 1e-9
        assert rel_fro(back.factor @ back.factor.T,
                       f.factor @ f.factor.T) <= 1e-9

    def test_downdated_gram_inverse_is_exact(self):
        """Oracle: direct inverse of the reduced Gram matrix."""
        rng, a, y, lam, q, f = self._trained(87)
        batch = InputRemovalBatch(rows=a[-6:], labels=y[-6:])
        q2 = remove_inputs_q(q, batch)
        f2 = remove_inputs_f(f, batch)
        direct = np.linalg.inv(a[:-6].T @ a[:-6] + lam * np.eye(10))
        assert rel_fro(q2.gram_inv, direct) <= 1e-8
        assert rel_fro(f2.factor @ f2.factor.T, direct) <= 1e-8
        assert is_upper_triangular(f2.factor)
        assert np.all(np.diag(f2.factor) > 0)

    def test_foreign_rows_rejected_small_branch(self):
        """Rows that were never trained on break positive definiteness."""
        rng, a, y, lam, q, f = self._trained(88)
        foreign = 10.0 * rng.standard_normal((3, 10))
        batch = InputRemovalBatch(rows=foreign, labels=np.zeros((3, 3)))
        with pytest.raises(NotPositiveDefinite):
            remove_inputs_q(q, batch)
        with pytest.raises(NotPositiveDefinite):
            remove_inputs_f(f, batch)

    def test_foreign_rows_rejected_large_branch(self):
        rng, a, y, lam, q, f = self._trained(89, samples=40, nodes=6)
        foreign = 10.0 * rng.standard_normal((12, 6))
        batch = InputRemovalBatch(rows=foreign, labels=np.zeros((12, 3)))
        with pytest.raises(NotPositiveDefinite):
            remove_inputs_q(q, batch)
        with pytest.raises(NotPositiveDefinite):
            remove_inputs_f(f, batch)

    def test_double_removal_rejected(self):
        """Removing the same rows twice is an invalid unlearning request;
        once the rows dominate the Gram matrix, the second removal must
        break positive definiteness."""
        rng = np.random.default_rng(90)
        a, y = random_problem(rng, 50, 10, 3)
        a[-4:] *= 10.0
        lam = 0.1
        q = init_input_state(a, y, lam, kind="q")
        batch = InputRemovalBatch(rows=a[-4:], labels=y[-4:])
        once = remove_inputs_q(q, batch)
        with pytest.raises(NotPositiveDefinite):
            remove_inputs_q(once, batch)

    def test_near_total_removal_never_misfires_the_guard(self):
        """Valid removals that keep only a few rows drive the guard matrix
        toward zero; its rounding asymmetry must be absorbed, not mistaken
        for an invalid input (regression: the symmetry check used to fire)."""
        rng = np.random.default_rng(92)
        for _ in range(200):
            k = int(rng.integers(2, 30))
            l = int(rng.integers(k + 2, 120))
            delta = l - int(rng.integers(1, 4))
            lam = float(rng.choice([1e-3, 1e-2, 1e-1, 1.0]))
            a, y = random_problem(rng, l, k, 2)
            batch = InputRemovalBatch(rows=a[-delta:], labels=y[-delta:])
            q2 = remove_inputs_q(init_input_state(a, y, lam, "q"), batch)
            f2 = remove_inputs_f(init_input_state(a, y, lam, "f"), batch)
            assert np.all(np.isfinite(q2.weights))
            assert np.all(np.isfinite(f2.weights))

    def test_validity_guard_never_fires_for_true_subsets(self):
        """For a positive ridge parameter and rows genuinely in the trained
        set, the guard matrix I - Ad Q Ad.T has eigenvalues in (0, 1], so
        the error path is unreachable in valid use (1000 randomized trials)."""
        rng = np.random.default_rng(91)
        for _ in range(1000):
            samples = int(rng.integers(8, 40))
            nodes = int(rng.integers(2, 12))
            removed = int(rng.integers(1, samples))
            lam = float(rng.choice([1e-3, 1e-1, 1.0]))
            a, y = random_problem(rng, samples, nodes, 2)
            q = init_input_state(a, y, lam, kind="q")
            ad = a[-removed:]
            guard = np.eye(removed) - ad @ q.gram_inv @ ad.T
            eigs = np.linalg.eigvalsh(0.5 * (guard + guard.T))
            assert eigs[0] > 0.0
            assert eigs[-1] <= 1.0 + 1e-12
            out = remove_inputs_q(q, InputRemovalBatch(rows=ad, labels=y[-removed:]))
            assert np.all(np.isfinite(out.weights))
