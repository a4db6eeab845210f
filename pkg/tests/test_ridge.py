"""Batch ridge oracle and the running-state constructors."""

import numpy as np
import pytest

from broadlearn.errors import DimensionMismatch, InvalidConfig
from broadlearn.linalg import is_upper_triangular
from broadlearn.ridge import (
    init_input_state,
    init_node_state,
    ridge_solve,
)

from conftest import random_problem, rel_fro


class TestRidgeSolve:
    def test_identity_design(self):
        sol = ridge_solve(np.eye(2), np.eye(2), 1.0)
        np.testing.assert_allclose(sol.weights, 0.5 * np.eye(2))

    def test_zero_design(self):
        sol = ridge_solve(np.zeros((4, 3)), np.ones((4, 2)), 1.0)
        np.testing.assert_array_equal(sol.weights, np.zeros((3, 2)))

    def test_normal_equation_residual(self):
        """Oracle: the gradient A.T(AW - Y) + lam W must vanish."""
        rng = np.random.default_rng(30)
        a, y = random_problem(rng, 30, 10, 3)
        lam = 1e-3
        w = ridge_solve(a, y, lam).weights
        grad = a.T @ (a @ w - y) + lam * w
        assert np.linalg.norm(grad) <= 1e-8

    def test_shrinkage_monotone_in_lambda(self):
        rng = np.random.default_rng(31)
        a, y = random_problem(rng, 40, 12, 2)
        norms = [
            np.linalg.norm(ridge_solve(a, y, lam).weights)
            for lam in (1e-4, 1e-2, 1.0, 100.0)
        ]
        assert all(n1 >= n2 for n1, n2 in zip(norms, norms[1:]))

    def test_lambda_validation(self):
        with pytest.raises(InvalidConfig):
            ridge_solve(np.eye(2), np.eye(2), 0.0)
        with pytest.raises(InvalidConfig):
            ridge_solve(np.eye(2), np.eye(2), -1.0)

    def test_row_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ridge_solve(np.eye(3), np.ones((4, 1)), 1.0)


class TestInitNodeState:
    def test_identity_case(self):
        state = init_node_state(np.eye(2), np.eye(2), 1.0)
        np.testing.assert_allclose(state.factor, np.eye(2) / np.sqrt(2.0))

    def test_scalar_column(self):
        a = np.array([[1.0], [2.0]])
        lam = 0.5
        state = init_node_state(a, np.ones((2, 1)), lam)
        np.testing.assert_allclose(
            state.factor, [[1.0 / np.sqrt((a.T @ a).item() + lam)]]
        )

    def test_scalar_column_value(self):
        a = np.array([[3.0]])
        state = init_node_state(a, np.ones((1, 1)), 1.0)
        np.testing.assert_allclose(state.factor, [[1.0 / np.sqrt(10.0)]])

    def test_invariants_random(self):
        rng = np.random.default_rng(32)
        a, y = random_problem(rng, 25, 8, 3)
        lam = 1e-2
        state = init_node_state(a, y, lam)
        gram = a.T @ a + lam * np.eye(8)
        assert is_upper_triangular(state.factor)
        assert rel_fro(state.factor @ state.factor.T @ gram, np.eye(8)) <= 1e-8
        expected_w = state.factor @ (state.factor.T @ (a.T @ y))
        assert rel_fro(state.weights, expected_w) <= 1e-8
        np.testing.assert_array_equal(state.aty, a.T @ y)
        assert rel_fro(state.weights, ridge_solve(a, y, lam).weights) <= 1e-8


class TestInitInputState:
    def test_identity_case_both_kinds(self):
        q = init_input_state(np.eye(2), np.eye(2), 1.0, kind="q")
        np.testing.assert_allclose(q.gram_inv, 0.5 * np.eye(2))
        f = init_input_state(np.eye(2), np.eye(2), 1.0, kind="f")
        np.testing.assert_allclose(f.factor, np.eye(2) / np.sqrt(2.0))

    def test_scalar_case(self):
        a = np.array([[2.0]])
        q = init_input_state(a, np.ones((1, 1)), 1.0, kind="q")
        np.testing.assert_allclose(q.gram_inv, [[0.2]])

    def test_invariants_random(self):
        rng = np.random.default_rng(33)
        a, y = random_problem(rng, 30, 9, 2)
        lam = 0.1
        gram = a.T @ a + lam * np.eye(9)
        oracle = ridge_solve(a, y, lam).weights
        q = init_input_state(a, y, lam, kind="q")
        assert rel_fro(q.gram_inv @ gram, np.eye(9)) <= 1e-8
        assert rel_fro(q.weights, oracle) <= 1e-8
        f = init_input_state(a, y, lam, kind="f")
        assert is_upper_triangular(f.factor)
        assert rel_fro(f.factor @ f.factor.T, q.gram_inv) <= 1e-8
        assert rel_fro(f.weights, oracle) <= 1e-8

    def test_bad_kind(self):
        with pytest.raises(InvalidConfig):
            init_input_state(np.eye(2), np.eye(2), 1.0, kind="x")
