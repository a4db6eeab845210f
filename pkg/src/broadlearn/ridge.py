"""Batch ridge regression and the states maintained by the recursive updates.

``ridge_solve`` is the from-scratch oracle: it forms the regularized normal
equations and solves them with a general LU solve, deliberately sharing no
code with the Cholesky-factor update paths it is used to check.

``init_node_state`` and ``init_input_state`` build the two kinds of running
state.  A :class:`NodeState` carries the upper-triangular factor ``F`` with
``F @ F.T = inv(A.T A + lam I)`` together with the design matrix, the output
weights and a cached ``A.T Y``; node-dimension updates grow and shrink it.
An :class:`InputState` carries either the Gram inverse itself (``kind="q"``)
or its inverse Cholesky factor (``kind="f"``) plus the weights, and is all
the sample-dimension updates ever need: old rows are deliberately not
retained, keeping the state O(k^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidConfig
from .linalg import as_matrix, inverse_cholesky, solve_spd

INPUT_STATE_KINDS = ("q", "f")


def design_values(a) -> np.ndarray:
    """Accept an ExpandedMatrix or a plain array and return the array."""
    return as_matrix(getattr(a, "values", a), "design matrix")


def _check_problem(a: np.ndarray, y: np.ndarray, lam: float) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0.0:
        raise InvalidConfig(f"ridge parameter must be a positive real, got {lam}")
    if a.shape[0] != y.shape[0]:
        raise DimensionMismatch(
            f"design has {a.shape[0]} rows but labels have {y.shape[0]}"
        )
    return lam


@dataclass(frozen=True, eq=False)
class RidgeSolution:
    """Output weights minimizing ||A W - Y||^2 + lam ||W||^2."""

    weights: np.ndarray
    lam: float


@dataclass(frozen=True, eq=False)
class NodeState:
    """Running state for node-dimension (column) updates.

    factor   : (k, k) upper-triangular, factor @ factor.T = inv(A.T A + lam I)
    weights  : (k, c) current output weights
    design   : (l, k) expanded input matrix the state was trained on
    aty      : (k, c) cached design.T @ labels
    """

    factor: np.ndarray
    weights: np.ndarray
    design: np.ndarray
    aty: np.ndarray
    lam: float

    @property
    def node_count(self) -> int:
        return self.factor.shape[0]

    @property
    def sample_count(self) -> int:
        return self.design.shape[0]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, eq=False)
class InputState:
    """Running state for sample-dimension (row) updates.

    kind "q" stores the Gram inverse ``gram_inv``; kind "f" stores its
    upper-triangular inverse Cholesky factor ``factor``.  Neither retains
    the training rows themselves.
    """

    kind: str
    weights: np.ndarray
    lam: float
    gram_inv: np.ndarray | None = None
    factor: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in INPUT_STATE_KINDS:
            raise InvalidConfig(f"input state kind must be one of {INPUT_STATE_KINDS}")
        if self.kind == "q" and self.gram_inv is None:
            raise InvalidConfig("q-form input state requires gram_inv")
        if self.kind == "f" and self.factor is None:
            raise InvalidConfig("f-form input state requires factor")

    @property
    def node_count(self) -> int:
        m = self.gram_inv if self.kind == "q" else self.factor
        return m.shape[0]

    @property
    def output_dim(self) -> int:
        return self.weights.shape[1]


def ridge_solve(a, y, lam: float) -> RidgeSolution:
    """Solve the batch ridge problem from scratch (the retrain oracle).

    Returns W = inv(A.T A + lam I) @ A.T @ Y computed by a dense LU solve
    on the explicitly formed Gram matrix.

    Raises
    ------
    InvalidConfig, DimensionMismatch
    """
    a = design_values(a)
    y = as_matrix(y, "labels")
    lam = _check_problem(a, y, lam)
    k = a.shape[1]
    gram = a.T @ a + lam * np.eye(k)
    weights = np.linalg.solve(gram, a.T @ y)
    return RidgeSolution(weights=weights, lam=lam)


def init_node_state(a, y, lam: float) -> NodeState:
    """Build the node-dimension state for a trained design matrix."""
    a = design_values(a)
    y = as_matrix(y, "labels")
    lam = _check_problem(a, y, lam)
    k = a.shape[1]
    factor = inverse_cholesky(a.T @ a + lam * np.eye(k))
    aty = a.T @ y
    weights = factor @ (factor.T @ aty)
    return NodeState(factor=factor, weights=weights, design=a, aty=aty, lam=lam)


def init_input_state(a, y, lam: float, kind: str = "q") -> InputState:
    """Build the sample-dimension state (Gram inverse or factor form)."""
    a = design_values(a)
    y = as_matrix(y, "labels")
    lam = _check_problem(a, y, lam)
    if kind not in INPUT_STATE_KINDS:
        raise InvalidConfig(f"input state kind must be one of {INPUT_STATE_KINDS}")
    k = a.shape[1]
    gram = a.T @ a + lam * np.eye(k)
    aty = a.T @ y
    if kind == "q":
        gram_inv = solve_spd(gram, np.eye(k))
        gram_inv = 0.5 * (gram_inv + gram_inv.T)
        return InputState(kind="q", weights=gram_inv @ aty, lam=lam, gram_inv=gram_inv)
    factor = inverse_cholesky(gram)
    return InputState(kind="f", weights=factor @ (factor.T @ aty), lam=lam, factor=factor)
