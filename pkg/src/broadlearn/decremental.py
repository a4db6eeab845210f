"""Exact weight downdates for removed nodes and removed training samples.

Node removal permutes the doomed rows of the factor and weights to the
bottom, restores block-triangular form with right-applied Givens rotations
(which preserves the factor's Gram product exactly), and then eliminates the
trailing block's contribution from the leading weights with one triangular
solve.  The surviving state is identical, to rounding, to retraining on the
surviving columns.

Sample removal comes in two algorithms that mirror the two addition
algorithms: the q-form downdates the stored Gram inverse through the matrix
inversion lemma, and the f-form multiplies the stored inverse Cholesky
factor by an upper-triangular downdate.  For both, loss of positive
definiteness in the small inner matrix is the signature that the rows being
removed were never part of the trained set, and it is reported instead of
being papered over.

Removed rows and labels are not retained; undoing a removal means re-adding
the data through the incremental module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidConfig,
    NotPositiveDefinite,
    SingularTrailingBlock,
)
from .linalg import (
    as_matrix,
    force_symmetric,
    inverse_cholesky,
    retriangularize,
    solve_spd,
    tri_multiply,
    tri_solve,
    upper_cholesky,
)
from .ridge import InputState, NodeState, design_values


@dataclass(frozen=True)
class NodeRemovalPlan:
    """Strictly increasing column positions to remove from a node state."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise InvalidConfig("a removal plan needs at least one index")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidConfig(f"indices must be strictly increasing, got {idx}")
        if idx[0] < 0:
            raise IndexOutOfRange(f"negative node index {idx[0]}")
        object.__setattr__(self, "indices", idx)

    def permutation(self, total: int) -> np.ndarray:
        """Row order placing removed rows at the bottom, first index last.

        Sending the lowest removed index to the very bottom gives each moved
        row the longest elimination sweep first, which is the order the
        Givens schedule in ``retriangularize`` expects.
        """
        if self.indices[-1] >= total:
            raise IndexOutOfRange(
                f"node index {self.indices[-1]} out of range for {total} nodes"
            )
        removed = set(self.indices)
        kept = [i for i in range(total) if i not in removed]
        return np.array(kept + list(reversed(self.indices)), dtype=np.intp)


@dataclass(frozen=True, eq=False)
class InputRemovalBatch:
    """Activations and labels of the training rows being removed."""

    rows: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        rows = design_values(self.rows)
        labels = as_matrix(self.labels, "removed labels")
        if rows.shape[0] < 1:
            raise DimensionMismatch("at least one removed row is required")
        if labels.shape[0] != rows.shape[0]:
            raise DimensionMismatch(
                f"{rows.shape[0]} removed rows but {labels.shape[0]} removed labels"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def count(self) -> int:
        return self.rows.shape[0]


def remove_nodes(state: NodeState, plan) -> NodeState:
    """Drop the planned columns from a node state without retraining.

    ``plan`` may be a :class:`NodeRemovalPlan` or any iterable of column
    positions.

    Raises
    ------
    IndexOutOfRange
        If an index does not address a current column.
    InvalidConfig
        If the plan removes every node.
    SingularTrailingBlock
        If the trailing triangular block is singular (impossible for a
        positive ridge parameter; checked defensively).
    """
    if not isinstance(plan, NodeRemovalPlan):
        plan = NodeRemovalPlan(tuple(sorted(int(i) for i in plan)))
    k = state.node_count
    removed = len(plan.indices)
    if removed >= k:
        raise InvalidConfig(f"cannot remove all {k} nodes")
    perm = plan.permutation(k)
    boundary = k - removed

    head, coupling, trailing = retriangularize(state.factor[perm], boundary)
    if np.any(np.diag(trailing) == 0.0):
        raise SingularTrailingBlock("trailing block of the permuted factor is singular")

    w_perm = state.weights[perm]
    weights = w_perm[:boundary] - coupling @ tri_solve(trailing, w_perm[boundary:])

    kept = perm[:boundary]
    if np.array_equal(kept, np.arange(boundary)):
        # trailing-block removal keeps a contiguous prefix; a view avoids
        # copying the whole design matrix (states never mutate their arrays)
        design = state.design[:, :boundary]
    else:
        design = state.design[:, kept]
    return NodeState(
        factor=head,
        weights=weights,
        design=design,
        aty=state.aty[kept],
        lam=state.lam,
    )


def _check_removal(state: InputState, kind: str, batch: InputRemovalBatch):
    if state.kind != kind:
        raise InvalidConfig(
            f"this update requires a {kind!r}-form input state, got {state.kind!r}"
        )
    if batch.rows.shape[1] != state.node_count:
        raise DimensionMismatch(
            f"removed rows have {batch.rows.shape[1]} columns, "
            f"state has {state.node_count}"
        )
    if batch.labels.shape[1] != state.output_dim:
        raise DimensionMismatch(
            f"removed labels have {batch.labels.shape[1]} columns, "
            f"state outputs {state.output_dim}"
        )


def remove_inputs_q(state: InputState, batch: InputRemovalBatch) -> InputState:
    """Unlearn trained samples from a Gram-inverse state.

    Applies the inverse matrix inversion lemma: for d removed rows the small
    path inverts a d-by-d matrix, the large path (d >= k, ties go small) a
    k-by-k one.

    Raises
    ------
    NotPositiveDefinite
        If ``I - Ad Q Ad.T`` (or the downdated Gram inverse) loses positive
        definiteness, i.e. the rows were not actually in the trained set.
    """
    _check_removal(state, "q", batch)
    ad, yd = batch.rows, batch.labels
    d, k = ad.shape
    q_old = state.gram_inv
    c = q_old @ ad.T                                   # (k, d)
    w_shift = state.weights - c @ yd

    if d <= k:
        m = force_symmetric(np.eye(d) - ad @ c)
        try:
            # one factorization serves both right-hand sides
            sol = solve_spd(m, np.hstack([c.T, ad @ w_shift]))
        except NotPositiveDefinite as exc:
            raise NotPositiveDefinite(
                "I - Ad Q Ad.T is not positive definite; the removed rows "
                "were not in the trained set or the ridge parameter is not "
                "positive"
            ) from exc
        q_new = q_old + c @ sol[:, :k]
        weights = w_shift + c @ sol[:, k:]
    else:
        # The downdate factors as (I - Q Ad.T Ad)^{-1} = (R - Ad.T Ad)^{-1} R
        # with R the stored inverse's inverse, so both products reduce to a
        # single symmetric positive definite solve; this keeps the guard
        # structural and avoids a worse-conditioned nonsymmetric system.
        r_old = solve_spd(q_old, np.eye(k))
        r_new = force_symmetric(r_old - ad.T @ ad)
        try:
            sol = solve_spd(r_new, np.hstack([np.eye(k), r_old @ w_shift]))
        except NotPositiveDefinite as exc:
            raise NotPositiveDefinite(
                "downdated Gram matrix is not positive definite; the removed "
                "rows were not in the trained set or the ridge parameter is "
                "not positive"
            ) from exc
        q_new = sol[:, :k]
        weights = sol[:, k:]

    q_new = 0.5 * (q_new + q_new.T)
    return InputState(kind="q", weights=weights, lam=state.lam, gram_inv=q_new)


def remove_inputs_f(state: InputState, batch: InputRemovalBatch) -> InputState:
    """Unlearn trained samples from a factor-form state.

    The stored factor is multiplied by an upper-triangular downdate V.  For
    d <= k removed rows, V is built in two stages: first the inverse
    Cholesky factor of the small matrix ``I - S S.T``, then the upper
    Cholesky factor of the rank-d correction it induces; for d >= k, V is
    the inverse Cholesky factor of ``I - S.T S`` directly.  Weights follow
    from the old weights by a triangular solve (never an explicit inverse).

    Raises
    ------
    NotPositiveDefinite
        Same meaning as for :func:`remove_inputs_q`.
    """
    _check_removal(state, "f", batch)
    ad, yd = batch.rows, batch.labels
    d, k = ad.shape
    f_old = state.factor
    s = ad @ f_old                                     # (d, k)

    if d <= k:
        small = inverse_cholesky(force_symmetric(np.eye(d) - s @ s.T))
        u = s.T @ small                                # (k, d)
        v = upper_cholesky(force_symmetric(np.eye(k) + u @ u.T))
    else:
        v = inverse_cholesky(force_symmetric(np.eye(k) - s.T @ s))

    f_new = tri_multiply(f_old, v)
    z = tri_solve(f_old, state.weights)                # inv(F) @ W
    weights = f_new @ (v.T @ z) - f_new @ (f_new.T @ (ad.T @ yd))
    return InputState(kind="f", weights=weights, lam=state.lam, factor=f_new)
