"""Recursive weight updates for added nodes and added training samples.

Adding q nodes appends q columns to the design matrix; the inverse Cholesky
factor grows by a block column whose pieces come from one small inverse
Cholesky factorization, and the weights gain a rank-q correction driven by
the residual of the new columns against the current fit.

Adding p samples leaves the column space alone.  The q-form update applies
the matrix inversion lemma to the stored Gram inverse, choosing whichever
of the two algebraically equivalent forms inverts the smaller matrix (p-by-p
against k-by-k); the f-form update multiplies the stored factor by an
upper-triangular matrix obtained the same way.  Both produce weights equal
to retraining from scratch, to rounding.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatch,
    FactorizationFailure,
    InvalidConfig,
    NotPositiveDefinite,
    SingularInnerMatrix,
)
from .linalg import (
    as_matrix,
    force_symmetric,
    inverse_cholesky,
    tri_multiply,
    upper_cholesky,
)
from .ridge import InputState, NodeState, design_values

BRANCHES = ("auto", "small", "large")


def _pick_small(branch: str, batch: int, width: int) -> bool:
    """True when the p-by-p path should be used (ties go to the small path)."""
    if branch not in BRANCHES:
        raise InvalidConfig(f"branch must be one of {BRANCHES}, got {branch!r}")
    if branch == "auto":
        return batch <= width
    return branch == "small"


def add_nodes(state: NodeState, new_columns, labels) -> NodeState:
    """Grow a node state by the given activation columns.

    ``new_columns`` holds the activations of the q new nodes on the same
    samples the state was trained on (one row per trained sample);
    ``labels`` is the full label matrix for those samples.

    Raises
    ------
    FactorizationFailure
        If the new columns are rank deficient relative to the ridge
        parameter, so the internal small factorization loses positive
        definiteness.
    """
    h = design_values(new_columns)
    y = as_matrix(labels, "labels")
    a = state.design
    if h.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"new columns have {h.shape[0]} rows, state was trained on {a.shape[0]}"
        )
    if y.shape != (a.shape[0], state.output_dim):
        raise DimensionMismatch(
            f"labels must be {(a.shape[0], state.output_dim)}, got {y.shape}"
        )
    q = h.shape[1]
    if q < 1:
        raise DimensionMismatch("at least one new column is required")

    f = state.factor
    ath = a.T @ h                      # (k, q)
    proj = f.T @ ath                   # (k, q)
    inner = force_symmetric(h.T @ h + state.lam * np.eye(q) - proj.T @ proj)
    try:
        g = inverse_cholesky(inner)
    except NotPositiveDefinite as exc:
        raise FactorizationFailure(
            "new-node inner matrix is not positive definite; the added "
            "columns are rank deficient for this ridge parameter"
        ) from exc
    t = -(f @ (proj @ g))              # (k, q)

    k = f.shape[0]
    factor = np.zeros((k + q, k + q))
    factor[:k, :k] = f
    factor[:k, k:] = t
    factor[k:, k:] = g

    resid = h.T @ y - ath.T @ state.weights    # (q, c)
    weights = np.vstack([state.weights + t @ (g.T @ resid), g @ (g.T @ resid)])

    return NodeState(
        factor=factor,
        weights=weights,
        design=np.hstack([a, h]),
        aty=np.vstack([state.aty, h.T @ y]),
        lam=state.lam,
    )


def _check_input_update(state: InputState, kind: str, rows, row_labels):
    if state.kind != kind:
        raise InvalidConfig(
            f"this update requires a {kind!r}-form input state, got {state.kind!r}"
        )
    ax = design_values(rows)
    ya = as_matrix(row_labels, "row labels")
    k = state.node_count
    if ax.shape[1] != k:
        raise DimensionMismatch(f"rows have {ax.shape[1]} columns, state has {k}")
    if ax.shape[0] < 1:
        raise DimensionMismatch("at least one row is required")
    if ya.shape != (ax.shape[0], state.output_dim):
        raise DimensionMismatch(
            f"row labels must be {(ax.shape[0], state.output_dim)}, got {ya.shape}"
        )
    return ax, ya


def add_inputs_q(state: InputState, rows, row_labels, branch: str = "auto") -> InputState:
    """Fold p new samples into a Gram-inverse state (matrix inversion lemma).

    ``branch`` can force the p-by-p ("small") or k-by-k ("large") form of
    the lemma; both give the same result, only the cost differs.
    """
    ax, ya = _check_input_update(state, "q", rows, row_labels)
    p, k = ax.shape
    q_old = state.gram_inv

    if _pick_small(branch, p, k):
        c = q_old @ ax.T                       # (k, p)
        m = force_symmetric(np.eye(p) + ax @ c)
        try:
            gain = np.linalg.solve(m, c.T).T   # c @ inv(m), m symmetric
        except np.linalg.LinAlgError as exc:
            raise SingularInnerMatrix("I + Ax Q Ax.T is singular") from exc
        q_new = q_old - gain @ c.T
    else:
        m = np.eye(k) + q_old @ (ax.T @ ax)
        try:
            q_new = np.linalg.solve(m, q_old)
        except np.linalg.LinAlgError as exc:
            raise SingularInnerMatrix("I + Q Ax.T Ax is singular") from exc
        gain = q_new @ ax.T

    q_new = 0.5 * (q_new + q_new.T)
    weights = state.weights + gain @ (ya - ax @ state.weights)
    return InputState(kind="q", weights=weights, lam=state.lam, gram_inv=q_new)


def add_inputs_f(state: InputState, rows, row_labels, branch: str = "auto") -> InputState:
    """Fold p new samples into a factor-form state.

    The stored upper-triangular factor is multiplied on the right by an
    upper-triangular update whose Gram product is, depending on the branch,
    either ``I - S.T inv(I + S S.T) S`` (small, p-by-p inner inverse) or
    ``inv(I + S.T S)`` (large), where ``S`` is the new rows mapped through
    the current factor.
    """
    ax, ya = _check_input_update(state, "f", rows, row_labels)
    p, k = ax.shape
    f_old = state.factor
    s = ax @ f_old                              # (p, k)

    try:
        if _pick_small(branch, p, k):
            m = force_symmetric(np.eye(p) + s @ s.T)
            x = np.linalg.solve(m, s)           # inv(m) @ s
            v = upper_cholesky(force_symmetric(np.eye(k) - s.T @ x))
        else:
            v = inverse_cholesky(force_symmetric(np.eye(k) + s.T @ s))
    except (NotPositiveDefinite, np.linalg.LinAlgError) as exc:
        raise FactorizationFailure("sample-addition update factorization failed") from exc

    f_new = tri_multiply(f_old, v)
    gain = f_new @ (f_new.T @ ax.T)
    weights = state.weights + gain @ (ya - ax @ state.weights)
    return InputState(kind="f", weights=weights, lam=state.lam, factor=f_new)
