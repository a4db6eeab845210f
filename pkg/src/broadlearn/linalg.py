"""Dense matrix and triangular-factor primitives.

Everything here works on plain ``float64`` ndarrays.  The two factorization
entry points produce *upper*-triangular factors: ``upper_cholesky(M)``
returns ``V`` with ``V @ V.T == M`` and ``inverse_cholesky(M)`` returns ``F``
with ``F @ F.T == inv(M)``.  ``retriangularize`` restores block triangular
form after rows of an upper-triangular factor have been permuted to the
bottom, using right-applied Givens rotations, which is the kernel behind
node removal.

All functions are pure: inputs are never modified and outputs are freshly
allocated.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular
from scipy.linalg.blas import dtrmm

from .errors import (
    DimensionMismatch,
    MalformedInput,
    NotPositiveDefinite,
    NotSymmetric,
    SingularFactor,
)

# Relative tolerance for the symmetry pre-check on factorization inputs.
SYMMETRY_RTOL = 1e-10

# A Cholesky pivot below PIVOT_FLOOR times the largest input diagonal entry
# is treated as a positive-definiteness failure rather than carried forward.
PIVOT_FLOOR = 1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D C-contiguous float64 array, requiring finite entries."""
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim == 1:
        out = out.reshape(-1, 1)
    if out.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={out.ndim}")
    if not np.all(np.isfinite(out)):
        raise MalformedInput(f"{name} contains non-finite entries")
    return out


def _require_square(m: np.ndarray, name: str) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")


def symmetrize(m, name: str = "matrix") -> np.ndarray:
    """Return (M + M.T)/2 after checking M is symmetric within tolerance."""
    m = as_matrix(m, name)
    _require_square(m, name)
    scale = np.max(np.abs(m)) if m.size else 0.0
    if scale > 0.0:
        skew = np.max(np.abs(m - m.T))
        if skew > SYMMETRY_RTOL * scale:
            raise NotSymmetric(
                f"{name} is not symmetric: max |M - M.T| = {skew:.3e} "
                f"exceeds {SYMMETRY_RTOL:.0e} * max|M| = {SYMMETRY_RTOL * scale:.3e}"
            )
    return 0.5 * (m + m.T)


def force_symmetric(m: np.ndarray) -> np.ndarray:
    """Average M with its transpose, without a symmetry check.

    For matrices that are symmetric in exact arithmetic but were assembled
    from rounded matrix products: when such a matrix is also the small
    difference of large terms, its rounding asymmetry can exceed any
    tolerance relative to its own magnitude, so the caller asserts the
    symmetry it knows instead of having it checked.
    """
    return 0.5 * (m + m.T)


def _lower_cholesky(m: np.ndarray, name: str) -> np.ndarray:
    """Lower Cholesky factor with a relative pivot floor.

    ``m`` must already be symmetrized.  Raises NotPositiveDefinite when
    LAPACK reports a non-positive pivot or when the smallest pivot falls
    below ``PIVOT_FLOOR`` relative to the largest diagonal entry.
    """
    if m.shape[0] == 0:
        return np.zeros((0, 0))
    try:
        lower = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"{name} is not positive definite") from exc
    dmax = float(np.max(np.diag(m)))
    pivots = np.diag(lower) ** 2
    if dmax <= 0.0 or np.min(pivots) <= PIVOT_FLOOR * dmax:
        raise NotPositiveDefinite(
            f"{name} has a pivot below {PIVOT_FLOOR:.0e} of its largest "
            "diagonal entry"
        )
    return lower


def upper_cholesky(m) -> np.ndarray:
    """Upper-triangular V with ``V @ V.T == M`` for symmetric positive definite M.

    Computed by factorizing the index-reversed matrix with a standard lower
    Cholesky and reversing back, so a single well-tested kernel serves both
    orientations.  The diagonal of V is positive.

    Raises
    ------
    NotSymmetric, NotPositiveDefinite
    """
    m = symmetrize(m, "upper_cholesky input")
    lower = _lower_cholesky(m[::-1, ::-1], "upper_cholesky input")
    return np.ascontiguousarray(lower[::-1, ::-1])


def inverse_cholesky(m) -> np.ndarray:
    """Upper-triangular F with ``F @ F.T == inv(M)`` for SPD M.

    Obtained as the transposed inverse of the lower Cholesky factor of M,
    so ``F`` has a positive diagonal and ``F @ F.T @ M == I`` holds to
    rounding.

    Raises
    ------
    NotSymmetric, NotPositiveDefinite
    """
    m = symmetrize(m, "inverse_cholesky input")
    lower = _lower_cholesky(m, "inverse_cholesky input")
    if lower.shape[0] == 0:
        return np.zeros((0, 0))
    # solve L.T X = I  ->  X = inv(L).T, which is upper-triangular
    return np.ascontiguousarray(
        solve_triangular(lower, np.eye(lower.shape[0]), lower=True, trans="T")
    )


def solve_spd(m, rhs) -> np.ndarray:
    """Solve ``M @ X = rhs`` for symmetric positive definite M via Cholesky.

    Shares the pivot-floor guard of the factorizations, so an indefinite M
    raises NotPositiveDefinite instead of returning garbage.
    """
    m = symmetrize(m, "solve_spd matrix")
    rhs = as_matrix(rhs, "solve_spd rhs")
    if m.shape[0] != rhs.shape[0]:
        raise DimensionMismatch(
            f"solve_spd: matrix is {m.shape} but rhs has {rhs.shape[0]} rows"
        )
    lower = _lower_cholesky(m, "solve_spd matrix")
    y = solve_triangular(lower, rhs, lower=True)
    return solve_triangular(lower, y, lower=True, trans="T")


def tri_solve(factor, rhs, transpose: bool = False) -> np.ndarray:
    """Solve ``F @ X = rhs`` (or ``F.T @ X = rhs``) for upper-triangular F.

    Entries of ``factor`` below the diagonal are ignored, matching LAPACK
    triangular-solve semantics.

    Raises
    ------
    SingularFactor
        If the factor has a zero diagonal entry.
    """
    factor = as_matrix(factor, "triangular factor")
    _require_square(factor, "triangular factor")
    rhs = as_matrix(rhs, "tri_solve rhs")
    if factor.shape[0] != rhs.shape[0]:
        raise DimensionMismatch(
            f"tri_solve: factor is {factor.shape} but rhs has {rhs.shape[0]} rows"
        )
    if np.any(np.diag(factor) == 0.0):
        raise SingularFactor("triangular factor has a zero diagonal entry")
    return solve_triangular(factor, rhs, lower=False, trans="T" if transpose else "N")


def tri_multiply(factor, rhs) -> np.ndarray:
    """Product ``F @ B`` where F is upper-triangular (entries below the
    diagonal ignored), via the dedicated BLAS triangular-multiply kernel."""
    factor = np.asarray(factor, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    if factor.shape[0] != factor.shape[1] or factor.shape[1] != rhs.shape[0]:
        raise DimensionMismatch(
            f"tri_multiply: factor {factor.shape} against rhs {rhs.shape}"
        )
    return dtrmm(1.0, factor, rhs, side=0, lower=0)


def is_upper_triangular(m) -> bool:
    """True when every entry strictly below the diagonal is exactly zero."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return not np.any(np.tril(m, -1) != 0.0)


def retriangularize(
    factor_permuted,
    boundary: int,
    rotation_log: list | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block-triangularize a row-permuted upper-triangular factor.

    The input is a k-by-k matrix obtained by moving some rows of an
    upper-triangular matrix to the bottom; ``boundary`` is the number of
    rows that kept their relative order at the top.  A sequence of Givens
    rotations is applied on the right (so the product ``F @ F.T`` is
    preserved exactly up to rounding) until the matrix has the form::

        [ head  coupling ]
        [  0    trailing ]

    with ``head`` (boundary-by-boundary) and ``trailing`` upper-triangular.
    Rotations annihilate the leftmost sub-diagonal entry of each moved row,
    sweeping moved rows bottom-up; for genuinely row-permuted triangular
    input the top block never receives sub-diagonal fill-in, so the zeros of
    the result are structural (written as exact zeros, not small values).
    Columns are finally sign-flipped so every diagonal entry is positive.

    Parameters
    ----------
    factor_permuted : array, shape (k, k)
    boundary : int
        Size of the leading block; k - boundary rows were moved down.
    rotation_log : list, optional
        When given, a (row, col) pair is appended for every rotation applied
        (zero-based; the rotation mixes columns col and col + 1 to zero the
        entry at (row, col)).

    Returns
    -------
    head : ndarray, shape (boundary, boundary)
    coupling : ndarray, shape (boundary, k - boundary)
    trailing : ndarray, shape (k - boundary, k - boundary)

    Raises
    ------
    MalformedInput
        If the leading block is left non-triangular, i.e. the input was not
        a row permutation of an upper-triangular matrix.
    """
    work = as_matrix(factor_permuted, "permuted factor").copy()
    _require_square(work, "permuted factor")
    k = work.shape[0]
    if not 0 <= boundary <= k:
        raise DimensionMismatch(
            f"boundary {boundary} outside [0, {k}] for a {k}x{k} factor"
        )

    for row in range(k - 1, boundary - 1, -1):
        # the sweep is contiguous once started: each rotation leaves a
        # positive entry in the next column, so only the first nonzero
        # needs to be searched for
        nonzero = np.flatnonzero(work[row, :row])
        if nonzero.size == 0:
            continue
        for col in range(int(nonzero[0]), row):
            a = work[row, col]
            if a == 0.0:
                continue
            b = work[row, col + 1]
            r = math.hypot(a, b)
            c = b / r
            s = a / r
            u = work[:, col].copy()
            v = work[:, col + 1]
            work[:, col] = c * u - s * v
            work[:, col + 1] = s * u + c * v
            work[row, col] = 0.0
            if rotation_log is not None:
                rotation_log.append((row, col))

    head = work[:boundary, :boundary]
    if np.any(np.tril(head, -1) != 0.0):
        raise MalformedInput(
            "leading block is not upper-triangular after rotation sweep; "
            "input was not a row-permuted triangular matrix"
        )

    flip = np.diag(work) < 0.0
    if np.any(flip):
        work[:, flip] *= -1.0

    return (
        work[:boundary, :boundary].copy(),
        work[:boundary, boundary:].copy(),
        work[boundary:, boundary:].copy(),
    )
