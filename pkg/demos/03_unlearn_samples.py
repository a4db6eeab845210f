#!/usr/bin/env python3
"""Unlearn training samples exactly, two ways.

Algorithm 1 downdates the stored Gram inverse; algorithm 2 downdates its
inverse Cholesky factor.  Both reproduce the ridge solution of the surviving
data without touching it, agree with each other to rounding, and refuse to
"remove" rows that were never trained on.
"""

import numpy as np

from broadlearn import (
    InputRemovalBatch,
    NotPositiveDefinite,
    init_input_state,
    remove_inputs_f,
    remove_inputs_q,
    ridge_solve,
)

LAM = 1e-3
rng = np.random.default_rng(3)


def deviation(w, reference):
    return np.linalg.norm(w - reference) / np.linalg.norm(reference)


def main():
    a = rng.standard_normal((500, 40))
    y = rng.standard_normal((500, 5))
    q_state = init_input_state(a, y, LAM, kind="q")
    f_state = init_input_state(a, y, LAM, kind="f")
    print("trained on 500 samples, 40 nodes; the states keep no training rows")

    n = 500
    for delta in (20, 40, 120):   # below, at, and above the node count
        batch = InputRemovalBatch(rows=a[n - delta:n], labels=y[n - delta:n])
        q_state = remove_inputs_q(q_state, batch)
        f_state = remove_inputs_f(f_state, batch)
        n -= delta
        oracle = ridge_solve(a[:n], y[:n], LAM).weights
        print(f"forgot {delta:3d} rows -> l={n}: "
              f"alg1 {deviation(q_state.weights, oracle):.2e}, "
              f"alg2 {deviation(f_state.weights, oracle):.2e}, "
              f"alg1 vs alg2 {deviation(q_state.weights, f_state.weights):.2e}")

    # rows that were never trained on break positive definiteness and are
    # rejected instead of silently corrupting the state
    foreign = 10.0 * rng.standard_normal((5, 40))
    try:
        remove_inputs_q(q_state, InputRemovalBatch(rows=foreign,
                                                   labels=np.zeros((5, 5))))
    except NotPositiveDefinite as exc:
        print(f"foreign rows rejected: {exc}")


if __name__ == "__main__":
    main()
