"""Wall-clock comparison of decremental updates against full retraining.

For a removal step the interesting number is the speedup: how many times
faster the recursive downdate is than solving the reduced problem from
scratch.  Data is synthetic (seeded standard normal), since only shapes
matter for timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..decremental import InputRemovalBatch, remove_inputs_f, remove_inputs_q, remove_nodes
from ..errors import InvalidConfig
from ..ridge import init_input_state, init_node_state, ridge_solve

MODES = ("nodes", "inputs")


@dataclass(frozen=True)
class BenchResult:
    """Timings of one removal step; speedups are retrain time / update time."""

    mode: str
    samples: int
    width: int
    removed: int
    lam: float
    update_ms: dict[str, float]
    retrain_ms: float

    @property
    def speedups(self) -> dict[str, float]:
        return {
            name: self.retrain_ms / ms if ms > 0.0 else float("inf")
            for name, ms in self.update_ms.items()
        }


def _timed(fn) -> tuple[float, object]:
    """Steady-state wall time: one untimed warmup call, then one timed call.

    All timed callables are pure, so the warmup has no side effects; it
    keeps one-time allocator and code-path costs out of the comparison.
    """
    fn()
    started = time.perf_counter()
    out = fn()
    return 1000.0 * (time.perf_counter() - started), out


def bench(
    mode: str = "inputs",
    samples: int = 10000,
    width: int = 1000,
    removed: int = 100,
    lam: float = 1e-3,
    seed: int = 0,
    outputs: int = 10,
) -> BenchResult:
    """Time one removal step of the given shape against a full retrain."""
    if mode not in MODES:
        raise InvalidConfig(f"bench mode must be one of {MODES}")
    if removed < 1 or (mode == "nodes" and removed >= width) or (
        mode == "inputs" and removed >= samples
    ):
        raise InvalidConfig(
            f"cannot remove {removed} from {width if mode == 'nodes' else samples}"
        )
    rng = np.random.default_rng([int(seed), 0x62656E63])  # "benc"
    a = rng.standard_normal((samples, width))
    y = rng.standard_normal((samples, outputs))

    update_ms: dict[str, float] = {}
    if mode == "nodes":
        # prune the trailing block, the typical "drop the most recently
        # added nodes" shape of snapshot experiments
        state = init_node_state(a, y, lam)
        doomed = tuple(range(width - removed, width))
        update_ms["node-prune"], _ = _timed(lambda: remove_nodes(state, doomed))
        retrain_ms, _ = _timed(lambda: ridge_solve(a[:, : width - removed], y, lam))
    else:
        q_state = init_input_state(a, y, lam, kind="q")
        f_state = init_input_state(a, y, lam, kind="f")
        batch = InputRemovalBatch(rows=a[-removed:], labels=y[-removed:])
        update_ms["alg1"], _ = _timed(lambda: remove_inputs_q(q_state, batch))
        update_ms["alg2"], _ = _timed(lambda: remove_inputs_f(f_state, batch))
        retrain_ms, _ = _timed(lambda: ridge_solve(a[:-removed], y[:-removed], lam))

    return BenchResult(
        mode=mode,
        samples=samples,
        width=width,
        removed=removed,
        lam=float(lam),
        update_ms=update_ms,
        retrain_ms=retrain_ms,
    )


def render_bench(result: BenchResult) -> str:
    lines = [
        f"mode={result.mode}  samples={result.samples}  nodes={result.width}  "
        f"removed={result.removed}  lambda={result.lam:g}",
        f"full retrain: {result.retrain_ms:10.2f} ms",
    ]
    for name, ms in result.update_ms.items():
        lines.append(
            f"{name:>12}: {ms:10.2f} ms   speedup x{result.speedups[name]:.1f}"
        )
    return "\n".join(lines) + "\n"
