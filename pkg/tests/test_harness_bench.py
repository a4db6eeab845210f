"""Benchmark harness: removal updates against full retraining."""

import pytest

from broadlearn.errors import InvalidConfig
from broadlearn.harness.bench import bench


class TestBench:
    def test_node_prune_beats_retrain_at_reference_shape(self):
        result = bench(mode="nodes", samples=5000, width=500, removed=50, seed=0)
        assert result.retrain_ms > 0
        assert result.speedups["node-prune"] > 1.0

    def test_single_sample_removal_is_cheap(self):
        """The one-row downdate touches only k^2-scale work, far under the
        l k^2 retrain."""
        result = bench(mode="inputs", samples=4000, width=300, removed=1, seed=1)
        assert result.speedups["alg1"] > 2.0
        assert result.speedups["alg2"] > 1.0

    def test_near_total_prune_runs(self):
        """Removing almost every node is legal; the speedup is reported,
        not asserted."""
        result = bench(mode="nodes", samples=400, width=60, removed=59, seed=2)
        assert result.update_ms["node-prune"] >= 0.0

    def test_validation(self):
        with pytest.raises(InvalidConfig):
            bench(mode="columns")
        with pytest.raises(InvalidConfig):
            bench(mode="nodes", samples=100, width=50, removed=50)
        with pytest.raises(InvalidConfig):
            bench(mode="inputs", samples=100, width=50, removed=100)
