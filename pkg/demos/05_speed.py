#!/usr/bin/env python3
"""Time removal updates against full retraining.

Equivalent to `broadlearn bench --mode <nodes|inputs> ...`.  The interesting
number is the speedup: the downdate touches O(k^2)-to-O(k^3) work while a
retrain pays O(l k^2) to rebuild the Gram matrix before solving.
"""

from broadlearn.harness.bench import bench, render_bench


def main():
    print(render_bench(bench(mode="nodes", samples=5000, width=500, removed=50)))
    print(render_bench(bench(mode="inputs", samples=8000, width=600, removed=60)))
    print(render_bench(bench(mode="inputs", samples=8000, width=600, removed=1)))


if __name__ == "__main__":
    main()
