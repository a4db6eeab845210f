#!/usr/bin/env python3
"""Generate the synthetic train/test CSVs the demo schedules reference.

Writes train.csv and test.csv (10-class Gaussian blobs sharing one anchor
geometry) into demos/data/ by default.
"""

import argparse
from pathlib import Path

from broadlearn.harness.synth import write_surrogate_csv

TRAIN_SAMPLES = 900
TEST_SAMPLES = 400
INPUT_DIM = 32
CLASSES = 10


def generate(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_surrogate_csv(out_dir / "train.csv", TRAIN_SAMPLES,
                        input_dim=INPUT_DIM, classes=CLASSES, seed=1)
    write_surrogate_csv(out_dir / "test.csv", TEST_SAMPLES,
                        input_dim=INPUT_DIM, classes=CLASSES, seed=2)
    print(f"wrote {out_dir}/train.csv ({TRAIN_SAMPLES} samples) and "
          f"{out_dir}/test.csv ({TEST_SAMPLES} samples)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).parent / "data"))
    generate(Path(parser.parse_args().out))


if __name__ == "__main__":
    main()
