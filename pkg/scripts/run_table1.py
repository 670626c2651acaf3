"""Five-repetition benchmark table (LP-FAIR, Gonzalez, Hochbaum-Shmoys) for each available dataset.

    python scripts/run_table1.py --seed 42 --out results/
"""

import argparse
import sys
from pathlib import Path

from fairclust.cli import main

ap = argparse.ArgumentParser()
ap.add_argument("--seed", type=int, default=42)
ap.add_argument("--out", default="results")
ap.add_argument("--datasets", nargs="+", default=["adult", "bank", "diabetes"])
args = ap.parse_args()

status = 0
for name in args.datasets:
    if not (Path("data") / f"{name}.csv").is_file():
        print(f"skipping {name}: data/{name}.csv not found", file=sys.stderr)
        status = 2
        continue
    status = max(status, main(["reproduce", name, "--seed", str(args.seed), "--out", args.out]))
sys.exit(status)
