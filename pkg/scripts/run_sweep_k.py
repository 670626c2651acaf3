"""Normalized cost and fairness of LP-FAIR for k = 3..10 with 30k sampled points.

    python scripts/run_sweep_k.py adult --out results/adult_sweep.csv
"""

import sys

from fairclust.cli import main

sys.exit(main(["sweep-k", *sys.argv[1:]]))
