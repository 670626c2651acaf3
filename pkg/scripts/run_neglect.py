"""LP-FAIR with and without the fairness constraints (m = 0), same seeds.

Both runs are scored against the theta-based demands, so the fairness column
shows how many points would have been fair anyway.

    python scripts/run_neglect.py adult --seed 42
"""

import argparse
from dataclasses import replace
from pathlib import Path

from fairclust.dataset import load_csv, preset_spec
from fairclust.evaluation import run_experiment, summary_table
from fairclust.pipeline import PipelineConfig

ap = argparse.ArgumentParser()
ap.add_argument("dataset")
ap.add_argument("--seed", type=int, default=42)
ap.add_argument("--repetitions", type=int, default=5)
ap.add_argument("--out")
args = ap.parse_args()

ds = load_csv(Path("data") / f"{args.dataset}.csv", preset_spec(args.dataset))
cfg = PipelineConfig(k=5)
fair = run_experiment(ds, cfg, args.repetitions, args.seed, dataset=args.dataset)
loose = run_experiment(ds, replace(cfg, ignore_fairness=True), args.repetitions, args.seed,
                       dataset=args.dataset)
loose.algorithm = "lp_fair_m0"
table = summary_table([fair, loose])
if args.out:
    Path(args.out).write_text(table)
print(table, end="")
