"""Command-line entry point: cluster, reproduce, sweep-k, oracle-check, graph-dump."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .cost import CostConfig, data_point_facilities
from .dataset import PRESETS, DataError, FeatureSpec, UnknownColumnError, load_csv, preset_spec, sample
from .evaluation import (DegenerateDataError, run_experiment, score, summary_table, sweep_k,
                         write_csv)
from .fair_assign import DemandError, InfeasibleError, RoundingConfig
from .oracle_check import run_checks
from .pipeline import PipelineConfig, fair_demands, solve_ifc
from .similarity import SimilarityConfig, build_graph

log = logging.getLogger("fairclust")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INFEASIBLE, EXIT_ORACLE = 0, 1, 2, 3, 4
REPRODUCE_METHODS = ("lp_fair", "gonzalez", "hochbaum_shmoys")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dataset: str | None = None
    features: dict | None = None
    k: int = 5
    algorithm: str = "kmeans"
    p: int = 2
    point_metric: str = "euclidean"
    gamma: float = 0.5
    theta: float = 0.5
    feature_metric: str = "euclidean"
    delta: float = 0.1
    trials: int | None = None
    seed: int = 0
    sample_size: int | None = 200
    repetitions: int = 5
    jobs: int = 1

    @classmethod
    def load(cls, path) -> "RunConfig":
        if path is None:
            return cls()
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config key {unknown[0]!r}")
        return cls(**d)

    def override(self, args) -> "RunConfig":
        flags = {name: getattr(args, name, None)
                 for name in ("k", "gamma", "theta", "delta", "p", "seed", "jobs", "algorithm")}
        return replace(self, **{k: v for k, v in flags.items() if v is not None})

    def feature_spec(self) -> FeatureSpec:
        if self.features is not None:
            return FeatureSpec.from_dict(self.features)
        if self.dataset is None:
            raise ConfigError("config needs either 'features' or a preset 'dataset'")
        try:
            return preset_spec(self.dataset)
        except KeyError as e:
            raise ConfigError(e.args[0]) from None

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            k=self.k, vanilla_algorithm=self.algorithm,
            cost=CostConfig(self.p, self.point_metric),
            similarity=SimilarityConfig(self.gamma, self.feature_metric, self.theta, self.k),
            rounding=RoundingConfig(self.delta, self.trials, self.seed))

    def echo(self) -> dict:
        return asdict(self)


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(cfg: RunConfig, data_path):
    if data_path is None:
        if cfg.dataset is None:
            raise ConfigError("no --data given and no preset dataset in the config")
        data_path = Path("data") / f"{cfg.dataset}.csv"
    ds = load_csv(data_path, cfg.feature_spec())
    if ds.dropped_rows:
        log.info("dropped %d rows with missing values", ds.dropped_rows)
    return ds


def cmd_cluster(args) -> int:
    cfg = RunConfig.load(args.config).override(args)
    pcfg = cfg.pipeline()
    ds = _load(cfg, args.data)
    if cfg.sample_size is not None and cfg.sample_size < ds.n:
        ds = sample(ds, cfg.sample_size, cfg.seed)
    assign, vanilla = solve_ifc(ds, pcfg)
    graph = fair_demands(ds, pcfg, vanilla.k_found)
    metrics = asdict(score(assign, graph, ds, pcfg.cost, data_point_facilities(ds)))
    metrics["config"] = cfg.echo()
    out = Path(args.out or "out")
    out.mkdir(parents=True, exist_ok=True)
    (out / "assignment.json").write_text(assign.to_json() + "\n")
    (out / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
    _emit(json.dumps(metrics, indent=2))
    return EXIT_OK


def _dataset_arg(name) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown dataset {name!r}; supported datasets: {', '.join(PRESETS)}")
    return RunConfig(dataset=name)


def _preset_data(cfg: RunConfig, args):
    path = Path(args.data) if args.data else Path("data") / f"{cfg.dataset}.csv"
    if not path.is_file():
        raise DataError(f"{path} not found; download the UCI {cfg.dataset} data and prepare it "
                        f"as described in the README")
    return load_csv(path, cfg.feature_spec())


def cmd_reproduce(args) -> int:
    cfg = _dataset_arg(args.dataset)
    if args.config:
        cfg = replace(RunConfig.load(args.config), dataset=args.dataset)
    cfg = cfg.override(args)
    ds = _preset_data(cfg, args)
    reports = []
    for method in REPRODUCE_METHODS:
        log.info("%s: running %s x%d", cfg.dataset, method, cfg.repetitions)
        reports.append(run_experiment(ds, cfg.pipeline(), cfg.repetitions, cfg.seed,
                                      cfg.sample_size, method, cfg.dataset, cfg.jobs))
    table = summary_table(reports)
    out = Path(args.out or "results")
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{cfg.dataset}_table1.csv").write_text(table)
    (out / f"{cfg.dataset}_runs.csv").write_text(write_csv(reports))
    _emit(table)
    return EXIT_OK


def cmd_sweep_k(args) -> int:
    cfg = _dataset_arg(args.dataset).override(args)
    ds = _preset_data(cfg, args)
    reports = sweep_k(ds, cfg.pipeline(), (args.k_min, args.k_max), args.per_k, cfg.repetitions,
                      cfg.seed, "lp_fair", cfg.dataset, cfg.jobs)
    text = write_csv(reports)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    _emit(text)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    res = run_checks(args.trials, args.max_n, args.seed or 0, args.corrupt_lp)
    if res.failure:
        dump = Path(args.out or "oracle_failure.json")
        dump.parent.mkdir(parents=True, exist_ok=True)
        dump.write_text(json.dumps(res.dump, indent=2) + "\n")
        print(f"oracle violation: {res.failure}", file=sys.stderr)
        print(f"instance dump: {dump}", file=sys.stderr)
        return EXIT_ORACLE
    _emit(json.dumps({"checks": res.checks, "violations": 0}))
    return EXIT_OK


def cmd_graph_dump(args) -> int:
    cfg = RunConfig.load(args.config).override(args)
    ds = _load(cfg, args.data)
    if cfg.sample_size is not None and cfg.sample_size < ds.n:
        ds = sample(ds, cfg.sample_size, cfg.seed)
    graph = build_graph(ds, cfg.pipeline().similarity)
    text = graph.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        _emit(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config")
    common.add_argument("--data")
    common.add_argument("--out")
    common.add_argument("--seed", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--gamma", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--p", type=int)
    common.add_argument("--algorithm", choices=("kmeans", "gonzalez", "hochbaum_shmoys"))
    common.add_argument("--jobs", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="fairclust", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("cluster", parents=[common], help="one fair clustering run")
    rp = sub.add_parser("reproduce", parents=[common], help="five-repetition benchmark table")
    rp.add_argument("dataset")
    sk = sub.add_parser("sweep-k", parents=[common], help="normalized cost and fairness versus k")
    sk.add_argument("dataset")
    sk.add_argument("--k-min", type=int, default=3)
    sk.add_argument("--k-max", type=int, default=10)
    sk.add_argument("--per-k", type=int, default=30, help="points sampled per cluster")
    oc = sub.add_parser("oracle-check", parents=[common], help="randomized oracle cross-checks")
    oc.add_argument("--trials", type=int, default=100)
    oc.add_argument("--max-n", type=int, default=8)
    oc.add_argument("--corrupt-lp", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("graph-dump", parents=[common], help="write the similarity graph as JSON")
    return ap


COMMANDS = {"cluster": cmd_cluster, "reproduce": cmd_reproduce, "sweep-k": cmd_sweep_k,
            "oracle-check": cmd_oracle_check, "graph-dump": cmd_graph_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING, force=True)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UnknownColumnError, DemandError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, DegenerateDataError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, TypeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
