import json

import numpy as np
import pytest

from fairclust import cli, pipeline


@pytest.fixture
def tiny(tmp_path):
    rng = np.random.default_rng(0)
    lines = ["x,y,group,score"]
    for i in range(40):
        lines.append(f"{rng.random():.4f},{rng.random():.4f},{'ab'[i % 2]},{rng.integers(0, 5)}")
    data = tmp_path / "tiny.csv"
    data.write_text("\n".join(lines) + "\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "features": {"distance_columns": ["x", "y"], "fairness_columns": ["group", "score"],
                     "kinds": {"group": "categorical"}},
        "k": 3, "sample_size": None}))
    return data, cfg, tmp_path


def test_cluster_writes_outputs(tiny, capsys):
    data, cfg, tmp = tiny
    out = tmp / "run"
    assert cli.main(["cluster", "--config", str(cfg), "--data", str(data), "--out", str(out)]) == 0
    assign = json.loads((out / "assignment.json").read_text())
    metrics = json.loads((out / "metrics.json").read_text())
    assert len(assign["phi"]) == 40 and set(assign) == {"phi", "cost", "fairness", "trial"}
    assert 0 <= metrics["fairness"] <= 100
    assert metrics["config"]["k"] == 3
    # stdout is the metrics document and nothing else
    assert json.loads(capsys.readouterr().out)["k_found"] == metrics["k_found"]


def test_flags_override_config(tiny):
    data, cfg, tmp = tiny
    out = tmp / "run"
    cli.main(["cluster", "--config", str(cfg), "--data", str(data), "--out", str(out), "--k", "2",
              "--theta", "0.8", "--algorithm", "gonzalez"])
    echo = json.loads((out / "metrics.json").read_text())["config"]
    assert (echo["k"], echo["theta"], echo["algorithm"]) == (2, 0.8, "gonzalez")


def test_missing_column_exit_1(tiny, capsys):
    data, _, tmp = tiny
    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"features": {"distance_columns": ["x", "nope"],
                                            "fairness_columns": ["score"]}}))
    assert cli.main(["cluster", "--config", str(bad), "--data", str(data)]) == 1
    assert "nope" in capsys.readouterr().err


def test_bad_config_exit_1(tiny, tmp_path):
    data, _, _ = tiny
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert cli.main(["cluster", "--config", str(p), "--data", str(data)]) == 1
    p.write_text(json.dumps({"kk": 3}))
    assert cli.main(["cluster", "--config", str(p), "--data", str(data)]) == 1


def test_missing_data_exit_2(tiny):
    _, cfg, tmp = tiny
    assert cli.main(["cluster", "--config", str(cfg), "--data", str(tmp / "none.csv")]) == 2


def test_infeasible_exit_3(tiny, monkeypatch, capsys):
    data, cfg, tmp = tiny
    from fairclust.fair_assign import InfeasibleError

    def boom(*a, **k):
        raise InfeasibleError("fairness LP is infeasible")
    monkeypatch.setattr(cli, "solve_ifc", boom)
    assert cli.main(["cluster", "--config", str(cfg), "--data", str(data),
                     "--out", str(tmp / "o")]) == 3
    assert "infeasible" in capsys.readouterr().err


def test_clamp_warning_on_stderr(tiny, monkeypatch, capsys):
    data, cfg, tmp = tiny
    real = pipeline.build_graph
    monkeypatch.setattr(pipeline, "build_graph",
                        lambda d, c: (lambda g: g.with_demands(g.degrees + 1))(real(d, c)))
    assert cli.main(["cluster", "--config", str(cfg), "--data", str(data), "--k", "5",
                     "--out", str(tmp / "o")]) == 0
    captured = capsys.readouterr()
    assert "clamped" in captured.err and "clamped" not in captured.out


def test_reproduce_unknown_dataset(capsys):
    assert cli.main(["reproduce", "iris"]) == 1
    err = capsys.readouterr().err
    assert all(name in err for name in ("adult", "bank", "diabetes"))


def test_reproduce_missing_file(tmp_path, capsys):
    assert cli.main(["reproduce", "bank", "--data", str(tmp_path / "bank.csv")]) == 2
    assert "not found" in capsys.readouterr().err


def test_reproduce_shape_and_outdir(tmp_path, capsys):
    rng = np.random.default_rng(1)
    lines = ["age,educationnum,salary,hoursperweek"]
    for _ in range(60):
        lines.append(f"{rng.integers(18, 80)},{rng.integers(1, 17)},"
                     f"{rng.choice(['<=50K', '>50K'])},{rng.integers(10, 60)}")
    data = tmp_path / "adult_small.csv"
    data.write_text("\n".join(lines) + "\n")
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"sample_size": 30, "repetitions": 2, "k": 3}))
    out = tmp_path / "nested" / "results"
    assert cli.main(["reproduce", "adult", "--data", str(data), "--config", str(cfg),
                     "--out", str(out)]) == 0
    rows = (out / "adult_table1.csv").read_text().strip().split("\n")
    assert [r.split(",")[1] for r in rows[1:]] == ["lp_fair", "gonzalez", "hochbaum_shmoys"]
    assert "normalized_cost_mean" in rows[0] and "macro_fairness_std" in rows[0]
    assert capsys.readouterr().out.strip().split("\n") == rows


def test_oracle_check_paths(tmp_path, capsys):
    assert cli.main(["oracle-check", "--trials", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["checks"] == 0
    assert cli.main(["oracle-check", "--trials", "100", "--max-n", "8"]) == 0
    dump = tmp_path / "dump.json"
    assert cli.main(["oracle-check", "--trials", "10", "--corrupt-lp", "--out", str(dump)]) == 4
    assert str(dump) in capsys.readouterr().err
    assert json.loads(dump.read_text())["kind"] == "lp"


def test_graph_dump(tiny, capsys):
    data, cfg, _ = tiny
    assert cli.main(["graph-dump", "--config", str(cfg), "--data", str(data)]) == 0
    g = json.loads(capsys.readouterr().out)
    assert len(g["neighbors"]) == 40 and len(g["m"]) == 40


def test_sweep_k_cli(tmp_path, capsys):
    rng = np.random.default_rng(2)
    lines = ["age,educationnum,salary,hoursperweek"]
    for _ in range(50):
        lines.append(f"{rng.integers(18, 80)},{rng.integers(1, 17)},"
                     f"{rng.choice(['<=50K', '>50K'])},{rng.integers(10, 60)}")
    data = tmp_path / "a.csv"
    data.write_text("\n".join(lines) + "\n")
    assert cli.main(["sweep-k", "adult", "--data", str(data), "--k-min", "2", "--k-max", "3",
                     "--per-k", "8"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[0].startswith("dataset,algorithm,k,repetition")
    assert len(out) == 1 + 2 * 5
