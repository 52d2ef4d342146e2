"""Config parsing, experiment artifacts, verification, and the CLI."""

import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from harmonica.cli import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    build_objective,
    build_optimizer,
    main,
    noise_sweep,
    run_experiment,
    verify_artifacts,
)

HIER = {"kind": "hierarchical", "n": 14, "seed": 3}
SMALL_RECOVERY = {"samples": 120, "sparsity": 3, "degree": 2, "lam": 0.5}


def random_config(**overrides):
    base = {
        "objective": HIER,
        "optimizer": {"kind": "random", "budget": 10},
        "seed": 5,
    }
    base.update(overrides)
    return ExperimentConfig.from_dict(base)


def harmonica_config(**overrides):
    base = {
        "objective": HIER,
        "optimizer": {
            "kind": "harmonica",
            "stages": 1,
            "recovery": SMALL_RECOVERY,
            "base": {"kind": "random", "budget": 60},
        },
        "seed": 7,
    }
    base.update(overrides)
    return ExperimentConfig.from_dict(base)


class TestExperimentConfig:
    def test_round_trip(self):
        cfg = harmonica_config(replications=2, parallelism=3, out_dir="x")
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_rejections(self):
        good = random_config().to_dict()
        for bad in (
            {**good, "typo": 1},
            {k: v for k, v in good.items() if k != "objective"},
            {k: v for k, v in good.items() if k != "seed"},
            {**good, "seed": -1},
            {**good, "seed": "5"},
            {**good, "replications": 0},
            {**good, "parallelism": 0},
            "not an object",
        ):
            with pytest.raises(ConfigError):
                ExperimentConfig.from_dict(bad)


class TestBuilders:
    def test_objective_kinds(self):
        f, truth = build_objective({"kind": "sparse-poly", "n": 6, "sparsity": 2, "degree": 2, "seed": 1})
        assert f.dimension == 6 and truth.sparsity == 2
        f, _ = build_objective({"kind": "decision-tree", "n": 5, "depth": 2, "seed": 1})
        assert f.dimension == 5
        f, _ = build_objective(HIER)
        assert f.dimension == 14

    def test_objective_rejections(self):
        with pytest.raises(ConfigError):
            build_objective({"kind": "mystery", "n": 4})
        with pytest.raises(ConfigError):
            build_objective({**HIER, "depth": 3})
        with pytest.raises(ConfigError):
            build_objective({"kind": "hierarchical", "n": 14})  # seed required
        with pytest.raises(ConfigError):
            build_objective({**HIER, "n": "14"})

    def test_optimizer_rejections(self):
        with pytest.raises(ConfigError):
            build_optimizer({"kind": "gradient-descent"})


class TestRunExperiment:
    def test_requires_output_directory(self):
        with pytest.raises(ConfigError):
            run_experiment(random_config())

    def test_csv_byte_identical_across_widths_and_reruns(self, tmp_path):
        cfg = harmonica_config()
        runs = {}
        for name, width in (("a", 1), ("b", 3), ("c", 1)):
            c = ExperimentConfig.from_dict({**cfg.to_dict(), "parallelism": width})
            run_experiment(c, tmp_path / name)
            runs[name] = (tmp_path / name / "evaluations.csv").read_bytes()
        assert runs["a"] == runs["b"] == runs["c"]

    def test_csv_header_and_summary_consistency(self, tmp_path):
        summary = run_experiment(random_config(replications=3), tmp_path)
        lines = (tmp_path / "evaluations.csv").read_text().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        with (tmp_path / "evaluations.csv").open() as fh:
            reader = csv.reader(fh)
            next(reader)
            rows = list(reader)
        assert len(rows) == 30
        values = [float(r[5]) for r in rows]
        data = json.loads((tmp_path / "summary.json").read_text())
        assert data["best_value"] == min(values)
        assert len(data["replications"]) == 3
        per_rep = [r["best_value"] for r in data["replications"]]
        assert data["best_value"] == min(per_rep)
        assert data["mean_best_value"] == pytest.approx(sum(per_rep) / 3)
        assert data["total_evaluations"] == 30
        assert summary.best_value == data["best_value"]

    def test_staged_run_writes_stage_detail(self, tmp_path):
        run_experiment(harmonica_config(), tmp_path)
        detail = json.loads((tmp_path / "stages.json").read_text())
        (rep,) = detail["replications"]
        assert rep["replication"] == 0
        (stage,) = rep["stages"]
        assert 1 <= len(stage["features"]) <= 5
        for feature in stage["features"]:
            assert 1 <= len(feature["indices"]) <= 3

    def test_baseline_run_writes_no_stage_detail(self, tmp_path):
        run_experiment(random_config(), tmp_path)
        assert not (tmp_path / "stages.json").exists()


class TestVerifyArtifacts:
    def test_clean_run_verifies(self, tmp_path):
        run_experiment(random_config(replications=2), tmp_path)
        assert verify_artifacts(tmp_path) == []

    def test_tampered_summary_detected(self, tmp_path):
        run_experiment(random_config(), tmp_path)
        path = tmp_path / "summary.json"
        data = json.loads(path.read_text())
        data["best_value"] = data["best_value"] - 1.0
        data["total_evaluations"] += 2
        path.write_text(json.dumps(data))
        problems = verify_artifacts(tmp_path)
        assert len(problems) >= 2

    def test_missing_artifacts_reported(self, tmp_path):
        assert verify_artifacts(tmp_path) != []


class TestNoiseSweep:
    def test_noiseless_recovery_is_nearly_exact(self):
        res = noise_sweep({"n": 14, "seed": 3}, {"samples": 2000}, [0.0], 5, seed=9)
        for _, _, rms in res.errors:
            assert rms <= 1e-3

    def test_error_tracks_noise_level(self):
        res = noise_sweep({"n": 14, "seed": 3}, {"samples": 300}, [1.0, 2.0], 3, seed=9)
        assert res.mean_errors[1] >= 1.5 * res.mean_errors[0]
        assert len(res.errors) == 6

    def test_validation(self):
        with pytest.raises(ConfigError):
            noise_sweep({"n": 21, "seed": 0}, {}, [0.0], 2, seed=0)
        with pytest.raises(ConfigError):
            noise_sweep({"n": 8, "seed": 0}, {}, [0.0], 1, seed=0)
        with pytest.raises(ConfigError):
            noise_sweep({"n": 8, "seed": 0}, {}, [], 2, seed=0)


class TestMainEntry:
    def write(self, tmp_path, name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    def test_optimize_and_verify(self, tmp_path, capsys):
        cfg = self.write(tmp_path, "run.json", random_config().to_dict())
        out = str(tmp_path / "run")
        assert main(["optimize", "--config", cfg, "--out", out]) == 0
        assert "best_value=" in capsys.readouterr().out
        assert main(["verify", "--out", out]) == 0
        summary = Path(out) / "summary.json"
        data = json.loads(summary.read_text())
        data["best_config"] = "+" * 14
        summary.write_text(json.dumps(data))
        assert main(["verify", "--out", out]) == 1
        assert "MISMATCH" in capsys.readouterr().err

    def test_bad_config_exits_2(self, tmp_path, capsys):
        cfg = self.write(tmp_path, "bad.json", {"objective": HIER})
        assert main(["optimize", "--config", cfg, "--out", str(tmp_path / "x")]) == 2
        assert "config error" in capsys.readouterr().err
        missing = str(tmp_path / "nope.json")
        assert main(["optimize", "--config", missing, "--out", str(tmp_path / "x")]) == 2

    def test_seed_override_changes_run(self, tmp_path):
        cfg = self.write(tmp_path, "run.json", random_config().to_dict())
        main(["optimize", "--config", cfg, "--out", str(tmp_path / "a")])
        main(["optimize", "--config", cfg, "--out", str(tmp_path / "b"), "--seed", "99"])
        a = (tmp_path / "a" / "evaluations.csv").read_bytes()
        b = (tmp_path / "b" / "evaluations.csv").read_bytes()
        assert a != b

    def test_recover_artifacts(self, tmp_path):
        cfg = self.write(
            tmp_path,
            "rec.json",
            {
                "objective": {"kind": "sparse-poly", "n": 8, "sparsity": 3, "degree": 2, "seed": 4},
                "recovery": {"samples": 150, "sparsity": 3, "degree": 2, "lam": 0.1},
                "seed": 11,
            },
        )
        out = tmp_path / "rec"
        assert main(["recover", "--config", cfg, "--out", str(out)]) == 0
        with (out / "samples.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["sample_index", "config", "value"]
        assert len(rows) == 151
        payload = json.loads((out / "recovery.json").read_text())
        assert payload["terms"]
        assert payload["diagnostics"]["lasso"]["converged"] is True

    def test_gen_objective_artifact(self, tmp_path):
        cfg = self.write(
            tmp_path,
            "gen.json",
            {"objective": {"kind": "decision-tree", "n": 6, "depth": 2, "seed": 5}},
        )
        out = tmp_path / "gen"
        assert main(["gen-objective", "--config", cfg, "--out", str(out)]) == 0
        payload = json.loads((out / "objective.json").read_text())
        assert payload["kind"] == "decision-tree"
        assert payload["n"] == 6

    def test_sweep_noise_artifacts(self, tmp_path):
        cfg = self.write(
            tmp_path,
            "sweep.json",
            {
                "objective": {"n": 8, "seed": 2},
                "recovery": {"samples": 80, "sparsity": 3, "degree": 2, "lam": 0.5},
                "levels": [0.5, 1.0],
                "seeds_per_level": 2,
                "seed": 6,
            },
        )
        out = tmp_path / "sweep"
        assert main(["sweep-noise", "--config", cfg, "--out", str(out)]) == 0
        with (out / "sweep.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["level", "seed", "error"]
        assert len(rows) == 5
        data = json.loads((out / "sweep_summary.json").read_text())
        assert data["levels"] == [0.5, 1.0]
        assert len(data["mean_errors"]) == 2

    def test_module_entry_point(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps(random_config().to_dict()))
        proc = subprocess.run(
            [sys.executable, "-m", "harmonica.cli", "optimize",
             "--config", str(cfg), "--out", str(tmp_path / "out")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert (tmp_path / "out" / "summary.json").exists()
