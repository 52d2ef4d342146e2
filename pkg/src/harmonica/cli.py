"""Experiment harness and command-line interface.

Subcommands:

* ``optimize``      run a configured optimizer, write evaluations.csv,
                    summary.json and (for staged runs) stages.json
* ``recover``       run sparse recovery once, write samples.csv, recovery.json
* ``sweep-noise``   recovery error versus noise level, write sweep.csv,
                    sweep_summary.json
* ``gen-objective`` write the generated objective's full spec as JSON
* ``verify``        recompute summary.json from evaluations.csv and compare

All artifacts are pure functions of the config file: seeds are explicit,
floats are written with shortest round-trip repr, and rows are emitted in a
canonical order, so reruns are byte-identical regardless of --parallel.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .baselines import (
    BaseResult,
    ExhaustiveSearch,
    FidelityObjective,
    Hyperband,
    RandomSearch,
    SuccessiveHalving,
)
from .core import Configuration, Objective, hypercube_signs
from .objectives import (
    DecisionTreeObjective,
    HierarchicalObjective,
    HierarchicalSpec,
    PolynomialObjective,
    gen_decision_tree_objective,
    gen_hierarchical_objective,
    gen_sparse_polynomial_objective,
)
from .psr import PsrParams, PsrResult, psr
from .search import HarmonicaParams, harmonica_1, harmonica_q
from .seeds import REPLICATION, fold

CSV_HEADER = ["replication", "stage", "sample_index", "resource", "config", "value"]


class ConfigError(ValueError):
    """A config file is syntactically valid JSON but semantically wrong."""


@dataclass(frozen=True)
class ExperimentConfig:
    objective: dict[str, Any]
    optimizer: dict[str, Any]
    seed: int
    replications: int = 1
    parallelism: int = 1
    out_dir: str | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        allowed = {
            "objective",
            "optimizer",
            "seed",
            "replications",
            "parallelism",
            "out_dir",
        }
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for required in ("objective", "optimizer", "seed"):
            if required not in data:
                raise ConfigError(f"config field '{required}' is required")
        seed = data["seed"]
        if not isinstance(seed, int) or seed < 0:
            raise ConfigError("'seed' must be a non-negative integer")
        reps = data.get("replications", 1)
        if not isinstance(reps, int) or reps < 1:
            raise ConfigError("'replications' must be a positive integer")
        width = data.get("parallelism", 1)
        if not isinstance(width, int) or width < 1:
            raise ConfigError("'parallelism' must be a positive integer")
        return cls(
            objective=dict(data["objective"]),
            optimizer=dict(data["optimizer"]),
            seed=seed,
            replications=reps,
            parallelism=width,
            out_dir=data.get("out_dir"),
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "objective": self.objective,
            "optimizer": self.optimizer,
            "seed": self.seed,
            "replications": self.replications,
            "parallelism": self.parallelism,
        }
        if self.out_dir is not None:
            out["out_dir"] = self.out_dir
        return out


def _take(spec: dict[str, Any], where: str, required: dict, optional: dict):
    unknown = set(spec) - {"kind"} - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown {where} fields: {sorted(unknown)}")
    values = {}
    for name, kind in required.items():
        if name not in spec:
            raise ConfigError(f"{where}.{name} is required")
        values[name] = _coerce(spec[name], kind, f"{where}.{name}")
    for name, (kind, default) in optional.items():
        values[name] = (
            _coerce(spec[name], kind, f"{where}.{name}") if name in spec else default
        )
    return values


def _coerce(value, kind, where: str):
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{where} must be an object")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{where} must be a list")
        return value
    raise AssertionError(kind)


def build_objective(spec: dict[str, Any]) -> tuple[Objective, Any]:
    """Objective plus its serializable ground-truth spec."""
    kind = spec.get("kind")
    if kind == "hierarchical":
        v = _take(
            spec,
            "objective",
            {"n": int, "seed": int},
            {"noise": (float, 0.0)},
        )
        obj, full = gen_hierarchical_objective(v["n"], v["noise"], v["seed"])
        return obj, full
    if kind == "sparse-poly":
        v = _take(
            spec,
            "objective",
            {"n": int, "sparsity": int, "degree": int, "seed": int},
            {
                "coeff_low": (float, 1.0),
                "coeff_high": (float, 2.0),
                "noise": (float, 0.0),
            },
        )
        obj, truth = gen_sparse_polynomial_objective(
            v["n"],
            v["sparsity"],
            v["degree"],
            v["coeff_low"],
            v["coeff_high"],
            v["noise"],
            v["seed"],
        )
        return obj, truth
    if kind == "decision-tree":
        v = _take(
            spec,
            "objective",
            {"n": int, "depth": int, "seed": int},
            {
                "leaf_range": (float, 1.0),
                "boolean_leaves": (bool, False),
                "noise": (float, 0.0),
            },
        )
        obj, tree = gen_decision_tree_objective(
            v["n"],
            v["depth"],
            v["leaf_range"],
            v["boolean_leaves"],
            v["noise"],
            v["seed"],
        )
        return obj, tree
    raise ConfigError(
        "objective.kind must be one of: hierarchical, sparse-poly, decision-tree"
    )


def _psr_params(spec: dict[str, Any], where: str, seed: int) -> PsrParams:
    v = _take(
        spec,
        where,
        {},
        {
            "samples": (int, 300),
            "sparsity": (int, 5),
            "degree": (int, 3),
            "lam": (float, 1.0),
            "exclude_constant": (bool, True),
        },
    )
    return PsrParams(
        samples=v["samples"],
        sparsity=v["sparsity"],
        degree=v["degree"],
        lam=v["lam"],
        seed=seed,
        exclude_constant=v["exclude_constant"],
    )


def _base_optimizer(spec: dict[str, Any]):
    kind = spec.get("kind", "random")
    if kind == "random":
        v = _take(spec, "base", {}, {"budget": (int, 200)})
        return RandomSearch(v["budget"])
    if kind == "sh":
        v = _take(
            spec,
            "base",
            {},
            {
                "arms": (int, 8),
                "eta": (int, 2),
                "r_min": (int, 1),
                "resource": (int, 0),
            },
        )
        return SuccessiveHalving(
            v["arms"], v["eta"], v["r_min"], v["resource"] or None
        )
    if kind == "hyperband":
        v = _take(spec, "base", {}, {"resource": (int, 0), "eta": (int, 2)})
        return Hyperband(v["resource"] or None, v["eta"])
    if kind == "exhaustive":
        v = _take(spec, "base", {}, {"cap": (int, 20)})
        return ExhaustiveSearch(v["cap"])
    raise ConfigError("base.kind must be one of: random, sh, hyperband, exhaustive")


@dataclass
class ReplicationOutcome:
    rows: list[tuple[str, int, int, Configuration, float]]
    best_config: Configuration
    best_value: float
    stages: list[dict[str, Any]] | None = None

    @property
    def total_resource(self) -> int:
        return sum(r[2] for r in self.rows)


class _HarmonicaRunner:
    def __init__(self, spec: dict[str, Any]):
        self.spec = spec

    def run(self, f: Objective, seed: int, parallel: int) -> ReplicationOutcome:
        v = _take(
            self.spec,
            "optimizer",
            {"stages": int},
            {
                "recovery": (dict, {}),
                "restriction_size": (int, 4),
                "base": (dict, {"kind": "random"}),
                "derestriction_cap": (int, 64),
            },
        )
        params = HarmonicaParams(
            stages=v["stages"],
            psr=_psr_params(v["recovery"], "optimizer.recovery", 0),
            restriction_size=v["restriction_size"],
            base=_base_optimizer(v["base"]),
            seed=seed,
            derestriction_cap=v["derestriction_cap"],
        )
        _, _, trace = harmonica_q(f, params, parallel)
        rows = [
            (rec.stage, rec.index, rec.resource, rec.config, rec.value)
            for rec in trace.evaluations
        ]
        return ReplicationOutcome(
            rows,
            trace.best_configuration,
            trace.best_value,
            trace.to_dict()["stages"],
        )


class _Harmonica1Runner:
    def __init__(self, spec: dict[str, Any]):
        self.spec = spec

    def run(self, f: Objective, seed: int, parallel: int) -> ReplicationOutcome:
        v = _take(
            self.spec,
            "optimizer",
            {},
            {"recovery": (dict, {}), "fill": (int, 1)},
        )
        params = _psr_params(v["recovery"], "optimizer.recovery", seed)
        _, _, trace = harmonica_1(f, params, v["fill"], parallel)
        rows = [
            (rec.stage, rec.index, rec.resource, rec.config, rec.value)
            for rec in trace.evaluations
        ]
        return ReplicationOutcome(
            rows,
            trace.best_configuration,
            trace.best_value,
            trace.to_dict()["stages"],
        )


class _BaselineRunner:
    def __init__(self, spec: dict[str, Any]):
        kind = spec.get("kind")
        inner = dict(spec)
        inner["kind"] = {"random": "random", "sh": "sh", "hyperband": "hyperband"}[
            kind
        ]
        self.base = _base_optimizer(inner)

    def run(self, f: Objective, seed: int, parallel: int) -> ReplicationOutcome:
        res: BaseResult = self.base.run(f, seed, parallel)
        rows = [
            ("base", i, rec.resource, rec.config, rec.value)
            for i, rec in enumerate(res.log)
        ]
        return ReplicationOutcome(rows, res.best_config, res.best_value)


def build_optimizer(spec: dict[str, Any]):
    kind = spec.get("kind")
    if kind == "harmonica":
        return _HarmonicaRunner(spec)
    if kind == "harmonica-1":
        return _Harmonica1Runner(spec)
    if kind in ("random", "sh", "hyperband"):
        return _BaselineRunner(spec)
    raise ConfigError(
        "optimizer.kind must be one of: harmonica, harmonica-1, random, sh, hyperband"
    )


@dataclass(frozen=True)
class ReplicationSummary:
    replication: int
    best_value: float
    best_config: str
    evaluations: int
    resource: int


@dataclass(frozen=True)
class RunSummary:
    best_value: float
    best_config: str
    total_evaluations: int
    total_resource: int
    wall_time_s: float
    replications: tuple[ReplicationSummary, ...]
    stages: list[dict[str, Any]] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "best_value": self.best_value,
            "best_config": self.best_config,
            "total_evaluations": self.total_evaluations,
            "total_resource": self.total_resource,
            "wall_time_s": self.wall_time_s,
            "replications": [
                {
                    "replication": r.replication,
                    "best_value": r.best_value,
                    "best_config": r.best_config,
                    "evaluations": r.evaluations,
                    "resource": r.resource,
                }
                for r in self.replications
            ],
            "mean_best_value": math.fsum(r.best_value for r in self.replications)
            / len(self.replications),
        }
        if self.stages is not None:
            out["stages"] = self.stages
        return out


def _write_csv(path: Path, rows) -> None:
    with path.open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rep, stage, idx, resource, config, value in rows:
            writer.writerow(
                [rep, stage, idx, resource, config.to_string(), repr(float(value))]
            )


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None) -> RunSummary:
    """Run the configured experiment and write its artifacts.

    evaluations.csv is byte-identical across reruns and parallelism widths;
    summary.json additionally records wall time.
    """
    target = Path(out_dir if out_dir is not None else config.out_dir or "")
    if str(target) in ("", "."):
        raise ConfigError("an output directory is required (config.out_dir or --out)")
    objective, _ = build_objective(config.objective)
    runner = build_optimizer(config.optimizer)
    start = time.monotonic()
    outcomes: list[ReplicationOutcome] = []
    for rep in range(config.replications):
        rep_seed = fold(REPLICATION, config.seed, rep)
        outcomes.append(runner.run(objective, rep_seed, config.parallelism))
    wall = time.monotonic() - start

    csv_rows = []
    for rep, outcome in enumerate(outcomes):
        for stage, idx, resource, cfg, value in outcome.rows:
            csv_rows.append((rep, stage, idx, resource, cfg, value))
    rep_summaries = tuple(
        ReplicationSummary(
            rep,
            float(o.best_value),
            o.best_config.to_string(),
            len(o.rows),
            o.total_resource,
        )
        for rep, o in enumerate(outcomes)
    )
    best = min(rep_summaries, key=lambda r: r.best_value)
    summary = RunSummary(
        best_value=best.best_value,
        best_config=best.best_config,
        total_evaluations=sum(r.evaluations for r in rep_summaries),
        total_resource=sum(r.resource for r in rep_summaries),
        wall_time_s=wall,
        replications=rep_summaries,
        stages=outcomes[best.replication].stages,
    )

    target.mkdir(parents=True, exist_ok=True)
    _write_csv(target / "evaluations.csv", csv_rows)
    with (target / "summary.json").open("w") as fh:
        json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    if any(o.stages is not None for o in outcomes):
        detail = {
            "replications": [
                {"replication": rep, "stages": o.stages}
                for rep, o in enumerate(outcomes)
                if o.stages is not None
            ]
        }
        with (target / "stages.json").open("w") as fh:
            json.dump(detail, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return summary


def verify_artifacts(out_dir: str | Path) -> list[str]:
    """Recompute summary.json's numbers from evaluations.csv.

    Returns a list of discrepancies (empty when everything checks out).
    """
    target = Path(out_dir)
    problems: list[str] = []
    try:
        with (target / "evaluations.csv").open() as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
    except OSError as exc:
        return [f"cannot read evaluations.csv: {exc}"]
    if header != CSV_HEADER:
        problems.append(f"unexpected CSV header: {header}")
        return problems
    try:
        with (target / "summary.json").open() as fh:
            summary = json.load(fh)
    except OSError as exc:
        return [f"cannot read summary.json: {exc}"]

    parsed = [
        (int(rep), stage, int(idx), int(res), cfg, float(val))
        for rep, stage, idx, res, cfg, val in rows
    ]
    if summary.get("total_evaluations") != len(parsed):
        problems.append(
            f"total_evaluations={summary.get('total_evaluations')} but "
            f"{len(parsed)} rows logged"
        )
    resource = sum(p[3] for p in parsed)
    if summary.get("total_resource") != resource:
        problems.append(
            f"total_resource={summary.get('total_resource')} but rows sum to {resource}"
        )
    by_rep: dict[int, list] = {}
    for p in parsed:
        by_rep.setdefault(p[0], []).append(p)
    recomputed = {}
    for rep, plist in sorted(by_rep.items()):
        best = min(plist, key=lambda p: p[5])
        recomputed[rep] = best
    for entry in summary.get("replications", []):
        rep = entry["replication"]
        if rep not in recomputed:
            problems.append(f"replication {rep} missing from evaluations.csv")
            continue
        best = recomputed[rep]
        if entry["best_value"] != best[5]:
            problems.append(
                f"replication {rep}: best_value={entry['best_value']} "
                f"but rows say {best[5]}"
            )
        if entry["best_config"] != best[4]:
            problems.append(
                f"replication {rep}: best_config={entry['best_config']} "
                f"but rows say {best[4]}"
            )
        if entry["evaluations"] != len(by_rep[rep]):
            problems.append(
                f"replication {rep}: evaluations={entry['evaluations']} "
                f"but {len(by_rep[rep])} rows logged"
            )
    if recomputed:
        overall = min(recomputed.values(), key=lambda p: (p[5], p[0]))
        if summary.get("best_value") != overall[5]:
            problems.append(
                f"best_value={summary.get('best_value')} but rows say {overall[5]}"
            )
        if summary.get("best_config") != overall[4]:
            problems.append(
                f"best_config={summary.get('best_config')} but rows say {overall[4]}"
            )
    return problems


@dataclass(frozen=True)
class NoiseSweepResult:
    levels: tuple[float, ...]
    errors: tuple[tuple[float, int, float], ...]  # (level, seed index, rms error)
    mean_errors: tuple[float, ...]
    correlation: float
    slope: float
    intercept: float


def noise_sweep(
    objective_spec: dict[str, Any],
    recovery_spec: dict[str, Any],
    levels: list[float],
    seeds_per_level: int,
    seed: int,
    parallel: int = 1,
) -> NoiseSweepResult:
    """Recovery error of the stage-1 sparse vector versus noise level.

    For each level A and instance seed, the target is the hierarchical
    objective's stage-1 polynomial observed through uniform noise of
    half-width A.  The error is the root mean square gap between the
    recovered surrogate and the clean stage-1 polynomial over the full
    hypercube.  Instance seeds are shared across levels so the trend in A is
    not confounded by instance variation.
    """
    v = _take(
        objective_spec,
        "objective",
        {"n": int, "seed": int},
        {"noise": (float, 0.0)},
    )
    n = v["n"]
    if n > 20:
        raise ConfigError("noise sweep needs n <= 20 for the exhaustive error")
    if seeds_per_level < 2:
        raise ConfigError("need at least 2 seeds per level")
    if len(levels) < 1:
        raise ConfigError("need at least one noise level")
    grid = hypercube_signs(n).astype(np.float64)
    rows = []
    means = []
    for level in levels:
        level_errors = []
        for k in range(seeds_per_level):
            instance_seed = fold(REPLICATION, v["seed"], k)
            _, spec = gen_hierarchical_objective(n, 0.0, instance_seed)
            target = spec.stage1_polynomial()
            observed = PolynomialObjective(
                target, noise_half_width=float(level), seed=instance_seed
            )
            params = _psr_params(recovery_spec, "recovery", fold(REPLICATION, seed, k))
            g = psr(observed, params, parallel).surrogate
            gap = g.evaluate_signs(grid) - target.evaluate_signs(grid)
            rms = float(np.sqrt(np.mean(gap * gap)))
            rows.append((float(level), k, rms))
            level_errors.append(rms)
        means.append(math.fsum(level_errors) / len(level_errors))
    xs = np.array(levels, dtype=np.float64)
    ys = np.array(means)
    if len(levels) >= 2 and float(np.std(xs)) > 0 and float(np.std(ys)) > 0:
        corr = float(np.corrcoef(xs, ys)[0, 1])
        slope, intercept = np.polyfit(xs, ys, 1)
    else:
        corr, slope, intercept = float("nan"), float("nan"), float(ys.mean())
    return NoiseSweepResult(
        tuple(float(a) for a in levels),
        tuple(rows),
        tuple(means),
        corr,
        float(slope),
        float(intercept),
    )


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _serialize_objective_spec(spec_obj) -> dict[str, Any]:
    from .core import SparsePolynomial

    if isinstance(spec_obj, SparsePolynomial):
        return {
            "kind": "sparse-poly",
            "n": spec_obj.dimension,
            "terms": [
                {"indices": list(ix.members), "weight": w}
                for ix, w in spec_obj.canonical_terms()
            ],
        }
    return spec_obj.to_dict()


def _cmd_optimize(args) -> int:
    config = ExperimentConfig.from_dict(_load_config(args.config))
    if args.seed is not None:
        config = ExperimentConfig.from_dict({**config.to_dict(), "seed": args.seed})
    if args.parallel is not None:
        config = ExperimentConfig.from_dict(
            {**config.to_dict(), "parallelism": args.parallel}
        )
    summary = run_experiment(config, args.out)
    print(
        f"best_value={summary.best_value!r} best_config={summary.best_config} "
        f"evaluations={summary.total_evaluations} resource={summary.total_resource}"
    )
    return 0


def _cmd_recover(args) -> int:
    data = _load_config(args.config)
    allowed = {"objective", "recovery", "seed"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "objective" not in data or "seed" not in data:
        raise ConfigError("recover configs need 'objective' and 'seed'")
    seed = args.seed if args.seed is not None else data["seed"]
    objective, _ = build_objective(dict(data["objective"]))
    params = _psr_params(dict(data.get("recovery", {})), "recovery", seed)
    result = psr(objective, params, args.parallel or 1)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "samples.csv").open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sample_index", "config", "value"])
        for rec in result.samples:
            writer.writerow([rec.index, rec.config.to_string(), repr(rec.value)])
    payload = {
        "terms": [
            {"indices": list(ix.members), "weight": w}
            for ix, w in result.surrogate.canonical_terms()
        ],
        "variable_set": list(result.variable_set),
        "diagnostics": {
            "top_terms": [
                {"indices": list(ix.members), "weight": w}
                for ix, w in result.coefficient_summary
            ],
            "lasso": {
                "sweeps": result.solution.sweeps,
                "kkt_residual": result.solution.kkt_residual,
                "converged": result.solution.converged,
                "objective_value": result.solution.objective_value,
            },
        },
    }
    with (out / "recovery.json").open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"recovered {len(result.surrogate.terms)} terms over J={list(result.variable_set)}")
    return 0


def _cmd_sweep_noise(args) -> int:
    data = _load_config(args.config)
    allowed = {"objective", "recovery", "levels", "seeds_per_level", "seed"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    for required in ("objective", "levels", "seeds_per_level", "seed"):
        if required not in data:
            raise ConfigError(f"sweep configs need '{required}'")
    seed = args.seed if args.seed is not None else data["seed"]
    result = noise_sweep(
        dict(data["objective"]),
        dict(data.get("recovery", {})),
        [float(a) for a in data["levels"]],
        int(data["seeds_per_level"]),
        seed,
        args.parallel or 1,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "sweep.csv").open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["level", "seed", "error"])
        for level, k, err in result.errors:
            writer.writerow([repr(level), k, repr(err)])
    with (out / "sweep_summary.json").open("w") as fh:
        json.dump(
            {
                "levels": list(result.levels),
                "mean_errors": list(result.mean_errors),
                "correlation": result.correlation,
                "slope": result.slope,
                "intercept": result.intercept,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    print(
        f"levels={list(result.levels)} mean_errors={[round(e, 6) for e in result.mean_errors]} "
        f"correlation={result.correlation:.4f}"
    )
    return 0


def _cmd_gen_objective(args) -> int:
    data = _load_config(args.config)
    if "objective" not in data:
        raise ConfigError("gen-objective configs need 'objective'")
    spec = dict(data["objective"])
    if args.seed is not None:
        spec["seed"] = args.seed
    _, truth = build_objective(spec)
    payload = _serialize_objective_spec(truth)
    if "seed" in spec and "seed" not in payload:
        payload["seed"] = spec["seed"]
    if "noise" in spec and "noise" not in payload:
        payload["noise"] = spec["noise"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "objective.json").open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote objective.json ({payload['kind']}, n={payload['n']})")
    return 0


def _cmd_verify(args) -> int:
    problems = verify_artifacts(args.out)
    if problems:
        for p in problems:
            print(f"MISMATCH: {p}", file=sys.stderr)
        return 1
    print("artifacts consistent")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="harmonica",
        description="Spectral hyperparameter optimization over the Boolean hypercube",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_out in (
        ("optimize", _cmd_optimize, True),
        ("recover", _cmd_recover, True),
        ("sweep-noise", _cmd_sweep_noise, True),
        ("gen-objective", _cmd_gen_objective, True),
        ("verify", _cmd_verify, False),
    ):
        p = sub.add_parser(name)
        if name != "verify":
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=True, help="artifact directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument(
            "--parallel", type=int, default=None, help="worker pool width"
        )
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
