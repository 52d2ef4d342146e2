"""Staged spectral search over the hypercube.

One stage runs sparse recovery on the current objective, takes the t best
minimizers of the recovered surrogate over its variable set J, and replaces
the objective with its stochastic restriction: J is fixed to one of the t
candidate assignments, drawn fresh per evaluation.  After q stages a base
optimizer (random search by default) finishes off the surviving free
variables, and the best per-layer candidate combination is re-evaluated on
the true unrestricted objective.

A recovered surrogate usually cannot order assignments that tie at its
minimum (with s terms the minimum is a whole subcube of 2^(|J|-s)
assignments whenever the terms are jointly satisfiable), so ties are broken
by measurement: each tied assignment is completed with shared settings of
the free variables and scored by its best true-objective value, and the
restriction keeps the top t by that score.  See ``HarmonicaParams``.

The returned best value is always one attained by a logged true-objective
evaluation; surrogate values are never reported as results.  Every log row
carries the root-space configuration that was actually probed, recovered by
replaying the restriction draws.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from itertools import product
from typing import Any, Mapping

import numpy as np

from .baselines import BaseOptimizer, RandomSearch
from .core import (
    Configuration,
    Objective,
    PartialAssignment,
    RestrictionLayer,
    RestrictedObjective,
    SparsePolynomial,
    merge_assignment,
    restrict,
)
from .psr import PsrParams, PsrResult, draw_samples, psr
from .seeds import (
    BASE_SEED,
    FINAL_EVAL,
    STAGE_PROBE,
    STAGE_RESTRICT,
    STAGE_SEED,
    fold,
    rng_for,
)

ENUMERATION_CAP = 25
_BLOCK_BITS = 20


class EnumerationTooLarge(ValueError):
    """Exhaustive assignment enumeration over J would exceed 2^25 rows."""


def _block_signs(k: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)[:, None]
    bits = (codes >> (k - 1 - np.arange(k))) & 1
    return (1 - 2 * bits).astype(np.int8)


def minimize_sparse_poly(
    g: SparsePolynomial, variables: tuple[int, ...], t: int = 1
) -> list[tuple[PartialAssignment, float]]:
    """The t smallest values of g over all sign assignments of ``variables``.

    Returns (assignment, value) pairs in increasing value order; ties break
    toward the lexicographically earlier assignment with +1 before -1.  All
    of g's variables must lie in ``variables``.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    J = tuple(int(v) for v in variables)
    if any(a >= b for a, b in zip(J, J[1:])):
        raise ValueError("variable set must be strictly increasing")
    k = len(J)
    if k > ENUMERATION_CAP:
        raise EnumerationTooLarge(
            f"|J|={k} exceeds the 2^{ENUMERATION_CAP} enumeration cap"
        )
    missing = set(g.variables()) - set(J)
    if missing:
        raise ValueError(f"surrogate touches variables outside J: {sorted(missing)}")
    pos = {v: i for i, v in enumerate(J)}
    terms = g.canonical_terms()
    total = 1 << k
    best: list[tuple[float, int]] = []  # (value, code), kept sorted
    keep = min(t, total)
    for start in range(0, total, 1 << _BLOCK_BITS):
        stop = min(start + (1 << _BLOCK_BITS), total)
        signs = _block_signs(k, start, stop) if k else np.zeros((1, 0), np.int8)
        values = np.zeros(stop - start)
        for index, c in terms:
            if index.members:
                cols = [pos[m] for m in index.members]
                values += c * signs[:, cols].prod(axis=1)
            else:
                values += c
        order = np.argsort(values, kind="stable")[:keep]
        block_best = [(float(values[i]), start + int(i)) for i in order]
        best = sorted(best + block_best, key=lambda vc: vc)[:keep]
    out = []
    for value, code in best:
        bits = [(code >> (k - 1 - i)) & 1 for i in range(k)]
        assignment = PartialAssignment(
            tuple((J[i], 1 - 2 * bits[i]) for i in range(k))
        )
        out.append((assignment, value))
    return out


@dataclass(frozen=True)
class EvalRecord:
    """One true-objective evaluation, with the root-space configuration."""

    stage: str
    index: int
    resource: int
    config: Configuration
    value: float


@dataclass(frozen=True)
class StageRecord:
    stage: int
    psr: PsrResult  # in the stage-local (reduced) coordinate space
    fixed_original: tuple[int, ...]
    features: tuple[tuple[tuple[int, ...], float], ...]  # original indices
    minimizers: tuple[tuple[PartialAssignment, float], ...]  # original indices
    layer: RestrictionLayer | None


@dataclass(frozen=True)
class HarmonicaTrace:
    stages: tuple[StageRecord, ...]
    evaluations: tuple[EvalRecord, ...]
    best_configuration: Configuration
    best_value: float

    @property
    def total_evaluations(self) -> int:
        return len(self.evaluations)

    @property
    def total_resource(self) -> int:
        return sum(rec.resource for rec in self.evaluations)

    def stage_evaluations(self, label: str) -> int:
        return sum(1 for rec in self.evaluations if rec.stage == label)

    def to_dict(self) -> dict[str, Any]:
        return {
            "best_value": self.best_value,
            "best_config": self.best_configuration.to_string(),
            "total_evaluations": self.total_evaluations,
            "total_resource": self.total_resource,
            "base_evaluations": self.stage_evaluations("base"),
            "final_evaluations": self.stage_evaluations("final"),
            "stages": [
                {
                    "stage": s.stage,
                    "features": [
                        {"indices": list(ix), "weight": w} for ix, w in s.features
                    ],
                    "minimizers": [
                        {
                            "assignment": {str(i): sign for i, sign in a.items},
                            "surrogate_value": v,
                        }
                        for a, v in s.minimizers
                    ],
                    "evaluations": self.stage_evaluations(f"s{s.stage}"),
                }
                for s in self.stages
            ],
        }


@dataclass(frozen=True)
class HarmonicaParams:
    """Staged search settings.

    ``psr`` is either one PsrParams shared by all stages or a tuple with one
    entry per stage.  Stage seeds derive from the master seed, so the values
    inside the per-stage PsrParams seeds are ignored.

    When more assignments tie at the surrogate minimum than the restriction
    can keep, the tied candidates are probed on the true objective before
    the top ``restriction_size`` are chosen: every tied assignment is
    completed with the same shared settings of the free variables (all
    2^free settings when class size times settings fits in ``probe_budget``,
    otherwise ``probe_count`` shared random settings) and ranked by the best
    value it reached.  Probes are ordinary logged evaluations and count
    toward the run's totals.  ``probe_budget = 0`` keeps the canonical
    (lexicographic) tied candidates without probing.
    """

    stages: int
    psr: PsrParams | tuple[PsrParams, ...] = PsrParams()
    restriction_size: int = 4
    base: BaseOptimizer = RandomSearch(200)
    seed: int = 0
    derestriction_cap: int = 64
    probe_budget: int = 512
    probe_count: int = 4

    def stage_psr(self, stage: int) -> PsrParams:
        if isinstance(self.psr, PsrParams):
            return self.psr
        if len(self.psr) != self.stages:
            raise ValueError(
                f"{len(self.psr)} PsrParams given for {self.stages} stages"
            )
        return self.psr[stage - 1]


def _ranked_combos(sizes: list[int], cap: int) -> list[tuple[int, ...]]:
    """Candidate-index tuples ordered by rank sum, then lexicographically."""
    start = (0,) * len(sizes)
    heap: list[tuple[int, tuple[int, ...]]] = [(0, start)]
    seen = {start}
    out: list[tuple[int, ...]] = []
    while heap and len(out) < cap:
        total, combo = heapq.heappop(heap)
        out.append(combo)
        for i, size in enumerate(sizes):
            if combo[i] + 1 < size:
                bumped = combo[:i] + (combo[i] + 1,) + combo[i + 1 :]
                if bumped not in seen:
                    seen.add(bumped)
                    heapq.heappush(heap, (total + 1, bumped))
    return out


def _probe_completions(
    free_count: int, class_size: int, budget: int, fallback: int,
    master: int, stage: int,
) -> list[tuple[int, ...]]:
    """Shared free-variable settings for scoring tied minimizers.

    Exhaustive when the full grid of (tied assignment, setting) pairs fits
    in the probe budget; otherwise a fixed number of seeded random settings,
    identical for every tied assignment so scores stay comparable.
    """
    if free_count == 0:
        return [()]
    if free_count <= _BLOCK_BITS and (1 << free_count) <= max(
        fallback, budget // max(class_size, 1)
    ):
        return list(product((1, -1), repeat=free_count))
    out = []
    for p in range(fallback):
        signs = rng_for(STAGE_PROBE, master, stage, p).integers(0, 2, free_count)
        out.append(tuple(int(2 * s - 1) for s in signs))
    return out


def _map_index(members: tuple[int, ...], to_root: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(to_root[m - 1] for m in members))


def _map_assignment(
    a: PartialAssignment, to_root: tuple[int, ...]
) -> PartialAssignment:
    return PartialAssignment.from_mapping(
        {to_root[i - 1]: sign for i, sign in a.items}
    )


def harmonica_q(
    f: Objective, params: HarmonicaParams, parallel: int = 1
) -> tuple[Configuration, float, HarmonicaTrace]:
    """Run ``params.stages`` restriction stages, then the base optimizer,
    then true-objective re-evaluation of the best per-layer candidates.

    With zero stages this is exactly the base optimizer on f (no extra
    evaluations).  A stage that selects no terms ends staging early.
    Tied surrogate minimizers beyond the restriction size are ranked by
    logged true-objective probes before the cut (see ``HarmonicaParams``).
    """
    if params.probe_budget < 0:
        raise ValueError("probe_budget must be non-negative")
    if params.probe_count < 1:
        raise ValueError("probe_count must be at least 1")
    master = params.seed
    current: Objective = f
    chain: list[RestrictedObjective] = []
    to_root = tuple(range(1, f.dimension + 1))
    stage_records: list[StageRecord] = []
    evals: list[EvalRecord] = []

    for stage in range(1, params.stages + 1):
        if current.dimension == 0:
            break
        p = params.stage_psr(stage)
        p = replace(
            p,
            seed=fold(STAGE_SEED, master, stage),
            degree=min(p.degree, current.dimension),
        )
        result = psr(current, p, parallel)
        for rec in result.samples:
            root_cfg = current.resolve(rec.config, rec.eval_seed)
            evals.append(
                EvalRecord(
                    f"s{stage}", rec.index, current.max_fidelity, root_cfg, rec.value
                )
            )
        if not result.surrogate.terms:
            stage_records.append(StageRecord(stage, result, (), (), (), None))
            break
        J = result.variable_set
        t = params.restriction_size
        ranked = minimize_sparse_poly(
            result.surrogate, J, max(t, params.probe_budget)
        )
        lowest = ranked[0][1]
        tied = [a for a, v in ranked if v == lowest]
        if params.probe_budget > 0 and len(tied) > t:
            free = tuple(
                i for i in range(1, current.dimension + 1) if i not in set(J)
            )
            settings = _probe_completions(
                len(free), len(tied), params.probe_budget, params.probe_count,
                master, stage,
            )
            # probes per stage stay within budget (but never below t members)
            tied = tied[: max(t, params.probe_budget // len(settings))]
            counter = len(result.samples)
            scores: list[tuple[float, int]] = []
            for mi, assignment in enumerate(tied):
                best_probe = math.inf
                values = dict(assignment.items)
                for p, signs in enumerate(settings):
                    for var, s in zip(free, signs):
                        values[var] = s
                    cfg = Configuration(
                        tuple(values[i] for i in range(1, current.dimension + 1))
                    )
                    es = fold(STAGE_PROBE, master, stage, mi, p)
                    v = float(
                        current.evaluate(cfg, fidelity=current.max_fidelity, seed=es)
                    )
                    root_cfg = current.resolve(cfg, es)
                    evals.append(
                        EvalRecord(
                            f"s{stage}", counter, current.max_fidelity, root_cfg, v
                        )
                    )
                    counter += 1
                    if v < best_probe:
                        best_probe = v
                scores.append((best_probe, mi))
            scores.sort()
            minimizers = [(tied[mi], lowest) for _, mi in scores[:t]]
        else:
            minimizers = ranked[:t]
        layer = RestrictionLayer(
            J, tuple(a for a, _ in minimizers), stage=stage
        )
        features = tuple(
            (_map_index(ix.members, to_root), w)
            for ix, w in result.surrogate.canonical_terms()
        )
        stage_records.append(
            StageRecord(
                stage,
                result,
                _map_index(J, to_root),
                features,
                tuple((_map_assignment(a, to_root), v) for a, v in minimizers),
                layer,
            )
        )
        restricted = restrict(current, layer, fold(STAGE_RESTRICT, master, stage))
        to_root = tuple(to_root[i - 1] for i in restricted.free)
        chain.append(restricted)
        current = restricted

    if current.dimension > 0:
        base_res = params.base.run(current, fold(BASE_SEED, master), parallel)
        for i, rec in enumerate(base_res.log):
            root_cfg = current.resolve(rec.config, rec.eval_seed)
            evals.append(EvalRecord("base", i, rec.resource, root_cfg, rec.value))
        y_star = base_res.best_config
    else:
        y_star = Configuration(())

    if chain:
        combos = _ranked_combos(
            [r.layer.size for r in chain], params.derestriction_cap
        )
        for ci, combo in enumerate(combos):
            cfg = y_star
            for i in reversed(range(len(chain))):
                cfg = chain[i].embed(cfg, combo[i])
            es = fold(FINAL_EVAL, master, ci)
            v = f.evaluate(cfg, fidelity=f.max_fidelity, seed=es)
            evals.append(EvalRecord("final", ci, f.max_fidelity, cfg, float(v)))

    best = min(evals, key=lambda rec: rec.value)
    trace = HarmonicaTrace(
        tuple(stage_records), tuple(evals), best.config, best.value
    )
    return best.config, best.value, trace


def harmonica_1(
    f: Objective,
    psr_params: PsrParams,
    fill: int | Mapping[int, int] = 1,
    parallel: int = 1,
) -> tuple[Configuration, float, HarmonicaTrace]:
    """Single-stage variant: recover, minimize the surrogate over J, fill
    the remaining variables by rule, evaluate once.

    ``fill`` is a constant sign (default +1) or an explicit {index: sign}
    mapping covering exactly the variables outside J.
    """
    result = psr(f, psr_params, parallel)
    evals = [
        EvalRecord("s1", rec.index, f.max_fidelity, rec.config, rec.value)
        for rec in result.samples
    ]
    J = result.variable_set
    assignment, surrogate_value = minimize_sparse_poly(
        result.surrogate, J, 1
    )[0]
    outside = [i for i in range(1, f.dimension + 1) if i not in set(J)]
    if isinstance(fill, Mapping):
        if sorted(fill) != outside:
            raise ValueError(
                f"fill must cover exactly the variables outside J: {outside}"
            )
        fill_part = PartialAssignment.from_mapping(fill)
    else:
        if fill not in (-1, 1):
            raise ValueError("constant fill must be +1 or -1")
        fill_part = PartialAssignment(tuple((i, int(fill)) for i in outside))
    config = merge_assignment(assignment, fill_part)
    value = float(
        f.evaluate(config, fidelity=f.max_fidelity, seed=fold(FINAL_EVAL, psr_params.seed, 0))
    )
    evals.append(EvalRecord("final", 0, f.max_fidelity, config, value))
    features = tuple(
        (ix.members, w) for ix, w in result.surrogate.canonical_terms()
    )
    layer = RestrictionLayer(J, (assignment,), stage=1) if J else None
    record = StageRecord(
        1, result, J, features, ((assignment, surrogate_value),), layer
    )
    best = min(evals, key=lambda rec: rec.value)
    trace = HarmonicaTrace((record,), tuple(evals), best.config, best.value)
    return config, value, trace


def stage_average_error(
    f: Objective, count: int, seed: int, parallel: int = 1
) -> float:
    """Mean objective value over ``count`` fresh uniform samples.

    Dropping this mean across successive restrictions is the stage-progress
    diagnostic for staged search.
    """
    records = draw_samples(f, count, seed, parallel)
    return math.fsum(r.value for r in records) / count
