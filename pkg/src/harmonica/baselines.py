"""Reference search baselines: random search, successive halving, Hyperband.

Resource semantics: evaluating an arm at resource r means averaging r
independent noisy draws of the underlying objective, so higher resource
means lower variance.  ``FidelityObjective`` supplies that contract on top
of any objective; its declared maximum R is the full-resource evaluation.

Every evaluation is logged as a row (optimizer, bracket, rung, arm,
resource, config, value); total resource spent is the exact sum of the
logged r values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from .core import Configuration, Objective, hypercube_signs
from .parallel import parallel_map
from .seeds import ARM_CONFIG, ARM_EVAL, BRACKET_SEED, FIDELITY_DRAW, fold, rng_for


class FidelityObjective(Objective):
    """Wraps an objective so fidelity r in 1..R averages r fresh draws."""

    def __init__(self, parent: Objective, resource: int):
        if resource < 1:
            raise ValueError("declared resource must be at least 1")
        self.parent = parent
        self.resource = int(resource)

    @property
    def dimension(self) -> int:
        return self.parent.dimension

    @property
    def noise_half_width(self) -> float:
        return self.parent.noise_half_width

    @property
    def max_fidelity(self) -> int:
        return self.resource

    def evaluate(self, x, fidelity=None, seed=0):
        r = self.resource if fidelity is None else int(fidelity)
        if not 1 <= r <= self.resource:
            raise ValueError(f"fidelity must lie in 1..{self.resource}, got {r}")
        draws = [
            self.parent.evaluate(
                x, fidelity=self.parent.max_fidelity, seed=fold(FIDELITY_DRAW, seed, i)
            )
            for i in range(r)
        ]
        return math.fsum(draws) / r

    def resolve(self, x, seed=0):
        # convention: resolve through the first draw of the average
        return self.parent.resolve(x, fold(FIDELITY_DRAW, seed, 0))


@dataclass(frozen=True)
class SearchBudget:
    """Budget bookkeeping for baseline runs: a total evaluation budget and
    an optional per-arm resource cap."""

    evaluations: int
    per_arm_resource: int | None = None


@dataclass(frozen=True)
class ArmRecord:
    optimizer: str
    bracket: int | None
    rung: int | None
    arm: int
    resource: int
    config: Configuration
    value: float
    eval_seed: int


@dataclass(frozen=True)
class BaseResult:
    best_config: Configuration
    best_value: float
    log: tuple[ArmRecord, ...]

    @property
    def total_resource(self) -> int:
        return sum(rec.resource for rec in self.log)

    @property
    def total_evaluations(self) -> int:
        return len(self.log)


def random_search(
    f: Objective, budget: int, seed: int = 0, parallel: int = 1
) -> BaseResult:
    """``budget`` uniform configurations, each evaluated at max fidelity."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    n = f.dimension
    r = f.max_fidelity

    def one(i: int) -> ArmRecord:
        x = Configuration.random(n, rng_for(ARM_CONFIG, seed, i))
        es = fold(ARM_EVAL, seed, i)
        v = f.evaluate(x, fidelity=r, seed=es)
        return ArmRecord("random", None, None, i, r, x, float(v), es)

    log = parallel_map(one, budget, parallel)
    best = min(log, key=lambda rec: rec.value)
    return BaseResult(best.config, best.value, tuple(log))


def successive_halving(
    f: Objective,
    num_arms: int,
    eta: int = 2,
    r_min: int = 1,
    seed: int = 0,
    parallel: int = 1,
    _bracket: int | None = None,
    _optimizer: str = "sh",
) -> BaseResult:
    """Successive halving from ``num_arms`` arms at resource ``r_min``.

    Rung k evaluates the surviving arms at resource r_min * eta^k (capped at
    the objective's declared maximum) and keeps the ceil(count/eta) smallest
    current estimates, ties broken by arm index, until one arm remains.  Its
    last (highest-resource) estimate is the reported value.
    """
    if num_arms < 1:
        raise ValueError("need at least one arm")
    if eta < 2:
        raise ValueError("eta must be at least 2")
    if r_min < 1:
        raise ValueError("r_min must be at least 1")
    cap = f.max_fidelity
    n = f.dimension
    arms = [
        Configuration.random(n, rng_for(ARM_CONFIG, seed, i)) for i in range(num_arms)
    ]
    alive = list(range(num_arms))
    log: list[ArmRecord] = []
    rung = 0
    while True:
        r = min(r_min * eta**rung, cap)

        def one(pos: int, rung=rung, r=r) -> ArmRecord:
            arm = alive[pos]
            es = fold(ARM_EVAL, seed, rung, arm)
            v = f.evaluate(arms[arm], fidelity=r, seed=es)
            return ArmRecord(_optimizer, _bracket, rung, arm, r, arms[arm], float(v), es)

        rows = parallel_map(one, len(alive), parallel)
        log.extend(rows)
        if len(alive) == 1:
            winner = rows[0]
            return BaseResult(winner.config, winner.value, tuple(log))
        keep = math.ceil(len(alive) / eta)
        ranked = sorted(rows, key=lambda rec: (rec.value, rec.arm))
        alive = sorted(rec.arm for rec in ranked[:keep])
        rung += 1


def hyperband(
    f: Objective,
    resource: int | None = None,
    eta: int = 2,
    seed: int = 0,
    parallel: int = 1,
) -> BaseResult:
    """Hyperband over successive-halving brackets.

    With maximum resource R and s_max = floor(log_eta R), bracket s (from
    s_max down to 0) runs successive halving with
    n0 = ceil((s_max + 1) * eta^s / (s + 1)) arms starting at resource
    R // eta^s.  Returns the best bracket winner.
    """
    R = f.max_fidelity if resource is None else int(resource)
    if eta < 2:
        raise ValueError("eta must be at least 2")
    if R < eta:
        raise ValueError(f"need R >= eta, got R={R}, eta={eta}")
    if R > f.max_fidelity:
        raise ValueError(
            f"R={R} exceeds the objective's declared resource {f.max_fidelity}"
        )
    s_max = 0
    while eta ** (s_max + 1) <= R:
        s_max += 1
    log: list[ArmRecord] = []
    best: BaseResult | None = None
    for s in range(s_max, -1, -1):
        n0 = math.ceil((s_max + 1) * eta**s / (s + 1))
        r_min = R // eta**s
        res = successive_halving(
            f,
            n0,
            eta=eta,
            r_min=r_min,
            seed=fold(BRACKET_SEED, seed, s),
            parallel=parallel,
            _bracket=s,
            _optimizer="hyperband",
        )
        log.extend(res.log)
        if best is None or res.best_value < best.best_value:
            best = BaseResult(res.best_config, res.best_value, ())
    return BaseResult(best.best_config, best.best_value, tuple(log))


@runtime_checkable
class BaseOptimizer(Protocol):
    """Anything that can finish off a search given an objective and a seed."""

    def run(
        self, f: Objective, seed: int, parallel: int = 1
    ) -> BaseResult: ...


@dataclass(frozen=True)
class RandomSearch:
    budget: int = 200

    def run(self, f: Objective, seed: int, parallel: int = 1) -> BaseResult:
        return random_search(f, self.budget, seed, parallel)


@dataclass(frozen=True)
class SuccessiveHalving:
    num_arms: int = 8
    eta: int = 2
    r_min: int = 1
    resource: int | None = None  # wrap the objective to declare this maximum

    def run(self, f: Objective, seed: int, parallel: int = 1) -> BaseResult:
        g = f if self.resource is None else FidelityObjective(f, self.resource)
        return successive_halving(g, self.num_arms, self.eta, self.r_min, seed, parallel)


@dataclass(frozen=True)
class Hyperband:
    resource: int | None = None
    eta: int = 2

    def run(self, f: Objective, seed: int, parallel: int = 1) -> BaseResult:
        g = f
        if self.resource is not None and f.max_fidelity < self.resource:
            g = FidelityObjective(f, self.resource)
        return hyperband(g, self.resource, self.eta, seed, parallel)


@dataclass(frozen=True)
class ExhaustiveSearch:
    """Evaluate every configuration once (small dimensions only)."""

    cap: int = 20

    def run(self, f: Objective, seed: int, parallel: int = 1) -> BaseResult:
        n = f.dimension
        if n > self.cap:
            raise ValueError(f"exhaustive base capped at {self.cap} variables")
        rows = hypercube_signs(n)

        def one(i: int) -> ArmRecord:
            x = Configuration(tuple(rows[i]))
            es = fold(ARM_EVAL, seed, i)
            v = f.evaluate(x, fidelity=f.max_fidelity, seed=es)
            return ArmRecord("exhaustive", None, None, i, f.max_fidelity, x, float(v), es)

        log = parallel_map(one, len(rows), parallel)
        best = min(log, key=lambda rec: rec.value)
        return BaseResult(best.config, best.value, tuple(log))
