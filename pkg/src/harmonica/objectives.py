"""Synthetic objectives with known structure, plus a brute-force minimizer.

Three generator families:

* sparse polynomials with planted support (recovery benchmarks),
* a three-stage hierarchical function where the active sparse vector at each
  stage is selected by sign patterns of the previous stage's monomials
  (optimization benchmarks with controlled noise),
* random decision trees (learning benchmarks; a depth-D tree has Fourier
  degree at most D).

All generators are pure functions of their arguments: the same seed always
yields the same objective, and the returned spec serializes to JSON so an
experiment can be reconstructed from its artifacts alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .basis import enumerate_monomials
from .core import (
    Configuration,
    Objective,
    ParityIndex,
    SparsePolynomial,
    hypercube_signs,
    uniform_noise,
)
from .seeds import GENERATOR, rng_for

HIERARCHICAL_STAGES = 3
HIERARCHICAL_FANOUT = 32      # vectors at stage i: FANOUT**(i-1)
HIERARCHICAL_PAIRS = 5        # weighted monomials per sparse vector
HIERARCHICAL_DEGREE = 3


class FunctionObjective(Objective):
    """Wrap a plain callable as an objective (mostly for tests)."""

    def __init__(self, n, fn, noise_half_width=0.0, seed=0, label="function"):
        self._n = int(n)
        self._fn = fn
        self._noise = float(noise_half_width)
        self._seed = int(seed)
        self.label = label

    @property
    def dimension(self) -> int:
        return self._n

    @property
    def noise_half_width(self) -> float:
        return self._noise

    def evaluate(self, x, fidelity=None, seed=0):
        self.check_input(x)
        return float(self._fn(x)) + uniform_noise(self._noise, self._seed, seed)


class PolynomialObjective(Objective):
    """A sparse polynomial plus uniform noise of a given half-width."""

    def __init__(self, polynomial: SparsePolynomial, noise_half_width=0.0, seed=0):
        self.polynomial = polynomial
        self._noise = float(noise_half_width)
        self._seed = int(seed)

    @property
    def dimension(self) -> int:
        return self.polynomial.dimension

    @property
    def noise_half_width(self) -> float:
        return self._noise

    def evaluate(self, x, fidelity=None, seed=0):
        self.check_input(x)
        return self.polynomial.evaluate(x) + uniform_noise(self._noise, self._seed, seed)


def gen_sparse_polynomial_objective(
    n: int,
    sparsity: int,
    degree: int,
    coeff_low: float,
    coeff_high: float,
    noise_half_width: float = 0.0,
    seed: int = 0,
) -> tuple[PolynomialObjective, SparsePolynomial]:
    """Plant ``sparsity`` distinct non-constant monomials of degree <= degree
    with coefficient magnitudes uniform in [coeff_low, coeff_high] and random
    signs.  Returns the noisy objective and the clean ground truth."""
    if not 0 < coeff_low <= coeff_high:
        raise ValueError("need 0 < coeff_low <= coeff_high")
    basis = enumerate_monomials(n, degree)
    candidates = [ix for ix in basis.indices if ix.degree > 0]
    if sparsity > len(candidates):
        raise ValueError(
            f"cannot plant {sparsity} terms: only {len(candidates)} "
            f"non-constant monomials of degree <= {degree} on {n} variables"
        )
    rng = rng_for(GENERATOR, seed)
    chosen = rng.choice(len(candidates), size=sparsity, replace=False)
    magnitudes = rng.uniform(coeff_low, coeff_high, size=sparsity)
    signs = rng.integers(0, 2, size=sparsity) * 2 - 1
    terms = {
        candidates[int(c)]: float(m * s)
        for c, m, s in zip(chosen, magnitudes, signs)
    }
    truth = SparsePolynomial(n, terms)
    return PolynomialObjective(truth, noise_half_width, seed), truth


@dataclass(frozen=True)
class WeightedVector:
    """One sparse vector: an ordered list of (weight, monomial) pairs.

    Pair order matters: the k-th monomial's sign is bit k of the selector
    code, so pairs are kept in generation order, not sorted.
    """

    pairs: tuple[tuple[float, ParityIndex], ...]

    def value(self, x: Configuration) -> float:
        total = 0.0
        for w, ix in self.pairs:
            p = 1
            for m in ix.members:
                p *= x.values[m - 1]
            total += w * p
        return total

    def selector(self, x: Configuration) -> int:
        """Decode the monomial signs into an integer: sign +1 contributes
        bit 1, the first pair is the least significant bit."""
        code = 0
        for k, (_, ix) in enumerate(self.pairs):
            p = 1
            for m in ix.members:
                p *= x.values[m - 1]
            if p > 0:
                code |= 1 << k
        return code

    def polynomial(self, n: int) -> SparsePolynomial:
        acc: dict[ParityIndex, float] = {}
        for w, ix in self.pairs:
            acc[ix] = acc.get(ix, 0.0) + w
        return SparsePolynomial(n, acc)


@dataclass(frozen=True)
class HierarchicalSpec:
    """Full description of a generated hierarchical objective.

    ``stages[i-1]`` holds the 32^(i-1) sparse vectors of stage i.  Stage-i
    weights are uniform in [10 + 10^(1-i), 10 + 10^(3-i)], so earlier stages
    dominate.  The active vector at stage 2 is chosen by stage 1's selector
    code c1, and at stage 3 by c1 * 32 + c2.
    """

    dimension: int
    noise_half_width: float
    seed: int
    stages: tuple[tuple[WeightedVector, ...], ...]

    def stage1_polynomial(self) -> SparsePolynomial:
        return self.stages[0][0].polynomial(self.dimension)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "hierarchical",
            "n": self.dimension,
            "noise": self.noise_half_width,
            "seed": self.seed,
            "stages": [
                [
                    [[w, list(ix.members)] for w, ix in vec.pairs]
                    for vec in stage
                ]
                for stage in self.stages
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HierarchicalSpec":
        stages = tuple(
            tuple(
                WeightedVector(
                    tuple((float(w), ParityIndex(tuple(m))) for w, m in vec)
                )
                for vec in stage
            )
            for stage in data["stages"]
        )
        return cls(int(data["n"]), float(data["noise"]), int(data["seed"]), stages)


class HierarchicalObjective(Objective):
    """h(x) = s_1(x) + s_2,c1(x) + s_3,(c1*32+c2)(x) + noise."""

    def __init__(self, spec: HierarchicalSpec):
        self.spec = spec

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    @property
    def noise_half_width(self) -> float:
        return self.spec.noise_half_width

    def clean_value(self, x: Configuration) -> float:
        s1 = self.spec.stages[0][0]
        total = s1.value(x)
        c1 = s1.selector(x)
        s2 = self.spec.stages[1][c1]
        total += s2.value(x)
        c2 = s2.selector(x)
        total += self.spec.stages[2][c1 * HIERARCHICAL_FANOUT + c2].value(x)
        return total

    def evaluate(self, x, fidelity=None, seed=0):
        self.check_input(x)
        return self.clean_value(x) + uniform_noise(
            self.spec.noise_half_width, self.spec.seed, seed
        )


def gen_hierarchical_objective(
    n: int, noise_half_width: float = 0.0, seed: int = 0
) -> tuple[HierarchicalObjective, HierarchicalSpec]:
    """Generate the three-stage hierarchical benchmark on n >= 3 variables.

    Every sparse vector holds 5 weighted monomials of degree 1..3, drawn
    without replacement, weights positive.  Stage weight ranges are
    [11, 110], [10.1, 20] and [10.01, 11].
    """
    if n < HIERARCHICAL_DEGREE:
        raise ValueError(f"need n >= {HIERARCHICAL_DEGREE}, got {n}")
    basis = enumerate_monomials(n, HIERARCHICAL_DEGREE)
    candidates = [ix for ix in basis.indices if ix.degree > 0]
    rng = rng_for(GENERATOR, seed)
    stages = []
    for stage in range(1, HIERARCHICAL_STAGES + 1):
        low = 10.0 + 10.0 ** (1 - stage)
        high = 10.0 + 10.0 ** (3 - stage)
        vectors = []
        for _ in range(HIERARCHICAL_FANOUT ** (stage - 1)):
            chosen = rng.choice(len(candidates), size=HIERARCHICAL_PAIRS, replace=False)
            weights = rng.uniform(low, high, size=HIERARCHICAL_PAIRS)
            vectors.append(
                WeightedVector(
                    tuple(
                        (float(w), candidates[int(c)])
                        for w, c in zip(weights, chosen)
                    )
                )
            )
        stages.append(tuple(vectors))
    spec = HierarchicalSpec(n, float(noise_half_width), int(seed), tuple(stages))
    return HierarchicalObjective(spec), spec


@dataclass(frozen=True)
class TreeNode:
    """Internal node (var, low, high) or leaf (value).  At an internal node
    sign +1 on ``var`` descends into ``high``."""

    var: int | None = None
    value: float | None = None
    low: "TreeNode | None" = None
    high: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.var is None

    def to_dict(self) -> dict[str, Any]:
        if self.is_leaf:
            return {"value": self.value}
        return {
            "var": self.var,
            "low": self.low.to_dict(),
            "high": self.high.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TreeNode":
        if "value" in data:
            return cls(value=float(data["value"]))
        return cls(
            var=int(data["var"]),
            low=cls.from_dict(data["low"]),
            high=cls.from_dict(data["high"]),
        )


@dataclass(frozen=True)
class DecisionTreeSpec:
    dimension: int
    depth: int
    root: TreeNode
    noise_half_width: float = 0.0
    seed: int = 0

    @property
    def leaves(self) -> int:
        return 2**self.depth

    def walk(self, x: Configuration) -> float:
        node = self.root
        while not node.is_leaf:
            node = node.high if x.values[node.var - 1] > 0 else node.low
        return node.value

    def variables(self) -> tuple[int, ...]:
        seen: set[int] = set()

        def visit(node: TreeNode) -> None:
            if not node.is_leaf:
                seen.add(node.var)
                visit(node.low)
                visit(node.high)

        visit(self.root)
        return tuple(sorted(seen))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "decision-tree",
            "n": self.dimension,
            "depth": self.depth,
            "noise": self.noise_half_width,
            "seed": self.seed,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DecisionTreeSpec":
        return cls(
            int(data["n"]),
            int(data["depth"]),
            TreeNode.from_dict(data["root"]),
            float(data.get("noise", 0.0)),
            int(data.get("seed", 0)),
        )


class DecisionTreeObjective(Objective):
    def __init__(self, spec: DecisionTreeSpec):
        self.spec = spec

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    @property
    def noise_half_width(self) -> float:
        return self.spec.noise_half_width

    def evaluate(self, x, fidelity=None, seed=0):
        self.check_input(x)
        return self.spec.walk(x) + uniform_noise(
            self.spec.noise_half_width, self.spec.seed, seed
        )


def gen_decision_tree_objective(
    n: int,
    depth: int,
    leaf_range: float = 1.0,
    boolean_leaves: bool = False,
    noise_half_width: float = 0.0,
    seed: int = 0,
) -> tuple[DecisionTreeObjective, DecisionTreeSpec]:
    """Random complete binary tree of the given depth.

    Split variables are distinct along every root-to-leaf path (reuse across
    branches is allowed).  Leaves are uniform in [-leaf_range, +leaf_range],
    or fair +1/-1 coins when ``boolean_leaves`` is set.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > n:
        raise ValueError(f"depth {depth} needs more variables than n={n}")
    rng = rng_for(GENERATOR, seed)

    def grow(level: int, available: list[int]) -> TreeNode:
        if level == depth:
            if boolean_leaves:
                return TreeNode(value=float(rng.integers(0, 2) * 2 - 1))
            return TreeNode(value=float(rng.uniform(-leaf_range, leaf_range)))
        pick = int(available[rng.integers(len(available))])
        rest = [v for v in available if v != pick]
        low = grow(level + 1, rest)
        high = grow(level + 1, rest)
        return TreeNode(var=pick, low=low, high=high)

    spec = DecisionTreeSpec(
        n, depth, grow(0, list(range(1, n + 1))), float(noise_half_width), int(seed)
    )
    return DecisionTreeObjective(spec), spec


def global_min_bruteforce(f: Objective) -> tuple[Configuration, float]:
    """Exact minimizer of a noiseless objective by exhaustive scan (n <= 20).

    Ties break lexicographically with +1 before -1; evaluations use seed 0
    at maximum fidelity.
    """
    n = f.dimension
    if n > 20:
        raise ValueError(f"exhaustive minimization capped at n=20, got {n}")
    if f.noise_half_width != 0.0:
        raise ValueError("exhaustive minimization requires a noiseless objective")
    best_cfg: Configuration | None = None
    best_val = math.inf
    for row in hypercube_signs(n):
        x = Configuration(tuple(row))
        v = f.evaluate(x, fidelity=f.max_fidelity, seed=0)
        if v < best_val:
            best_val = v
            best_cfg = x
    return best_cfg, float(best_val)
