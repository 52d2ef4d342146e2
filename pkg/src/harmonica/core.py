"""Core types for functions on the Boolean hypercube {-1,+1}^n.

Conventions used throughout the package:

* Variables are indexed 1..n.  A configuration assigns a sign to every
  variable; entry ``values[i]`` is the sign of variable ``i+1``.
* A parity function chi_S(x) = prod_{i in S} x_i is named by its index set S,
  a strictly increasing tuple of variable indices.  chi of the empty set is
  the constant 1.
* Multilinear polynomials are stored sparsely as {index set: coefficient}
  with no exactly-zero coefficients.
* Objectives are deterministic given (configuration, fidelity, seed), so any
  evaluation can be replayed in isolation.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Callable, Iterable, Mapping

import numpy as np

from .seeds import NOISE, RESTRICT_PICK, rng_for


class DimensionMismatch(ValueError):
    """A configuration or index set does not fit the expected dimension."""


class PartitionError(ValueError):
    """Two partial assignments do not partition the variable set."""


@dataclass(frozen=True)
class Configuration:
    """A full assignment of signs, one per variable."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        for v in vals:
            if v not in (-1, 1):
                raise ValueError(f"configuration entries must be +1 or -1, got {v}")
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return len(self.values)

    def sign(self, index: int) -> int:
        """Sign of variable ``index`` (1-based)."""
        if not 1 <= index <= len(self.values):
            raise DimensionMismatch(f"variable {index} outside 1..{len(self.values)}")
        return self.values[index - 1]

    def to_string(self) -> str:
        """Compact form: one '+' or '-' per variable."""
        return "".join("+" if v > 0 else "-" for v in self.values)

    @classmethod
    def from_string(cls, text: str) -> "Configuration":
        signs = []
        for ch in text:
            if ch == "+":
                signs.append(1)
            elif ch == "-":
                signs.append(-1)
            else:
                raise ValueError(f"configuration strings use only '+'/'-', got {ch!r}")
        return cls(tuple(signs))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Configuration":
        return cls(tuple(int(v) for v in rng.integers(0, 2, size=n) * 2 - 1))


@total_ordering
@dataclass(frozen=True)
class ParityIndex:
    """Index set S naming the parity chi_S.  Members strictly increasing."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        mem = tuple(int(m) for m in self.members)
        for m in mem:
            if m < 1:
                raise ValueError(f"variable indices are 1-based, got {m}")
        if any(a >= b for a, b in zip(mem, mem[1:])):
            raise ValueError(f"index set must be strictly increasing, got {mem}")
        object.__setattr__(self, "members", mem)

    @classmethod
    def of(cls, *indices: int) -> "ParityIndex":
        return cls(tuple(sorted(int(i) for i in indices)))

    @property
    def degree(self) -> int:
        return len(self.members)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical order: degree first, then lexicographic on members."""
        return (len(self.members), self.members)

    def __lt__(self, other: "ParityIndex") -> bool:
        return self.sort_key() < other.sort_key()


EMPTY_INDEX = ParityIndex(())


def evaluate_parity(index: ParityIndex, x: Configuration) -> int:
    """chi_S(x): the product of the signs x_i over i in S."""
    if index.members and index.members[-1] > x.dimension:
        raise DimensionMismatch(
            f"parity touches variable {index.members[-1]} but configuration "
            f"has dimension {x.dimension}"
        )
    out = 1
    for m in index.members:
        out *= x.values[m - 1]
    return out


@dataclass(frozen=True, eq=True)
class SparsePolynomial:
    """Multilinear polynomial sum_S c_S chi_S with sparse term storage.

    Exactly-zero coefficients are dropped at construction so the stored
    support is meaningful.
    """

    dimension: int
    terms: Mapping[ParityIndex, float]

    def __post_init__(self) -> None:
        kept: dict[ParityIndex, float] = {}
        for index, coeff in self.terms.items():
            if not isinstance(index, ParityIndex):
                index = ParityIndex(tuple(index))
            if index.members and index.members[-1] > self.dimension:
                raise DimensionMismatch(
                    f"term {index.members} exceeds dimension {self.dimension}"
                )
            c = float(coeff)
            if not math.isfinite(c):
                raise ValueError(f"coefficient for {index.members} is not finite")
            if c != 0.0:
                kept[index] = c
        object.__setattr__(self, "terms", kept)

    @property
    def sparsity(self) -> int:
        return len(self.terms)

    def l1_norm(self) -> float:
        return math.fsum(abs(c) for c in self.terms.values())

    def coefficient(self, index: ParityIndex) -> float:
        return self.terms.get(index, 0.0)

    def variables(self) -> tuple[int, ...]:
        """Sorted union of all member indices across terms."""
        seen: set[int] = set()
        for index in self.terms:
            seen.update(index.members)
        return tuple(sorted(seen))

    def canonical_terms(self) -> list[tuple[ParityIndex, float]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def evaluate(self, x: Configuration) -> float:
        if x.dimension != self.dimension:
            raise DimensionMismatch(
                f"polynomial has dimension {self.dimension}, "
                f"configuration {x.dimension}"
            )
        return math.fsum(
            c * evaluate_parity(index, x) for index, c in self.canonical_terms()
        )

    def evaluate_signs(self, signs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on a (rows, dimension) matrix of signs."""
        signs = np.asarray(signs)
        if signs.ndim != 2 or signs.shape[1] != self.dimension:
            raise DimensionMismatch(
                f"sign matrix must have {self.dimension} columns, "
                f"got shape {signs.shape}"
            )
        out = np.zeros(signs.shape[0])
        for index, c in self.canonical_terms():
            if index.members:
                cols = [m - 1 for m in index.members]
                out += c * signs[:, cols].prod(axis=1)
            else:
                out += c
        return out

    def pruned(self, tol: float) -> "SparsePolynomial":
        """Copy without terms of magnitude <= tol."""
        return SparsePolynomial(
            self.dimension,
            {s: c for s, c in self.terms.items() if abs(c) > tol},
        )


def evaluate_polynomial(poly: SparsePolynomial, x: Configuration) -> float:
    return poly.evaluate(x)


@dataclass(frozen=True)
class PartialAssignment:
    """Signs for a subset of variables, stored as sorted (index, sign) pairs."""

    items: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(i), int(s)) for i, s in self.items)
        for i, s in pairs:
            if i < 1:
                raise ValueError(f"variable indices are 1-based, got {i}")
            if s not in (-1, 1):
                raise ValueError(f"signs must be +1 or -1, got {s}")
        idx = [i for i, _ in pairs]
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("assignment indices must be strictly increasing")
        object.__setattr__(self, "items", pairs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "PartialAssignment":
        return cls(tuple(sorted((int(i), int(s)) for i, s in mapping.items())))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.items)

    def mapping(self) -> dict[int, int]:
        return dict(self.items)


EMPTY_ASSIGNMENT = PartialAssignment(())


def merge_assignment(z: PartialAssignment, y: PartialAssignment) -> Configuration:
    """Combine signs on J (``z``) and its complement (``y``) into one
    configuration over 1..n where n = |J| + |complement|.

    Raises PartitionError unless the two index sets are disjoint and jointly
    cover 1..n exactly.
    """
    n = len(z.items) + len(y.items)
    merged: dict[int, int] = {}
    for i, s in z.items + y.items:
        if i in merged:
            raise PartitionError(f"variable {i} assigned twice")
        if i > n:
            raise PartitionError(
                f"variable {i} outside 1..{n}; assignments must partition 1..n"
            )
        merged[i] = s
    # disjoint + all within 1..n + correct count => exact cover
    return Configuration(tuple(merged[i] for i in range(1, n + 1)))


@dataclass(frozen=True)
class RestrictionLayer:
    """A fixed index set J plus t candidate assignments covering exactly J."""

    fixed: tuple[int, ...]
    assignments: tuple[PartialAssignment, ...]
    stage: int = 0

    def __post_init__(self) -> None:
        fixed = tuple(int(i) for i in self.fixed)
        if any(a >= b for a, b in zip(fixed, fixed[1:])):
            raise ValueError("fixed index set must be strictly increasing")
        object.__setattr__(self, "fixed", fixed)
        if not self.assignments:
            raise ValueError("a restriction layer needs at least one assignment")
        for a in self.assignments:
            if a.indices != fixed:
                raise ValueError(
                    f"assignment covers {a.indices}, layer fixes {fixed}"
                )

    @property
    def size(self) -> int:
        return len(self.assignments)


class Objective(ABC):
    """Black-box function on the hypercube with replayable randomness.

    ``evaluate`` must return identical values for identical
    (configuration, fidelity, seed) triples.  Objectives without a fidelity
    notion ignore the argument.  ``noise_half_width`` describes the additive
    noise level (0.0 for noiseless objectives).
    """

    @property
    @abstractmethod
    def dimension(self) -> int: ...

    @property
    def noise_half_width(self) -> float:
        return 0.0

    @property
    def max_fidelity(self) -> int:
        return 1

    @abstractmethod
    def evaluate(
        self, x: Configuration, fidelity: int | None = None, seed: int = 0
    ) -> float: ...

    def resolve(self, x: Configuration, seed: int = 0) -> Configuration:
        """Root-space configuration actually probed by evaluate(x, ., seed).

        Identity for plain objectives; restriction wrappers replay their
        candidate draw and map through.
        """
        self.check_input(x)
        return x

    def check_input(self, x: Configuration) -> None:
        if x.dimension != self.dimension:
            raise DimensionMismatch(
                f"objective has dimension {self.dimension}, "
                f"configuration {x.dimension}"
            )


def uniform_noise(half_width: float, base_seed: int, eval_seed: int) -> float:
    """One noise draw from the stream keyed by (base_seed, eval_seed)."""
    if half_width == 0.0:
        return 0.0
    return float(rng_for(NOISE, base_seed, eval_seed).uniform(-half_width, half_width))


class RestrictedObjective(Objective):
    """Objective with one layer of variables fixed to candidate assignments.

    With a single candidate the restriction is deterministic.  With t > 1
    candidates, each evaluation at seed m picks one uniformly from the stream
    keyed by (master_seed, m), realizing a stochastic average over the
    candidates while staying replayable.
    """

    def __init__(self, parent: Objective, layer: RestrictionLayer, master_seed: int):
        if layer.fixed and layer.fixed[-1] > parent.dimension:
            raise DimensionMismatch(
                f"layer fixes variable {layer.fixed[-1]} but parent has "
                f"dimension {parent.dimension}"
            )
        self.parent = parent
        self.layer = layer
        self.master_seed = int(master_seed)
        fixed = set(layer.fixed)
        # parent indices left free, in increasing order; free position p
        # (1-based) of this objective is parent variable self.free[p-1]
        self.free = tuple(i for i in range(1, parent.dimension + 1) if i not in fixed)

    @property
    def dimension(self) -> int:
        return len(self.free)

    @property
    def noise_half_width(self) -> float:
        return self.parent.noise_half_width

    @property
    def max_fidelity(self) -> int:
        return self.parent.max_fidelity

    def pick(self, seed: int) -> int:
        """Index of the candidate assignment used at this evaluation seed."""
        if self.layer.size == 1:
            return 0
        return int(
            rng_for(RESTRICT_PICK, self.master_seed, seed).integers(self.layer.size)
        )

    def embed(self, y: Configuration, choice: int) -> Configuration:
        """Parent-space configuration from free signs ``y`` and a candidate."""
        self.check_input(y)
        free_part = PartialAssignment(tuple(zip(self.free, y.values)))
        return merge_assignment(self.layer.assignments[choice], free_part)

    def evaluate(
        self, x: Configuration, fidelity: int | None = None, seed: int = 0
    ) -> float:
        merged = self.embed(x, self.pick(seed))
        return self.parent.evaluate(merged, fidelity=fidelity, seed=seed)

    def resolve(self, x: Configuration, seed: int = 0) -> Configuration:
        merged = self.embed(x, self.pick(seed))
        return self.parent.resolve(merged, seed)


def restrict(
    f: Objective, layer: RestrictionLayer, master_seed: int
) -> RestrictedObjective:
    """Fix ``layer``'s variables of ``f``, leaving the rest free."""
    return RestrictedObjective(f, layer, master_seed)


def hypercube_signs(n: int) -> np.ndarray:
    """All 2^n sign rows in lexicographic order with +1 before -1.

    Row 0 is all +1, the last row all -1; variable 1 varies slowest.  This is
    the package-wide tie-breaking order for exhaustive enumeration.
    """
    if n < 0:
        raise ValueError("dimension must be non-negative")
    if n > 24:
        raise ValueError(f"refusing to materialize 2^{n} rows")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    codes = np.arange(2**n, dtype=np.int64)[:, None]
    bits = (codes >> (n - 1 - np.arange(n))) & 1
    return (1 - 2 * bits).astype(np.int8)
