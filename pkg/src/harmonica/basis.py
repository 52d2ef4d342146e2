"""Low-degree parity bases, design matrices, and an exhaustive transform.

The design matrix A for samples x_1..x_T and basis chi_{S_1}..chi_{S_N} has
A[i, j] = chi_{S_j}(x_i), entries +1/-1 stored one byte each.  For uniform
samples the columns form a random orthonormal family: (1/T) A^T A -> identity
as T grows, which is what makes sparse recovery from few samples work.

``full_fourier_transform`` computes every coefficient of a noiseless function
by exhaustive expectation over all 2^n points.  It is deliberately naive so
it can serve as an independent oracle for the recovery pipeline; cost grows
as 4^n, practical up to n around 16.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    Configuration,
    DimensionMismatch,
    Objective,
    ParityIndex,
    SparsePolynomial,
    hypercube_signs,
)

BASIS_CAP = 5_000_000
# beyond this many sign entries the design stays matrix-free
DENSE_ENTRY_CAP = 200_000_000


class BasisTooLarge(ValueError):
    """Requested basis enumeration exceeds the size cap."""


def basis_size(n: int, degree: int) -> int:
    """Number of index sets of degree <= degree on n variables."""
    return sum(math.comb(n, k) for k in range(degree + 1))


def enumerate_monomials(
    n: int, degree: int, cap: int = BASIS_CAP
) -> "MonomialBasis":
    """All index sets with degree <= ``degree`` in canonical order
    (degree first, then lexicographic on members)."""
    if n < 0:
        raise ValueError("dimension must be non-negative")
    if not 0 <= degree <= n:
        raise ValueError(f"degree must lie in 0..{n}, got {degree}")
    count = basis_size(n, degree)
    if count > cap:
        raise BasisTooLarge(
            f"basis would hold N={count} monomials, over the cap of {cap}"
        )
    indices: list[ParityIndex] = []
    for k in range(degree + 1):
        for combo in combinations(range(1, n + 1), k):
            indices.append(ParityIndex(combo))
    return MonomialBasis(n, degree, tuple(indices))


@dataclass(frozen=True)
class MonomialBasis:
    """Canonically ordered low-degree parity basis."""

    dimension: int
    degree: int
    indices: tuple[ParityIndex, ...]

    @property
    def size(self) -> int:
        return len(self.indices)

    def position(self, index: ParityIndex) -> int:
        try:
            return self.indices.index(index)
        except ValueError:
            raise KeyError(f"{index.members} not in basis") from None


def _sample_matrix(samples: tuple[Configuration, ...], n: int) -> np.ndarray:
    rows = np.empty((len(samples), n), dtype=np.int8)
    for i, x in enumerate(samples):
        if x.dimension != n:
            raise DimensionMismatch(
                f"sample {i} has dimension {x.dimension}, expected {n}"
            )
        rows[i] = x.values
    return rows


@dataclass
class DesignMatrix:
    """Parity values of a basis at sample points.

    ``signs`` is the dense (T, N) byte matrix when it fits the memory cap,
    otherwise None and columns are recomputed on demand from the samples.
    """

    basis: MonomialBasis
    samples: tuple[Configuration, ...]
    sample_signs: np.ndarray
    signs: np.ndarray | None

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.samples), self.basis.size)

    @property
    def is_dense(self) -> bool:
        return self.signs is not None

    def column(self, j: int) -> np.ndarray:
        """Column j as float64 (computed on the fly when matrix-free)."""
        if self.signs is not None:
            return self.signs[:, j].astype(np.float64)
        return _parity_column(self.sample_signs, self.basis.indices[j]).astype(
            np.float64
        )

    def dense(self) -> np.ndarray:
        """Full float64 design, Fortran order (contiguous columns)."""
        if self.signs is not None:
            return np.asfortranarray(self.signs, dtype=np.float64)
        out = np.empty(self.shape, dtype=np.float64, order="F")
        for j in range(self.basis.size):
            out[:, j] = self.column(j)
        return out


def _parity_column(sample_signs: np.ndarray, index: ParityIndex) -> np.ndarray:
    if not index.members:
        return np.ones(sample_signs.shape[0], dtype=np.int8)
    cols = [m - 1 for m in index.members]
    return sample_signs[:, cols].prod(axis=1, dtype=np.int8)


def design_matrix(
    samples: tuple[Configuration, ...] | list[Configuration],
    basis: MonomialBasis,
    dense_entry_cap: int = DENSE_ENTRY_CAP,
) -> DesignMatrix:
    samples = tuple(samples)
    if not samples:
        raise ValueError("need at least one sample")
    X = _sample_matrix(samples, basis.dimension)
    total = len(samples) * basis.size
    if total <= dense_entry_cap:
        signs = np.empty((len(samples), basis.size), dtype=np.int8)
        for j, index in enumerate(basis.indices):
            signs[:, j] = _parity_column(X, index)
    else:
        signs = None
    return DesignMatrix(basis, samples, X, signs)


def full_fourier_transform(f: Objective, n: int) -> SparsePolynomial:
    """Exact Fourier expansion of a noiseless objective by exhaustion.

    Evaluates f on all 2^n points (fidelity at maximum, seed 0) and computes
    every coefficient as the empirical expectation f_hat(S) = mean f(x)
    chi_S(x).  Products are reused down the subset lattice, so the arithmetic
    cost is one length-2^n pass per subset.  Exactly-zero coefficients are
    dropped.
    """
    if n > 22:
        raise ValueError(f"exhaustive transform capped at n=22, got {n}")
    if f.dimension != n:
        raise DimensionMismatch(
            f"objective has dimension {f.dimension}, requested n={n}"
        )
    if f.noise_half_width != 0.0:
        raise ValueError("exhaustive transform requires a noiseless objective")
    signs = hypercube_signs(n)
    values = np.array(
        [
            f.evaluate(Configuration(tuple(row)), fidelity=f.max_fidelity, seed=0)
            for row in signs
        ],
        dtype=np.float64,
    )
    scale = float(2**n)
    terms: dict[ParityIndex, float] = {}
    fsigns = signs.astype(np.float64)

    def descend(members: tuple[int, ...], prod: np.ndarray) -> None:
        coeff = float(prod.sum()) / scale
        if coeff != 0.0:
            terms[ParityIndex(members)] = coeff
        start = members[-1] if members else 0
        for i in range(start + 1, n + 1):
            descend(members + (i,), prod * fsigns[:, i - 1])

    descend((), values.copy())
    return SparsePolynomial(n, terms)
