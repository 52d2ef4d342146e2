"""Polynomial sparse recovery: sample the objective, fit a low-degree
L1-regularized least-squares surrogate, keep the s largest terms.

The surrogate g carries the fitted coefficients of the selected terms as-is
(no refit), and J is the union of their index sets, so |J| <= s * d.  The
constant term is excluded from selection by default: it shifts every value
equally and cannot influence a minimizer.  Pass ``exclude_constant=False``
when the intercept matters (e.g. sign prediction).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import BASIS_CAP, design_matrix, enumerate_monomials
from .core import Configuration, Objective, ParityIndex, SparsePolynomial
from .lasso import LassoProblem, LassoSolution, lasso_fit
from .parallel import parallel_map
from .seeds import EVAL_SEED, SAMPLE_DRAW, fold, rng_for


@dataclass(frozen=True)
class PsrParams:
    samples: int = 300
    sparsity: int = 5
    degree: int = 3
    lam: float = 1.0
    seed: int = 0
    exclude_constant: bool = True
    basis_cap: int = BASIS_CAP


@dataclass(frozen=True)
class SampleRecord:
    index: int
    config: Configuration
    value: float
    eval_seed: int


@dataclass(frozen=True)
class PsrResult:
    surrogate: SparsePolynomial
    variable_set: tuple[int, ...]
    samples: tuple[SampleRecord, ...]
    coefficient_summary: tuple[tuple[ParityIndex, float], ...]
    solution: LassoSolution


def draw_samples(
    f: Objective, count: int, seed: int, parallel: int = 1
) -> list[SampleRecord]:
    """``count`` uniform configurations and their objective values.

    Sample m comes from the stream (seed, m) and is evaluated at maximum
    fidelity with its own derived evaluation seed, so any record can be
    reproduced in isolation and worker count cannot change the result.
    """
    if count < 1:
        raise ValueError("need at least one sample")
    n = f.dimension

    def one(m: int) -> SampleRecord:
        rng = rng_for(SAMPLE_DRAW, seed, m)
        x = Configuration.random(n, rng)
        es = fold(EVAL_SEED, seed, m)
        v = f.evaluate(x, fidelity=f.max_fidelity, seed=es)
        return SampleRecord(m, x, float(v), es)

    return parallel_map(one, count, parallel)


def top_s_select(
    coefficients: np.ndarray,
    basis,
    s: int,
    exclude_constant: bool = True,
) -> list[tuple[ParityIndex, float]]:
    """The s largest-magnitude terms, skipping exact zeros.

    Ties in magnitude break toward the canonical basis order (lower degree
    first, then lexicographic).
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    candidates = []
    for j, index in enumerate(basis.indices):
        c = float(coefficients[j])
        if c == 0.0:
            continue
        if exclude_constant and index.degree == 0:
            continue
        candidates.append((index, c))
    candidates.sort(key=lambda kv: (-abs(kv[1]), kv[0].sort_key()))
    return candidates[:s]


def psr(f: Objective, params: PsrParams, parallel: int = 1) -> PsrResult:
    """Procedure: sample, fit, select.

    Fits  min_a sum_i (sum_S a_S chi_S(x_i) - y_i)^2 + lam ||a||_1  over all
    monomials of degree <= params.degree, with the constant column exempt
    from the penalty, then keeps the params.sparsity largest terms.
    """
    if params.degree > f.dimension:
        raise ValueError(
            f"degree {params.degree} exceeds objective dimension {f.dimension}"
        )
    records = draw_samples(f, params.samples, params.seed, parallel)
    basis = enumerate_monomials(f.dimension, params.degree, params.basis_cap)
    design = design_matrix(tuple(r.config for r in records), basis)
    y = np.array([r.value for r in records])
    penalized = np.array([ix.degree > 0 for ix in basis.indices])
    solution = lasso_fit(
        LassoProblem(design, y, lam=params.lam, penalized=penalized)
    )
    selected = top_s_select(
        solution.coefficients, basis, params.sparsity, params.exclude_constant
    )
    surrogate = SparsePolynomial(f.dimension, dict(selected))
    summary = top_s_select(
        solution.coefficients, basis, 3 * params.sparsity, exclude_constant=False
    )
    return PsrResult(
        surrogate=surrogate,
        variable_set=surrogate.variables(),
        samples=tuple(records),
        coefficient_summary=tuple(summary),
        solution=solution,
    )


def stage_psr_params(params: PsrParams, stage: int, master_seed: int) -> PsrParams:
    """Per-stage copy with a seed derived from the master seed."""
    from .seeds import STAGE_SEED

    return replace(params, seed=fold(STAGE_SEED, master_seed, stage))
