"""Spectral hyperparameter optimization over the Boolean hypercube.

Hyperparameter configurations are points of {-1,+1}^n.  A sparse low-degree
polynomial surrogate is recovered from noisy objective samples via Lasso on
the parity basis, its minimizers fix the influential variables, and the
search recurses on the restricted objective.
"""

from .baselines import (
    ArmRecord,
    BaseOptimizer,
    BaseResult,
    ExhaustiveSearch,
    FidelityObjective,
    Hyperband,
    RandomSearch,
    SearchBudget,
    SuccessiveHalving,
    hyperband,
    random_search,
    successive_halving,
)
from .basis import (
    BASIS_CAP,
    BasisTooLarge,
    DesignMatrix,
    MonomialBasis,
    basis_size,
    design_matrix,
    enumerate_monomials,
    full_fourier_transform,
)
from .cli import (
    ConfigError,
    ExperimentConfig,
    NoiseSweepResult,
    RunSummary,
    build_objective,
    build_optimizer,
    noise_sweep,
    run_experiment,
    verify_artifacts,
)
from .core import (
    EMPTY_ASSIGNMENT,
    EMPTY_INDEX,
    Configuration,
    DimensionMismatch,
    Objective,
    ParityIndex,
    PartialAssignment,
    PartitionError,
    RestrictedObjective,
    RestrictionLayer,
    SparsePolynomial,
    evaluate_parity,
    evaluate_polynomial,
    hypercube_signs,
    merge_assignment,
    restrict,
    uniform_noise,
)
from .lasso import (
    LassoProblem,
    LassoSolution,
    lasso_fit,
    lasso_objective,
    soft_threshold,
)
from .objectives import (
    DecisionTreeObjective,
    DecisionTreeSpec,
    FunctionObjective,
    HierarchicalObjective,
    HierarchicalSpec,
    PolynomialObjective,
    TreeNode,
    WeightedVector,
    gen_decision_tree_objective,
    gen_hierarchical_objective,
    gen_sparse_polynomial_objective,
    global_min_bruteforce,
)
from .parallel import parallel_map
from .psr import (
    PsrParams,
    PsrResult,
    SampleRecord,
    draw_samples,
    psr,
    stage_psr_params,
    top_s_select,
)
from .search import (
    EnumerationTooLarge,
    EvalRecord,
    HarmonicaParams,
    HarmonicaTrace,
    StageRecord,
    harmonica_1,
    harmonica_q,
    minimize_sparse_poly,
    stage_average_error,
)
from .seeds import fold, rng_for

__version__ = "0.1.0"

__all__ = [
    "ArmRecord",
    "BASIS_CAP",
    "BaseOptimizer",
    "BaseResult",
    "BasisTooLarge",
    "ConfigError",
    "Configuration",
    "DecisionTreeObjective",
    "DecisionTreeSpec",
    "DesignMatrix",
    "DimensionMismatch",
    "EMPTY_ASSIGNMENT",
    "EMPTY_INDEX",
    "EnumerationTooLarge",
    "EvalRecord",
    "ExhaustiveSearch",
    "ExperimentConfig",
    "FidelityObjective",
    "FunctionObjective",
    "HarmonicaParams",
    "HarmonicaTrace",
    "HierarchicalObjective",
    "HierarchicalSpec",
    "Hyperband",
    "LassoProblem",
    "LassoSolution",
    "MonomialBasis",
    "NoiseSweepResult",
    "Objective",
    "ParityIndex",
    "PartialAssignment",
    "PartitionError",
    "PolynomialObjective",
    "PsrParams",
    "PsrResult",
    "RandomSearch",
    "RestrictedObjective",
    "RestrictionLayer",
    "RunSummary",
    "SampleRecord",
    "SearchBudget",
    "SparsePolynomial",
    "StageRecord",
    "SuccessiveHalving",
    "TreeNode",
    "WeightedVector",
    "basis_size",
    "build_objective",
    "build_optimizer",
    "design_matrix",
    "draw_samples",
    "enumerate_monomials",
    "evaluate_parity",
    "evaluate_polynomial",
    "fold",
    "full_fourier_transform",
    "gen_decision_tree_objective",
    "gen_hierarchical_objective",
    "gen_sparse_polynomial_objective",
    "global_min_bruteforce",
    "harmonica_1",
    "harmonica_q",
    "hyperband",
    "hypercube_signs",
    "lasso_fit",
    "lasso_objective",
    "merge_assignment",
    "minimize_sparse_poly",
    "noise_sweep",
    "parallel_map",
    "psr",
    "random_search",
    "restrict",
    "rng_for",
    "run_experiment",
    "soft_threshold",
    "stage_average_error",
    "stage_psr_params",
    "successive_halving",
    "top_s_select",
    "uniform_noise",
    "verify_artifacts",
]
