"""Deterministic random-stream derivation.

Every random draw in this package comes from a generator keyed by a tuple of
non-negative integers fed to numpy's SeedSequence.  The first element of each
key is a role tag, so streams used for different purposes stay disjoint even
when the remaining parts coincide (e.g. the same master seed reused for sample
draws and for noise).  Because streams are keyed rather than sequential, any
single evaluation can be replayed in isolation and results never depend on
execution order or worker count.
"""

from __future__ import annotations

import numpy as np

# Role tags.  Values are arbitrary but frozen: changing them changes every
# derived stream in the package.
SAMPLE_DRAW = 1       # uniform hypercube sample configurations
EVAL_SEED = 2         # per-sample evaluation seeds handed to objectives
NOISE = 3             # additive-noise streams inside objectives
RESTRICT_PICK = 4     # candidate choice inside stochastic restrictions
FIDELITY_DRAW = 5     # per-draw seeds inside resource-averaged evaluations
GENERATOR = 6         # synthetic objective generators
STAGE_SEED = 7        # per-stage recovery seeds in staged optimization
STAGE_RESTRICT = 8    # per-stage restriction master seeds
BASE_SEED = 9         # base-optimizer phase seeds
FINAL_EVAL = 10       # final re-evaluation seeds
ARM_CONFIG = 11       # baseline arm configuration draws
ARM_EVAL = 12         # baseline arm evaluation seeds
REPLICATION = 13      # per-replication master seeds
BRACKET_SEED = 14     # per-bracket seeds inside Hyperband
STAGE_PROBE = 15      # tie-probe completions and evaluation seeds


def _validated(key: tuple[int, ...]) -> list[int]:
    if not key:
        raise ValueError("stream key must not be empty")
    out = []
    for part in key:
        part = int(part)
        if part < 0:
            raise ValueError(f"stream key parts must be non-negative, got {part}")
        out.append(part)
    return out


def rng_for(*key: int) -> np.random.Generator:
    """Generator for the stream named by ``key``."""
    return np.random.default_rng(np.random.SeedSequence(_validated(key)))


def fold(*key: int) -> int:
    """Collapse a key tuple into one non-negative 64-bit integer seed."""
    seq = np.random.SeedSequence(_validated(key))
    return int(seq.generate_state(1, np.uint64)[0])
