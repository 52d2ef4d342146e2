"""Core hypercube types: parities, polynomials, assignments, restrictions."""

import math
from itertools import combinations

import numpy as np
import pytest

from harmonica.core import (
    EMPTY_ASSIGNMENT,
    EMPTY_INDEX,
    Configuration,
    DimensionMismatch,
    ParityIndex,
    PartialAssignment,
    PartitionError,
    RestrictionLayer,
    SparsePolynomial,
    evaluate_parity,
    evaluate_polynomial,
    hypercube_signs,
    merge_assignment,
    restrict,
    uniform_noise,
)
from harmonica.objectives import PolynomialObjective, gen_hierarchical_objective
from harmonica.seeds import rng_for


def cfg(*signs):
    return Configuration(tuple(signs))


class TestConfiguration:
    def test_rejects_non_sign_entries(self):
        with pytest.raises(ValueError):
            Configuration((1, 0, -1))

    def test_string_round_trip(self):
        c = cfg(1, -1, 1, 1)
        assert c.to_string() == "+-++"
        assert Configuration.from_string("+-++") == c

    def test_from_string_rejects_other_characters(self):
        with pytest.raises(ValueError):
            Configuration.from_string("+x-")

    def test_sign_is_one_based(self):
        c = cfg(-1, 1)
        assert c.sign(1) == -1
        assert c.sign(2) == 1
        with pytest.raises(DimensionMismatch):
            c.sign(3)
        with pytest.raises(DimensionMismatch):
            c.sign(0)

    def test_random_draws_valid_signs(self):
        rng = rng_for(0, 42)
        for _ in range(20):
            c = Configuration.random(7, rng)
            assert c.dimension == 7
            assert all(v in (-1, 1) for v in c.values)


class TestParityIndex:
    def test_rejects_duplicates_and_disorder(self):
        with pytest.raises(ValueError):
            ParityIndex((2, 2))
        with pytest.raises(ValueError):
            ParityIndex((3, 1))
        with pytest.raises(ValueError):
            ParityIndex((0,))

    def test_of_sorts(self):
        assert ParityIndex.of(3, 1).members == (1, 3)

    def test_canonical_order_degree_then_lex(self):
        items = [
            ParityIndex((2,)),
            ParityIndex((1, 3)),
            ParityIndex((1,)),
            EMPTY_INDEX,
            ParityIndex((1, 2)),
        ]
        ordered = sorted(items)
        assert [ix.members for ix in ordered] == [(), (1,), (2,), (1, 2), (1, 3)]


class TestEvaluateParity:
    def test_empty_set_is_constant_one(self):
        assert evaluate_parity(EMPTY_INDEX, cfg(-1, -1, -1)) == 1
        assert evaluate_parity(EMPTY_INDEX, cfg(1)) == 1

    def test_two_factor_product(self):
        assert evaluate_parity(ParityIndex((1, 3)), cfg(-1, 1, -1, 1)) == 1

    def test_single_coordinate(self):
        assert evaluate_parity(ParityIndex((2,)), cfg(-1, -1)) == -1

    def test_out_of_range_index(self):
        with pytest.raises(DimensionMismatch):
            evaluate_parity(ParityIndex((3,)), cfg(1, 1))

    def test_always_a_sign(self):
        rng = rng_for(0, 7)
        for _ in range(50):
            x = Configuration.random(6, rng)
            members = tuple(
                sorted(rng.choice(6, size=int(rng.integers(0, 4)), replace=False) + 1)
            )
            assert evaluate_parity(ParityIndex(members), x) in (-1, 1)


class TestSparsePolynomial:
    def test_constant_polynomial(self):
        p = SparsePolynomial(3, {EMPTY_INDEX: 3.5})
        for x in (cfg(1, 1, 1), cfg(-1, 1, -1)):
            assert evaluate_polynomial(p, x) == 3.5

    def test_two_term_evaluation(self):
        p = SparsePolynomial(3, {ParityIndex((1,)): 2.0, ParityIndex((2, 3)): -1.0})
        assert evaluate_polynomial(p, cfg(1, 1, 1)) == 1.0
        assert evaluate_polynomial(p, cfg(-1, 1, -1)) == -1.0

    def test_dimension_mismatch(self):
        p = SparsePolynomial(3, {ParityIndex((1,)): 1.0})
        with pytest.raises(DimensionMismatch):
            p.evaluate(cfg(1, 1))

    def test_term_exceeding_dimension_rejected(self):
        with pytest.raises(DimensionMismatch):
            SparsePolynomial(2, {ParityIndex((3,)): 1.0})

    def test_exact_zero_coefficients_dropped(self):
        p = SparsePolynomial(2, {EMPTY_INDEX: 0.0, ParityIndex((1,)): 2.0})
        assert p.sparsity == 1
        assert p.coefficient(EMPTY_INDEX) == 0.0
        assert p.l1_norm() == 2.0

    def test_rejects_non_finite_coefficients(self):
        with pytest.raises(ValueError):
            SparsePolynomial(2, {ParityIndex((1,)): float("inf")})

    def test_pruned_drops_small_terms(self):
        p = SparsePolynomial(2, {ParityIndex((1,)): 0.01, ParityIndex((2,)): 1.0})
        q = p.pruned(0.1)
        assert set(q.terms) == {ParityIndex((2,))}

    def test_variables_is_sorted_union(self):
        p = SparsePolynomial(5, {ParityIndex((4,)): 1.0, ParityIndex((1, 3)): 2.0})
        assert p.variables() == (1, 3, 4)

    def test_vectorized_evaluation_matches_pointwise(self):
        rng = rng_for(0, 11)
        terms = {}
        for _ in range(6):
            members = tuple(
                sorted(rng.choice(8, size=int(rng.integers(0, 4)), replace=False) + 1)
            )
            terms[ParityIndex(members)] = float(rng.normal())
        p = SparsePolynomial(8, terms)
        grid = hypercube_signs(8)
        vec = p.evaluate_signs(grid)
        for i in range(0, 256, 17):
            assert vec[i] == pytest.approx(p.evaluate(Configuration(tuple(grid[i]))))


class TestPartialAssignment:
    def test_sorted_pairs_required(self):
        with pytest.raises(ValueError):
            PartialAssignment(((3, 1), (1, 1)))
        with pytest.raises(ValueError):
            PartialAssignment(((1, 1), (1, -1)))
        with pytest.raises(ValueError):
            PartialAssignment(((1, 2),))

    def test_from_mapping_sorts(self):
        a = PartialAssignment.from_mapping({3: -1, 1: 1})
        assert a.indices == (1, 3)
        assert a.signs == (1, -1)
        assert a.mapping() == {1: 1, 3: -1}


class TestMergeAssignment:
    def test_middle_variable_fixed(self):
        z = PartialAssignment(((2, -1),))
        y = PartialAssignment(((1, 1), (3, 1)))
        assert merge_assignment(z, y) == cfg(1, -1, 1)

    def test_empty_restriction_returns_other_side(self):
        y = PartialAssignment(((1, -1), (2, 1), (3, -1)))
        assert merge_assignment(EMPTY_ASSIGNMENT, y) == cfg(-1, 1, -1)

    def test_full_restriction_returns_z(self):
        z = PartialAssignment(((1, 1), (2, -1)))
        assert merge_assignment(z, EMPTY_ASSIGNMENT) == cfg(1, -1)

    def test_overlap_rejected(self):
        z = PartialAssignment(((1, 1), (3, 1)))
        y = PartialAssignment(((3, -1),))
        with pytest.raises(PartitionError):
            merge_assignment(z, y)

    def test_gap_rejected(self):
        # indices {1, 4} plus {3} cannot cover 1..3
        z = PartialAssignment(((1, 1), (4, 1)))
        y = PartialAssignment(((3, -1),))
        with pytest.raises(PartitionError):
            merge_assignment(z, y)


def _random_poly(n, sparsity, seed):
    rng = rng_for(0, seed)
    terms = {}
    while len(terms) < sparsity:
        k = int(rng.integers(0, 4))
        members = tuple(sorted(rng.choice(n, size=k, replace=False) + 1))
        terms[ParityIndex(members)] = float(rng.normal())
    return SparsePolynomial(n, terms)


class TestRestriction:
    def test_layer_requires_matching_coverage(self):
        with pytest.raises(ValueError):
            RestrictionLayer((1, 2), (PartialAssignment(((1, 1),)),))
        with pytest.raises(ValueError):
            RestrictionLayer((1,), ())
        layer = RestrictionLayer(
            (2,), (PartialAssignment(((2, 1),)), PartialAssignment(((2, -1),)))
        )
        assert layer.size == 2

    def test_single_candidate_is_exact_merge(self):
        """t=1: restricted(y) = f(merge(z, y)) for every free assignment."""
        f = PolynomialObjective(_random_poly(6, 5, seed=3))
        z = PartialAssignment(((2, -1), (5, 1)))
        layer = RestrictionLayer((2, 5), (z,))
        g = restrict(f, layer, master_seed=99)
        assert g.dimension == 4
        free = (1, 3, 4, 6)
        for row in hypercube_signs(4):
            y = Configuration(tuple(row))
            merged = merge_assignment(z, PartialAssignment(tuple(zip(free, row))))
            for seed in (0, 17):
                assert g.evaluate(y, seed=seed) == f.evaluate(merged, seed=seed)

    def test_two_candidates_split_evenly(self):
        # f = x1 + x2, J={1}: output is 1+y or -1+y, each about half the time
        f = PolynomialObjective(
            SparsePolynomial(2, {ParityIndex((1,)): 1.0, ParityIndex((2,)): 1.0})
        )
        layer = RestrictionLayer(
            (1,), (PartialAssignment(((1, 1),)), PartialAssignment(((1, -1),)))
        )
        g = restrict(f, layer, master_seed=5)
        y = Configuration((1,))
        draws = 10_000
        values = [g.evaluate(y, seed=m) for m in range(draws)]
        assert set(values) == {2.0, 0.0}
        frac_plus = values.count(2.0) / draws
        assert abs(frac_plus - 0.5) <= 0.02

    def test_stacked_deterministic_layers_equal_union(self):
        f = PolynomialObjective(_random_poly(6, 6, seed=8))
        first = RestrictionLayer((2,), (PartialAssignment(((2, -1),)),))
        g1 = restrict(f, first, master_seed=0)
        # the reduced space of g1 is (1, 3, 4, 5, 6); fixing reduced index 4
        # pins original variable 5
        second = RestrictionLayer((4,), (PartialAssignment(((4, 1),)),))
        g2 = restrict(g1, second, master_seed=0)
        union = RestrictionLayer(
            (2, 5), (PartialAssignment(((2, -1), (5, 1))),)
        )
        gu = restrict(f, union, master_seed=0)
        assert g2.dimension == gu.dimension == 4
        for row in hypercube_signs(4):
            y = Configuration(tuple(row))
            assert g2.evaluate(y, seed=0) == gu.evaluate(y, seed=0)

    def test_resolve_reports_probed_point(self):
        f = PolynomialObjective(_random_poly(5, 4, seed=1))
        layer = RestrictionLayer(
            (3,), (PartialAssignment(((3, 1),)), PartialAssignment(((3, -1),)))
        )
        g = restrict(f, layer, master_seed=21)
        y = Configuration((1, -1, 1, 1))
        for seed in range(25):
            root = g.resolve(y, seed)
            assert g.evaluate(y, seed=seed) == f.evaluate(root, seed=seed)


class TestReplayDeterminism:
    def test_noisy_objective_replays_bit_for_bit(self):
        f, _ = gen_hierarchical_objective(8, noise_half_width=1.0, seed=4)
        x = cfg(1, -1, 1, 1, -1, -1, 1, -1)
        for seed in (0, 1, 999):
            assert f.evaluate(x, seed=seed) == f.evaluate(x, seed=seed)
        # distinct eval seeds give distinct noise essentially always
        assert f.evaluate(x, seed=0) != f.evaluate(x, seed=1)

    def test_uniform_noise_stream(self):
        assert uniform_noise(0.0, 12, 34) == 0.0
        a = uniform_noise(2.0, 12, 34)
        assert a == uniform_noise(2.0, 12, 34)
        assert abs(a) <= 2.0
        assert a != uniform_noise(2.0, 12, 35)


class TestOrthonormality:
    def test_exhaustive_small_dimension(self):
        """(1/2^n) sum chi_S chi_T = delta_ST, exact in integer arithmetic."""
        n = 4
        grid = hypercube_signs(n).astype(np.int64)
        subsets = [
            ParityIndex(c)
            for k in range(n + 1)
            for c in combinations(range(1, n + 1), k)
        ]
        cols = {}
        for ix in subsets:
            col = np.ones(2**n, dtype=np.int64)
            for m in ix.members:
                col *= grid[:, m - 1]
            cols[ix] = col
        for s in subsets:
            for t in subsets:
                inner = int((cols[s] * cols[t]).sum())
                assert inner == (2**n if s == t else 0)

    def test_sampled_pairs_at_n12(self):
        n = 12
        grid = hypercube_signs(n).astype(np.int64)
        rng = rng_for(0, 202)

        def column(members):
            col = np.ones(2**n, dtype=np.int64)
            for m in members:
                col *= grid[:, m - 1]
            return col

        for _ in range(200):
            s = tuple(sorted(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False) + 1))
            t = tuple(sorted(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False) + 1))
            inner = int((column(s) * column(t)).sum())
            assert inner == (2**n if s == t else 0)


class TestParseval:
    def test_power_equals_coefficient_energy(self):
        for n, seed in ((6, 1), (10, 2), (12, 3)):
            p = _random_poly(n, sparsity=7, seed=seed)
            grid = hypercube_signs(n).astype(np.float64)
            mean_square = float(np.mean(p.evaluate_signs(grid) ** 2))
            energy = math.fsum(c * c for c in p.terms.values())
            assert abs(mean_square - energy) <= 1e-10


class TestHypercubeSigns:
    def test_plus_first_lexicographic_order(self):
        grid = hypercube_signs(3)
        assert grid.shape == (8, 3)
        assert list(grid[0]) == [1, 1, 1]
        assert list(grid[1]) == [1, 1, -1]  # variable 1 varies slowest
        assert list(grid[-1]) == [-1, -1, -1]
        # strictly descending as +1-first sign tuples
        as_tuples = [tuple(r) for r in grid]
        assert len(set(as_tuples)) == 8

    def test_zero_dimension_single_row(self):
        grid = hypercube_signs(0)
        assert grid.shape == (1, 0)

    def test_refuses_huge_enumeration(self):
        with pytest.raises(ValueError):
            hypercube_signs(25)
