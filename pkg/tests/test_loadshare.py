import random
from fractions import Fraction
from math import factorial

import pytest

from paradox_forge import (
    EpsilonVector,
    InvalidEpsilon,
    NonStrictPattern,
    PermutationDistribution,
    all_permutations,
    all_subsets,
    check_epsilon,
    check_p_concordance,
    default_epsilon,
    default_epsilon_base,
    enumerate_patterns,
    make_model,
    permutation_distribution,
    sample_failure_order,
    sample_pattern,
    strict_voter_total,
    synth_strict,
    winning_probabilities,
    winning_probabilities_generic,
)
from .conftest import make_pattern


@pytest.fixture
def reversal_model(condorcet_reversal_pattern):
    return make_model(condorcet_reversal_pattern)


def identity_pattern(m: int):
    return make_pattern(
        m,
        {
            s.members: {c: 1 + sum(1 for d in s.members if d < c) for c in s.members}
            for s in all_subsets(m)
        },
    )


class TestEpsilon:
    def test_default_m3(self):
        eps = default_epsilon(3)
        assert eps.of_size(2) == Fraction(1, 306)
        assert eps.of_size(3) == Fraction(1, 306**2)

    def test_default_m2(self):
        assert default_epsilon(2).of_size(2) == Fraction(1, 68)
        assert default_epsilon_base(2) == 68

    def test_default_satisfies_sufficiency_up_to_m6(self):
        for m in range(2, 7):
            assert check_epsilon(default_epsilon(m))

    def test_sufficiency_rejects_large_epsilon(self):
        eps = EpsilonVector.of(3, [Fraction(1, 2), Fraction(1, 2)])
        assert not check_epsilon(eps)

    def test_m2_vacuous(self):
        assert check_epsilon(EpsilonVector.of(2, [Fraction(1, 2)]))

    def test_positivity_enforced(self):
        with pytest.raises(InvalidEpsilon):
            EpsilonVector.of(3, [Fraction(1, 2), Fraction(0)])
        with pytest.raises(InvalidEpsilon):
            EpsilonVector.of(3, [Fraction(-1, 3), Fraction(1, 9)])

    def test_feasibility_gate_at_model_build(self, condorcet_reversal_pattern):
        # eps(3) = 1/2 makes the worst intensity 1 - 2*(1/2) = 0: not a model
        eps = EpsilonVector.of(3, [Fraction(1, 4), Fraction(1, 2)])
        assert not eps.feasible
        with pytest.raises(InvalidEpsilon):
            make_model(condorcet_reversal_pattern, eps)


class TestPermutationDistribution:
    def test_closed_forms(self, reversal_model):
        a = Fraction(1, 306)
        dist = permutation_distribution(reversal_model)
        assert dist.probability((1, 2, 3)) == 1 / (3 * (1 + a) * (2 - a))
        assert dist.probability((2, 3, 1)) == 1 / (3 * (2 - a))
        assert dist.probability((2, 1, 3)) == (1 - a) / (3 * (2 - a))

    def test_sums_to_one_exactly(self, reversal_model):
        dist = permutation_distribution(reversal_model)
        assert sum(p for _, p in dist.probabilities) == 1

    def test_identity_order_is_strictly_most_likely(self):
        for m in (3, 4):
            dist = permutation_distribution(make_model(identity_pattern(m)))
            top = dist.probability(tuple(range(1, m + 1)))
            for perm, p in dist.probabilities:
                if perm.order != tuple(range(1, m + 1)):
                    assert p < top

    def test_needs_strict_pattern(self, pair_tie_pattern):
        with pytest.raises(NonStrictPattern):
            make_model(pair_tie_pattern)

    def test_chain_sums_match_level_totals(self, reversal_model):
        # at every stage, the surviving intensities add up to the same total
        m = reversal_model.m
        from itertools import combinations

        for k in range(0, m - 1):
            for failed in combinations(range(1, m + 1), k):
                total = sum(
                    reversal_model.intensity(c, frozenset(failed))
                    for c in range(1, m + 1)
                    if c not in failed
                )
                assert total == reversal_model.level_total(m - k)


class TestWinningProbabilities:
    def test_rows_sum_to_one(self, reversal_model):
        table = winning_probabilities(reversal_model)
        for subset in all_subsets(3):
            assert sum(table.of(subset, c) for c in subset.members) == 1

    def test_pattern_order_shows_up(self, reversal_model):
        table = winning_probabilities(reversal_model)
        assert table.of((1, 2), 2) > table.of((1, 2), 1)
        assert table.of((2, 3), 3) > table.of((2, 3), 2)
        assert table.of((1, 3), 3) > table.of((1, 3), 1)

    def test_binary_case_equals_distribution(self):
        pattern = make_pattern(2, {(1, 2): {1: 1, 2: 2}})
        model = make_model(pattern)
        dist = permutation_distribution(model)
        table = winning_probabilities(model)
        assert table.of((1, 2), 1) == dist.probability((1, 2))
        assert table.of((1, 2), 2) == dist.probability((2, 1))

    def test_generic_on_golden_situation(self, voters_43):
        table = winning_probabilities_generic(
            PermutationDistribution.from_situation(voters_43)
        )
        assert table.of((1, 2), 1) == Fraction(17, 43)
        assert table.of((1, 2), 2) == Fraction(26, 43)

    def test_generic_on_uniform(self):
        uniform = PermutationDistribution.from_mapping(
            3, {p: Fraction(1, 6) for p in all_permutations(3)}
        )
        table = winning_probabilities_generic(uniform)
        for subset in all_subsets(3):
            for c in subset.members:
                assert table.of(subset, c) == Fraction(1, len(subset))

    def test_direct_equals_generic_through_distribution(self):
        # two independent evaluation routes, exact agreement
        rng = random.Random(5)
        patterns = [sample_pattern(m, rng, strict_only=True) for m in (2, 3, 3, 4)]
        for pattern in patterns:
            model = make_model(pattern)
            direct = winning_probabilities(model)
            via_dist = winning_probabilities_generic(permutation_distribution(model))
            assert direct == via_dist


class TestPConcordance:
    def test_default_model_realizes_its_pattern(self, condorcet_reversal_pattern):
        model = make_model(condorcet_reversal_pattern)
        assert check_p_concordance(model, condorcet_reversal_pattern)

    def test_uniform_fails_strict(self, condorcet_reversal_pattern):
        uniform = PermutationDistribution.from_mapping(
            3, {p: Fraction(1, 6) for p in all_permutations(3)}
        )
        assert not check_p_concordance(uniform, condorcet_reversal_pattern)

    def test_golden_situation_distribution(self, voters_43, condorcet_reversal_pattern):
        dist = PermutationDistribution.from_situation(voters_43)
        assert check_p_concordance(dist, condorcet_reversal_pattern)

    def test_every_strict_m3_pattern(self):
        for pattern in enumerate_patterns(3, strict_only=True):
            assert check_p_concordance(make_model(pattern), pattern)


class TestIntegrality:
    def test_scaled_probabilities_are_synth_counts(self):
        for m in (2, 3):
            total = strict_voter_total(m)
            for pattern in enumerate_patterns(m, strict_only=True):
                dist = permutation_distribution(make_model(pattern))
                counts = synth_strict(pattern)
                for perm, p in dist.probabilities:
                    scaled = p * total
                    assert scaled.denominator == 1
                    assert scaled == counts.count_of(perm)

    def test_m4_sampled_permutations(self):
        rng = random.Random(31)
        total = strict_voter_total(4)
        for _ in range(3):
            pattern = sample_pattern(4, rng, strict_only=True)
            dist = permutation_distribution(make_model(pattern))
            for perm in rng.sample(all_permutations(4), 6):
                assert (dist.probability(perm) * total).denominator == 1


class TestSampler:
    def test_deterministic_for_seed(self, reversal_model):
        first = sample_failure_order(reversal_model, 99)
        second = sample_failure_order(reversal_model, 99)
        assert first == second

    def test_all_orders_reachable(self, reversal_model):
        rng = random.Random(1)
        seen = {sample_failure_order(reversal_model, rng).order for _ in range(2000)}
        assert len(seen) == factorial(3)

    def test_frequencies_near_exact(self, reversal_model):
        # quick version of the acceptance check: 50k draws, 5 standard errors
        dist = permutation_distribution(reversal_model)
        rng = random.Random(8)
        n = 50_000
        counts: dict = {}
        for _ in range(n):
            perm = sample_failure_order(reversal_model, rng)
            counts[perm] = counts.get(perm, 0) + 1
        for perm, p in dist.probabilities:
            exact = float(p)
            se = (exact * (1 - exact) / n) ** 0.5
            assert abs(counts.get(perm, 0) / n - exact) < 5 * se
