import random
from math import factorial

import pytest

from paradox_forge import (
    NonStrictPattern,
    PatternNotInClass,
    ThetaTooSmall,
    all_permutations,
    check_concordance,
    enumerate_patterns,
    sample_pattern,
    scale,
    strict_voter_total,
    synth_pairwise_mcgarvey,
    synth_strict,
    synth_weak,
    synth_with_voters,
    tie_index,
    uniform_situation,
)
from .conftest import MCGARVEY_LISTING_4, make_pattern, make_situation


class TestStrictTotal:
    def test_m2(self):
        # base 68; factor chain gives 2*68 - 1 = 135
        assert strict_voter_total(2) == 135

    def test_m3(self):
        assert strict_voter_total(3) == 611 * 280905 == 171_632_955


class TestSynthStrict:
    def test_m2_counts(self):
        pattern = make_pattern(2, {(1, 2): {1: 1, 2: 2}})
        s = synth_strict(pattern)
        assert s.count_of((1, 2)) == 68
        assert s.count_of((2, 1)) == 67
        assert s.total == 135

    def test_golden_m3_counts(self, condorcet_reversal_pattern):
        s = synth_strict(condorcet_reversal_pattern)
        assert s.count_of((1, 2, 3)) == 93636 * 305 == 28_558_980
        assert s.total == strict_voter_total(3)
        assert check_concordance(s, condorcet_reversal_pattern)

    def test_rejects_weak(self, pair_tie_pattern):
        with pytest.raises(NonStrictPattern):
            synth_strict(pair_tie_pattern)


class TestSynthWeak:
    def test_paper_bases_reproduce_combined_situation(
        self, pair_tie_pattern, pair_tie_resolutions, nine_voters, nine_voters_other, combined_18
    ):
        two_beats_one, one_beats_two = pair_tie_resolutions
        situation, trace = synth_weak(
            pair_tie_pattern,
            bases={two_beats_one: nine_voters, one_beats_two: nine_voters_other},
        )
        assert situation == combined_18
        assert len(trace) == 1
        step = trace.steps[0]
        assert step.subset == (1, 2)
        assert step.coefficient_low == 1 and step.coefficient_high == 1

    def test_strict_input_delegates(self, condorcet_reversal_pattern):
        situation, trace = synth_weak(condorcet_reversal_pattern)
        assert situation == synth_strict(condorcet_reversal_pattern)
        assert len(trace) == 0

    def test_trace_length_is_tie_index(self):
        rng = random.Random(17)
        for _ in range(25):
            pattern = sample_pattern(3, rng)
            situation, trace = synth_weak(pattern)
            assert len(trace) == tie_index(pattern)
            assert check_concordance(situation, pattern)

    def test_all_351_m3_patterns(self):
        for pattern in enumerate_patterns(3):
            situation, _ = synth_weak(pattern)
            assert check_concordance(situation, pattern)

    def test_all_m2_patterns(self):
        for pattern in enumerate_patterns(2):
            situation, _ = synth_weak(pattern)
            assert check_concordance(situation, pattern)

    def test_refine_hook_shrinks_bases(self, pair_tie_pattern):
        from paradox_forge import reduce_search

        plain, _ = synth_weak(pair_tie_pattern)
        refined, trace = synth_weak(pair_tie_pattern, refine=reduce_search)
        assert check_concordance(refined, pair_tie_pattern)
        assert len(trace) == 1
        assert refined.total <= plain.total

    def test_rejects_bad_base(self, pair_tie_pattern, pair_tie_resolutions):
        from paradox_forge import NotConcordantInput

        two_beats_one, _ = pair_tie_resolutions
        wrong = make_situation(3, {(1, 2, 3): 1})
        with pytest.raises(NotConcordantInput):
            synth_weak(pair_tie_pattern, bases={two_beats_one: wrong})


class TestSynthWithVoters:
    def test_multiple_of_factorial_is_pure_scaling(self, condorcet_reversal_pattern):
        theta = strict_voter_total(3) * 6
        s = synth_with_voters(condorcet_reversal_pattern, theta)
        assert s == scale(synth_strict(condorcet_reversal_pattern), 6)
        assert s.total == theta

    def test_remainder_spreads_one_voter_over_first_orders(self, condorcet_reversal_pattern):
        theta = strict_voter_total(3) * 6 + 3
        s = synth_with_voters(condorcet_reversal_pattern, theta)
        base = scale(synth_strict(condorcet_reversal_pattern), 6)
        shift = theta // 6 - strict_voter_total(3)
        perms = all_permutations(3)
        extras = [s.count_of(p) - base.count_of(p) - shift for p in perms]
        assert extras == [1, 1, 1, 0, 0, 0]
        assert s.total == theta
        assert check_concordance(s, condorcet_reversal_pattern)

    def test_m2_golden(self):
        pattern = make_pattern(2, {(1, 2): {1: 1, 2: 2}})
        s = synth_with_voters(pattern, 271)
        assert s.total == 271
        assert check_concordance(s, pattern)

    def test_theta_too_small(self, condorcet_reversal_pattern):
        with pytest.raises(ThetaTooSmall):
            synth_with_voters(condorcet_reversal_pattern, strict_voter_total(3) * 6 - 1)

    def test_requires_strict(self, pair_tie_pattern):
        with pytest.raises(NonStrictPattern):
            synth_with_voters(pair_tie_pattern, 10**12)


class TestMcGarvey:
    def test_paper_listing(self, mcgarvey_pattern_4):
        s = synth_pairwise_mcgarvey(mcgarvey_pattern_4)
        assert s.total == 24
        for perm, expected in MCGARVEY_LISTING_4.items():
            assert s.count_of(perm) == expected
        assert check_concordance(s, mcgarvey_pattern_4)

    def test_all_pairs_tied_gives_uniform(self, all_ties_3):
        s = synth_pairwise_mcgarvey(all_ties_3)
        assert s == uniform_situation(3, 1)
        assert s.total == factorial(3)

    def test_pairwise_cycle(self):
        cycle = make_pattern(
            3,
            {
                (1, 2): {1: 1, 2: 2},
                (2, 3): {2: 1, 3: 2},
                (1, 3): {1: 2, 3: 1},
                (1, 2, 3): {1: 1, 2: 1, 3: 1},
            },
        )
        s = synth_pairwise_mcgarvey(cycle)
        assert s.total == factorial(3)
        assert check_concordance(s, cycle)

    def test_rejects_ranked_triples(self, condorcet_reversal_pattern):
        with pytest.raises(PatternNotInClass):
            synth_pairwise_mcgarvey(condorcet_reversal_pattern)


def test_weak_synthesis_matches_probability_route(condorcet_reversal_pattern):
    # strict counts are exactly theta-bar times the model's probabilities
    from paradox_forge import make_model, permutation_distribution

    dist = permutation_distribution(make_model(condorcet_reversal_pattern))
    s = synth_strict(condorcet_reversal_pattern)
    total = strict_voter_total(3)
    for perm, p in dist.probabilities:
        assert s.count_of(perm) == p * total
