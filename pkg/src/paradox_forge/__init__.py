"""Electorates on demand: realize any ranking pattern with exact arithmetic.

Given a desired outcome for every election among every subset of m
candidates (a *ranking pattern*, Condorcet cycles and ties welcome), this
package constructs a concrete electorate whose plurality tallies realize
the pattern exactly, verifies it by exhaustive tallying, exposes the
underlying exact-rational load-sharing probability model, and shrinks the
electorate's size.
"""

from .errors import (
    CandidateOutOfRange,
    CompetitionRankingViolated,
    DimensionMismatch,
    EmptySituation,
    IncompletePattern,
    InvalidEpsilon,
    MissingCandidate,
    NonStrictPattern,
    NotConcordantInput,
    ParadoxForgeError,
    ParseError,
    PatternNotInClass,
    RankOutOfRange,
    SizeLimitExceeded,
    ThetaTooSmall,
)
from .loadshare import (
    EpsilonVector,
    LoadSharingModel,
    PermutationDistribution,
    WinningTable,
    check_epsilon,
    check_p_concordance,
    default_epsilon,
    default_epsilon_base,
    make_model,
    permutation_distribution,
    sample_failure_order,
    winning_probabilities,
    winning_probabilities_generic,
)
from .ranking import (
    CandidateSet,
    Permutation,
    RankingFunction,
    RankingPattern,
    all_permutations,
    all_subsets,
    competition_rankings,
    count_patterns,
    enumerate_patterns,
    is_strict,
    max_tie_index,
    sample_pattern,
    strict_rankings,
    tie_index,
    validate_ranking_function,
)
from .reduce import (
    ReductionConfig,
    exhaustive_minimum,
    reduce_gcd,
    reduce_offset,
    reduce_search,
)
from .synth import (
    SynthStep,
    SynthTrace,
    strict_voter_total,
    synth_pairwise_mcgarvey,
    synth_strict,
    synth_weak,
    synth_with_voters,
)
from .tally import (
    ConcordanceFailure,
    ConcordanceReport,
    Tally,
    VotingSituation,
    check_concordance,
    combine,
    compare_scores_to_pattern,
    extract_pattern,
    offset,
    ranks_from_scores,
    scale,
    tally,
    uniform_situation,
    zero_situation,
)

__version__ = "0.1.0"
