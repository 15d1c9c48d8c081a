from __future__ import annotations

import pytest

from paradox_forge import (
    CandidateSet,
    RankingPattern,
    VotingSituation,
    validate_ranking_function,
)


def make_pattern(m: int, entries: dict[tuple[int, ...], dict[int, int]]) -> RankingPattern:
    functions = [
        validate_ranking_function(CandidateSet(tuple(sorted(subset))), ranks)
        for subset, ranks in entries.items()
    ]
    return RankingPattern(m, tuple(functions))


def make_situation(m: int, counts: dict[tuple[int, ...], int]) -> VotingSituation:
    return VotingSituation.from_counts(m, counts)


@pytest.fixture
def condorcet_reversal_pattern() -> RankingPattern:
    # 1 > 2 > 3 when all three run, yet 2 beats 1, 3 beats 1, 3 beats 2 head to head
    return make_pattern(
        3,
        {
            (1, 2): {1: 2, 2: 1},
            (1, 3): {1: 2, 3: 1},
            (2, 3): {2: 2, 3: 1},
            (1, 2, 3): {1: 1, 2: 2, 3: 3},
        },
    )


@pytest.fixture
def voters_43(condorcet_reversal_pattern) -> VotingSituation:
    # shipped golden electorate realizing the reversal pattern with 43 voters
    return make_situation(
        3, {(1, 2, 3): 2, (1, 3, 2): 15, (2, 1, 3): 1, (2, 3, 1): 13, (3, 1, 2): 0, (3, 2, 1): 12}
    )


@pytest.fixture
def pair_tie_pattern() -> RankingPattern:
    # like the reversal pattern but with {1,2} an exact tie
    return make_pattern(
        3,
        {
            (1, 2): {1: 1, 2: 1},
            (1, 3): {1: 2, 3: 1},
            (2, 3): {2: 2, 3: 1},
            (1, 2, 3): {1: 1, 2: 2, 3: 3},
        },
    )


@pytest.fixture
def pair_tie_resolutions() -> tuple[RankingPattern, RankingPattern]:
    # the two strict resolutions of the {1,2} tie: (2 beats 1, 1 beats 2)
    two_beats_one = make_pattern(
        3,
        {
            (1, 2): {1: 2, 2: 1},
            (1, 3): {1: 2, 3: 1},
            (2, 3): {2: 2, 3: 1},
            (1, 2, 3): {1: 1, 2: 2, 3: 3},
        },
    )
    one_beats_two = make_pattern(
        3,
        {
            (1, 2): {1: 1, 2: 2},
            (1, 3): {1: 2, 3: 1},
            (2, 3): {2: 2, 3: 1},
            (1, 2, 3): {1: 1, 2: 2, 3: 3},
        },
    )
    return two_beats_one, one_beats_two


@pytest.fixture
def nine_voters() -> VotingSituation:
    # realizes the reversal pattern (= the first tie resolution) with 9 voters
    return make_situation(3, {(1, 3, 2): 4, (2, 3, 1): 3, (3, 2, 1): 2})


@pytest.fixture
def nine_voters_other() -> VotingSituation:
    # realizes the other resolution (1 beats 2) with 9 voters
    return make_situation(3, {(1, 3, 2): 4, (2, 3, 1): 3, (3, 1, 2): 1, (3, 2, 1): 1})


@pytest.fixture
def combined_18(nine_voters, nine_voters_other) -> VotingSituation:
    return make_situation(3, {(1, 3, 2): 8, (2, 3, 1): 6, (3, 1, 2): 1, (3, 2, 1): 3})


@pytest.fixture
def all_ties_3() -> RankingPattern:
    return make_pattern(
        3,
        {
            (1, 2): {1: 1, 2: 1},
            (1, 3): {1: 1, 3: 1},
            (2, 3): {2: 1, 3: 1},
            (1, 2, 3): {1: 1, 2: 1, 3: 1},
        },
    )


@pytest.fixture
def mcgarvey_pattern_4() -> RankingPattern:
    # pairs: 1>2, 3>4, 2>3, 4>1, ties on {1,3} and {2,4}; everything above pairs tied
    return make_pattern(
        4,
        {
            (1, 2): {1: 1, 2: 2},
            (1, 3): {1: 1, 3: 1},
            (1, 4): {1: 2, 4: 1},
            (2, 3): {2: 1, 3: 2},
            (2, 4): {2: 1, 4: 1},
            (3, 4): {3: 1, 4: 2},
            (1, 2, 3): {1: 1, 2: 1, 3: 1},
            (1, 2, 4): {1: 1, 2: 1, 4: 1},
            (1, 3, 4): {1: 1, 3: 1, 4: 1},
            (2, 3, 4): {2: 1, 3: 1, 4: 1},
            (1, 2, 3, 4): {1: 1, 2: 1, 3: 1, 4: 1},
        },
    )


MCGARVEY_LISTING_4 = {
    **{perm: 2 for perm in [
        (1, 2, 3, 4), (2, 3, 4, 1), (3, 2, 4, 1), (3, 4, 1, 2),
        (2, 1, 3, 4), (4, 1, 2, 3), (1, 4, 2, 3), (4, 3, 1, 2),
    ]},
    **{perm: 1 for perm in [
        (1, 3, 2, 4), (1, 3, 4, 2), (3, 1, 2, 4), (3, 1, 4, 2),
        (2, 4, 1, 3), (2, 4, 3, 1), (4, 2, 1, 3), (4, 2, 3, 1),
    ]},
    **{perm: 0 for perm in [
        (1, 2, 4, 3), (2, 3, 1, 4), (3, 2, 1, 4), (2, 1, 4, 3),
        (1, 4, 3, 2), (4, 1, 3, 2), (3, 4, 2, 1), (4, 3, 2, 1),
    ]},
}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[criterion {number:>2}] {status} - {text}")
