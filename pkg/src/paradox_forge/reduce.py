"""Shrinking an electorate while keeping the pattern it realizes.

The closed-form constructions are astronomically large; these strategies
walk them down. Dividing all counts by their gcd and subtracting the
minimum count from every order both leave the realized pattern untouched;
the greedy step then lowers individual counts as far as the pattern's
margins allow, re-verifying after every move. At desk scale (m <= 3) an
exhaustive enumeration by total voter count provides a provably minimal
witness and serves as the lower-bound oracle for everything else.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial, gcd
from typing import Iterator

from .errors import NotConcordantInput, SizeLimitExceeded
from .ranking import RankingPattern, all_permutations, all_subsets
from .tally import (
    VotingSituation,
    check_concordance,
    extract_pattern,
    tally,
)

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_M = 3
EXHAUSTIVE_MAX_TOTAL = 10_000


@dataclass(frozen=True)
class ReductionConfig:
    """Strategy order and budget for reduce_search.

    ``budget`` caps the number of candidate evaluations (margin analyses and
    re-verifications). The exhaustive strategy runs only at m <= 3 (or when
    ``confirm_exhaustive`` is set) and only once the electorate is already
    small; it replaces the current electorate with a provably minimal one.
    """

    strategies: tuple[str, ...] = ("gcd", "offset-strip", "local-decrement")
    budget: int = 500_000
    seed: int | None = None
    confirm_exhaustive: bool = False
    exhaustive_total_cap: int = EXHAUSTIVE_MAX_TOTAL

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        known = {"gcd", "offset-strip", "local-decrement", "exhaustive"}
        unknown = set(self.strategies) - known
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")


def reduce_gcd(situation: VotingSituation) -> VotingSituation:
    """Divide every count by their common divisor; same pattern, fewer voters."""
    if situation.total == 0:
        raise ValueError("nothing to reduce in an empty situation")
    divisor = gcd(*(c for _, c in situation.entries))
    if divisor <= 1:
        return situation
    return VotingSituation(
        situation.m, tuple((p, c // divisor) for p, c in situation.entries)
    )


def reduce_offset(situation: VotingSituation) -> VotingSituation:
    """Subtract the minimum count (over all m! orders) from every order.

    A no-op whenever some order already has count zero. A fully uniform
    electorate would be wiped out entirely, so it is returned unchanged and
    flagged as irreducible.
    """
    if situation.total == 0:
        raise ValueError("nothing to reduce in an empty situation")
    if len(situation.entries) < factorial(situation.m):
        return situation  # some implicit zero: minimum is already 0
    minimum = min(c for _, c in situation.entries)
    if minimum == 0:
        return situation
    entries = tuple((p, c - minimum) for p, c in situation.entries)
    if all(c == 0 for _, c in entries):
        log.debug("offset-strip would empty a uniform electorate; irreducible")
        return situation
    return VotingSituation(situation.m, entries)


def _max_safe_decrement(
    situation: VotingSituation, pattern: RankingPattern, perm_index: int
) -> int:
    """Largest single-order decrement that provably keeps the pattern.

    Removing voters from one preference order lowers the tally of exactly
    one candidate per subset (the order's favorite there). Ties freeze the
    move entirely; strict relations bound it by their current margin.
    """
    perm, count = situation.entries[perm_index]
    bound = count
    for function in pattern.functions:
        if bound == 0:
            break
        subset = function.subset
        votes = tally(situation, subset).votes
        top = perm.first_of(subset.members)
        top_rank = function.rank(top)
        for other in subset.members:
            if other == top:
                continue
            r = function.rank(other)
            if r == top_rank:
                return 0  # would break an exact tie
            if r > top_rank:
                bound = min(bound, votes[top] - votes[other] - 1)
                if bound <= 0:
                    return 0
    return bound


def reduce_search(
    situation: VotingSituation,
    pattern: RankingPattern,
    config: ReductionConfig | None = None,
) -> VotingSituation:
    """Shrink a concordant electorate; the result realizes the same pattern.

    Applies the configured strategies in order, repeatedly, until a full
    round changes nothing or the budget runs out. Deterministic: the greedy
    pass visits orders by descending count (ties by order), taking the
    largest margin-safe decrement each time and re-verifying the result.
    """
    config = config or ReductionConfig()
    report = check_concordance(situation, pattern)
    if not report:
        raise NotConcordantInput(f"input does not realize the pattern: {report.failures[0]}")

    budget = config.budget
    current = situation
    changed = True
    while changed and budget > 0:
        changed = False
        for strategy in config.strategies:
            if budget <= 0:
                break
            if strategy == "gcd":
                smaller = reduce_gcd(current)
                budget -= 1
                if smaller.total < current.total:
                    current, changed = smaller, True
            elif strategy == "offset-strip":
                smaller = reduce_offset(current)
                budget -= 1
                if smaller.total < current.total:
                    current, changed = smaller, True
            elif strategy == "local-decrement":
                moved, budget = _greedy_pass(current, pattern, budget)
                if moved is not None:
                    current, changed = moved, True
            elif strategy == "exhaustive":
                if pattern.m > EXHAUSTIVE_MAX_M and not config.confirm_exhaustive:
                    continue
                if current.total - 1 > config.exhaustive_total_cap:
                    continue
                found = exhaustive_minimum(
                    pattern,
                    min(current.total - 1, config.exhaustive_total_cap),
                    _confirmed=config.confirm_exhaustive,
                )
                budget -= 1
                if found is not None and found[1] < current.total:
                    current, changed = found[0], True
    return current


def _greedy_pass(
    situation: VotingSituation, pattern: RankingPattern, budget: int
) -> tuple[VotingSituation | None, int]:
    current = situation
    improved = None
    progress = True
    while progress and budget > 0:
        progress = False
        order = sorted(
            range(len(current.entries)),
            key=lambda k: (-current.entries[k][1], current.entries[k][0].order),
        )
        for index in order:
            if budget <= 0:
                break
            budget -= 1
            delta = _max_safe_decrement(current, pattern, index)
            if delta <= 0:
                continue
            perm, count = current.entries[index]
            candidate = VotingSituation(
                current.m,
                tuple(
                    (p, c - delta if p == perm else c) for p, c in current.entries
                ),
            )
            if candidate.total == 0 or not check_concordance(candidate, pattern):
                continue  # margin analysis was conservative; skip this order
            current = candidate
            improved = current
            progress = True
            break  # re-rank by count after every accepted move
    return improved, budget


def exhaustive_minimum(
    pattern: RankingPattern, n_max: int, _confirmed: bool = False
) -> tuple[VotingSituation, int] | None:
    """Provably minimal electorate for a pattern, or None within the bound.

    Enumerates voter-count vectors over the m! orders by ascending total, so
    the first concordant hit has the smallest possible electorate. Partial
    assignments are pruned when some required relation can no longer be met
    with the voters that remain. Desk scale only.
    """
    if pattern.m > EXHAUSTIVE_MAX_M and not _confirmed:
        raise SizeLimitExceeded(
            f"exhaustive search is limited to m <= {EXHAUSTIVE_MAX_M}"
        )
    if n_max > EXHAUSTIVE_MAX_TOTAL:
        raise SizeLimitExceeded(
            f"exhaustive search is limited to totals <= {EXHAUSTIVE_MAX_TOTAL}"
        )
    m = pattern.m
    perms = all_permutations(m)
    subsets = all_subsets(m)
    # per order and subset: which candidate receives that order's votes
    tops = [
        [perm.first_of(s.members) for s in subsets] for perm in perms
    ]
    # pattern relations per subset as (i, j, must_tie) over candidate pairs
    relations = []
    for s_index, subset in enumerate(subsets):
        function = pattern.function_for(subset)
        for a in range(len(subset.members)):
            for b in range(a + 1, len(subset.members)):
                i, j = subset.members[a], subset.members[b]
                ri, rj = function.rank(i), function.rank(j)
                if ri == rj:
                    relations.append((s_index, i, j, True))
                elif ri < rj:
                    relations.append((s_index, i, j, False))
                else:
                    relations.append((s_index, j, i, False))
    # can an order at position >= depth still add votes to candidate c on subset s?
    open_tops = [
        [
            {tops[p][s] for p in range(depth, len(perms))}
            for s in range(len(subsets))
        ]
        for depth in range(len(perms) + 1)
    ]

    def feasible_prefix(votes, depth: int, remaining: int) -> bool:
        for s_index, i, j, must_tie in relations:
            vi = votes[s_index].get(i, 0)
            vj = votes[s_index].get(j, 0)
            gain_i = remaining if i in open_tops[depth][s_index] else 0
            gain_j = remaining if j in open_tops[depth][s_index] else 0
            if must_tie:
                if vi > vj + gain_j or vj > vi + gain_i:
                    return False
            else:
                if vi + gain_i < vj + 1:  # winner cannot catch up any more
                    return False
        return True

    def satisfied(votes) -> bool:
        for s_index, i, j, must_tie in relations:
            vi = votes[s_index].get(i, 0)
            vj = votes[s_index].get(j, 0)
            if must_tie:
                if vi != vj:
                    return False
            elif vi <= vj:
                return False
        return True

    def assign(depth: int, remaining: int, votes, counts) -> Iterator[tuple[int, ...]]:
        if depth == len(perms):
            if remaining == 0 and satisfied(votes):
                yield tuple(counts)
            return
        if depth == len(perms) - 1:
            take_options = (remaining,)
        else:
            take_options = range(remaining + 1)
        for take in take_options:
            counts.append(take)
            if take:
                for s_index in range(len(subsets)):
                    votes[s_index][tops[depth][s_index]] = (
                        votes[s_index].get(tops[depth][s_index], 0) + take
                    )
            if feasible_prefix(votes, depth + 1, remaining - take):
                yield from assign(depth + 1, remaining - take, votes, counts)
            if take:
                for s_index in range(len(subsets)):
                    votes[s_index][tops[depth][s_index]] -= take
            counts.pop()

    for total in range(1, n_max + 1):
        votes = [dict() for _ in subsets]
        for counts in assign(0, total, votes, []):
            witness = VotingSituation(
                m, tuple((perms[k], c) for k, c in enumerate(counts) if c)
            )
            # enumeration used its own fast tallies; confirm with the real check
            if not check_concordance(witness, pattern):
                raise AssertionError("enumeration produced a non-concordant witness")
            assert extract_pattern(witness) == pattern
            return witness, total
    return None
