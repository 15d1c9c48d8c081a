"""Constructing electorates that realize a given ranking pattern.

Three routes:

* strict patterns get a closed-form electorate whose counts are products of
  near-equal integer factors, one per failure step of the matching
  load-sharing model (``synth_strict``);
* arbitrary patterns are built recursively: each tie is split into the two
  adjacent tie-free resolutions, the two sub-electorates are cross-scaled by
  each other's vote margins so the target pair lands on an exact tie, and
  everything else keeps its strict order (``synth_weak``);
* patterns that tie everything on subsets of size >= 3 but are arbitrary on
  pairs get a tiny electorate with counts 2/1/0 read off the last two
  entries of each preference order (``synth_pairwise_mcgarvey``).

``synth_with_voters`` hits any exact voter total from a guaranteed range.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, gcd, prod
from typing import Callable, Mapping

from .errors import (
    NonStrictPattern,
    NotConcordantInput,
    PatternNotInClass,
    ThetaTooSmall,
)
from .loadshare import default_epsilon_base
from .ranking import (
    CandidateSet,
    RankingFunction,
    RankingPattern,
    all_permutations,
)
from .tally import (
    VotingSituation,
    check_concordance,
    combine,
    scale,
    tally,
)


def strict_voter_total(m: int) -> int:
    """Voter total of the closed-form strict construction at size m.

    Equals the product over h = 2..m of [h * base^(h-1) - h(h-1)/2] with
    base = 17 * m * m!; the same number clears every denominator of the
    default load-sharing model's permutation probabilities.
    """
    base = default_epsilon_base(m)
    return prod(h * base ** (h - 1) - h * (h - 1) // 2 for h in range(2, m + 1))


def synth_strict(pattern: RankingPattern) -> VotingSituation:
    """Closed-form electorate realizing a strict pattern exactly.

    The count for preference order (j1, ..., jm) is the product over steps
    k = 1..m-1 of [base^(m-k) - rank(A_k, j_k) + 1], where A_k is the set of
    candidates not yet placed. Better-ranked candidates give slightly larger
    factors, so every election comes out ordered as the pattern demands.
    """
    if not pattern.is_strict:
        raise NonStrictPattern("closed-form synthesis needs a tie-free pattern")
    m = pattern.m
    base = default_epsilon_base(m)
    entries = []
    for perm in all_permutations(m):
        remaining = list(range(1, m + 1))
        count = 1
        for k, j in enumerate(perm.order[: m - 1], start=1):
            count *= base ** (m - k) - pattern.rank(remaining, j) + 1
            remaining.remove(j)
        entries.append((perm, count))
    return VotingSituation(m, tuple(entries))


@dataclass(frozen=True)
class SynthStep:
    """One resolved tie during the recursive weak-pattern construction."""

    subset: tuple[int, ...]
    level: int
    demoted: int  # member pushed below the class in the first resolution
    reference: int  # member it is compared against
    pattern_low: RankingPattern  # demoted ranked below the rest of the class
    pattern_high: RankingPattern  # demoted ranked above the rest of the class
    coefficient_low: int
    coefficient_high: int
    total_low: int
    total_high: int
    gcd_stripped: int
    total: int


@dataclass(frozen=True)
class SynthTrace:
    steps: tuple[SynthStep, ...]

    def __len__(self) -> int:
        return len(self.steps)


def _first_tie(pattern: RankingPattern) -> tuple[CandidateSet, int, tuple[int, ...]]:
    for function in pattern.functions:
        for level, members in function.tie_classes().items():
            if len(members) >= 2:
                return function.subset, level, members
    raise NonStrictPattern("pattern has no tie to resolve")


def _replace_function(
    pattern: RankingPattern, replacement: RankingFunction
) -> RankingPattern:
    return RankingPattern(
        pattern.m,
        tuple(
            replacement if f.subset == replacement.subset else f
            for f in pattern.functions
        ),
    )


def _split_tie(
    pattern: RankingPattern, subset: CandidateSet, level: int, tie: tuple[int, ...], j: int
) -> tuple[RankingPattern, RankingPattern]:
    # (low) j demoted to level + |tie| - 1, others keep the level;
    # (high) j alone at the level, others demoted to level + 1.
    base = pattern.function_for(subset).as_map()
    low = dict(base)
    low[j] = level + len(tie) - 1
    high = dict(base)
    for c in tie:
        high[c] = level + 1
    high[j] = level
    make = lambda ranks: RankingFunction(
        subset, tuple(ranks[c] for c in subset.members)
    )
    return _replace_function(pattern, make(low)), _replace_function(pattern, make(high))


def synth_weak(
    pattern: RankingPattern,
    bases: Mapping[RankingPattern, VotingSituation] | None = None,
    refine: Callable[[VotingSituation, RankingPattern], VotingSituation] | None = None,
) -> tuple[VotingSituation, SynthTrace]:
    """Electorate realizing an arbitrary pattern, plus an audit trace.

    Ties are resolved one at a time, deterministically: first subset in
    (size, members) order that has a tie, its smallest tied level, with the
    largest tied member as the one moved. The two tie-free-er resolutions
    are synthesized recursively and cross-scaled so the moved member lands
    exactly level with the rest of its class.

    ``bases`` may pin known electorates for specific sub-patterns (they are
    verified before use); ``refine`` may shrink intermediate electorates,
    e.g. ``reduce.reduce_search``, to keep the cross-scaling coefficients
    small. One trace step is recorded per tie of the input pattern.
    """
    memo: dict[RankingPattern, tuple[VotingSituation, tuple[SynthStep, ...]]] = {}

    def build(pat: RankingPattern) -> tuple[VotingSituation, tuple[SynthStep, ...]]:
        hit = memo.get(pat)
        if hit is not None:
            return hit
        if bases is not None and pat in bases:
            situation = bases[pat]
            report = check_concordance(situation, pat)
            if not report:
                raise NotConcordantInput(
                    f"provided base electorate does not realize its pattern: "
                    f"{report.failures[0]}"
                )
            result = (situation, ())
        elif pat.is_strict:
            situation = synth_strict(pat)
            if refine is not None:
                situation = refine(situation, pat)
            result = (situation, ())
        else:
            subset, level, tie = _first_tie(pat)
            j = max(tie)
            i = min(c for c in tie if c != j)
            pat_low, pat_high = _split_tie(pat, subset, level, tie, j)
            low, steps_low = build(pat_low)
            high, _ = build(pat_high)
            votes_low = tally(low, subset).votes
            votes_high = tally(high, subset).votes
            coef_low = votes_high[j] - votes_high[i]
            coef_high = votes_low[i] - votes_low[j]
            if coef_low <= 0 or coef_high <= 0:
                raise NotConcordantInput(
                    f"base electorates lost the strict margins needed on "
                    f"{subset.members}: {coef_low}, {coef_high}"
                )
            merged = combine(scale(low, coef_low), scale(high, coef_high))
            divisor = gcd(*(c for _, c in merged.entries))
            if divisor > 1:
                merged = VotingSituation(
                    merged.m, tuple((p, c // divisor) for p, c in merged.entries)
                )
            step = SynthStep(
                subset=subset.members,
                level=level,
                demoted=j,
                reference=i,
                pattern_low=pat_low,
                pattern_high=pat_high,
                coefficient_low=coef_low,
                coefficient_high=coef_high,
                total_low=low.total,
                total_high=high.total,
                gcd_stripped=divisor,
                total=merged.total,
            )
            result = (merged, (step,) + steps_low)
        memo[pat] = result
        return result

    situation, steps = build(pattern)
    return situation, SynthTrace(steps)


def synth_with_voters(pattern: RankingPattern, theta: int) -> VotingSituation:
    """Electorate realizing a strict pattern with exactly ``theta`` voters.

    Works for every theta >= strict_voter_total(m) * m!. The closed-form
    electorate is scaled by m! so that every pairwise margin is at least m!,
    then a constant (and, for the remainder modulo m!, one extra voter on
    the lexicographically first orders) is spread across all m! orders,
    which shifts every tally by less than the margin.
    """
    if not pattern.is_strict:
        raise NonStrictPattern("exact voter targeting needs a tie-free pattern")
    m = pattern.m
    fact = factorial(m)
    floor_total = strict_voter_total(m) * fact
    if theta < floor_total:
        raise ThetaTooSmall(
            f"can only target theta >= {floor_total} at m={m}, got {theta}"
        )
    base = synth_strict(pattern)
    scaled = scale(base, fact)
    margin = min(_min_margin(scaled, s) for s in pattern.subsets)
    if margin < fact:
        raise AssertionError(
            f"scaled base margins {margin} fell below m! = {fact}; "
            "the spread construction would not be safe"
        )
    quotient, remainder = divmod(theta, fact)
    shift = quotient - strict_voter_total(m)
    counts = scaled.as_dict()
    entries = []
    for index, perm in enumerate(all_permutations(m), start=1):
        extra = 1 if index <= remainder else 0
        entries.append((perm, counts[perm] + shift + extra))
    return VotingSituation(m, tuple(entries))


def _min_margin(situation: VotingSituation, subset: CandidateSet) -> int:
    votes = sorted(tally(situation, subset).votes.values())
    return min(b - a for a, b in zip(votes, votes[1:]))


def synth_pairwise_mcgarvey(pattern: RankingPattern) -> VotingSituation:
    """Tiny electorate for patterns that are all-ties above the pair level.

    Requires every subset with >= 3 members to rank all its members equal;
    the pairs may do anything. Each preference order gets 2, 1, or 0 voters
    according to whether its second-to-last entry beats, ties, or loses to
    its last entry; the total is always exactly m!.
    """
    m = pattern.m
    for function in pattern.functions:
        if len(function.subset) >= 3 and any(r != 1 for r in function.ranks):
            raise PatternNotInClass(
                f"subset {function.subset.members} must be fully tied "
                "(every rank 1) for the pairwise constructor"
            )
    entries = []
    for perm in all_permutations(m):
        x, y = perm.order[-2], perm.order[-1]
        rx = pattern.rank((x, y), x)
        ry = pattern.rank((x, y), y)
        count = 1 if rx == ry else (2 if rx < ry else 0)
        entries.append((perm, count))
    return VotingSituation(m, tuple(entries))
