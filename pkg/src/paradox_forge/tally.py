"""Voting situations, election tallies, and concordance checking.

A *voting situation* assigns a voter count to each linear preference order.
In an election among the candidates of a subset A, every voter votes for
their most preferred member of A; a situation *realizes* (is concordant
with) a ranking pattern when, on every subset, the tallies order the
candidates exactly as the pattern dictates, ties included.

All counts are plain Python integers, so arithmetic is exact at any scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    CandidateOutOfRange,
    DimensionMismatch,
    EmptySituation,
)
from .ranking import (
    CandidateSet,
    Permutation,
    RankingFunction,
    RankingPattern,
    all_permutations,
    all_subsets,
)


@dataclass(frozen=True)
class VotingSituation:
    """Voter count per preference order; zero counts are kept implicit."""

    m: int
    entries: tuple[tuple[Permutation, int], ...]

    def __post_init__(self):
        seen = set()
        for perm, count in self.entries:
            if perm.m != self.m:
                raise DimensionMismatch(
                    f"permutation {perm.order} does not fit m={self.m}"
                )
            if count < 0:
                raise ValueError(f"negative voter count {count} for {perm.order}")
            if perm in seen:
                raise ValueError(f"duplicate permutation {perm.order}")
            seen.add(perm)
        canon = tuple(
            (perm, count)
            for perm, count in sorted(self.entries, key=lambda e: e[0].order)
            if count > 0
        )
        object.__setattr__(self, "entries", canon)

    @classmethod
    def from_counts(
        cls,
        m: int,
        counts: Mapping[Permutation | tuple[int, ...], int] | Iterable[tuple],
    ) -> "VotingSituation":
        items = counts.items() if isinstance(counts, Mapping) else counts
        entries = []
        for perm, count in items:
            if not isinstance(perm, Permutation):
                perm = Permutation(tuple(perm))
            entries.append((perm, int(count)))
        return cls(m, tuple(entries))

    def count_of(self, perm: Permutation | tuple[int, ...]) -> int:
        if not isinstance(perm, Permutation):
            perm = Permutation(tuple(perm))
        return self.as_dict().get(perm, 0)

    def as_dict(self) -> dict[Permutation, int]:
        index = self.__dict__.get("_index")
        if index is None:
            index = dict(self.entries)
            object.__setattr__(self, "_index", index)
        return index

    @property
    def total(self) -> int:
        """Total number of voters."""
        return sum(count for _, count in self.entries)


def zero_situation(m: int) -> VotingSituation:
    return VotingSituation(m, ())


def uniform_situation(m: int, count: int = 1) -> VotingSituation:
    return VotingSituation(m, tuple((p, count) for p in all_permutations(m)))


@dataclass(frozen=True)
class Tally:
    """Vote counts for one election subset."""

    subset: CandidateSet
    votes: dict[int, int] = field(compare=True)


def tally(situation: VotingSituation, subset: CandidateSet | Iterable[int]) -> Tally:
    """Plurality tally of the election among ``subset`` under ``situation``.

    Each voter contributes their count to the most preferred member of the
    subset; the votes therefore always sum to the total number of voters.
    """
    if not isinstance(subset, CandidateSet):
        subset = CandidateSet.of(subset)
    if subset.members[-1] > situation.m:
        raise CandidateOutOfRange(
            f"subset {subset.members} does not fit m={situation.m}"
        )
    if situation.total == 0:
        raise EmptySituation("cannot tally a situation with zero voters")
    votes = {c: 0 for c in subset.members}
    members = subset.members
    for perm, count in situation.entries:
        votes[perm.first_of(members)] += count
    return Tally(subset, votes)


def tallies(situation: VotingSituation) -> dict[CandidateSet, Tally]:
    """Tallies for every subset of size >= 2."""
    return {s: tally(situation, s) for s in all_subsets(situation.m)}


def ranks_from_scores(scores: Mapping[int, object]) -> dict[int, int]:
    """Competition ranks induced by scores: higher score = better rank."""
    out = {}
    for c, v in scores.items():
        out[c] = 1 + sum(1 for w in scores.values() if w > v)
    return out


def extract_pattern(situation: VotingSituation) -> RankingPattern:
    """The unique ranking pattern the situation realizes."""
    if situation.total == 0:
        raise EmptySituation("a pattern is only induced by a positive electorate")
    functions = []
    for subset in all_subsets(situation.m):
        ranks = ranks_from_scores(tally(situation, subset).votes)
        functions.append(
            RankingFunction(subset, tuple(ranks[c] for c in subset.members))
        )
    return RankingPattern(situation.m, tuple(functions))


@dataclass(frozen=True)
class ConcordanceFailure:
    """One violated pairwise relation on one subset."""

    subset: tuple[int, ...]
    pair: tuple[int, int]
    expected: str  # relation the pattern demands between the pair's scores
    scores: tuple[object, object]

    def __str__(self) -> str:
        i, j = self.pair
        si, sj = self.scores
        return (
            f"subset {self.subset}: expected score({i}) {self.expected} score({j}), "
            f"got {si} vs {sj}"
        )


@dataclass(frozen=True)
class ConcordanceReport:
    """Outcome of comparing realized scores against a target pattern."""

    overall: bool
    failures: tuple[ConcordanceFailure, ...]

    def __post_init__(self):
        assert self.overall == (not self.failures)

    def __bool__(self) -> bool:
        return self.overall


def compare_scores_to_pattern(
    pattern: RankingPattern,
    scores_by_subset: Mapping[CandidateSet, Mapping[int, object]],
) -> ConcordanceReport:
    """Check pattern order against per-subset scores (votes or probabilities).

    For every subset and every candidate pair, a strictly better pattern rank
    must come with a strictly larger score, and equal ranks with equal scores.
    """
    failures = []
    for function in pattern.functions:
        subset = function.subset
        scores = scores_by_subset[subset]
        members = subset.members
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                ri, rj = function.rank(i), function.rank(j)
                expected = "=" if ri == rj else (">" if ri < rj else "<")
                si, sj = scores[i], scores[j]
                realized = "=" if si == sj else (">" if si > sj else "<")
                if expected != realized:
                    failures.append(
                        ConcordanceFailure(subset.members, (i, j), expected, (si, sj))
                    )
    return ConcordanceReport(not failures, tuple(failures))


def check_concordance(
    situation: VotingSituation, pattern: RankingPattern
) -> ConcordanceReport:
    """Is the situation concordant with the pattern? Lists every violation."""
    if situation.m != pattern.m:
        raise DimensionMismatch(
            f"situation has m={situation.m}, pattern has m={pattern.m}"
        )
    scores = {s: tally(situation, s).votes for s in pattern.subsets}
    return compare_scores_to_pattern(pattern, scores)


def scale(situation: VotingSituation, factor: int) -> VotingSituation:
    """Multiply every count by ``factor`` (>= 1); realizes the same pattern."""
    if factor < 1:
        raise ValueError(f"scale factor must be >= 1, got {factor}")
    return VotingSituation(
        situation.m, tuple((p, c * factor) for p, c in situation.entries)
    )


def offset(situation: VotingSituation, amount: int) -> VotingSituation:
    """Add ``amount`` voters to every one of the m! preference orders.

    Adds the same number of votes to every candidate on every subset, so the
    realized pattern is unchanged while the total grows by amount * m!.
    """
    if amount < 0:
        raise ValueError(f"offset amount must be >= 0, got {amount}")
    if amount == 0:
        return situation
    counts = situation.as_dict()
    return VotingSituation(
        situation.m,
        tuple((p, counts.get(p, 0) + amount) for p in all_permutations(situation.m)),
    )


def combine(a: VotingSituation, b: VotingSituation) -> VotingSituation:
    """Pointwise sum of two situations; tallies add subset by subset."""
    if a.m != b.m:
        raise DimensionMismatch(f"cannot combine m={a.m} with m={b.m}")
    counts = dict(a.entries)
    for p, c in b.entries:
        counts[p] = counts.get(p, 0) + c
    return VotingSituation(a.m, tuple(counts.items()))
