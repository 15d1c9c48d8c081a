"""Ranking patterns: one competition-style ranking per candidate subset.

A *ranking pattern* over candidates 1..m assigns to every subset A with
|A| >= 2 a competition ranking of A's members: the rank of a member is
1 plus the number of strictly better members, so tie groups share a rank
and the following ranks are skipped (1,2,2,4 is legal; 1,2,2,3 is not).
A pattern is *strict* when no subset contains a tie.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping

from .errors import (
    CompetitionRankingViolated,
    IncompletePattern,
    MissingCandidate,
    RankOutOfRange,
    SizeLimitExceeded,
)

#: Hard guard for full pattern enumeration; the pattern space grows as a
#: product of per-subset Fubini counts and is already ~1.5e9 at m=5 strict.
ENUMERATION_MAX_M = 4


@dataclass(frozen=True)
class CandidateSet:
    """A nonempty set of candidate identifiers, stored strictly increasing."""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("candidate set must be nonempty")
        if self.members[0] < 1:
            raise ValueError(f"candidate ids must be >= 1, got {self.members}")
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise ValueError(f"members must be strictly increasing, got {self.members}")

    @classmethod
    def of(cls, members: Iterable[int]) -> "CandidateSet":
        return cls(tuple(sorted(set(members))))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, candidate: int) -> bool:
        return candidate in self.members


@dataclass(frozen=True)
class Permutation:
    """A linear preference order; order[0] is the most preferred candidate."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.order)}: {self.order}")

    @classmethod
    def of(cls, order: Iterable[int]) -> "Permutation":
        return cls(tuple(order))

    @property
    def m(self) -> int:
        return len(self.order)

    def position(self, candidate: int) -> int:
        """1-based position of a candidate; smaller means more preferred."""
        return self._positions[candidate]

    @property
    def _positions(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {c: k for k, c in enumerate(self.order, start=1)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def first_of(self, members: Iterable[int]) -> int:
        """The most preferred candidate among ``members``."""
        pos = self._positions
        return min(members, key=pos.__getitem__)


@lru_cache(maxsize=None)
def all_permutations(m: int) -> tuple[Permutation, ...]:
    """All m! preference orders in lexicographic order."""
    return tuple(Permutation(p) for p in permutations(range(1, m + 1)))


@lru_cache(maxsize=None)
def all_subsets(m: int) -> tuple[CandidateSet, ...]:
    """Every subset of 1..m with size >= 2, ordered by (size, members)."""
    out = []
    for size in range(2, m + 1):
        for members in combinations(range(1, m + 1), size):
            out.append(CandidateSet(members))
    return tuple(out)


@dataclass(frozen=True)
class RankingFunction:
    """A validated competition ranking of one subset.

    ``ranks[k]`` is the rank of ``subset.members[k]``.
    """

    subset: CandidateSet
    ranks: tuple[int, ...]

    def __post_init__(self):
        n = len(self.subset.members)
        if len(self.ranks) != n:
            raise MissingCandidate(
                f"expected {n} ranks for subset {self.subset.members}, got {len(self.ranks)}"
            )
        for c, r in zip(self.subset.members, self.ranks):
            if not isinstance(r, int) or not 1 <= r <= n:
                raise RankOutOfRange(f"rank of candidate {c} must be in 1..{n}, got {r}")
        # rank = 1 + number of strictly better members, for every member
        for c, r in zip(self.subset.members, self.ranks):
            expected = 1 + sum(1 for s in self.ranks if s <= r - 1)
            if r != expected:
                raise CompetitionRankingViolated(c, expected, r)

    def rank(self, candidate: int) -> int:
        try:
            k = self.subset.members.index(candidate)
        except ValueError:
            raise MissingCandidate(
                f"candidate {candidate} not in subset {self.subset.members}"
            ) from None
        return self.ranks[k]

    def as_map(self) -> dict[int, int]:
        return dict(zip(self.subset.members, self.ranks))

    @property
    def is_strict(self) -> bool:
        return len(set(self.ranks)) == len(self.ranks)

    def tie_classes(self) -> dict[int, tuple[int, ...]]:
        """Map rank level -> members sharing it (only occupied levels)."""
        classes: dict[int, list[int]] = {}
        for c, r in zip(self.subset.members, self.ranks):
            classes.setdefault(r, []).append(c)
        return {r: tuple(cs) for r, cs in sorted(classes.items())}


def validate_ranking_function(
    subset: CandidateSet, rank: Mapping[int, int]
) -> RankingFunction:
    """Build a RankingFunction from a candidate->rank map, rejecting bad input."""
    if len(subset) < 2:
        raise ValueError("ranking functions are defined for subsets of size >= 2")
    extra = set(rank) - set(subset.members)
    if extra:
        raise MissingCandidate(
            f"rank map mentions candidates outside the subset: {sorted(extra)}"
        )
    missing = [c for c in subset.members if c not in rank]
    if missing:
        raise MissingCandidate(f"no rank given for candidates {missing}")
    return RankingFunction(subset, tuple(rank[c] for c in subset.members))


@dataclass(frozen=True)
class RankingPattern:
    """A ranking function for every subset of 1..m with size >= 2."""

    m: int
    functions: tuple[RankingFunction, ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least two candidates")
        if not isinstance(self.functions, tuple):
            object.__setattr__(self, "functions", tuple(self.functions))
        expected = all_subsets(self.m)
        got = tuple(f.subset for f in self.functions)
        if got != expected:
            if len(set(got)) != len(got):
                raise IncompletePattern("duplicate subsets in pattern")
            missing = [s.members for s in expected if s not in set(got)]
            if missing:
                raise IncompletePattern(f"missing subsets: {missing}")
            # full coverage but wrong order: canonicalize in place
            order = {s: k for k, s in enumerate(expected)}
            object.__setattr__(
                self, "functions", tuple(sorted(self.functions, key=lambda f: order[f.subset]))
            )

    @classmethod
    def from_functions(cls, m: int, functions: Iterable[RankingFunction]) -> "RankingPattern":
        return cls(m, tuple(functions))

    @property
    def by_subset(self) -> dict[CandidateSet, RankingFunction]:
        if self._lookup is None:
            object.__setattr__(self, "_lookup", {f.subset: f for f in self.functions})
        return self._lookup

    def function_for(self, subset: CandidateSet | Iterable[int]) -> RankingFunction:
        if not isinstance(subset, CandidateSet):
            subset = CandidateSet.of(subset)
        try:
            return self.by_subset[subset]
        except KeyError:
            raise IncompletePattern(f"pattern has no subset {subset.members}") from None

    def rank(self, subset: CandidateSet | Iterable[int], candidate: int) -> int:
        return self.function_for(subset).rank(candidate)

    @property
    def subsets(self) -> tuple[CandidateSet, ...]:
        return tuple(f.subset for f in self.functions)

    @property
    def is_strict(self) -> bool:
        return all(f.is_strict for f in self.functions)


def is_strict(pattern: RankingPattern) -> bool:
    """True iff no ranking function in the pattern contains a tie."""
    return pattern.is_strict


def tie_index(pattern: RankingPattern) -> int:
    """Total number of ties: sum over subsets of |A| minus distinct rank count."""
    return sum(len(f.ranks) - len(set(f.ranks)) for f in pattern.functions)


def max_tie_index(m: int) -> int:
    """Largest possible tie index at size m (every subset fully tied)."""
    return sum(math.comb(m, size) * (size - 1) for size in range(2, m + 1))


def _ordered_set_partitions(items: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    # every sequence of disjoint nonempty blocks covering `items`, each once
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for block in combinations(items, size):
            rest = tuple(c for c in items if c not in block)
            for tail in _ordered_set_partitions(rest):
                yield (block,) + tail


@lru_cache(maxsize=4096)
def competition_rankings(subset: CandidateSet) -> tuple[RankingFunction, ...]:
    """All competition rankings of a subset (Fubini-many), deterministic order."""
    out = []
    for blocks in _ordered_set_partitions(subset.members):
        ranks = {}
        level = 1
        for block in blocks:
            for c in block:
                ranks[c] = level
            level += len(block)
        out.append(RankingFunction(subset, tuple(ranks[c] for c in subset.members)))
    return tuple(out)


@lru_cache(maxsize=4096)
def strict_rankings(subset: CandidateSet) -> tuple[RankingFunction, ...]:
    """All |A|! tie-free rankings of a subset, deterministic order."""
    out = []
    for order in permutations(subset.members):
        pos = {c: k for k, c in enumerate(order, start=1)}
        out.append(RankingFunction(subset, tuple(pos[c] for c in subset.members)))
    return tuple(out)


def enumerate_patterns(m: int, strict_only: bool = False) -> Iterator[RankingPattern]:
    """Lazily yield every ranking pattern over 1..m exactly once.

    Guarded at m <= 4: the count is the product over subsets of per-subset
    ranking counts and explodes beyond desk scale after that.
    """
    if not 2 <= m <= ENUMERATION_MAX_M:
        raise SizeLimitExceeded(
            f"pattern enumeration is limited to 2 <= m <= {ENUMERATION_MAX_M}, got {m}"
        )
    subsets = all_subsets(m)
    per_subset = [
        strict_rankings(s) if strict_only else competition_rankings(s) for s in subsets
    ]

    def rec(k: int, chosen: tuple[RankingFunction, ...]) -> Iterator[RankingPattern]:
        if k == len(per_subset):
            yield RankingPattern(m, chosen)
            return
        for f in per_subset[k]:
            yield from rec(k + 1, chosen + (f,))

    return rec(0, ())


def count_patterns(m: int, strict_only: bool = False) -> int:
    """Closed-form size of the pattern space enumerate_patterns walks."""
    total = 1
    for s in all_subsets(m):
        total *= (
            math.factorial(len(s)) if strict_only else len(competition_rankings(s))
        )
    return total


def sample_pattern(
    m: int, rng: random.Random, strict_only: bool = False
) -> RankingPattern:
    """Draw a pattern uniformly (independent uniform ranking per subset)."""
    functions = []
    for s in all_subsets(m):
        pool = strict_rankings(s) if strict_only else competition_rankings(s)
        functions.append(pool[rng.randrange(len(pool))])
    return RankingPattern(m, tuple(functions))
