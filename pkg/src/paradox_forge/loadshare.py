"""Load-sharing probability models with exact rational arithmetic.

The model describes m units that fail one at a time. While the units of a
set A survive, unit i fails at constant intensity

    mu_i = 1 - (rank(A, i) - 1) * eps(|A|),

where rank comes from a strict ranking pattern and eps(h) is a small
positive rational per surviving-set size h (eps(1) = 0, so a lone survivor
has intensity 1). Better-ranked units fail *faster*, which makes the
probability that unit i fails first among A mirror the pattern's order:
failing first plays the role of winning the election on A.

Everything here is a fractions.Fraction over Python integers; comparisons
and normalizations are exact, never approximate. The intensities depend
only on the set of failed units, never on their failure order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping

from .errors import (
    DimensionMismatch,
    InvalidEpsilon,
    NonStrictPattern,
)
from .ranking import (
    CandidateSet,
    Permutation,
    RankingPattern,
    all_permutations,
    all_subsets,
)
from .tally import (
    ConcordanceReport,
    VotingSituation,
    compare_scores_to_pattern,
)

RationalLike = Fraction | int | str


def default_epsilon_base(m: int) -> int:
    """Base of the default geometric epsilon grid: 17 * m * m!."""
    return 17 * m * factorial(m)


@dataclass(frozen=True)
class EpsilonVector:
    """Per-surviving-set-size intensity decrements eps(1)..eps(m).

    eps(1) is always 0; eps(h) must be a positive rational for h >= 2.
    """

    m: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.m < 2:
            raise InvalidEpsilon("need m >= 2")
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != self.m:
            raise InvalidEpsilon(
                f"expected {self.m} entries eps(1)..eps({self.m}), got {len(values)}"
            )
        if values[0] != 0:
            raise InvalidEpsilon("eps(1) must be 0")
        for h, v in enumerate(values[1:], start=2):
            if v <= 0:
                raise InvalidEpsilon(f"eps({h}) must be > 0, got {v}")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, m: int, tail: Iterable[RationalLike]) -> "EpsilonVector":
        """Build from eps(2)..eps(m); eps(1) = 0 is implied."""
        return cls(m, (Fraction(0),) + tuple(Fraction(v) for v in tail))

    def of_size(self, h: int) -> Fraction:
        if not 1 <= h <= self.m:
            raise ValueError(f"surviving-set size {h} out of 1..{self.m}")
        return self.values[h - 1]

    @property
    def feasible(self) -> bool:
        """Whether every intensity 1 - (rank-1)*eps stays strictly positive."""
        return all((h - 1) * self.of_size(h) < 1 for h in range(2, self.m + 1))


def default_epsilon(m: int) -> EpsilonVector:
    """The stock choice eps(h) = (17 * m * m!)^-(h-1).

    Small enough, by a wide margin, that the induced model realizes any
    strict pattern; the sufficiency inequalities are re-checked, not assumed.
    """
    if m < 2:
        raise InvalidEpsilon("need m >= 2")
    base = default_epsilon_base(m)
    eps = EpsilonVector.of(m, [Fraction(1, base ** (h - 1)) for h in range(2, m + 1)])
    if not check_epsilon(eps):
        raise InvalidEpsilon(f"default epsilon failed its own sufficiency check at m={m}")
    return eps


def check_epsilon(eps: EpsilonVector) -> bool:
    """Sufficient condition for the model to realize every strict pattern.

    Each level must dominate the next:
        (m-l)! (l-1)! / (2 m!) * eps(l) > 8 l * eps(l+1)   for l = 2..m-1.
    Vacuously true at m = 2. Failing this check does not prove
    non-concordance; it only withdraws the guarantee.
    """
    m = eps.m
    for level in range(2, m):
        lhs = (
            Fraction(factorial(m - level) * factorial(level - 1), 2 * factorial(m))
            * eps.of_size(level)
        )
        if lhs <= 8 * level * eps.of_size(level + 1):
            return False
    return True


@dataclass(frozen=True)
class LoadSharingModel:
    """Failure intensities built from a strict pattern and an epsilon vector."""

    pattern: RankingPattern
    eps: EpsilonVector

    def __post_init__(self):
        if not self.pattern.is_strict:
            raise NonStrictPattern("load-sharing construction needs a tie-free pattern")
        if self.eps.m != self.pattern.m:
            raise DimensionMismatch(
                f"epsilon has m={self.eps.m}, pattern has m={self.pattern.m}"
            )
        if not self.eps.feasible:
            raise InvalidEpsilon(
                "some intensity 1 - (rank-1)*eps would be <= 0; need (h-1)*eps(h) < 1"
            )

    @property
    def m(self) -> int:
        return self.pattern.m

    def intensity(self, candidate: int, failed: frozenset[int]) -> Fraction:
        """Failure intensity of a surviving candidate given the failed set."""
        survivors = tuple(c for c in range(1, self.m + 1) if c not in failed)
        if candidate in failed:
            raise ValueError(f"candidate {candidate} already failed")
        if len(survivors) == 1:
            return Fraction(1)
        rank = self.pattern.rank(survivors, candidate)
        return 1 - (rank - 1) * self.eps.of_size(len(survivors))

    def level_total(self, survivors: int) -> Fraction:
        """Sum of intensities over any surviving set of the given size.

        For a strict pattern the ranks over h survivors are exactly 1..h,
        so the sum h - h(h-1)/2 * eps(h) does not depend on which units
        survive.
        """
        h = survivors
        return h - Fraction(h * (h - 1), 2) * self.eps.of_size(h)


def make_model(pattern: RankingPattern, eps: EpsilonVector | None = None) -> LoadSharingModel:
    return LoadSharingModel(pattern, default_epsilon(pattern.m) if eps is None else eps)


@dataclass(frozen=True)
class PermutationDistribution:
    """An exact probability for every failure order (= preference order)."""

    m: int
    probabilities: tuple[tuple[Permutation, Fraction], ...]

    def __post_init__(self):
        probs = tuple(
            (perm, Fraction(p))
            for perm, p in sorted(self.probabilities, key=lambda e: e[0].order)
        )
        if len(probs) != factorial(self.m):
            raise ValueError(f"need all {factorial(self.m)} permutations")
        if any(p < 0 for _, p in probs):
            raise ValueError("negative probability")
        if sum(p for _, p in probs) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_mapping(
        cls, m: int, prob: Mapping[Permutation | tuple[int, ...], RationalLike]
    ) -> "PermutationDistribution":
        entries = []
        for perm in all_permutations(m):
            p = prob.get(perm, prob.get(perm.order, 0))
            entries.append((perm, Fraction(p)))
        return cls(m, tuple(entries))

    @classmethod
    def from_situation(cls, situation: VotingSituation) -> "PermutationDistribution":
        """Empirical distribution counts/n of a voting situation."""
        n = situation.total
        counts = situation.as_dict()
        return cls(
            situation.m,
            tuple(
                (perm, Fraction(counts.get(perm, 0), n))
                for perm in all_permutations(situation.m)
            ),
        )

    def probability(self, perm: Permutation | tuple[int, ...]) -> Fraction:
        if not isinstance(perm, Permutation):
            perm = Permutation(tuple(perm))
        return self.as_dict()[perm]

    def as_dict(self) -> dict[Permutation, Fraction]:
        index = self.__dict__.get("_index")
        if index is None:
            index = dict(self.probabilities)
            object.__setattr__(self, "_index", index)
        return index


def permutation_distribution(model: LoadSharingModel) -> PermutationDistribution:
    """Exact law of the failure order: a chain of intensity ratios.

    The probability of order (j1, ..., jm) is the product over steps k of
    intensity(j_k given failed {j1..j_{k-1}}) / (sum over survivors); the
    final step is deterministic. Sums to exactly 1 by construction.
    """
    m = model.m
    entries = []
    for perm in all_permutations(m):
        p = Fraction(1)
        failed: frozenset[int] = frozenset()
        for k, j in enumerate(perm.order[:-1]):
            p *= model.intensity(j, failed) / model.level_total(m - k)
            failed = failed | {j}
        entries.append((perm, p))
    dist = PermutationDistribution(m, tuple(entries))
    assert sum(p for _, p in dist.probabilities) == 1
    return dist


@dataclass(frozen=True)
class WinningTable:
    """alpha[A][j]: exact probability that j fails first among A."""

    m: int
    alpha: dict[CandidateSet, dict[int, Fraction]] = field(compare=True)

    def of(self, subset: CandidateSet | Iterable[int], candidate: int) -> Fraction:
        if not isinstance(subset, CandidateSet):
            subset = CandidateSet.of(subset)
        return self.alpha[subset][candidate]


def winning_probabilities(model: LoadSharingModel) -> WinningTable:
    """Winning probabilities evaluated directly from the intensities.

    Conditions on which units outside A have already failed: w[S] is the
    probability that the first |S| failures are exactly the set S, built by
    the same intensity-ratio chain; j wins A by failing right after any such
    S disjoint from A.
    """
    m = model.m
    everyone = range(1, m + 1)

    w: dict[frozenset[int], Fraction] = {frozenset(): Fraction(1)}
    for size in range(1, m - 1):
        for chosen in combinations(everyone, size):
            s = frozenset(chosen)
            w[s] = sum(
                w[s - {i}] * model.intensity(i, s - {i}) / model.level_total(m - size + 1)
                for i in s
            )

    alpha: dict[CandidateSet, dict[int, Fraction]] = {}
    for subset in all_subsets(m):
        outside = [c for c in everyone if c not in subset.members]
        row = {}
        for j in subset.members:
            total = Fraction(0)
            for size in range(0, len(outside) + 1):
                for chosen in combinations(outside, size):
                    s = frozenset(chosen)
                    total += w[s] * model.intensity(j, s) / model.level_total(m - size)
            row[j] = total
        assert sum(row.values()) == 1
        alpha[subset] = row
    return WinningTable(m, alpha)


def winning_probabilities_generic(dist: PermutationDistribution) -> WinningTable:
    """Winning probabilities of an arbitrary failure-order distribution.

    alpha_j(A) sums the probabilities of the orders in which j comes before
    every other member of A; with the empirical distribution of a voting
    situation this is exactly the vote share of j in the election on A.
    """
    m = dist.m
    alpha: dict[CandidateSet, dict[int, Fraction]] = {}
    for subset in all_subsets(m):
        row = {c: Fraction(0) for c in subset.members}
        for perm, p in dist.probabilities:
            row[perm.first_of(subset.members)] += p
        assert sum(row.values()) == 1
        alpha[subset] = row
    return WinningTable(m, alpha)


def check_p_concordance(
    source: LoadSharingModel | PermutationDistribution | WinningTable,
    pattern: RankingPattern,
) -> ConcordanceReport:
    """Does the model/distribution rank every subset exactly like the pattern?

    Exact rational comparisons; a strictly better pattern rank must come with
    a strictly larger winning probability, equal ranks with equal ones.
    """
    if isinstance(source, LoadSharingModel):
        table = winning_probabilities(source)
    elif isinstance(source, PermutationDistribution):
        table = winning_probabilities_generic(source)
    else:
        table = source
    if table.m != pattern.m:
        raise DimensionMismatch(f"table has m={table.m}, pattern has m={pattern.m}")
    return compare_scores_to_pattern(pattern, table.alpha)


def _sampler_table(model: LoadSharingModel, bits: int):
    # per failed-set state: survivors plus integer thresholds t_k such that a
    # draw r in [0, 2^bits) selects the first k with r * den < t_k
    table = model.__dict__.get("_sampler_cache", {}).get(bits)
    if table is not None:
        return table

    def state(failed: frozenset[int]):
        survivors = [c for c in range(1, model.m + 1) if c not in failed]
        total = model.level_total(len(survivors))
        thresholds = []
        cum = Fraction(0)
        for c in survivors:
            cum += model.intensity(c, failed) / total
            thresholds.append((c, (cum.numerator << bits), cum.denominator))
        return survivors, thresholds

    table = {}
    stack = [frozenset()]
    while stack:
        failed = stack.pop()
        if failed in table:
            continue
        survivors, thresholds = state(failed)
        table[failed] = thresholds
        if len(survivors) > 2:
            for c in survivors:
                stack.append(failed | {c})
    cache = model.__dict__.setdefault("_sampler_cache", {})
    cache[bits] = table
    return table


def sample_failure_order(
    model: LoadSharingModel, rng: random.Random | int, bits: int = 64
) -> Permutation:
    """Draw one failure order by sequential exact inverse transform.

    Each step picks the next failing unit among the survivors with
    probability intensity/total, comparing an integer uniform draw of the
    given bit width against exact rational thresholds. Deterministic for a
    given seeded generator.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    table = _sampler_table(model, bits)
    order = []
    failed: frozenset[int] = frozenset()
    for _ in range(model.m - 1):
        thresholds = table.get(failed)
        if thresholds is None or len(thresholds) == 1:
            break
        r = rng.getrandbits(bits)
        chosen = thresholds[-1][0]
        for c, num_scaled, den in thresholds:
            if r * den < num_scaled:
                chosen = c
                break
        order.append(chosen)
        failed = failed | {chosen}
    order.extend(c for c in range(1, model.m + 1) if c not in failed)
    return Permutation(tuple(order))
