"""Exception types shared across the package."""


class ParadoxForgeError(Exception):
    """Base class for all errors raised by this package."""


class MissingCandidate(ParadoxForgeError):
    """A rank map does not cover exactly the members of its subset."""


class RankOutOfRange(ParadoxForgeError):
    """A rank value lies outside 1..|subset|."""


class CompetitionRankingViolated(ParadoxForgeError):
    """A rank assignment breaks the competition-ranking constraint."""

    def __init__(self, candidate: int, expected: int, got: int):
        self.candidate = candidate
        self.expected = expected
        self.got = got
        super().__init__(
            f"candidate {candidate} has rank {got}, but competition ranking "
            f"requires rank {expected} (1 + number of strictly better members)"
        )


class SizeLimitExceeded(ParadoxForgeError):
    """An operation was asked to run beyond its guarded problem size."""


class CandidateOutOfRange(ParadoxForgeError):
    """A candidate identifier does not fit the candidate count m."""


class DimensionMismatch(ParadoxForgeError):
    """Two objects built for different candidate counts were mixed."""


class EmptySituation(ParadoxForgeError):
    """A voting situation with zero voters was used where tallying is required."""


class NonStrictPattern(ParadoxForgeError):
    """An operation defined only for strict (tie-free) patterns got a weak one."""


class InvalidEpsilon(ParadoxForgeError):
    """An epsilon vector violates positivity or the intensity bounds."""


class ThetaTooSmall(ParadoxForgeError):
    """Requested voter total is below the guaranteed constructible range."""


class PatternNotInClass(ParadoxForgeError):
    """Pattern is outside the restricted class an operation supports."""


class NotConcordantInput(ParadoxForgeError):
    """A situation supposed to realize a pattern does not."""


class ParseError(ParadoxForgeError):
    """A pattern or situation file could not be parsed."""


class IncompletePattern(ParadoxForgeError):
    """A pattern does not cover every candidate subset of size >= 2 exactly once."""
