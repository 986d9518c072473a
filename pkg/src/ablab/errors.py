"""Exception taxonomy shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; anything else is a plain ValueError (usage bug, not a math outcome).
"""

from __future__ import annotations


class AblabError(Exception):
    """Base class for all ablab-specific failures."""


class DepthExceeded(AblabError):
    """A quotient beyond the materializable range was requested."""


class PrecisionExhausted(AblabError):
    """A width or decidability target could not be met within the depth cap."""


class AmbiguousFold(AblabError):
    """An interval straddles a mod-1 fold point; retry with a smaller width."""


class WindowEmpty(AblabError):
    """No convergent denominator lies in the requested window."""


class NotEnoughAlphas(AblabError):
    """A step-count index exceeds the number of alpha letters in the word."""


class InvalidPattern(AblabError):
    """A word pattern is empty or contains letters outside {A, B}."""


class WordTooShort(AblabError):
    """The choice word is shorter than the prefix the pipeline needs."""


class AmbiguousMembership(AblabError):
    """A point interval straddles an arc boundary of the counting grid."""

    def __init__(self, message: str, point_index: int | None = None):
        super().__init__(message)
        self.point_index = point_index


class DegenerateSample(AblabError):
    """A box-count sample has a nonpositive count."""


class InadmissibleParams(AblabError):
    """(tau1, tau2) violate the admissibility condition 2*tau1 < tau2 + 2."""


class SeparationFailed(AblabError):
    """A pair of extracted orbit points is certifiably closer than the
    required gap.  Carries the violating pair; expected for small witness
    indices, so callers should treat it as a reportable outcome."""

    def __init__(self, message: str, pair: tuple[tuple[int, int], tuple[int, int]]):
        super().__init__(message)
        self.pair = pair


class ConfigError(AblabError):
    """A spec or run-configuration file failed validation."""
