"""Library exceptions.

Every exception carries a stable kebab-case ``name`` which the CLI prints
verbatim, so scripts can match on it.
"""

from __future__ import annotations


class TslabError(Exception):
    name = "tslab-error"


class OracleBoundExceeded(TslabError):
    name = "oracle-bound-exceeded"


class UnsupportedSpec(TslabError):
    name = "unsupported-spec"


class DimensionBoundExceeded(TslabError):
    name = "dimension-bound-exceeded"


class SupportOutOfRange(TslabError):
    name = "support-out-of-range"


class Unbounded(TslabError):
    name = "unbounded"


class DomainError(TslabError):
    name = "domain-error"


class InsufficientData(TslabError):
    name = "insufficient-data"


class NoConvergenceDetected(TslabError):
    name = "no-convergence-detected"


class InvalidInput(TslabError):
    name = "invalid-input"
