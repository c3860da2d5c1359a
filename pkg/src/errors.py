"""Exception hierarchy shared by the engine and the run pipeline.

``MathematicalRejection`` subclasses mean the input was well formed but
fails a mathematical requirement (exit code 2); ``DocumentError``
subclasses mean the input could not be read at all (exit code 3).
"""
from __future__ import annotations

from typing import Any


class TanakaError(Exception):
    """Root of every error raised by this package."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: dict[str, Any] = details


# ── Mathematical rejections (exit 2) ─────────────────────────────────

class MathematicalRejection(TanakaError):
    exit_code = 2


class GradingViolation(MathematicalRejection):
    pass


class JacobiViolation(MathematicalRejection):
    pass


class AntisymmetryViolation(MathematicalRejection):
    pass


class NotFundamental(MathematicalRejection):
    pass


class DegreeWindowError(MathematicalRejection):
    pass


class DegreeError(MathematicalRejection):
    pass


class LayerMissing(MathematicalRejection):
    pass


class DimensionMismatch(MathematicalRejection):
    pass


class NotDirectSum(MathematicalRejection):
    pass


class NotAbelian(MathematicalRejection):
    pass


class NotTransverse(MathematicalRejection):
    pass


class IntegrabilityFailed(MathematicalRejection):
    pass


class NotBracketGenerating(MathematicalRejection):
    pass


class RegularityUnknown(MathematicalRejection):
    pass


class DependentGenerators(MathematicalRejection):
    pass


# ── Malformed input (exit 3) ─────────────────────────────────────────

class DocumentError(TanakaError):
    exit_code = 3


class UnknownFixture(DocumentError):
    pass
