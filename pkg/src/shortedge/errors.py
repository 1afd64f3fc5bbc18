"""Exception types shared across the package."""


class ShortEdgeError(Exception):
    """Base class for all package-specific errors."""


class InvalidPairError(ShortEdgeError, ValueError):
    """A vertex pair operation was called with u == v or an unknown index."""


class FamilyTooSmallError(ShortEdgeError):
    """Ground set below the configured minimum for the matching builder."""


class InfeasiblePartitionError(ShortEdgeError):
    """No same-part unmatched pair is available; constants are too small
    for this family (diagnostic condition, not a bug in the caller)."""


class MatchingBoundError(ShortEdgeError):
    """A constructed matching violated one of its configured bounds."""


class EmptyMatchingError(ShortEdgeError):
    """The in-degree filter removed every matched pair."""


class DrawingFormatError(ShortEdgeError, ValueError):
    """Structurally malformed drawing input (bad JSON, bad ids, bad types)."""


class InvalidDrawingError(ShortEdgeError):
    """An operation requiring a valid simple drawing received one with
    violations. Carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        preview = "; ".join(str(v) for v in self.violations[:3])
        more = "" if len(self.violations) <= 3 else f" (+{len(self.violations) - 3} more)"
        super().__init__(f"invalid drawing: {preview}{more}")


class NoOuterVertexError(ShortEdgeError):
    """No outer-face vertex could be determined or certified."""


class DegenerateRotationError(ShortEdgeError):
    """Two edges leave the root vertex in the same initial direction."""


class CurveBoundaryError(ShortEdgeError):
    """Query point lies exactly on the closed curve."""


class GenerationError(ShortEdgeError):
    """A drawing generator exhausted its retry budget."""


class OracleGuardError(ShortEdgeError):
    """A brute-force oracle was asked to run above its size guard."""


class PipelineStageError(ShortEdgeError):
    """Wraps an error raised inside a named stage of the selection pipeline."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"pipeline stage {stage!r} failed: {cause}")
