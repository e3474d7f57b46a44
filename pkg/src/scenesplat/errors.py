"""Exception hierarchy shared across the engine.

Every domain failure maps to one of these so the CLI (exit code 1) and the
service (HTTP status) can translate uniformly.
"""

from __future__ import annotations


class SceneSplatError(Exception):
    """Base class for all domain errors."""

    code = "domain_error"


class InvalidInputError(SceneSplatError):
    """Non-finite or otherwise malformed numeric input."""

    code = "invalid_input"


class OutOfRangeError(SceneSplatError):
    """Time or index outside the valid span."""

    code = "out_of_range"


class ScenarioFormatError(SceneSplatError):
    """Scenario / asset / codebook document violates the file schema."""

    code = "format_error"


class AlignmentWindowError(SceneSplatError):
    """Trajectories share no usable time window."""

    code = "alignment_window"


class DegenerateEmbeddingError(SceneSplatError):
    """Projector output collapsed to the zero vector."""

    code = "degenerate_embedding"


class UnknownLabelError(SceneSplatError):
    """A label references a prototype that is not in the codebook."""

    code = "unknown_label"


class DivergenceError(SceneSplatError):
    """Training produced a non-finite loss."""

    code = "divergence"


class NoCandidatesError(SceneSplatError):
    """Query ran against a scene with no eligible agents."""

    code = "no_candidates"


class QueryResolutionError(SceneSplatError):
    """A target/anchor query could not be resolved to an agent."""

    code = "query_resolution"


class AssetNotFoundError(SceneSplatError):
    """Asset retrieval filtered out every bank entry."""

    code = "asset_not_found"


class CommandSyntaxError(SceneSplatError):
    """Edit command text does not parse; carries the offending position."""

    code = "command_syntax"

    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


class CommandConstraintError(SceneSplatError):
    """Parsed command violates an EditCommand invariant."""

    code = "command_constraint"


class EditApplyError(SceneSplatError):
    """Edit could not be applied; scenario rolled back."""

    code = "edit_apply"


class MissingHistoryError(SceneSplatError):
    """An agent lacks the history samples refinement requires."""

    code = "missing_history"


class VersionConflictError(SceneSplatError):
    """Mutating request carried a stale scenario version id."""

    code = "version_conflict"


class NoScenarioError(SceneSplatError):
    """Session has no scenario loaded."""

    code = "no_scenario"
