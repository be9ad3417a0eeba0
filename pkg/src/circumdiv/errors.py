"""Exception taxonomy shared across the library.

Each exception carries a stable machine-readable ``code`` so the CLI can
emit structured error documents without string-matching messages.
"""

from __future__ import annotations


class CircumdivError(Exception):
    """Base class for all library errors."""

    code = "error"


class InputFormatError(CircumdivError):
    """Malformed or unparsable input document."""

    code = "parse_error"


class DimensionMismatchError(CircumdivError):
    """Operands live in different ambient dimensions."""

    code = "dimension_mismatch"


class InvalidKernelError(CircumdivError):
    """Kernel fails validation: unbounded, empty interior, or degenerate."""

    code = "invalid_kernel"


class UnsupportedKernelError(CircumdivError):
    """Requested conversion or query is undefined for this kernel type."""

    code = "unsupported_kernel"


class BudgetExceededError(CircumdivError):
    """Search or dimension budget exceeded; inputs are too large."""

    code = "budget_exceeded"


class LabelMismatchError(CircumdivError):
    """Two diversity tables do not share the same label set."""

    code = "label_mismatch"


class NotSemimetricError(CircumdivError):
    """Distance matrix violates symmetry, nonnegativity, or the triangle
    inequality."""

    code = "not_semimetric"


class NotSymmetricError(CircumdivError):
    """Diversity table is not invariant under label permutations."""

    code = "not_symmetric"

    def __init__(self, message: str, subset_a=None, subset_b=None):
        super().__init__(message)
        self.subset_a = subset_a
        self.subset_b = subset_b


class NotEmbeddableError(CircumdivError):
    """Diversity fails a necessary embeddability criterion."""

    code = "not_embeddable"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDiameterError(CircumdivError):
    """Diversity is not the diameter diversity of its induced metric."""

    code = "not_diameter"


class PreconditionUnmetError(CircumdivError):
    """Input violates a documented precondition of the operation."""

    code = "precondition_unmet"


class EmbeddingVerificationError(CircumdivError):
    """Candidate embedding failed numeric re-verification."""

    code = "embedding_verification_failed"


class SolverMismatchError(CircumdivError):
    """Two independent solution routes disagree beyond tolerance."""

    code = "solver_mismatch"


class SolverFailureError(CircumdivError):
    """Internal solver produced a result that failed certification."""

    code = "solver_failure"
