# Copyright (c) 2024.
"""Exception hierarchy for invalid quantum-state inputs.

Every error raised for bad user input derives from QuantumInputError, which
the command-line layer maps to the input-error exit code.
"""


class QuantumInputError(ValueError):
    """Base class for rejected inputs."""


class DimensionError(QuantumInputError):
    """Site dimensions do not match the data or the operation."""


class NormalizationError(QuantumInputError):
    """Zero vector or a trace/norm outside tolerance."""


class SiteError(QuantumInputError):
    """Invalid, repeated or trivial site selection."""


class NotHermitianError(QuantumInputError):
    """Matrix is not Hermitian within tolerance."""


class NotPositiveError(QuantumInputError):
    """Matrix has eigenvalues below the positivity tolerance."""


class SizeGuardError(QuantumInputError):
    """Requested work exceeds the configured size limit."""


class PermutationError(QuantumInputError):
    """Malformed permutation or replica specification."""


class DomainError(QuantumInputError):
    """Parameters outside the domain of a formula or family."""


class StateFileError(QuantumInputError):
    """State file cannot be parsed."""
