"""Exception hierarchy shared across the package."""


class ZetalabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ZetalabError, ValueError):
    """Input outside the documented domain of an operation."""


class SingularityError(ZetalabError):
    """Evaluation requested too close to a pole or a zero of zeta."""

    def __init__(self, message, abs_zeta=None):
        super().__init__(message)
        self.abs_zeta = abs_zeta


class CoverageError(ZetalabError):
    """A zero table does not reach the height required by the caller."""

    def __init__(self, message, required_height=None):
        super().__init__(message)
        self.required_height = required_height


class ResourceError(ZetalabError):
    """A sieve, table or file resource is missing or too small."""


class CertificationError(ZetalabError):
    """Zero-count certification failed (sign changes missing in a block)."""


class ParseError(ZetalabError):
    """Malformed zero-table file; carries the offending line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class ConfigError(ZetalabError, ValueError):
    """Invalid experiment configuration."""


class UnboundedVariationError(ZetalabError):
    """Partition refinement of a total-variation sum failed to converge."""


class AccuracyError(ZetalabError):
    """A quadrature failed to reach the requested tolerance."""
