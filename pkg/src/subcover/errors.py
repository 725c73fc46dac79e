"""Exception hierarchy shared by the library and the command line."""


class SubcoverError(Exception):
    """Base class for all errors raised by subcover."""

    exit_code = 2


class ParseError(SubcoverError, ValueError):
    """Malformed input text (edge list, catalog file, cover JSON)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(SubcoverError, ValueError):
    """Input parsed fine but violates a structural requirement."""


class UnsupportedSizeError(SubcoverError, ValueError):
    """Pattern or catalog size outside the supported range."""

    exit_code = 1


class DomainError(SubcoverError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InfeasibleSpecError(SubcoverError, ValueError):
    """A generator spec asks for more than the model can provide."""

    exit_code = 3


class DensityError(InfeasibleSpecError):
    """Rejection sampling ran out of budget; the spec is too dense for N."""


class UndefinedProfileError(SubcoverError, ValueError):
    """Significance profile requested for a cover with all-zero c-scores."""
