class PdsmError(Exception):
    """Base class for all package errors."""


class ParseError(PdsmError, ValueError):
    """Malformed input text."""


class ValidationError(PdsmError, ValueError):
    """A value breaks a model invariant; ``violations`` lists each fault."""

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"{head}{more}")


class StructureError(PdsmError, ValueError):
    """A plan or recipe does not fit the instance it is applied to."""


class GuardError(PdsmError, RuntimeError):
    """An exhaustive search would exceed its configured size guard."""


class BoundViolation(PdsmError, AssertionError):
    """A proven round bound was exceeded. Always a correctness bug."""
