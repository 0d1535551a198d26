"""Exception types shared by the whole package."""


class ParameterError(ValueError):
    """Invalid user-supplied parameters.

    ``kind`` is a short machine-readable tag such as ``"invalid-size"``,
    ``"non-unit"`` or ``"relation-violated"``.
    """

    def __init__(self, kind, message):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class StructureError(RuntimeError):
    """An internal consistency check failed (e.g. two construction routes disagree)."""


class DomainError(ArithmeticError):
    """A numerical quantity left the domain where it is defined."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its sweep limit before converging."""
