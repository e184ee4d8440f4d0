"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class MatrixFormatError(DomainError):
    """A code-matrix text file is malformed.

    ``line`` is the 1-based line number of the first offending line.
    """

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
