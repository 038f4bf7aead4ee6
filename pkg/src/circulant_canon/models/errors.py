"""
Custom exceptions for circulant canonization.
"""


class CirculantError(Exception):
    """Base exception for every error raised by this package."""

    pass


class InvalidInputError(CirculantError):
    """Exception raised when an input (graph, connection set, argument) is malformed."""

    def __init__(self, message, source):
        self.source = source
        super().__init__(f"Invalid input {source}: {message}")


class GraphFormatError(InvalidInputError):
    """Exception raised when a graph or connection-set text cannot be parsed."""

    def __init__(self, message, source, line_number: int | None = None):
        self.line_number = line_number
        where = f" (line {line_number})" if line_number is not None else ""
        super().__init__(f"{message}{where}", source)


class NotInverseClosedError(InvalidInputError):
    """Exception raised when an operation requires S = -S and the set is not inverse-closed."""

    def __init__(self, source):
        super().__init__("connection set is not inverse-closed", source)


class SizeMismatchError(InvalidInputError):
    """Exception raised when two objects that must share an order do not."""

    def __init__(self, expected: int, actual: int, source):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected order {expected}, got {actual}", source)


class BoundExceededError(CirculantError):
    """Exception raised when an exhaustive procedure is asked to run beyond its size bound."""

    def __init__(self, operation: str, n: int, bound: int):
        self.operation = operation
        self.n = n
        self.bound = bound
        super().__init__(f"{operation} is limited to n <= {bound}, got n = {n}")


class OracleBoundExceededError(BoundExceededError):
    """Exception raised when a brute-force oracle is called above its configured bound."""

    pass


class EnumerationBoundExceededError(BoundExceededError):
    """Exception raised when an exhaustive enumeration or exact sampler exceeds its bound."""

    pass


class NotFirmError(CirculantError):
    """Exception raised when an operation requires a firm circulant."""

    def __init__(self, n: int, group_order: int):
        self.n = n
        self.group_order = group_order
        super().__init__(
            f"circulant of order {n} is not firm (automorphism group of order {group_order})"
        )


class ExperimentAssertionError(CirculantError):
    """Exception raised when an experiment's acceptance check fails."""

    def __init__(self, experiment: str, message: str):
        self.experiment = experiment
        super().__init__(f"Experiment {experiment} failed: {message}")
