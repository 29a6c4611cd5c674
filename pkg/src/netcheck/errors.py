"""Exception types shared across the package."""


class ParseError(Exception):
    """Syntax error in XML, filter, or formula input.

    Positions are 1-based. For single-line inputs (filters, formulas)
    ``column`` is the character offset into the input text.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class FormatError(Exception):
    """Structurally valid XML that does not encode a valid network."""


class UnknownKeyError(Exception):
    """A node key that is not present in the network."""


class FilterTypeError(TypeError):
    """A comparison operand could not be coerced to a number."""


class UnboundAtomError(Exception):
    """An atomic proposition that is not registered in the label map."""


class SizeExceededError(Exception):
    """The brute-force oracle was handed a network above its size cap."""


class NotSatisfiedError(Exception):
    """A witness was requested at a node the formula does not hold at."""


class MissingFilterError(Exception):
    """A filter atom that is absent from the filter registry."""


class EmptyNetworkError(Exception):
    """A statistic that needs at least one node was asked of an empty network."""
