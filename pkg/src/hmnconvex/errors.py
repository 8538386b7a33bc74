"""Exception hierarchy shared by every module."""


class HMNError(Exception):
    """Base class for all library errors."""


class DomainError(HMNError, ValueError):
    """An argument lies outside the domain of a function or mean."""


class RangeMismatch(DomainError):
    """The range of an inner function does not fit the outer domain."""


class NonPositiveValue(HMNError, ValueError):
    """An expression-valued weight function evaluated to a value <= 0."""


class DegenerateWeights(HMNError, ValueError):
    """Weights vanish (or a harmonic denominator underflows)."""


class LengthMismatch(HMNError, ValueError):
    pass


class HypothesisFailure(HMNError):
    """A standing hypothesis of a check does not hold on the samples."""


class PositivityFailure(HMNError, ValueError):
    """A function that must be positive took a value <= 0."""


class EvalError(HMNError, ArithmeticError):
    """Numerical evaluation failed (log of a non-positive, overflow, ...)."""


class ParseError(HMNError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset of the offending token and ``expected``
    the set of token kinds that would have been accepted there.
    """

    def __init__(self, message, offset=0, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifier(ParseError):
    pass


class ConfigError(HMNError):
    """Invalid run configuration (bad key, unparsable value, ...)."""
