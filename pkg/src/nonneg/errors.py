"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class NonnegError(Exception):
    """Base class. ``code`` is a stable machine-readable tag used in JSON output."""

    code = "ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details


# polynomial ring
class UnknownVariable(NonnegError):
    code = "UNKNOWN_VARIABLE"


class NegativeExponent(NonnegError):
    code = "NEGATIVE_EXPONENT"


class RingMismatch(NonnegError):
    code = "RING_MISMATCH"


class MissingAssignment(NonnegError):
    code = "MISSING_ASSIGNMENT"


class ZeroInput(NonnegError):
    code = "ZERO_INPUT"


# univariate real roots
class ZeroPoly(NonnegError):
    code = "ZERO_POLY"


class BadInterval(NonnegError):
    code = "BAD_INTERVAL"


class NotIsolating(NonnegError):
    code = "NOT_ISOLATING"


# elimination
class BadDivisor(NonnegError):
    code = "BAD_DIVISOR"


class BadInput(NonnegError):
    code = "BAD_INPUT"


class Unsupported(NonnegError):
    """A configured cap was exceeded or the input falls outside what the engine handles."""

    code = "UNSUPPORTED"


# classification
class NoEquation(NonnegError):
    code = "NO_EQUATION"


class Degenerate(NonnegError):
    """The specialized system lost genericity at a sample point."""

    code = "DEGENERATE"


class DegenerateExhausted(NonnegError):
    code = "DEGENERATE_EXHAUSTED"


class OnVariety(NonnegError):
    code = "ON_VARIETY"


# prover
class AlreadyHasEquation(NonnegError):
    code = "ALREADY_HAS_EQUATION"


class UnsatisfiableSplit(NonnegError):
    code = "UNSATISFIABLE_SPLIT"


class DepthExceeded(NonnegError):
    code = "DEPTH_EXCEEDED"


class RefinementStalled(NonnegError):
    code = "REFINEMENT_STALLED"


class BadN(NonnegError):
    code = "BAD_N"


# problem files
class ParseError(NonnegError):
    code = "SYNTAX_ERROR"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        loc = f"line {line}, column {column}: " if line else (f"column {column}: " if column else "")
        super().__init__(loc + message, line=line, column=column)
        self.line = line
        self.column = column


class MissingRing(NonnegError):
    code = "MISSING_RING"


class ConflictingMode(NonnegError):
    code = "CONFLICTING_MODE"
