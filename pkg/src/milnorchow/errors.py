"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI maps it into reports.
"""


class MilnorChowError(Exception):
    code = "error"


class ZeroPolynomial(MilnorChowError, ValueError):
    code = "zero-polynomial"


class DegreeBoundExceeded(MilnorChowError):
    code = "degree-bound-exceeded"


class NotCoprime(MilnorChowError, ValueError):
    code = "not-coprime"


class NotComaximal(MilnorChowError, ValueError):
    code = "not-comaximal"


class NotIrreducible(MilnorChowError, ValueError):
    code = "not-irreducible"


class LeadingCoeffNotUnit(MilnorChowError, ValueError):
    code = "leading-coeff-not-unit"


class UnsupportedCoefficients(MilnorChowError):
    code = "unsupported-coefficients"


class UnsupportedDomain(MilnorChowError):
    code = "unsupported-domain"


class DomainMismatch(MilnorChowError, TypeError):
    code = "domain-mismatch"


class ZeroEntry(MilnorChowError, ValueError):
    code = "zero-entry"


class ZeroArgument(MilnorChowError, ValueError):
    code = "zero-argument"


class NotFeasible(MilnorChowError, ValueError):
    code = "not-feasible"


class NotFound(MilnorChowError):
    """Randomized or exhaustive search gave up."""

    code = "not-found"

    def __init__(self, attempts, message=None):
        self.attempts = attempts
        super().__init__(message or f"no admissible candidate after {attempts} attempts")


class OracleUndecidable(MilnorChowError):
    code = "oracle-undecidable"


class FieldTooLarge(MilnorChowError):
    code = "field-too-large"


class NotAdmissible(MilnorChowError, ValueError):
    code = "not-admissible"


class NotInCube(MilnorChowError, ValueError):
    code = "not-in-cube"


class UnsupportedTower(MilnorChowError):
    code = "unsupported-tower"


class TowerTooDeep(MilnorChowError):
    code = "tower-too-deep"


class ParseError(MilnorChowError, ValueError):
    code = "parse-error"

    def __init__(self, line, column, expected, text=None):
        self.line = line
        self.column = column
        self.expected = expected
        msg = f"line {line}, column {column}: expected {expected}"
        if text is not None:
            msg += f" in {text!r}"
        super().__init__(msg)
