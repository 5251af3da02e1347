"""Typed errors raised across the workbench.

Exit-code classes used by the CLI:
  2 -- schema / expression parsing problems,
  3 -- structural-axiom failures (bad frame or structure data),
  4 -- internal invariant violations (never expected in CI).
"""


class NordenlabError(Exception):
    """Base class for all typed errors of this package."""

    exit_code = 1


# -- parsing / schema (exit code 2) -----------------------------------------

class ExprSyntaxError(NordenlabError):
    """Malformed expression text; carries the 0-based offending position."""

    exit_code = 2

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbol(NordenlabError):
    exit_code = 2


class SchemaError(NordenlabError):
    """Input document does not match the JSON schema; names the field path."""

    exit_code = 2


# -- scalar arithmetic -------------------------------------------------------

class DivisionByZero(NordenlabError, ZeroDivisionError):
    exit_code = 3


class DenominatorVanishes(NordenlabError):
    """A parameter specialization makes a denominator zero."""

    exit_code = 3


class MissingSymbol(NordenlabError):
    exit_code = 3


# -- tensors -----------------------------------------------------------------

class VarianceMismatch(NordenlabError):
    exit_code = 3


class SlotOutOfRange(NordenlabError):
    exit_code = 3


class SymmetryPreconditionFailed(NordenlabError):
    exit_code = 3


class DimensionMismatch(NordenlabError):
    exit_code = 3


# -- frames and structures (exit code 3) -------------------------------------

class JacobiViolated(NordenlabError):
    """Carries the violating triple and the first nonzero defect component."""

    exit_code = 3

    def __init__(self, triple, component, defect):
        super().__init__(
            f"Jacobi identity fails on triple {triple}: "
            f"component {component} has defect {defect}"
        )
        self.triple = triple
        self.component = component
        self.defect = defect


class BracketNotAntisymmetric(NordenlabError):
    exit_code = 3


class MetricDegenerate(NordenlabError):
    exit_code = 3


class TwinMetricDegenerate(NordenlabError):
    exit_code = 3


class DimensionTooSmall(NordenlabError):
    exit_code = 3


class DegeneratePlane(NordenlabError):
    exit_code = 3


class StructureInvalid(NordenlabError):
    """A structure axiom (J^2 = -I, compatibility, ...) fails exactly."""

    exit_code = 3


class NotATorsion(NordenlabError):
    exit_code = 3


class InvalidRotationPair(NordenlabError):
    """(c, s) with c^2 + s^2 != 1 passed where a Pythagorean pair is required."""

    exit_code = 3


class FlavorMismatch(NordenlabError):
    exit_code = 3


class ZeroParameters(NordenlabError):
    exit_code = 3


# -- internal (exit code 4) ---------------------------------------------------

class InternalInvariantViolation(NordenlabError):
    exit_code = 4
