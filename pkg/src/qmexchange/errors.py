"""
Exception hierarchy for the qmexchange engine.

Every domain error derives from ``QMExchangeError`` and carries the CLI exit
code of its failure class, so the front end can map any exception to a
process status without string matching:

  - 1: configuration file could not be parsed.
  - 2: configuration or input failed validation.
  - 3: a numerical guard fired (step rejected, property violated).
  - 4: the requested optimisation regime is infeasible for the input.
  - 5: output files could not be written.

None of these classes subclass ``ValueError``.  Pydantic only wraps
``ValueError``/``AssertionError`` raised inside validators, so domain errors
raised while constructing a model reach the caller unchanged.
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field

ViolationCode = Literal[
    "NotHermitian",
    "TraceNotOne",
    "NotPositive",
    "NotUnitary",
    "NotFinite",
    "NotUnitarilyEquivalent",
]


class Violation(BaseModel):
    """A single violated invariant and how badly it is violated."""

    code: ViolationCode
    magnitude: float = Field(
        ...,
        description="Size of the violation (deviation, trace error or eigenvalue)",
    )

    def __str__(self) -> str:
        return f"{self.code} ({self.magnitude:.3e})"


class QMExchangeError(Exception):
    """Base class for all engine errors."""

    exit_code: int = 1


class ConfigParseError(QMExchangeError):
    """Scenario file is not readable as structured data."""

    exit_code = 1

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")


class ConfigValidationError(QMExchangeError):
    """Scenario file parsed but violates a type or scenario invariant."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        codes: Optional[List[str]] = None,
    ):
        self.field = field
        self.codes = list(codes or [])
        prefix = f"[field '{field}'] " if field else ""
        super().__init__(f"{prefix}{message}")


class DimensionError(QMExchangeError):
    """Operand shapes are incompatible."""

    exit_code = 2


class InvalidStateError(QMExchangeError):
    """A matrix failed one or more state/operator invariants."""

    exit_code = 2

    def __init__(self, violations: List[Violation], what: str = "matrix"):
        self.violations = list(violations)
        detail = ", ".join(str(v) for v in self.violations)
        super().__init__(f"Invalid {what}: {detail}")

    @property
    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


class EnergyReferenceError(QMExchangeError):
    """Isoenergetic formulas need a traceless receiver Hamiltonian."""

    exit_code = 2


class NotCommuting(QMExchangeError):
    """Jump operator is not normal ([R, R†] != 0)."""

    exit_code = 2


class NumericalGuardError(QMExchangeError):
    """A runtime numerical check failed."""

    exit_code = 3


class StepRejected(NumericalGuardError):
    """Integrator produced a clearly non-positive state; dt is too large."""


class PropertyViolated(NumericalGuardError):
    """A structural identity of the model did not hold numerically."""

    def __init__(self, tag: str, residual: float):
        self.tag = tag
        self.residual = residual
        super().__init__(f"Property '{tag}' violated (residual {residual:.3e})")


class InfeasibleRegimeError(InvalidStateError):
    """Optimal state of a constrained regime leaves the PSD cone."""

    exit_code = 4


class OutputError(QMExchangeError):
    """Trajectory or report could not be written."""

    exit_code = 5
