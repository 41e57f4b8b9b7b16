"""
Strict value types for quantum states and operators.

Pydantic models defined here are the single source of truth for what a
valid density matrix, observable or unitary looks like.  Master-equation
integrators fail silently on bad input (a non-Hermitian "state" still
propagates, just into nonsense), so the invariants are enforced at the
boundary: constructing one of these models either yields a validated value
or raises a domain error listing every violated invariant.

All matrices are dense ``complex128`` arrays, frozen after validation.
Basis ordering for composite spaces is ``(i, alpha) -> i * dim_b + alpha``.
"""
from typing import Annotated, List

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, model_validator

from qmexchange.errors import DimensionError, InvalidStateError, Violation

# Numerical slack for the exact identities of the model.
TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_UNITARY = 1e-10


def as_complex_matrix(value) -> np.ndarray:
    """Coerce *value* into a read-only, finite, 2-D complex array.

    Raises:
        DimensionError: If the input is not a non-empty 2-D array.
        InvalidStateError: If any entry is NaN or infinite.
    """
    arr = np.array(value, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")

    bad = int(np.count_nonzero(~np.isfinite(arr)))
    if bad:
        raise InvalidStateError(
            [Violation(code="NotFinite", magnitude=float(bad))]
        )

    arr.setflags(write=False)
    return arr


ComplexMatrix = Annotated[np.ndarray, BeforeValidator(as_complex_matrix)]


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {m.shape}")


def hermiticity_error(m: np.ndarray) -> float:
    """Return ``max |m_ij - conj(m_ji)|``."""
    return float(np.max(np.abs(m - m.conj().T)))


def unitarity_error(m: np.ndarray) -> float:
    """Return the larger of ``max|UU† - 1|`` and ``max|U†U - 1|``."""
    eye = np.eye(m.shape[0])
    return float(
        max(
            np.max(np.abs(m @ m.conj().T - eye)),
            np.max(np.abs(m.conj().T @ m - eye)),
        )
    )


def density_violations(m: np.ndarray) -> List[Violation]:
    """List every density-matrix invariant that *m* violates.

    Checks hermiticity (``TOL_HERM``), unit trace (``TOL_TRACE``) and the
    smallest eigenvalue of the Hermitian part (``-TOL_PSD``).  An empty list
    means *m* is a valid state.
    """
    _require_square(m)
    violations: List[Violation] = []

    herm_err = hermiticity_error(m)
    if herm_err > TOL_HERM:
        violations.append(Violation(code="NotHermitian", magnitude=herm_err))

    trace_err = float(abs(np.trace(m) - 1.0))
    if trace_err > TOL_TRACE:
        violations.append(Violation(code="TraceNotOne", magnitude=trace_err))

    lowest = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    if lowest < -TOL_PSD:
        violations.append(Violation(code="NotPositive", magnitude=lowest))

    return violations


class MatrixModel(BaseModel):
    """Common base: one frozen complex matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: ComplexMatrix

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


class DensityMatrix(MatrixModel):
    """Hermitian, unit-trace, positive-semidefinite quantum state."""

    @model_validator(mode="after")
    def _check_state(self) -> "DensityMatrix":
        violations = density_violations(self.matrix)
        if violations:
            raise InvalidStateError(violations, what="density matrix")
        return self


class HermitianObservable(MatrixModel):
    """Hermitian operator: a measured quantity or a Hamiltonian."""

    @model_validator(mode="after")
    def _check_hermitian(self) -> "HermitianObservable":
        _require_square(self.matrix)
        err = hermiticity_error(self.matrix)
        if err > TOL_HERM:
            raise InvalidStateError(
                [Violation(code="NotHermitian", magnitude=err)],
                what="observable",
            )
        return self


class UnitaryMap(MatrixModel):
    """Unitary operator, ``U U† = U† U = 1``."""

    @model_validator(mode="after")
    def _check_unitary(self) -> "UnitaryMap":
        _require_square(self.matrix)
        err = unitarity_error(self.matrix)
        if err > TOL_UNITARY:
            raise InvalidStateError(
                [Violation(code="NotUnitary", magnitude=err)],
                what="unitary",
            )
        return self


class ReducedPair(BaseModel):
    """States of the receiver R and the sender S in the interaction frame."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho_r: DensityMatrix
    rho_s: DensityMatrix

    @model_validator(mode="after")
    def _check_dims(self) -> "ReducedPair":
        if self.rho_r.dim != self.rho_s.dim:
            raise DimensionError(
                f"Receiver/sender dims differ: {self.rho_r.dim} vs {self.rho_s.dim}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.rho_r.dim
