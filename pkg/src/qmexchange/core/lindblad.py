"""
Markovian master-equation generators and entropy diagnostics.

Implements the general single-channel Lindblad generator

    d rho/dt = -i[H, rho] + (gamma/2) ([R rho, R†] + [R, rho R†])

and its non-selective continuous-measurement special case
``R = R† = O``, ``H = 0``:

    d rho/dt = -(gamma/2) [O, [O, rho]].

Both generators share the ``MasterEquation`` interface consumed by the
fixed-step integrator.  The diagnostics reproduce the linear-entropy
monotonicity argument for normal jump operators: the exact entropy rate
and the Cauchy-Schwarz bound it rests on.
"""
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from qmexchange.core.matrix_ops import MatrixLike, as_array, commutator, dagger
from qmexchange.data.schemas import ComplexMatrix, HermitianObservable
from qmexchange.errors import DimensionError, NotCommuting

# [R, R†] must vanish to this accuracy for the CBS argument to apply.
TOL_NORMAL = 1e-10


class MasterEquation(ABC):
    """Contract shared by every linear generator the integrator can evolve."""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Hilbert-space dimension the generator acts on."""

    @abstractmethod
    def rhs(self, rho: MatrixLike) -> np.ndarray:
        """Return ``d rho/dt`` at *rho*."""

    def liouvillian(self) -> np.ndarray:
        """Superoperator ``L`` with ``vec(d rho/dt) = L @ vec(rho)`` (row-major vec).

        Built column by column from the action of ``rhs`` on the matrix units
        ``|k><l|``; exact because every generator here is linear in rho.
        """
        d = self.dim
        sup = np.empty((d * d, d * d), dtype=complex)
        unit = np.zeros((d, d), dtype=complex)
        for col in range(d * d):
            k, l = divmod(col, d)
            unit[k, l] = 1.0
            sup[:, col] = self.rhs(unit).ravel()
            unit[k, l] = 0.0
        return sup


class LindbladGenerator(BaseModel, MasterEquation):
    """Hamiltonian ``H``, jump operator ``R`` and rate ``gamma`` of one channel."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    hamiltonian: HermitianObservable
    jump: ComplexMatrix
    rate: float = Field(1.0, ge=0, description="Coupling rate gamma (inverse time)")

    @model_validator(mode="after")
    def _check_dims(self) -> "LindbladGenerator":
        if self.jump.shape != self.hamiltonian.matrix.shape:
            raise DimensionError(
                f"Jump operator {self.jump.shape} does not match "
                f"Hamiltonian {self.hamiltonian.matrix.shape}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def rhs(self, rho: MatrixLike) -> np.ndarray:
        return lindblad_rhs(self, rho)


class MeasurementGenerator(BaseModel, MasterEquation):
    """Continuous non-selective measurement of ``observable`` at ``rate``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    observable: HermitianObservable
    rate: float = Field(1.0, ge=0, description="Measurement strength gamma")

    @property
    def dim(self) -> int:
        return self.observable.dim

    def rhs(self, rho: MatrixLike) -> np.ndarray:
        return measurement_rhs(self, rho)

    def as_lindblad(self) -> LindbladGenerator:
        """Equivalent Lindblad form: ``H = 0``, ``R = R† = O``."""
        return LindbladGenerator(
            hamiltonian=HermitianObservable(matrix=np.zeros((self.dim, self.dim))),
            jump=self.observable.matrix,
            rate=self.rate,
        )


def _check_state_dim(dim: int, rho: np.ndarray) -> None:
    if rho.shape != (dim, dim):
        raise DimensionError(f"Generator acts on dim {dim}, state has shape {rho.shape}")


# ---------------------------------------------------------------------------
# Right-hand sides
# ---------------------------------------------------------------------------

def lindblad_rhs(gen: LindbladGenerator, rho: MatrixLike) -> np.ndarray:
    """Return ``-i[H, rho] + (gamma/2)([R rho, R†] + [R, rho R†])``."""
    m = as_array(rho)
    _check_state_dim(gen.dim, m)
    r = gen.jump
    r_dag = r.conj().T
    unitary = -1j * commutator(gen.hamiltonian, m)
    dissipative = commutator(r @ m, r_dag) + commutator(r, m @ r_dag)
    return unitary + 0.5 * gen.rate * dissipative


def measurement_rhs(gen: MeasurementGenerator, rho: MatrixLike) -> np.ndarray:
    """Return ``-(gamma/2) [O, [O, rho]]``."""
    m = as_array(rho)
    _check_state_dim(gen.dim, m)
    o = gen.observable.matrix
    return -0.5 * gen.rate * commutator(o, commutator(o, m))


# ---------------------------------------------------------------------------
# Entropy diagnostics
# ---------------------------------------------------------------------------

def entropy_rate(gen: LindbladGenerator, rho: MatrixLike) -> float:
    """Exact ``dS/dt = 2 gamma tr(R†R rho² - rho R rho R†)`` of the linear entropy.

    The Hamiltonian term does not contribute.  The imaginary residual of the
    trace is rounding noise and is discarded.
    """
    m = as_array(rho)
    _check_state_dim(gen.dim, m)
    r = gen.jump
    r_dag = r.conj().T
    value = np.trace(r_dag @ r @ m @ m - m @ r @ m @ r_dag)
    if abs(value.imag) > 1e-12:
        logger.debug(f"entropy_rate: imaginary residual {value.imag:.2e}")
    return float(2.0 * gen.rate * value.real)


class CBSReport(BaseModel):
    """Both sides of ``tr(RR†rho²) tr(R†R rho²) >= |tr(rho R rho R†)|²``."""

    lhs: float
    rhs: float
    holds: bool


def cbs_check(r: MatrixLike, rho: MatrixLike) -> CBSReport:
    """Evaluate the Cauchy-Schwarz bound behind entropy monotonicity.

    Raises:
        NotCommuting: If ``[R, R†]`` is not zero within ``TOL_NORMAL``.
    """
    r_m, m = as_array(r), as_array(rho)
    r_dag = dagger(r_m)
    defect = float(np.max(np.abs(commutator(r_m, r_dag))))
    if defect > TOL_NORMAL:
        logger.error(f"cbs_check: jump operator not normal, |[R, R†]| = {defect:.2e}")
        raise NotCommuting(f"[R, R†] != 0 (max entry {defect:.3e})")

    rho2 = m @ m
    lhs = float(np.real(np.trace(r_m @ r_dag @ rho2)) * np.real(np.trace(r_dag @ r_m @ rho2)))
    rhs = float(abs(np.trace(m @ r_m @ m @ r_dag)) ** 2)
    return CBSReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs - 1e-12)


# ---------------------------------------------------------------------------
# Recoherence attractor
# ---------------------------------------------------------------------------

def attractor_jump(n: int) -> np.ndarray:
    """Lowering shift ``sum_k |k-1><k|``; for n=2 this is ``|g><e|`` with g=0, e=1."""
    if n < 1:
        raise ValueError("Dimension must be positive")
    return np.eye(n, k=1, dtype=complex)


def attractor_generator(
    n: int,
    rate: float = 1.0,
    hamiltonian: Optional[HermitianObservable] = None,
) -> LindbladGenerator:
    """Generator whose unique stationary state is the pure ``|0><0|``."""
    h = hamiltonian or HermitianObservable(matrix=np.zeros((n, n)))
    return LindbladGenerator(hamiltonian=h, jump=attractor_jump(n), rate=rate)


def ground_state(n: int) -> np.ndarray:
    """Projector ``|0><0|`` in dimension *n*."""
    g = np.zeros((n, n), dtype=complex)
    g[0, 0] = 1.0
    return g
