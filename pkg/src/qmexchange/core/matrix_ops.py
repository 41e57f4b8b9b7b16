"""
Dense tensor-algebra primitives and state functionals.

Pure NumPy functions shared by every other module: Kronecker products with
the ``(i, alpha) -> i * dim_b + alpha`` basis convention, partial traces,
commutators, and the entropy functionals used to quantify decoherence
(linear entropy ``1 - tr(rho^2)``) and for reference (von Neumann).

Functions accept either the validated pydantic types or raw arrays; the
``*_batch`` variants work on stacks of shape ``(K, d, d)`` and are what the
integrators use on whole trajectories.
"""
from typing import Literal, Optional, Tuple, Union

import numpy as np
from loguru import logger

from qmexchange.data.schemas import (
    DensityMatrix,
    MatrixModel,
    as_complex_matrix,
    density_violations,
)
from qmexchange.errors import DimensionError, InvalidStateError

MatrixLike = Union[MatrixModel, np.ndarray]
Subsystem = Literal["R", "S"]


def as_array(a: MatrixLike) -> np.ndarray:
    return a.matrix if isinstance(a, MatrixModel) else np.asarray(a, dtype=complex)


# ---------------------------------------------------------------------------
# Tensor algebra
# ---------------------------------------------------------------------------

def tensor_product(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """Kronecker product; row ``(i, alpha)`` of the result is ``i * dim_b + alpha``."""
    return np.kron(as_array(a), as_array(b))


def dagger(a: MatrixLike) -> np.ndarray:
    """Conjugate transpose."""
    return as_array(a).conj().T


def commutator(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """Return ``AB - BA``.

    Raises:
        DimensionError: If the operands are not square of equal size.
    """
    x, y = as_array(a), as_array(b)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape != y.shape:
        raise DimensionError(f"Commutator needs equal square operands, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def partial_trace(
    rho_c: MatrixLike,
    keep: Subsystem,
    dims: Tuple[int, int],
) -> DensityMatrix:
    """Reduce a bipartite state to one of its parts.

    ``keep="R"`` returns ``tr_S(rho_c)``, ``keep="S"`` returns ``tr_R(rho_c)``,
    using ``<i alpha| rho |j beta>`` at flat index ``i * d_s + alpha``.

    Raises:
        DimensionError: If ``rho_c`` is not ``(d_r * d_s)``-dimensional.
    """
    reduced = partial_trace_matrix(as_array(rho_c), keep, dims)
    return DensityMatrix(matrix=reduced)


def partial_trace_matrix(
    m: np.ndarray,
    keep: Subsystem,
    dims: Tuple[int, int],
) -> np.ndarray:
    """Partial trace of a raw matrix or a ``(K, D, D)`` stack, no validation."""
    d_r, d_s = dims
    if m.shape[-1] != d_r * d_s or m.shape[-2] != d_r * d_s:
        raise DimensionError(
            f"Partial trace over dims {dims} needs a {d_r * d_s}-dim matrix, got {m.shape}"
        )

    lead = m.shape[:-2]
    t = m.reshape(*lead, d_r, d_s, d_r, d_s)
    if keep == "R":
        return np.einsum("...iaja->...ij", t)
    if keep == "S":
        return np.einsum("...iaib->...ab", t)
    raise ValueError(f"Unknown subsystem tag: {keep}")


# ---------------------------------------------------------------------------
# State functionals
# ---------------------------------------------------------------------------

def purity(rho: MatrixLike) -> float:
    """Return ``tr(rho^2)``."""
    m = as_array(rho)
    return float(np.real(np.einsum("ij,ji->", m, m)))


def linear_entropy(rho: MatrixLike) -> float:
    """Return ``S[rho] = 1 - tr(rho^2)``; zero exactly for pure states."""
    return 1.0 - purity(rho)


def von_neumann_entropy(rho: MatrixLike) -> float:
    """Return ``-sum lambda ln lambda`` with ``0 ln 0 = 0``."""
    return float(von_neumann_batch(as_array(rho)[np.newaxis])[0])


def purity_batch(states: np.ndarray) -> np.ndarray:
    """Purities of a ``(K, d, d)`` stack."""
    return np.real(np.einsum("kij,kji->k", states, states))


def von_neumann_batch(
    states: np.ndarray,
    eigvals: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Von Neumann entropies of a stack; pass *eigvals* to skip the solve."""
    if eigvals is None:
        eigvals = hermitian_eigvals_batch(states)
    lam = np.where(eigvals > 0.0, eigvals, 1.0)
    return -np.sum(np.where(eigvals > 0.0, eigvals * np.log(lam), 0.0), axis=-1)


def hermitian_eigvals_batch(states: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian parts of a stack (LAPACK ``heevd``)."""
    if states.shape[0] == 0:
        return np.empty((0, states.shape[-1]))
    herm = (states + np.conj(np.swapaxes(states, -1, -2))) / 2
    return np.linalg.eigvalsh(herm)


def trace_distance(a: MatrixLike, b: MatrixLike) -> float:
    """Return ``(1/2) ||a - b||_1`` for Hermitian operands."""
    diff = as_array(a) - as_array(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def spectral_conjugate(
    h: MatrixLike,
    m: MatrixLike,
    phase: float,
) -> np.ndarray:
    """Return ``exp(i*phase*H) m exp(-i*phase*H)`` via the eigendecomposition of ``H``."""
    energies, vecs = np.linalg.eigh(as_array(h))
    rot = (vecs * np.exp(1j * phase * energies)) @ vecs.conj().T
    return rot @ as_array(m) @ rot.conj().T


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_density_matrix(m) -> DensityMatrix:
    """Validate *m* as a quantum state.

    Returns:
        The validated ``DensityMatrix``.

    Raises:
        DimensionError: If *m* is not square.
        InvalidStateError: Listing every violated invariant
            (``NotHermitian``, ``TraceNotOne``, ``NotPositive``) with its
            magnitude.
    """
    arr = as_complex_matrix(m)
    violations = density_violations(arr)
    if violations:
        logger.error(f"Density matrix rejected: {', '.join(str(v) for v in violations)}")
        raise InvalidStateError(violations, what="density matrix")
    return DensityMatrix(matrix=arr)
