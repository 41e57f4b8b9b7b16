"""
Swap-measurement model of a two-part composite system.

A composite C = R + S of two non-interacting N-level parts with unitarily
equivalent Hamiltonians ``H_S = U H_R U†`` is continuously measured through

    O_C = (U† ⊗ U) T,

where ``T`` permutes the two factors.  ``O_C`` is Hermitian, squares to the
identity and commutes with ``H_C = H_R ⊗ 1 + 1 ⊗ H_S``, so in the
interaction frame the composite master equation is

    dW/dt = -(gamma/2)[O_C, [O_C, W]] = gamma (O_C W O_C - W)

and tracing out either part gives the closed pair

    d rho_R/dt = gamma (U† rho_S U - rho_R)
    d rho_S/dt = gamma (U rho_R U† - rho_S)

for any composite state, correlated or not.  The pair relaxes to
``rho_R(inf) = (rho_R(0) + U† rho_S(0) U)/2`` and its image under ``U``.

The reduced pair is what runs in production; the full N²-dimensional path
(``full_space_generator`` / ``evolve_full``) is kept for cross-checks and
for correlated initial states.
"""
from typing import Literal, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from qmexchange.core.integrator import (
    evolve,
    guard_positivity,
    hermitize_stack,
    integrate_linear,
    record_indices,
)
from qmexchange.core.lindblad import MeasurementGenerator
from qmexchange.core.matrix_ops import (
    MatrixLike,
    as_array,
    commutator,
    dagger,
    partial_trace_matrix,
    purity_batch,
    spectral_conjugate,
    tensor_product,
    validate_density_matrix,
)
from qmexchange.data.schemas import (
    DensityMatrix,
    HermitianObservable,
    ReducedPair,
    UnitaryMap,
)
from qmexchange.data.trajectory import PairTrajectory, Trajectory
from qmexchange.errors import (
    DimensionError,
    InvalidStateError,
    PropertyViolated,
    Violation,
)

# ||H_S - U H_R U†||_max accepted as unitary equivalence.
TOL_EQUIV = 1e-9
# Residual allowed for the structural identities of O_C.
TOL_PROPERTY = 1e-10

FrameDirection = Literal["to_W", "from_W"]


class CompositeSystem(BaseModel):
    """Two N-level parts with unitarily equivalent Hamiltonians.

    Build either with all three operators (equivalence is verified) or with
    ``CompositeSystem.from_hamiltonian(h_r, u)`` which derives ``H_S``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., ge=1, description="Dimension of each part")
    h_r: HermitianObservable = Field(..., description="Receiver Hamiltonian H_R")
    h_s: HermitianObservable = Field(..., description="Sender Hamiltonian H_S")
    u: UnitaryMap = Field(..., description="Intertwiner with H_S = U H_R U†")

    @model_validator(mode="after")
    def _check_equivalence(self) -> "CompositeSystem":
        for name, op in (("h_r", self.h_r), ("h_s", self.h_s), ("u", self.u)):
            if op.dim != self.n:
                raise DimensionError(f"{name} has dim {op.dim}, expected n={self.n}")

        u = self.u.matrix
        err = float(np.max(np.abs(self.h_s.matrix - u @ self.h_r.matrix @ u.conj().T)))
        if err > TOL_EQUIV:
            logger.error(f"H_S is not U H_R U† (max deviation {err:.3e})")
            raise InvalidStateError(
                [Violation(code="NotUnitarilyEquivalent", magnitude=err)],
                what="composite system",
            )
        return self

    @classmethod
    def from_hamiltonian(cls, h_r: MatrixLike, u: MatrixLike) -> "CompositeSystem":
        """Derive ``H_S = U H_R U†`` from the receiver Hamiltonian."""
        h = HermitianObservable(matrix=as_array(h_r))
        unitary = UnitaryMap(matrix=as_array(u))
        h_s = unitary.matrix @ h.matrix @ unitary.matrix.conj().T
        return cls(
            n=h.dim,
            h_r=h,
            h_s=HermitianObservable(matrix=(h_s + h_s.conj().T) / 2),
            u=unitary,
        )

    @property
    def dims(self) -> Tuple[int, int]:
        return self.n, self.n

    @property
    def h_c(self) -> np.ndarray:
        """``H_C = H_R ⊗ 1 + 1 ⊗ H_S``."""
        eye = np.eye(self.n)
        return tensor_product(self.h_r, eye) + tensor_product(eye, self.h_s)


# ---------------------------------------------------------------------------
# Measured observable
# ---------------------------------------------------------------------------

def swap_operator(n: int) -> HermitianObservable:
    """Permutation ``T |i>|j> = |j>|i>`` on the ``n²``-dimensional product space."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    t = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            t[j * n + i, i * n + j] = 1.0
    return HermitianObservable(matrix=t)


def _require(tag: str, residual: float) -> None:
    if residual > TOL_PROPERTY:
        logger.error(f"O_C property '{tag}' fails with residual {residual:.3e}")
        raise PropertyViolated(tag, residual)


def measured_observable(sys: CompositeSystem) -> HermitianObservable:
    """Build ``O_C = (U† ⊗ U) T`` and verify its three structural properties.

    Checked to ``TOL_PROPERTY``:
      - ``a``: ``O_C`` is Hermitian and equals ``T (U ⊗ U†)``;
      - ``b``: ``O_C² = 1``;
      - ``c``: ``[O_C, H_C] = 0``.

    Raises:
        PropertyViolated: Tagged with the failing property.
    """
    u = sys.u.matrix
    t = swap_operator(sys.n).matrix
    o_c = tensor_product(dagger(u), u) @ t

    herm = float(np.max(np.abs(o_c - dagger(o_c))))
    alt = float(np.max(np.abs(o_c - t @ tensor_product(u, dagger(u)))))
    _require("a", max(herm, alt))
    _require("b", float(np.max(np.abs(o_c @ o_c - np.eye(sys.n**2)))))
    _require("c", float(np.max(np.abs(commutator(o_c, sys.h_c)))))

    logger.debug(f"O_C built for n={sys.n}; properties a, b, c verified")
    return HermitianObservable(matrix=(o_c + dagger(o_c)) / 2)


# ---------------------------------------------------------------------------
# Reduced dynamics
# ---------------------------------------------------------------------------

def _pair_arrays(sys: CompositeSystem, pair: ReducedPair) -> Tuple[np.ndarray, np.ndarray]:
    if pair.dim != sys.n:
        raise DimensionError(f"Pair has dim {pair.dim}, system has n={sys.n}")
    return pair.rho_r.matrix, pair.rho_s.matrix


def _pair_derivative(
    u: np.ndarray, rho_r: np.ndarray, rho_s: np.ndarray, rate: float
) -> Tuple[np.ndarray, np.ndarray]:
    u_dag = u.conj().T
    return (
        rate * (u_dag @ rho_s @ u - rho_r),
        rate * (u @ rho_r @ u_dag - rho_s),
    )


def reduced_rhs(
    sys: CompositeSystem,
    pair: ReducedPair,
    rate: float = 1.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(d rho_R/dt, d rho_S/dt)`` of the reduced swap dynamics.

    Raises:
        DimensionError: If the pair and the system disagree on ``n``.
    """
    rho_r, rho_s = _pair_arrays(sys, pair)
    return _pair_derivative(sys.u.matrix, rho_r, rho_s, rate)


def _pair_liouvillian(u: np.ndarray, rate: float) -> np.ndarray:
    n = u.shape[0]
    size = n * n
    sup = np.empty((2 * size, 2 * size), dtype=complex)
    basis = np.zeros(2 * size, dtype=complex)
    for col in range(2 * size):
        basis[col] = 1.0
        d_r, d_s = _pair_derivative(
            u, basis[:size].reshape(n, n), basis[size:].reshape(n, n), rate
        )
        sup[:, col] = np.concatenate([d_r.ravel(), d_s.ravel()])
        basis[col] = 0.0
    return sup


def evolve_reduced(
    sys: CompositeSystem,
    pair0: ReducedPair,
    t_final: float,
    dt: float,
    rate: float = 1.0,
    record_every: int = 1,
) -> PairTrajectory:
    """Integrate the reduced pair with RK4, recording entropies and energies.

    Raises:
        StepRejected: If either part loses positivity beyond tolerance.
    """
    rho_r, rho_s = _pair_arrays(sys, pair0)
    n = sys.n
    size = n * n

    def project(x: np.ndarray) -> np.ndarray:
        stack = hermitize_stack(x.reshape(2, n, n))
        return stack.ravel()

    logger.debug(f"evolve_reduced: n={n} t_final={t_final} dt={dt} rate={rate}")
    times, xs = integrate_linear(
        _pair_liouvillian(sys.u.matrix, rate),
        np.concatenate([rho_r.ravel(), rho_s.ravel()]),
        t_final,
        dt,
        project,
    )
    r_states = xs[:, :size].reshape(-1, n, n)
    s_states = xs[:, size:].reshape(-1, n, n)
    guard_positivity(r_states, what="rho_R")
    guard_positivity(s_states, what="rho_S")

    keep = record_indices(len(times), record_every)
    traj = PairTrajectory.from_states(
        times[keep], r_states[keep], s_states[keep], sys.h_r.matrix, sys.h_s.matrix
    )
    validate_density_matrix(traj.rho_r[-1])
    validate_density_matrix(traj.rho_s[-1])
    return traj


def asymptotic_states(sys: CompositeSystem, pair0: ReducedPair) -> ReducedPair:
    """Long-time limit of the reduced pair."""
    rho_r, rho_s = _pair_arrays(sys, pair0)
    u = sys.u.matrix
    r_inf = (rho_r + u.conj().T @ rho_s @ u) / 2
    s_inf = (rho_s + u @ rho_r @ u.conj().T) / 2
    return ReducedPair(
        rho_r=DensityMatrix(matrix=(r_inf + r_inf.conj().T) / 2),
        rho_s=DensityMatrix(matrix=(s_inf + s_inf.conj().T) / 2),
    )


# ---------------------------------------------------------------------------
# Full composite space
# ---------------------------------------------------------------------------

def interaction_frame(
    sys: CompositeSystem,
    rho_c: MatrixLike,
    t: float,
    direction: FrameDirection,
) -> DensityMatrix:
    """Move a composite state into (``to_W``) or out of (``from_W``) the interaction frame.

    ``rho_C = exp(-i H_C t) W_C exp(i H_C t)``; the exponentials come from the
    eigendecomposition of ``H_C``.

    Raises:
        DimensionError: If ``rho_c`` is not ``n²``-dimensional.
        ValueError: On an unknown direction tag.
    """
    m = as_array(rho_c)
    if m.shape != (sys.n**2, sys.n**2):
        raise DimensionError(f"Composite state must be {sys.n**2}-dim, got {m.shape}")
    if direction == "to_W":
        out = spectral_conjugate(sys.h_c, m, t)
    elif direction == "from_W":
        out = spectral_conjugate(sys.h_c, m, -t)
    else:
        raise ValueError(f"Unknown frame direction: {direction}")
    return DensityMatrix(matrix=(out + out.conj().T) / 2)


def full_space_generator(sys: CompositeSystem, rate: float = 1.0) -> MeasurementGenerator:
    """Composite master equation as a measurement of ``O_C``."""
    return MeasurementGenerator(observable=measured_observable(sys), rate=rate)


def product_state(pair: ReducedPair) -> DensityMatrix:
    """Uncorrelated composite state ``rho_R ⊗ rho_S``."""
    return DensityMatrix(matrix=tensor_product(pair.rho_r, pair.rho_s))


def reduce_state(w_c: MatrixLike, n: int) -> ReducedPair:
    """Both marginals of a composite state."""
    m = as_array(w_c)
    return ReducedPair(
        rho_r=DensityMatrix(matrix=partial_trace_matrix(m, "R", (n, n))),
        rho_s=DensityMatrix(matrix=partial_trace_matrix(m, "S", (n, n))),
    )


def with_marginals(
    traj: Trajectory,
    dims: Tuple[int, int],
    h_r: Optional[np.ndarray] = None,
    h_s: Optional[np.ndarray] = None,
) -> Trajectory:
    """Composite trajectory with ``S_R, S_S`` columns (and ``E_R, E_S, dI`` given both Hamiltonians)."""
    r_states = partial_trace_matrix(traj.states, "R", dims)
    s_states = partial_trace_matrix(traj.states, "S", dims)
    s_r = 1.0 - purity_batch(r_states)
    extras = {}
    if h_r is not None and h_s is not None:
        extras["E_R"] = np.real(np.einsum("kij,ji->k", r_states, h_r))
        extras["E_S"] = np.real(np.einsum("kij,ji->k", s_states, h_s))
    extras["S_R"] = s_r
    extras["S_S"] = 1.0 - purity_batch(s_states)
    extras["dI"] = s_r[0] - s_r
    return Trajectory.from_states(traj.times, traj.states, extras=extras)


def evolve_full(
    sys: CompositeSystem,
    w0: MatrixLike,
    t_final: float,
    dt: float,
    rate: float = 1.0,
    record_every: int = 1,
) -> Trajectory:
    """Integrate the composite master equation in the interaction frame."""
    traj = evolve(full_space_generator(sys, rate), w0, t_final, dt, record_every)
    return with_marginals(traj, sys.dims, sys.h_r.matrix, sys.h_s.matrix)


def traceless_shift(sys: CompositeSystem) -> Tuple[CompositeSystem, float]:
    """Shift both Hamiltonians by ``-tr(H_R)/N`` so that ``tr(H_R) = 0``.

    Returns:
        The shifted system and the shift ``tr(H_R)/N`` that was removed.
    """
    shift = float(np.real(np.trace(sys.h_r.matrix))) / sys.n
    if shift == 0.0:
        return sys, 0.0
    eye = np.eye(sys.n)
    logger.info(f"Energy reference moved by {-shift:.6g} to make tr(H_R) = 0")
    shifted = CompositeSystem(
        n=sys.n,
        h_r=HermitianObservable(matrix=sys.h_r.matrix - shift * eye),
        h_s=HermitianObservable(matrix=sys.h_s.matrix - shift * eye),
        u=sys.u,
    )
    return shifted, shift
