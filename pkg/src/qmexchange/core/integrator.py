"""
Fixed-step fourth-order Runge-Kutta integration of linear master equations.

Every generator in this package is linear in the state, so one classical
RK4 step of size ``h`` is the same linear map for every state:

    M(h) = I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24

where ``L`` is the Liouvillian superoperator.  ``rk4_propagator`` obtains
``M`` by running the four RK4 stages on the identity, after which stepping
is a single matrix-vector product.  Results are bit-for-bit those of the
stage-by-stage scheme up to floating-point association.

After each step the state is re-Hermitized and its trace renormalised;
positivity is monitored, never enforced.  A smallest eigenvalue below
``TOL_STEP`` anywhere along the run means the step is too large and raises
``StepRejected``.
"""
from typing import Callable, Optional, Tuple

import numpy as np
from loguru import logger

from qmexchange.core.lindblad import MasterEquation
from qmexchange.core.matrix_ops import (
    MatrixLike,
    as_array,
    hermitian_eigvals_batch,
    validate_density_matrix,
)
from qmexchange.data.trajectory import Trajectory
from qmexchange.errors import DimensionError, StepRejected

# Most negative eigenvalue tolerated on any intermediate state.
TOL_STEP = 1e-6

Projection = Callable[[np.ndarray], np.ndarray]


def rk4_propagator(liouvillian: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of ``dx/dt = L x`` as a matrix.

    Args:
        liouvillian: Square superoperator ``L``.
        dt: Step size.

    Returns:
        ``M`` such that ``x(t + dt) ≈ M @ x(t)``.
    """
    eye = np.eye(liouvillian.shape[0], dtype=complex)
    k1 = dt * liouvillian @ eye
    k2 = dt * liouvillian @ (eye + k1 / 2)
    k3 = dt * liouvillian @ (eye + k2 / 2)
    k4 = dt * liouvillian @ (eye + k3)
    return eye + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def step_grid(t_final: float, dt: float) -> Tuple[int, float]:
    """Number of steps and the actual step size covering ``[0, t_final]``.

    Raises:
        ValueError: Unless ``t_final > 0`` and ``0 < dt <= t_final``.
    """
    if not t_final > 0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    if not 0 < dt <= t_final:
        raise ValueError(f"dt must lie in (0, t_final], got dt={dt}, t_final={t_final}")

    n_steps = max(1, int(round(t_final / dt)))
    h = t_final / n_steps
    if abs(h - dt) > 1e-12 * dt:
        logger.warning(
            f"t_final/dt = {t_final / dt:.6f} is not an integer; using dt = {h:.6e}"
        )
    return n_steps, h


def integrate_linear(
    liouvillian: np.ndarray,
    x0: np.ndarray,
    t_final: float,
    dt: float,
    project: Optional[Projection] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Step a linear ODE with RK4, keeping every intermediate state.

    Args:
        liouvillian: Generator ``L`` of ``dx/dt = L x``.
        x0: Initial vector.
        t_final: Horizon (> 0).
        dt: Requested step (``0 < dt <= t_final``).
        project: Optional map applied to the state after every step.

    Returns:
        ``(times, xs)`` with ``xs[k]`` the state at ``times[k]``; both
        include the initial point.
    """
    n_steps, h = step_grid(t_final, dt)
    prop = rk4_propagator(liouvillian, h)

    xs = np.empty((n_steps + 1, x0.size), dtype=complex)
    xs[0] = x0
    x = x0.astype(complex)
    for k in range(1, n_steps + 1):
        x = prop @ x
        if project is not None:
            x = project(x)
        xs[k] = x

    times = h * np.arange(n_steps + 1)
    times[-1] = t_final
    return times, xs


def record_indices(n_samples: int, record_every: int) -> np.ndarray:
    """Sample indices kept at stride *record_every*; the last one always is."""
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    idx = np.arange(0, n_samples, record_every)
    if idx[-1] != n_samples - 1:
        idx = np.append(idx, n_samples - 1)
    return idx


def hermitize_stack(states: np.ndarray) -> np.ndarray:
    """Apply ``(rho + rho†)/2`` and trace renormalisation to a ``(..., d, d)`` stack."""
    herm = (states + np.conj(np.swapaxes(states, -1, -2))) / 2
    tr = np.real(np.trace(herm, axis1=-2, axis2=-1))
    return herm / tr[..., np.newaxis, np.newaxis]


def guard_positivity(states: np.ndarray, what: str = "state") -> np.ndarray:
    """Smallest eigenvalue per sample; raises once it drops below ``-TOL_STEP``.

    Raises:
        StepRejected: With the time index of the first offending sample.
    """
    lowest = hermitian_eigvals_batch(states)[:, 0]
    bad = np.flatnonzero(lowest < -TOL_STEP)
    if bad.size:
        k = int(bad[0])
        logger.error(
            f"RK4 step rejected: {what} eigenvalue {lowest[k]:.3e} at step {k}"
        )
        raise StepRejected(
            f"{what} lost positivity at step {k} (eigenvalue {lowest[k]:.3e}); "
            f"reduce dt"
        )
    return lowest


def evolve(
    generator: MasterEquation,
    rho0: MatrixLike,
    t_final: float,
    dt: float,
    record_every: int = 1,
) -> Trajectory:
    """Integrate ``d rho/dt = generator.rhs(rho)`` from ``rho0``.

    Args:
        generator: Any ``MasterEquation`` (Lindblad or measurement form).
        rho0: Initial density matrix.
        t_final: Horizon in units of ``1/gamma``.
        dt: Fixed RK4 step.
        record_every: Keep every k-th snapshot (the final one is always kept).

    Returns:
        ``Trajectory`` starting at ``t = 0``.

    Raises:
        DimensionError: If generator and state dimensions differ.
        StepRejected: If any intermediate state has an eigenvalue below
            ``-TOL_STEP``.
    """
    rho = validate_density_matrix(as_array(rho0))
    d = generator.dim
    if rho.dim != d:
        raise DimensionError(f"Generator acts on dim {d}, rho0 has dim {rho.dim}")

    logger.debug(
        f"evolve: {type(generator).__name__} dim={d} t_final={t_final} dt={dt}"
    )

    def project(x: np.ndarray) -> np.ndarray:
        return hermitize_stack(x.reshape(d, d)).ravel()

    times, xs = integrate_linear(
        generator.liouvillian(), rho.matrix.ravel(), t_final, dt, project
    )
    states = xs.reshape(-1, d, d)
    guard_positivity(states)

    keep = record_indices(len(times), record_every)
    traj = Trajectory.from_states(times[keep], states[keep])
    validate_density_matrix(traj.states[-1])
    return traj
