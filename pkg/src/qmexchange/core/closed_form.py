"""
Analytic solutions of the measurement master equation.

For ``d rho/dt = -(gamma/2)[O, [O, rho]]`` the general solution is a
Gaussian average of unitary rotations,

    rho(t) = (2 pi gamma t)^(-1/2) ∫ ds exp(-s²/(2 gamma t)) e^{-iOs} rho(0) e^{iOs},

and the integral is done exactly element by element in the eigenbasis of
``O``: element ``(k, l)`` picks up ``exp(-gamma (lambda_k - lambda_l)² t / 2)``.
Only eigenvalue differences enter, so degenerate spectra need no special
handling.

Two composite observables are treated explicitly:

  - additive ``A ⊗ 1 + 1 ⊗ B``: each part decoheres on its own in the
    eigenbasis of its own operator, whatever the initial correlations;
  - multiplicative ``A ⊗ B``: elements in the joint eigenbasis decay with
    ``(A_i B_alpha - A_j B_beta)²`` and the subsystem entropy rate has a
    manifestly non-negative form for uncorrelated initial states.

All kernels take a ``rate`` (gamma, default 1).  With ``rate=2`` the decay
factor reads ``exp(-(A_i B_alpha - A_j B_beta)² t)``.
"""
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from qmexchange.core.matrix_ops import MatrixLike, as_array, tensor_product
from qmexchange.data.schemas import DensityMatrix, HermitianObservable
from qmexchange.errors import DimensionError

Part = Literal["R", "S"]


def _check_time(t: float) -> None:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")


def _dephase(
    energies: np.ndarray,
    vecs: np.ndarray,
    rho: np.ndarray,
    t: float,
    rate: float,
) -> np.ndarray:
    """Damp ``rho`` in the eigenbasis ``vecs`` by ``exp(-rate (e_k - e_l)² t / 2)``."""
    gap2 = (energies[:, np.newaxis] - energies[np.newaxis, :]) ** 2
    in_basis = vecs.conj().T @ rho @ vecs
    out = vecs @ (in_basis * np.exp(-0.5 * rate * gap2 * t)) @ vecs.conj().T
    return (out + out.conj().T) / 2


class AdditiveObservable(BaseModel):
    """``O_C = A_R ⊗ 1_S + 1_R ⊗ B_S``; the parts may differ in dimension."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a_r: HermitianObservable
    b_s: HermitianObservable

    @property
    def dims(self) -> Tuple[int, int]:
        return self.a_r.dim, self.b_s.dim

    @property
    def o_c(self) -> HermitianObservable:
        d_r, d_s = self.dims
        return HermitianObservable(
            matrix=tensor_product(self.a_r, np.eye(d_s)) + tensor_product(np.eye(d_r), self.b_s)
        )


class MultiplicativeObservable(BaseModel):
    """``O_C = A_R ⊗ B_S``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a_r: HermitianObservable
    b_s: HermitianObservable

    @property
    def dims(self) -> Tuple[int, int]:
        return self.a_r.dim, self.b_s.dim

    @property
    def o_c(self) -> HermitianObservable:
        return HermitianObservable(matrix=tensor_product(self.a_r, self.b_s))

    def joint_eigenbasis(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Eigenvalues ``A_i``, ``B_alpha`` and the product basis ``V_A ⊗ V_B``."""
        a_vals, a_vecs = np.linalg.eigh(self.a_r.matrix)
        b_vals, b_vecs = np.linalg.eigh(self.b_s.matrix)
        return a_vals, b_vals, np.kron(a_vecs, b_vecs)


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------

def gaussian_solution(
    o_c: HermitianObservable,
    rho0: MatrixLike,
    t: float,
    rate: float = 1.0,
) -> DensityMatrix:
    """State at time *t* under continuous measurement of ``o_c``.

    ``t = 0`` returns ``rho0`` (the kernel's continuous limit).

    Raises:
        DimensionError: If ``rho0`` and ``o_c`` differ in dimension.
        ValueError: If ``t < 0``.
    """
    _check_time(t)
    rho = as_array(rho0)
    if rho.shape != o_c.matrix.shape:
        raise DimensionError(f"State {rho.shape} does not match observable {o_c.matrix.shape}")
    if t == 0:
        return DensityMatrix(matrix=rho)
    energies, vecs = np.linalg.eigh(o_c.matrix)
    return DensityMatrix(matrix=_dephase(energies, vecs, rho, t, rate))


def additive_reduced_state(
    obs: AdditiveObservable,
    rho0: MatrixLike,
    t: float,
    rate: float = 1.0,
    part: Part = "R",
) -> DensityMatrix:
    """Reduced state of one part under an additive measurement.

    Args:
        obs: The additive observable.
        rho0: Initial reduced state of *part* (``rho_R(0)`` or ``rho_S(0)``).
        t: Time (>= 0).
        rate: Measurement strength gamma.
        part: ``"R"`` dephases in the ``A_R`` basis, ``"S"`` in the ``B_S`` basis.
    """
    _check_time(t)
    op = obs.a_r if part == "R" else obs.b_s
    rho = as_array(rho0)
    if rho.shape != op.matrix.shape:
        raise DimensionError(f"{part}-state {rho.shape} does not match {op.matrix.shape}")
    if t == 0:
        return DensityMatrix(matrix=rho)
    energies, vecs = np.linalg.eigh(op.matrix)
    return DensityMatrix(matrix=_dephase(energies, vecs, rho, t, rate))


def _joint_elements(obs: MultiplicativeObservable, rho_c0: MatrixLike) -> Tuple[np.ndarray, ...]:
    rho = as_array(rho_c0)
    d_r, d_s = obs.dims
    if rho.shape != (d_r * d_s, d_r * d_s):
        raise DimensionError(f"Composite state must be {d_r * d_s}-dim, got {rho.shape}")
    a_vals, b_vals, basis = obs.joint_eigenbasis()
    return a_vals, b_vals, basis, basis.conj().T @ rho @ basis


def multiplicative_elements(
    obs: MultiplicativeObservable,
    rho_c0: MatrixLike,
    t: float,
    rate: float = 1.0,
) -> DensityMatrix:
    """Composite state at *t* under measurement of ``A ⊗ B``.

    Element ``((i, alpha), (j, beta))`` in the joint eigenbasis is multiplied
    by ``exp(-rate (A_i B_alpha - A_j B_beta)² t / 2)``; the result is
    returned in the original basis.
    """
    _check_time(t)
    a_vals, b_vals, basis, joint = _joint_elements(obs, rho_c0)
    if t == 0:
        return DensityMatrix(matrix=as_array(rho_c0))
    lam = np.kron(a_vals, b_vals)
    gap2 = (lam[:, np.newaxis] - lam[np.newaxis, :]) ** 2
    out = basis @ (joint * np.exp(-0.5 * rate * gap2 * t)) @ basis.conj().T
    return DensityMatrix(matrix=(out + out.conj().T) / 2)


def multiplicative_entropy_rate(
    obs: MultiplicativeObservable,
    rho_c0: MatrixLike,
    t: float,
    rate: float = 1.0,
    part: Part = "R",
) -> float:
    """``dS/dt`` of one part's linear entropy under ``A ⊗ B`` measurement.

    For ``part="R"`` this is the double sum

        rate Σ (A_i - A_j)² B_beta² exp(-rate/2 (B_alpha² + B_beta²)(A_i - A_j)² t)
             rho_{i alpha, j alpha} rho_{j beta, i beta}

    over the joint eigenbasis, and symmetrically for ``part="S"``.  It is
    valid for correlated initial states, where its sign is not fixed.
    """
    _check_time(t)
    a_vals, b_vals, _, joint = _joint_elements(obs, rho_c0)
    d_r, d_s = obs.dims
    rho4 = joint.reshape(d_r, d_s, d_r, d_s)

    if part == "R":
        blocks = np.einsum("iaja->ija", rho4)
        gap2 = (a_vals[:, np.newaxis] - a_vals[np.newaxis, :]) ** 2
        weight = b_vals**2
        damped = blocks * np.exp(-0.5 * rate * gap2[:, :, np.newaxis] * weight * t)
    elif part == "S":
        blocks = np.einsum("iaib->abi", rho4)
        gap2 = (b_vals[:, np.newaxis] - b_vals[np.newaxis, :]) ** 2
        weight = a_vals**2
        damped = blocks * np.exp(-0.5 * rate * gap2[:, :, np.newaxis] * weight * t)
    else:
        raise ValueError(f"Unknown subsystem tag: {part}")

    total = np.sum(gap2 * damped.sum(axis=-1) * np.conj((damped * weight).sum(axis=-1)))
    return float(rate * np.real(total))


def multiplicative_entropy_rate_product(
    obs: MultiplicativeObservable,
    rho_r0: MatrixLike,
    rho_s0: MatrixLike,
    t: float,
    rate: float = 1.0,
    part: Part = "R",
) -> float:
    """Entropy rate for an uncorrelated start ``rho_R(0) ⊗ rho_S(0)``.

    Each term is ``|rho_ij|²`` of the measured part times the populations of
    the other part in its eigenbasis, so the result is never negative.
    """
    _check_time(t)
    a_vals, a_vecs = np.linalg.eigh(obs.a_r.matrix)
    b_vals, b_vecs = np.linalg.eigh(obs.b_s.matrix)
    r = a_vecs.conj().T @ as_array(rho_r0) @ a_vecs
    s = b_vecs.conj().T @ as_array(rho_s0) @ b_vecs

    if part == "R":
        own, other, own_vals, other_vals = r, s, a_vals, b_vals
    elif part == "S":
        own, other, own_vals, other_vals = s, r, b_vals, a_vals
    else:
        raise ValueError(f"Unknown subsystem tag: {part}")

    gap2 = (own_vals[:, np.newaxis] - own_vals[np.newaxis, :]) ** 2
    pops = np.real(np.diag(other))
    w2 = other_vals**2
    # sum over (alpha, beta) of p_alpha p_beta w_beta exp(-rate/2 (w_alpha + w_beta) gap2 t)
    decay = np.exp(-0.5 * rate * gap2[:, :, np.newaxis] * w2 * t)
    pair_sum = (decay * pops).sum(axis=-1) * (decay * pops * w2).sum(axis=-1)
    return float(rate * np.sum(gap2 * np.abs(own) ** 2 * pair_sum))
