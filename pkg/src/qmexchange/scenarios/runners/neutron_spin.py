"""
Spin exchange between two spin-1/2 beams.

The swap of two spins-1/2 is measured continuously; beam 1 is the
receiver R, beam 2 the sender S, and both sit in the same field so
``U = 1``.  The permutation is built directly on the four-dimensional
product basis and compared with two candidate spin-operator forms,

    T = (1 + 4 s1.s2)/2        (standard identity)
    T = (1 + s1.s2/4)/2        (coefficients as sometimes quoted)

together with a least-squares fit ``T = alpha 1 + beta s1.s2``.
"""
from typing import Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel

from qmexchange.core.composite import (
    CompositeSystem,
    evolve_full,
    evolve_reduced,
    measured_observable,
    product_state,
    swap_operator,
)
from qmexchange.core.info_exchange import info_gain, optimal_receiver_state
from qmexchange.data.schemas import DensityMatrix, ReducedPair
from qmexchange.errors import ConfigValidationError
from qmexchange.scenarios.base import Scenario
from qmexchange.scenarios.types import ScenarioOutcome

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# Candidates closer than this to the permutation count as matching.
TOL_MATCH = 1e-12


class SpinSwapIdentity(BaseModel):
    """How the two-spin permutation relates to ``s1.s2``."""

    standard_residual: float
    quoted_residual: float
    alpha: float
    beta: float
    fit_residual: float
    matches: Literal["standard", "quoted", "none"]


def spin_dot_product() -> np.ndarray:
    """``s1.s2 = sum_k s_k ⊗ s_k`` with ``s_k = sigma_k / 2``."""
    return sum(np.kron(p / 2, p / 2) for p in PAULI)


def spin_swap_identity() -> SpinSwapIdentity:
    """Compare the permutation with both candidate forms and fit the coefficients."""
    t = swap_operator(2).matrix
    dot = spin_dot_product()
    eye = np.eye(4)

    standard = float(np.max(np.abs(t - (eye + 4 * dot) / 2)))
    quoted = float(np.max(np.abs(t - (eye + dot / 4) / 2)))

    design = np.column_stack([eye.ravel(), dot.ravel()])
    coef, *_ = np.linalg.lstsq(design, t.ravel().astype(complex), rcond=None)
    alpha, beta = float(np.real(coef[0])), float(np.real(coef[1]))
    fit = float(np.max(np.abs(t - (alpha * eye + beta * dot))))

    if standard < TOL_MATCH:
        matches = "standard"
    elif quoted < TOL_MATCH:
        matches = "quoted"
    else:
        matches = "none"
    logger.info(
        f"Spin swap: T = {alpha:.6g}*1 + {beta:.6g}*s1.s2 "
        f"(standard residual {standard:.2e}, quoted residual {quoted:.2e})"
    )
    return SpinSwapIdentity(
        standard_residual=standard,
        quoted_residual=quoted,
        alpha=alpha,
        beta=beta,
        fit_residual=fit,
        matches=matches,
    )


class NeutronSpinScenario(Scenario):
    name = "neutron-spin"
    summary = "Continuous measurement of the spin swap of two spin-1/2 beams"
    optional = ("rho_r0", "rho_s0", "h_r")

    def check_dimensions(self) -> None:
        if self.config.n != 2:
            raise ConfigValidationError(
                f"spin-1/2 beams need n = 2, got {self.config.n}",
                field="n",
                codes=["Dimension"],
            )
        super().check_dimensions()

    def run(self) -> ScenarioOutcome:
        cfg = self.config
        h_r = self.matrix_or("h_r", PAULI[2] / 2)
        sys = CompositeSystem.from_hamiltonian(h_r, np.eye(2))

        identity = spin_swap_identity()
        o_c = measured_observable(sys)

        spin_up = np.array([[1, 0], [0, 0]], dtype=complex)
        rho_s0 = self.matrix_or("rho_s0", spin_up)
        rho_r0 = self.matrix_or("rho_r0", optimal_receiver_state(sys, rho_s0).matrix)
        pair0 = ReducedPair(
            rho_r=DensityMatrix(matrix=rho_r0), rho_s=DensityMatrix(matrix=rho_s0)
        )

        logger.info(f"Neutron spin swap: t_final={cfg.t_final}, dt={cfg.dt}")
        traj = evolve_full(
            sys, product_state(pair0).matrix, cfg.t_final, cfg.dt, cfg.gamma, cfg.record_every
        )
        pair_traj = evolve_reduced(
            sys, pair0, cfg.t_final, cfg.dt, rate=cfg.gamma, record_every=cfg.record_every
        )

        s_r = traj.extras["S_R"]
        d_i = info_gain(sys, pair0)
        quantities = {
            "delta_i": d_i,
            "delta_i_numeric": float(s_r[0] - s_r[-1]),
            "S_R_initial": float(s_r[0]),
            "S_R_final": float(s_r[-1]),
            "S_S_final": float(traj.extras["S_S"][-1]),
            "swap_alpha": identity.alpha,
            "swap_beta": identity.beta,
        }
        residuals = {
            "swap_observable": float(np.max(np.abs(o_c.matrix - swap_operator(2).matrix))),
            "delta_i": abs(d_i - float(s_r[0] - s_r[-1])),
            "reduced_vs_full": float(np.max(np.abs(traj.extras["S_R"] - pair_traj.entropy_r))),
            "swap_fit": identity.fit_residual,
        }

        self.flag_residuals(residuals)
        return ScenarioOutcome(
            trajectory=traj,
            quantities=quantities,
            residuals=residuals,
            details={"spin_swap": identity.model_dump()},
        )
