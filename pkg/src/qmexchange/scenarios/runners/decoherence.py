"""
Decoherence of composite systems under additive and multiplicative observables.

Both scenarios integrate the full composite master equation from the
product of the configured reduced states and compare the run with the
analytic Gaussian solution.  The CSV base columns describe the composite
state; ``S_R`` and ``S_S`` follow the parts.
"""
import numpy as np
from loguru import logger

from qmexchange.core.closed_form import (
    AdditiveObservable,
    MultiplicativeObservable,
    additive_reduced_state,
    gaussian_solution,
    multiplicative_elements,
    multiplicative_entropy_rate,
    multiplicative_entropy_rate_product,
)
from qmexchange.core.composite import with_marginals
from qmexchange.core.integrator import evolve
from qmexchange.core.lindblad import MeasurementGenerator
from qmexchange.core.matrix_ops import partial_trace_matrix, tensor_product
from qmexchange.data.trajectory import Trajectory
from qmexchange.scenarios.base import Scenario
from qmexchange.scenarios.types import ScenarioOutcome


def _max_entry(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


class _CompositeMeasurement(Scenario):
    required = ("a_r", "b_s", "rho_r0", "rho_s0")

    def check_dimensions(self) -> None:
        # The parts may differ in size; each state must match its operator.
        self.expect_dim("rho_r0", self.config.matrix("a_r").shape[0])
        self.expect_dim("rho_s0", self.config.matrix("b_s").shape[0])

    @property
    def dims(self):
        return self.config.matrix("a_r").shape[0], self.config.matrix("b_s").shape[0]

    def integrate(self, o_c) -> Trajectory:
        cfg = self.config
        w0 = tensor_product(cfg.matrix("rho_r0"), cfg.matrix("rho_s0"))
        gen = MeasurementGenerator(observable=o_c, rate=cfg.gamma)
        traj = evolve(gen, w0, cfg.t_final, cfg.dt, cfg.record_every)
        return with_marginals(traj, self.dims)

    @staticmethod
    def entropy_quantities(traj: Trajectory) -> dict:
        return {
            "S_R_initial": float(traj.extras["S_R"][0]),
            "S_R_final": float(traj.extras["S_R"][-1]),
            "S_S_initial": float(traj.extras["S_S"][0]),
            "S_S_final": float(traj.extras["S_S"][-1]),
            "S_C_final": float(traj.linear_entropy[-1]),
        }


class AdditiveScenario(_CompositeMeasurement):
    name = "additive"
    summary = "Measurement of A_R x 1 + 1 x B_S: independent decoherence of both parts"

    def run(self) -> ScenarioOutcome:
        cfg = self.config
        obs = AdditiveObservable(a_r=cfg.matrices["a_r"], b_s=cfg.matrices["b_s"])
        logger.info(f"Additive measurement: dims={obs.dims}, t_final={cfg.t_final}")
        traj = self.integrate(obs.o_c)

        final = traj.states[-1]
        w0 = traj.states[0]
        exact = gaussian_solution(obs.o_c, w0, cfg.t_final, rate=cfg.gamma)
        r_exact = additive_reduced_state(obs, cfg.matrix("rho_r0"), cfg.t_final, cfg.gamma, "R")
        s_exact = additive_reduced_state(obs, cfg.matrix("rho_s0"), cfg.t_final, cfg.gamma, "S")

        residuals = {
            "composite_state": _max_entry(final, exact.matrix),
            "rho_r": _max_entry(partial_trace_matrix(final, "R", self.dims), r_exact.matrix),
            "rho_s": _max_entry(partial_trace_matrix(final, "S", self.dims), s_exact.matrix),
        }
        self.flag_residuals(residuals)
        return ScenarioOutcome(
            trajectory=traj,
            quantities=self.entropy_quantities(traj),
            residuals=residuals,
        )


class MultiplicativeScenario(_CompositeMeasurement):
    name = "multiplicative"
    summary = "Measurement of A_R x B_S: coupled decoherence of both parts"

    def run(self) -> ScenarioOutcome:
        cfg = self.config
        obs = MultiplicativeObservable(a_r=cfg.matrices["a_r"], b_s=cfg.matrices["b_s"])
        logger.info(f"Multiplicative measurement: dims={obs.dims}, t_final={cfg.t_final}")
        traj = self.integrate(obs.o_c)

        w0 = traj.states[0]
        rho_r0, rho_s0 = cfg.matrix("rho_r0"), cfg.matrix("rho_s0")
        exact = multiplicative_elements(obs, w0, cfg.t_final, rate=cfg.gamma)

        quantities = self.entropy_quantities(traj)
        residuals = {"composite_state": _max_entry(traj.states[-1], exact.matrix)}
        for part in ("R", "S"):
            rate0 = multiplicative_entropy_rate(obs, w0, 0.0, cfg.gamma, part)
            product0 = multiplicative_entropy_rate_product(
                obs, rho_r0, rho_s0, 0.0, cfg.gamma, part
            )
            quantities[f"dS_{part}_dt_initial"] = rate0
            residuals[f"entropy_rate_{part}"] = abs(rate0 - product0)

        self.flag_residuals(residuals)
        return ScenarioOutcome(trajectory=traj, quantities=quantities, residuals=residuals)
