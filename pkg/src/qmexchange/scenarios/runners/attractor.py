"""
Recoherence attractor: decay into a unique pure stationary state.

With the lowering jump ``R = sum_k |k-1><k|`` every initial state, however
mixed, is driven to ``|0><0|``; the linear entropy first may rise and then
falls to zero.  Without a Hamiltonian (or with one that leaves ``|0>``
invariant) the final state is compared against the exact attractor.
"""
import numpy as np
from loguru import logger

from qmexchange.core.integrator import evolve
from qmexchange.core.lindblad import attractor_generator, ground_state
from qmexchange.core.matrix_ops import commutator, trace_distance
from qmexchange.scenarios.base import Scenario
from qmexchange.scenarios.types import ScenarioOutcome


class AttractorScenario(Scenario):
    name = "attractor"
    summary = "Lowering-jump Lindblad dynamics purifying any state into |0><0|"
    optional = ("rho0", "h")

    def run(self) -> ScenarioOutcome:
        cfg = self.config
        n = cfg.n
        rho0 = self.matrix_or("rho0", np.eye(n) / n)
        h = cfg.matrices.get("h")

        gen = attractor_generator(n, rate=cfg.gamma, hamiltonian=h)
        logger.info(f"Attractor: n={n}, gamma={cfg.gamma}, t_final={cfg.t_final}, dt={cfg.dt}")
        traj = evolve(gen, rho0, cfg.t_final, cfg.dt, cfg.record_every)

        target = ground_state(n)
        final = traj.states[-1]
        distance = trace_distance(final, target)
        quantities = {
            "S_lin_initial": float(traj.linear_entropy[0]),
            "S_lin_final": float(traj.linear_entropy[-1]),
            "S_lin_peak": float(np.max(traj.linear_entropy)),
            "purity_final": float(traj.purity[-1]),
            "trace_distance_to_ground": distance,
        }

        residuals = {}
        stationary = h is None or np.max(np.abs(commutator(h, target))) < 1e-12
        if stationary:
            residuals["stationary_state"] = distance
        else:
            logger.warning("Hamiltonian moves |0><0|; no closed-form stationary state")

        self.flag_residuals(residuals)
        return ScenarioOutcome(trajectory=traj, quantities=quantities, residuals=residuals)

