"""
Swap-measurement information exchange between two N-level parts.

Three scenarios share the reduced-pair integrator:

  - ``swap-exchange``: both initial states given; the run is compared with
    the asymptotic pair, the information gain and the sender cost.
  - ``optimal``: only the sender is given; the receiver starts in the state
    that maximises the information gain.
  - ``isoenergetic``: as ``optimal`` under the extra constraint that no
    energy flows between the parts.
"""
from typing import ClassVar, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from qmexchange.core.composite import (
    CompositeSystem,
    asymptotic_states,
    evolve_reduced,
    measured_observable,
)
from qmexchange.core.info_exchange import (
    Regime,
    energy_flow,
    exchange_report,
    info_gain,
    sender_entropy_change,
)
from qmexchange.data.schemas import ReducedPair
from qmexchange.data.trajectory import PairTrajectory
from qmexchange.scenarios.base import Scenario, eta_of
from qmexchange.scenarios.types import ScenarioOutcome


def _max_entry(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


class _SwapScenario(Scenario):
    """Builds the composite system and evaluates the common residuals."""

    def system(self) -> CompositeSystem:
        cfg = self.config
        h_s = cfg.matrices.get("h_s")
        if h_s is None:
            sys = CompositeSystem.from_hamiltonian(cfg.matrix("h_r"), cfg.matrix("u"))
        else:
            sys = CompositeSystem(
                n=cfg.n, h_r=cfg.matrices["h_r"], h_s=h_s, u=cfg.matrices["u"]
            )
        measured_observable(sys)
        return sys

    def integrate(
        self, sys: CompositeSystem, pair0: ReducedPair
    ) -> Tuple[PairTrajectory, Dict[str, Optional[float]], Dict[str, float]]:
        """Run the pair and compare it with every closed form of the swap model."""
        cfg = self.config
        pair_traj = evolve_reduced(
            sys, pair0, cfg.t_final, cfg.dt, rate=cfg.gamma, record_every=cfg.record_every
        )

        d_i_num = float(pair_traj.entropy_r[0] - pair_traj.entropy_r[-1])
        d_s_num = float(pair_traj.entropy_s[-1] - pair_traj.entropy_s[0])
        d_i = info_gain(sys, pair0)
        d_s = sender_entropy_change(sys, pair0)

        limit = asymptotic_states(sys, pair0)
        e_r_t, e_s_t = energy_flow(
            pair_traj.energy_r[0], pair_traj.energy_s[0], cfg.t_final, rate=cfg.gamma
        )
        total_energy = pair_traj.energy_r + pair_traj.energy_s

        quantities: Dict[str, Optional[float]] = {
            "delta_i": d_i,
            "delta_s": d_s,
            "eta": eta_of(d_i, d_s),
            "delta_i_numeric": d_i_num,
            "delta_s_numeric": d_s_num,
            "E_R_initial": float(pair_traj.energy_r[0]),
            "E_S_initial": float(pair_traj.energy_s[0]),
            "E_R_final": float(pair_traj.energy_r[-1]),
            "E_S_final": float(pair_traj.energy_s[-1]),
            "purity_r_final": float(1.0 - pair_traj.entropy_r[-1]),
            "purity_s_final": float(1.0 - pair_traj.entropy_s[-1]),
        }
        residuals = {
            "delta_i": abs(d_i - d_i_num),
            "delta_s": abs(d_s - d_s_num),
            "rho_r_asymptotic": _max_entry(pair_traj.rho_r[-1], limit.rho_r.matrix),
            "rho_s_asymptotic": _max_entry(pair_traj.rho_s[-1], limit.rho_s.matrix),
            "energy_flow": max(
                abs(e_r_t - pair_traj.energy_r[-1]), abs(e_s_t - pair_traj.energy_s[-1])
            ),
            "energy_drift": float(np.max(np.abs(total_energy - total_energy[0]))),
        }
        return pair_traj, quantities, residuals


class SwapExchangeScenario(_SwapScenario):
    name = "swap-exchange"
    summary = "Reduced swap dynamics from given receiver and sender states"
    required = ("h_r", "u", "rho_r0", "rho_s0")
    optional = ("h_s",)

    def run(self) -> ScenarioOutcome:
        sys = self.system()
        pair0 = ReducedPair(
            rho_r=self.config.matrices["rho_r0"], rho_s=self.config.matrices["rho_s0"]
        )
        logger.info(f"Swap exchange: n={sys.n}, t_final={self.config.t_final}")
        pair_traj, quantities, residuals = self.integrate(sys, pair0)

        self.flag_residuals(residuals)
        return ScenarioOutcome(
            trajectory=pair_traj.to_trajectory(),
            quantities=quantities,
            residuals=residuals,
        )


class _OptimalScenario(_SwapScenario):
    regime: ClassVar[Regime] = "unconstrained"
    required = ("h_r", "u", "rho_s0")
    optional = ("h_s",)

    def run(self) -> ScenarioOutcome:
        sys = self.system()
        rho_s0 = self.config.matrices["rho_s0"]
        report = exchange_report(sys, rho_s0, self.regime)
        pair0 = ReducedPair(rho_r=report.optimal_rho_r0, rho_s=rho_s0)
        logger.info(f"Optimal exchange [{self.regime}]: n={sys.n}, t_final={self.config.t_final}")
        pair_traj, quantities, residuals = self.integrate(sys, pair0)

        quantities.update(
            {
                "delta_i": report.delta_i,
                "delta_s": report.delta_s,
                "eta": report.eta,
                "delta_i_vn": report.delta_i_vn,
                "delta_s_vn": report.delta_s_vn,
            }
        )
        if self.regime == "isoenergetic":
            residuals["energy_exchange"] = abs(
                float(pair_traj.energy_r[-1] - pair_traj.energy_r[0])
            )

        self.flag_residuals(residuals)
        return ScenarioOutcome(
            trajectory=pair_traj.to_trajectory(),
            quantities=quantities,
            residuals=residuals,
            details={"exchange": report.to_document()},
        )


class OptimalScenario(_OptimalScenario):
    name = "optimal"
    summary = "Receiver prepared in the information-maximising state"
    regime = "unconstrained"


class IsoenergeticScenario(_OptimalScenario):
    name = "isoenergetic"
    summary = "Optimal exchange with no energy flow between the parts"
    regime = "isoenergetic"
