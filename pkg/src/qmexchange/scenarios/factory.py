"""
Registry of named scenarios.

Maps the ``scenario`` field of a config to the ``Scenario`` subclass that
runs it.  The registry is closed: unknown names are configuration errors.
"""
from typing import Dict, List, Type

from loguru import logger

from qmexchange.errors import ConfigValidationError
from qmexchange.scenarios.base import Scenario
from qmexchange.scenarios.runners.attractor import AttractorScenario
from qmexchange.scenarios.runners.decoherence import AdditiveScenario, MultiplicativeScenario
from qmexchange.scenarios.runners.exchange import (
    IsoenergeticScenario,
    OptimalScenario,
    SwapExchangeScenario,
)
from qmexchange.scenarios.runners.neutron_spin import NeutronSpinScenario
from qmexchange.scenarios.types import ScenarioConfig

SCENARIOS: Dict[str, Type[Scenario]] = {
    cls.name: cls
    for cls in (
        AttractorScenario,
        SwapExchangeScenario,
        OptimalScenario,
        IsoenergeticScenario,
        AdditiveScenario,
        MultiplicativeScenario,
        NeutronSpinScenario,
    )
}


class ScenarioFactory:
    """Stateless factory resolving a config to a ready-to-run scenario."""

    @staticmethod
    def get_scenario(config: ScenarioConfig) -> Scenario:
        """Instantiate the scenario named by *config*.

        Raises:
            ConfigValidationError: If the name is unknown or the scenario's
                matrices are missing, unused or of the wrong size.
        """
        cls = SCENARIOS.get(config.scenario)
        if cls is None:
            raise ConfigValidationError(
                f"unknown scenario '{config.scenario}' (available: {list(SCENARIOS)})",
                field="scenario",
                codes=["UnknownScenario"],
            )
        logger.info(f"Initializing scenario: {config.scenario}")
        return cls(config)

    @staticmethod
    def list_scenarios() -> List[Type[Scenario]]:
        return list(SCENARIOS.values())
