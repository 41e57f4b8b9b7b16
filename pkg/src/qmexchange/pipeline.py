"""
Single-scenario run: validate, integrate, compare, export.

``run_scenario`` is deterministic for a given config: there is no runtime
randomness and the exported files carry no timestamps, so two runs of the
same config produce byte-identical CSV and JSON.
"""
from pathlib import Path
from typing import Optional, Union

from loguru import logger

from qmexchange.analysis.exporter import emit_plot_data, write_report
from qmexchange.scenarios.factory import ScenarioFactory
from qmexchange.scenarios.types import RunReport, ScenarioConfig


def run_scenario(
    config: ScenarioConfig,
    out_dir: Optional[Union[str, Path]] = None,
) -> RunReport:
    """Run the scenario described by *config* and write its outputs.

    Args:
        config: Validated scenario config.
        out_dir: Output directory; defaults to ``config.output_dir``.

    Returns:
        The run report (also written as JSON next to the trajectory CSV).

    Raises:
        QMExchangeError: Any domain error of the scenario, unchanged.
    """
    scenario = ScenarioFactory.get_scenario(config)
    target = Path(out_dir or config.output_dir)

    outcome = scenario.run()
    report = RunReport(
        scenario=config.scenario,
        config=config.echo(),
        quantities=outcome.quantities,
        residuals=outcome.residuals,
        details=outcome.details,
    )

    emit_plot_data(outcome.trajectory, target / config.outputs.trajectory)
    write_report(report, target / config.outputs.report)
    logger.success(f"Scenario '{config.scenario}' complete; results in {target}")
    return report
