"""
Scenario configuration loader.

Reads a JSON scenario file, applies command-line overrides and returns a
validated ``ScenarioConfig``.  Everything is checked eagerly, matrices
included, so a bad file fails before any integration starts.

Expected structure::

    {
      "scenario": "optimal",
      "n": 2,
      "t_final": 20,
      "dt": 0.001,
      "matrices": {
        "h_r":    [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
        "u":      [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
        "rho_s0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
      },
      "outputs": {"trajectory": "trajectory.csv", "report": "report.json"}
    }
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from loguru import logger
from pydantic import ValidationError

from qmexchange.errors import ConfigParseError, ConfigValidationError
from qmexchange.scenarios.factory import ScenarioFactory
from qmexchange.scenarios.types import ScenarioConfig


def _read_document(path: Path) -> Dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.critical(f"Scenario file not readable: {path}")
        raise ConfigParseError(f"cannot read {path}: {e}") from e

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        logger.critical(f"Invalid JSON in scenario file {path.name}: {e}")
        raise ConfigParseError(e.msg, line=e.lineno) from e

    if not isinstance(doc, dict):
        raise ConfigParseError("top level must be an object of key/value pairs", line=1)
    return doc


def _as_validation_error(err: ValidationError) -> ConfigValidationError:
    first = err.errors()[0]
    field = ".".join(str(p) for p in first["loc"]) or None
    return ConfigValidationError(first["msg"], field=field, codes=[first["type"]])


def parse_config(
    path: Union[str, Path],
    overrides: Optional[Dict[str, Any]] = None,
) -> ScenarioConfig:
    """Load and validate a scenario file.

    Args:
        path: JSON scenario file.
        overrides: Top-level keys replacing file values (``None`` entries
            are ignored), e.g. ``{"t_final": 5.0, "out_dir": "runs/a"}``.

    Returns:
        The validated config; its scenario has accepted the matrices.

    Raises:
        ConfigParseError: Unreadable file, invalid JSON (with line) or a
            malformed matrix literal (with field).
        ConfigValidationError: Any field or matrix invariant violated,
            naming the field and the failing invariant codes.
    """
    path = Path(path)
    doc = _read_document(path)
    doc.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        config = ScenarioConfig.model_validate(doc)
    except ValidationError as e:
        err = _as_validation_error(e)
        logger.error(f"Scenario file {path.name} rejected: {err}")
        raise err from e
    except ConfigValidationError as e:
        logger.error(f"Scenario file {path.name} rejected: {e}")
        raise

    ScenarioFactory.get_scenario(config)
    logger.info(
        f"Loaded scenario '{config.scenario}' from {path.name} "
        f"({len(config.matrices)} matrices)"
    )
    return config
