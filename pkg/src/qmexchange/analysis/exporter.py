"""
Output writers for scenario runs.

  - trajectory CSV: header ``t, purity, S_lin, S_vn`` then scenario
    columns; 12 significant digits, '.' decimal separator, '\\n' line
    endings;
  - run report JSON: indented, key order fixed by the models, no
    timestamps or paths;
  - a one-screen summary table for stdout.

Writers overwrite existing files, and any I/O failure surfaces as
``OutputError``.
"""
import json
from pathlib import Path
from typing import Union

import pandas as pd
from loguru import logger

from qmexchange.data.trajectory import Trajectory
from qmexchange.errors import OutputError
from qmexchange.scenarios.types import RunReport

CSV_FLOAT_FORMAT = "%.12g"


def _prepare(path: Union[str, Path]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create {target.parent}: {e}") from e
    return target


def emit_plot_data(traj: Trajectory, path: Union[str, Path]) -> Path:
    """Write *traj* as CSV; an empty trajectory yields a header-only file.

    Raises:
        OutputError: If the file cannot be written.
    """
    target = _prepare(path)
    frame = traj.to_frame()
    try:
        frame.to_csv(
            target,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator="\n",
            encoding="utf-8",
        )
    except OSError as e:
        logger.error(f"Failed to write trajectory to {target}: {e}")
        raise OutputError(f"cannot write {target}: {e}") from e
    logger.success(f"Saved {target.name} ({len(frame)} rows)")
    return target


def read_plot_data(path: Union[str, Path]) -> pd.DataFrame:
    """Load a trajectory CSV back into a DataFrame."""
    return pd.read_csv(path, float_precision="round_trip")


def write_report(report: RunReport, path: Union[str, Path]) -> Path:
    """Serialise *report* as indented JSON.

    Raises:
        OutputError: If the file cannot be written.
    """
    target = _prepare(path)
    text = json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
    try:
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Failed to write report to {target}: {e}")
        raise OutputError(f"cannot write {target}: {e}") from e
    logger.success(f"Saved {target.name}")
    return target


def format_summary(report: RunReport) -> str:
    """Two-block text table: derived quantities, then residuals."""
    quantities = pd.DataFrame(
        {"value": [("n/a" if v is None else f"{v:.10g}") for v in report.quantities.values()]},
        index=list(report.quantities.keys()),
    )
    residuals = pd.DataFrame(
        {"|analytic - numeric|": [f"{v:.3e}" for v in report.residuals.values()]},
        index=list(report.residuals.keys()),
    )
    lines = [f"scenario: {report.scenario}", "", quantities.to_string()]
    if len(residuals):
        lines += ["", residuals.to_string()]
    return "\n".join(lines)
