"""
Loguru configuration for the simulator.

Two sinks:
  - **stderr**: INFO and above, short timestamps, coloured.  stdout stays
    free for the run summary table.
  - **File**: DEBUG and above with source location, one file per day
    (``logs/qmexchange_YYYY-MM-DD.log``), rotated at 10 MB, zipped, kept
    for 30 days.

Call ``setup_logger()`` once before the first log call.
"""
import shutil
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from loguru import logger

LOG_PREFIX = "qmexchange"


def setup_logger(log_dir: str = "logs", level: str = "INFO") -> "logger":
    """Configure and return the global Loguru logger.

    Args:
        log_dir: Directory for the daily log files; created if missing.
        level: Threshold of the terminal sink.

    Returns:
        The shared ``logger`` instance.
    """
    logger.remove()

    log_path = Path(log_dir)
    log_path.mkdir(parents=True, exist_ok=True)
    log_file = log_path / f"{LOG_PREFIX}_{{time:YYYY-MM-DD}}.log"

    logger.add(
        sys.stderr,
        level=level,
        format=(
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<level>{message}</level>"
        ),
        colorize=True,
    )

    # Post-mortem sink: full timestamps and call sites.
    logger.add(
        log_file,
        level="DEBUG",
        rotation="10 MB",
        retention="30 days",
        compression="zip",
        format=(
            "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | "
            "{name}:{function}:{line} - {message}"
        ),
        enqueue=True,
        encoding="utf-8",
    )

    return logger


def archive_current_log(
    target_dir: Union[str, Path],
    log_dir: str = "logs",
    name: str = "execution.log",
) -> Optional[Path]:
    """Copy today's log file into *target_dir*; failures only warn.

    Returns:
        Destination path, or ``None`` when nothing was archived.
    """
    src_log = Path(log_dir) / f"{LOG_PREFIX}_{datetime.now():%Y-%m-%d}.log"
    if not src_log.exists():
        logger.warning("Log file not found for archiving.")
        return None

    try:
        logger.complete()
        dst_log = Path(target_dir) / name
        shutil.copy2(src_log, dst_log)
        logger.info(f"Archived execution log to {dst_log}")
        return dst_log
    except OSError as e:
        logger.warning(f"Failed to archive log: {e}")
        return None
