"""Logging configuration for the array design toolkit."""
import logging
import sys
import coloredlogs
from datetime import datetime
from pathlib import Path
from typing import Optional

from .config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, log_level: Optional[str] = None) -> logging.Logger:
    """
    Setup and configure logger with colored output and file logging.

    Console output goes to stderr so CLI stdout stays machine-readable.

    Args:
        name: Logger name
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL);
            defaults to Config.LOG_LEVEL

    Returns:
        Configured logger instance
    """
    log_level = (log_level or Config.LOG_LEVEL).upper()
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, log_level))

    if getattr(logger, '_arraydesign_configured', False):
        return logger

    if Config.LOG_TO_FILE:
        log_dir = Path(Config.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)

        log_file = log_dir / f"arraydesign_{datetime.now().strftime('%Y%m%d')}.log"
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    # Colored console output
    coloredlogs.install(
        level=log_level,
        logger=logger,
        stream=sys.stderr,
        fmt=LOG_FORMAT,
        level_styles={
            'debug': {'color': 'cyan'},
            'info': {'color': 'green'},
            'warning': {'color': 'yellow'},
            'error': {'color': 'red'},
            'critical': {'color': 'red', 'bold': True},
        }
    )

    logger._arraydesign_configured = True
    return logger
