"""Logging configuration for DiffInvariants."""

import logging
import logging.handlers
from datetime import datetime
from pathlib import Path

from config.config_loader import get_console_log_level, get_log_directory


def setup_logger(name: str = "diff_invariants") -> logging.Logger:
    """Configure and return a logger that writes to both file and console.

    Args:
        name: Logger name, used as the logger's identifier

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    # Prevent duplicate handlers if logger already exists
    if logger.handlers:
        return logger

    log_dir = Path(get_log_directory())
    log_dir.mkdir(exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d")
    log_file = log_dir / f"diff_invariants_{timestamp}.log"

    # File handler - one file per day, keep 30 days of logs
    file_handler = logging.handlers.TimedRotatingFileHandler(
        log_file,
        when='midnight',
        interval=1,
        backupCount=30,
        encoding='utf-8'
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(
        '%(asctime)s [%(levelname)s] %(name)s: %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    ))

    # Console handler - stderr, so command output on stdout stays clean
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, get_console_log_level().upper(), logging.WARNING))
    console_handler.setFormatter(logging.Formatter('[%(levelname)s] %(message)s'))

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)
    logger.propagate = False

    return logger


def get_logger(name: str = "diff_invariants") -> logging.Logger:
    """Get or create a logger with the specified name.

    Args:
        name: Logger name, e.g. "diff_invariants.evaluation"

    Returns:
        Configured logger instance
    """
    return setup_logger(name)
