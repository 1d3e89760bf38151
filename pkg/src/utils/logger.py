# Logging utilities for GeoSpec
import logging
import os
from typing import Optional

from src.config.settings import get_settings


def setup_logger(
    name: str = "geospec",
    log_file: Optional[str] = None,
    log_level: Optional[str] = None,
    capture_warnings: bool = False,
) -> logging.Logger:
    """
    Set up logger with file and console handlers.

    Console output goes to stderr; stdout carries command output only.

    Args:
        name: Logger name
        log_file: Log file path (optional, falls back to settings)
        log_level: Logging level (optional, falls back to settings)
        capture_warnings: Route Python warnings (uncertified supports,
            quadrature warnings) through the same handlers

    Returns:
        Configured logger instance
    """
    settings = get_settings()
    log_level = (log_level or settings.log_level).upper()
    log_file = log_file or settings.log_file

    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, log_level))

    # Clear existing handlers
    logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, log_level))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(getattr(logging, log_level))
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if capture_warnings:
        logging.captureWarnings(True)
        py_warnings = logging.getLogger("py.warnings")
        py_warnings.handlers = list(logger.handlers)
        py_warnings.propagate = False

    return logger


def get_logger(name: str = "geospec") -> logging.Logger:
    """Get existing logger or create new one."""
    return logging.getLogger(name)
