# Utils module for GeoSpec
"""
Utility functions and helpers.
"""

from .logger import get_logger, setup_logger
from .summation import compensated_logsumexp, fsum_complex, fsum_real
from .validators import validate_beta, validate_cutoff, validate_grid, validate_periods, validate_threads

__all__ = [
    'setup_logger', 'get_logger',
    'compensated_logsumexp', 'fsum_real', 'fsum_complex',
    'validate_periods', 'validate_cutoff', 'validate_beta', 'validate_threads', 'validate_grid',
]
