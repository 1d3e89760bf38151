# Validation utilities for GeoSpec
import math
from decimal import Decimal, InvalidOperation
from typing import Any, List, Optional, Sequence

from src.utils.logger import get_logger

logger = get_logger(__name__)


def validate_periods(periods: Sequence[Any], rank: Optional[int] = None) -> bool:
    """
    Validate a period vector.

    Args:
        periods: Decimal strings or numbers, one per homology generator
        rank: Expected homology rank 2g, if known

    Returns:
        True if valid, False otherwise
    """
    if not isinstance(periods, (list, tuple)):
        logger.warning(f"Invalid periods type: {type(periods)}")
        return False

    if rank is not None and len(periods) != rank:
        logger.warning(f"Expected {rank} periods, got {len(periods)}")
        return False

    for value in periods:
        if isinstance(value, bool):
            logger.warning(f"Invalid period: {value!r}")
            return False
        try:
            parsed = Decimal(str(value))
        except InvalidOperation:
            logger.warning(f"Invalid period: {value!r}")
            return False
        if not parsed.is_finite():
            logger.warning(f"Non-finite period: {value!r}")
            return False

    return True


def validate_cutoff(cutoff: float, max_cutoff: float = 40.0) -> bool:
    """
    Validate an enumeration cutoff.

    Args:
        cutoff: Length cutoff L
        max_cutoff: Largest cutoff accepted without a budget check

    Returns:
        True if valid, False otherwise
    """
    if not isinstance(cutoff, (int, float)) or not math.isfinite(cutoff) or cutoff <= 0:
        logger.warning(f"Invalid cutoff: {cutoff}")
        return False

    if cutoff > max_cutoff:
        logger.warning(f"Cutoff {cutoff} exceeds {max_cutoff}; enumeration will likely hit the word budget")
        return False

    return True


def validate_beta(beta: float, upper: float = 1.0) -> bool:
    """True if 0 < beta < upper."""
    if not isinstance(beta, (int, float)) or not (0 < beta < upper):
        logger.warning(f"Invalid beta: {beta} (must lie in (0, {upper}))")
        return False

    return True


def validate_threads(threads: Any) -> bool:
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        logger.warning(f"Invalid thread count: {threads}")
        return False

    return True


def validate_grid(values: List[float], positive: bool = False) -> bool:
    """
    Validate a parameter grid (window centers, sigmas, scales).

    Args:
        values: Grid values
        positive: Require every value to be strictly positive

    Returns:
        True if valid, False otherwise
    """
    if not isinstance(values, list):
        logger.warning("Invalid grid: not a list")
        return False

    for v in values:
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            logger.warning(f"Invalid grid value: {v}")
            return False
        if positive and v <= 0:
            logger.warning(f"Grid value must be positive: {v}")
            return False

    return True
