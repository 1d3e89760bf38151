# Unit tests for validators
import pytest
from src.utils.validators import (
    validate_periods,
    validate_cutoff,
    validate_beta,
    validate_threads,
    validate_grid,
)


class TestValidators:
    """Test cases for validation utilities."""

    def test_validate_periods_valid(self):
        """Test valid period vectors."""
        assert validate_periods(["0.1", "0", "-0.25", "1e-3"]) == True
        assert validate_periods([0.5, 0.0, 0.0, 0.0], rank=4) == True
        assert validate_periods((1, 2)) == True

    def test_validate_periods_invalid(self):
        """Test invalid period vectors."""
        assert validate_periods("0.1,0.2") == False  # not a list
        assert validate_periods(["0.1", "abc"]) == False
        assert validate_periods(["NaN"]) == False
        assert validate_periods(["inf", "0"]) == False
        assert validate_periods([True, 0.0]) == False
        assert validate_periods([0.1, 0.2], rank=4) == False  # wrong rank

    def test_validate_cutoff(self):
        """Test enumeration cutoffs."""
        assert validate_cutoff(6.0) == True
        assert validate_cutoff(12) == True
        assert validate_cutoff(0.0) == False
        assert validate_cutoff(-1.0) == False
        assert validate_cutoff(float("nan")) == False
        assert validate_cutoff(50.0) == False  # beyond budget
        assert validate_cutoff(50.0, max_cutoff=60.0) == True

    def test_validate_beta(self):
        """Test strip-width parameters."""
        assert validate_beta(0.5) == True
        assert validate_beta(0.25, upper=0.5) == True
        assert validate_beta(0.0) == False
        assert validate_beta(1.0) == False
        assert validate_beta(0.5, upper=0.5) == False
        assert validate_beta("0.5") == False  # string

    def test_validate_threads(self):
        """Test worker counts."""
        assert validate_threads(1) == True
        assert validate_threads(8) == True
        assert validate_threads(0) == False
        assert validate_threads(2.0) == False  # float
        assert validate_threads(True) == False
        assert validate_threads(None) == False

    def test_validate_grid(self):
        """Test parameter grids."""
        assert validate_grid([0.0, 1.0, 2.0]) == True
        assert validate_grid([]) == True
        assert validate_grid([1.0, 5.0], positive=True) == True
        assert validate_grid([0.0, 1.0], positive=True) == False
        assert validate_grid([1.0, float("inf")]) == False
        assert validate_grid((1.0, 2.0)) == False  # not a list
        assert validate_grid([1.0, "2"]) == False
