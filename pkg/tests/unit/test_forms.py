# Unit tests for harmonic forms
import numpy as np
import pytest

from src.analysis.forms import (
    HarmonicForm,
    average,
    integral,
    integrals,
    max_average,
    stable_norm_lb,
    stable_norm_witness,
)
from src.core.exceptions import BadParameters, DimensionMismatch, EmptyWindow
from src.core.geodesics import GeodesicRecord, GeodesicTable


class TestHarmonicForm:
    """Test cases for period vectors."""

    def test_from_decimal_strings(self):
        """Periods parse from decimal strings."""
        form = HarmonicForm.from_decimal_strings(["0.1", "-0.25", "0", "1e-3"])
        assert form.periods == (0.1, -0.25, 0.0, 0.001)

    def test_bad_decimal(self):
        """A non-numeric period is rejected."""
        with pytest.raises(BadParameters):
            HarmonicForm.from_decimal_strings(["0.1", "abc"])

    def test_algebra(self):
        """Forms add, scale and negate componentwise."""
        e1 = HarmonicForm.basis(0, 2)
        e2 = HarmonicForm.basis(1, 2)
        assert (e1 + e2 * 2.0).periods == (1.0, 2.0)
        assert (-e1).periods == (-1.0, 0.0)
        assert HarmonicForm.zero(3).is_zero() == True

    def test_dimension_mismatch(self):
        """Forms of different rank do not add."""
        with pytest.raises(DimensionMismatch):
            HarmonicForm.basis(0, 2) + HarmonicForm.basis(0, 3)


class TestIntegrals:
    """Test cases for integrals and averages along geodesics."""

    def test_integral_pairs_with_homology(self):
        """The integral is the period-homology pairing."""
        rec = GeodesicRecord((1, 1, -2), 2.0, 2.0, 1, (2, -1))
        form = HarmonicForm((0.5, 3.0))
        assert integral(form, rec) == -2.0
        assert average(form, rec) == -1.0

    def test_average_is_power_invariant(self):
        """A power and its root share the average."""
        root = GeodesicRecord((1,), 1.5, 1.5, 1, (1, 0))
        cube = GeodesicRecord((1, 1, 1), 4.5, 1.5, 3, (3, 0))
        form = HarmonicForm((0.3, 0.0))
        assert average(form, cube) == pytest.approx(average(form, root), rel=1e-15)

    def test_rank_checked(self):
        """Form and record rank must agree."""
        rec = GeodesicRecord((1,), 1.0, 1.0, 1, (1, 0))
        with pytest.raises(DimensionMismatch):
            integral(HarmonicForm((1.0, 0.0, 0.0)), rec)

    def test_reversal_negates_exactly(self, octagon_table):
        """Sorted integrals of -w are the negated sorted integrals of w."""
        form = HarmonicForm((0.3, -0.7, 0.11, 1.3))
        plus = np.sort(integrals(form, octagon_table))
        minus = np.sort(integrals(-form, octagon_table))
        assert np.array_equal(plus, -minus[::-1])


class TestStableNorm:
    """Test cases for the stable norm lower bound."""

    def test_witness(self, make_table):
        """The witness is the record attaining the maximum."""
        table = make_table([(1.0, (1, 0)), (2.0, (0, 1)), (4.0, (3, 0))])
        form = HarmonicForm((1.0, 0.0))
        assert stable_norm_lb(table, form) == 1.0
        assert stable_norm_witness(table, form).length == 1.0

    def test_zero_form(self, octagon_table):
        """The zero form has stable norm zero."""
        assert stable_norm_lb(octagon_table, HarmonicForm.zero(4)) == 0.0

    def test_nonnegative_on_closed_table(self, octagon_table):
        """Inversion closure makes the maximum average at least zero."""
        form = HarmonicForm((0.3, -0.7, 0.11, 1.3))
        assert stable_norm_lb(octagon_table, form) >= 0.0

    def test_grows_with_cutoff(self, octagon_table):
        """More geodesics never lower the bound."""
        form = HarmonicForm.basis(0, 4)
        small = stable_norm_lb(octagon_table.restricted(5.0), form)
        large = stable_norm_lb(octagon_table, form)
        assert small <= large

    def test_empty(self, make_table):
        """An empty table has no stable norm bound."""
        with pytest.raises(EmptyWindow):
            stable_norm_lb(make_table([], cutoff=1.0), HarmonicForm.zero(2))

    def test_max_average_primitive_only(self):
        """Restricting to primitive records changes the candidate set."""
        records = (
            GeodesicRecord((1, 1), 1.0, 0.5, 2, (2, 0)),
            GeodesicRecord((2,), 1.0, 1.0, 1, (0, 1)),
        )
        table = GeodesicTable(bytes(32), 3.0, 3.0, records, 2)
        form = HarmonicForm((1.0, 1.0))
        rec, mean = max_average(table, form, primitive_only=True)
        assert rec.canon == (2,)
        assert mean == 1.0
        assert max_average(table, form)[1] == 2.0
