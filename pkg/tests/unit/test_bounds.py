# Unit tests for spectral gap bounds
import math

import pytest

from src.analysis.bounds import (
    admissible_A,
    admissible_A_press,
    admissible_rows,
    arithmetic_witness,
    bound_comparison_scan,
    gap_bounds,
    nonque_witness,
)
from src.analysis.forms import HarmonicForm
from src.core.exceptions import BadParameters, EmptyWindow, InconsistentInputs


class TestGapBounds:
    """Test cases for the closed-form bounds."""

    def test_reference_values(self):
        """Closed forms at known inputs."""
        report = gap_bounds(2.0, 3.6, 1.8, arithmetic=True)
        assert report.lb_weak == pytest.approx(1.1)
        assert report.lb_press == pytest.approx(0.9)
        assert report.lb_arith == pytest.approx(0.75)
        assert report.best_lb == pytest.approx(1.1)
        assert report.ub_press == pytest.approx(1.5)
        assert report.ub_stable == pytest.approx(1.8)

    def test_zero_form(self):
        """omega = 0: Pr = 1, snorm = 0."""
        report = gap_bounds(1.0, 1.0, 0.0)
        assert report.lb_weak == pytest.approx(-1.5)
        assert report.lb_press == pytest.approx(-1.0)
        assert report.lb_arith == pytest.approx(-0.25)
        assert report.ub_press == pytest.approx(0.5)
        assert report.conjecture_line == 0.0

    def test_arith_bound_flagged(self):
        """The arithmetic bound is excluded from the valid best bound off arithmetic models."""
        report = gap_bounds(2.0, 3.6, 1.8)
        assert report.arithmetic_only == True
        assert report.best_lb_valid == pytest.approx(1.1)

    def test_differences(self):
        """Reported differences follow the bounds."""
        report = gap_bounds(2.0, 3.6, 1.8)
        assert report.weak_minus_press == pytest.approx(report.lb_weak - report.lb_press)
        assert report.weak_minus_arith == pytest.approx(report.lb_weak - report.lb_arith)

    def test_conservative_bounds_subtract_slack(self):
        """Conservative bounds drop by the propagated slack."""
        report = gap_bounds(2.0, 3.6, 1.8, slack_pr1=0.1, slack_pr2=0.2)
        assert report.conservative_lb_weak == pytest.approx(1.0)
        assert report.conservative_lb_press == pytest.approx(0.9 - 0.2 - 0.3)
        assert report.inputs.slack_pr2 == 0.2

    def test_inconsistent_inputs(self):
        """Inputs outside the pressure inequalities are rejected."""
        with pytest.raises(InconsistentInputs):
            gap_bounds(1.0, 2.0, 1.5)
        with pytest.raises(InconsistentInputs):
            gap_bounds(0.5, 1.0, 0.0)

    def test_check_can_be_disabled(self):
        """Scans skip the consistency check."""
        report = gap_bounds(1.0, 2.0, 1.5, check=False)
        assert report.lb_weak == pytest.approx(1.5)

    def test_infinite_slack_skips_check(self):
        """An infinite slack widens the check instead of failing it."""
        report = gap_bounds(0.5, 1.0, 0.0, slack_pr1=math.inf)
        assert math.isinf(report.conservative_lb_weak) == False


class TestAdmissible:
    """Test cases for strip-width thresholds."""

    def test_reference_values(self):
        """Closed forms at known inputs."""
        assert admissible_A(0.5, 3.5, 3.0) == pytest.approx(1.5)
        assert admissible_A_press(0.25, 2.0, 3.6) == pytest.approx(0.5)

    def test_beta_range(self):
        """beta lies in (0, 1) and (0, 1/2) respectively."""
        with pytest.raises(BadParameters):
            admissible_A(1.0, 2.0, 1.0)
        with pytest.raises(BadParameters):
            admissible_A_press(0.5, 2.0, 3.6)

    def test_small_beta_limit(self):
        """As beta -> 0 the stable threshold tends to lb_weak at rate beta (Pr - snorm)."""
        report = gap_bounds(2.0, 3.6, 1.8)
        errors = []
        for beta in (1e-3, 1e-4, 1e-5, 1e-6):
            error = abs(admissible_A(beta, 2.0, 1.8) - report.lb_weak)
            assert error == pytest.approx(0.2 * beta / (1.0 - beta), rel=1e-6)
            errors.append(error)
        assert errors == sorted(errors, reverse=True)
        assert abs(admissible_A(1e-10, 2.0, 1.8) - report.lb_weak) <= 1e-9

    def test_rows(self):
        """One row per beta and family."""
        rows = admissible_rows([0.5], [0.25], 3.5, 6.0, 3.0)
        assert [r.family for r in rows] == ["stable", "pressure"]
        assert rows[0].positive == True


class TestWitnesses:
    """Test cases for witness searches."""

    def test_nonque_witness_found(self, make_table):
        """A class with average above 3/2 is a witness."""
        table = make_table([(1.0, (2, 0)), (2.0, (0, 1))])
        rec = nonque_witness(table, HarmonicForm((1.0, 0.0)))
        assert rec is not None
        assert rec.length == 1.0

    def test_nonque_witness_absent(self, make_table):
        """No class exceeds 3/2."""
        table = make_table([(1.0, (1, 0)), (2.0, (0, 1))])
        assert nonque_witness(table, HarmonicForm((1.0, 1.0))) is None

    def test_nonque_witness_empty(self, make_table):
        """An empty table has no witness search."""
        with pytest.raises(EmptyWindow):
            nonque_witness(make_table([], cutoff=1.0), HarmonicForm.zero(2))

    def test_arithmetic_witness(self, arithmetic_table):
        """Only a large form produces an arithmetic witness."""
        big = HarmonicForm((4.0, 0.0))
        small = HarmonicForm((0.1, 0.0))
        assert arithmetic_witness(arithmetic_table, big) is not None
        assert arithmetic_witness(arithmetic_table, small) is None


class TestComparisonScan:
    """Test cases for the bound comparison along s * omega."""

    def test_rows_follow_formulas(self, growth_table):
        """Scan rows use the closed-form bounds."""
        rows = bound_comparison_scan(growth_table, HarmonicForm.zero(2), [0.0, 1.0], 0.5, False)
        assert len(rows) == 2
        for row in rows:
            assert row["lb_weak"] == pytest.approx(2 * row["snorm"] - row["pr1"] - 0.5)
            assert row["lb_press"] == pytest.approx(1.5 * row["pr2"] - 2 * row["pr1"] - 0.5)
            assert row["lb_arith"] == pytest.approx(row["pr1"] - 1.25)

    def test_weak_minus_press_decreases(self, make_table):
        """2 snorm + Pr(s w) - 1.5 Pr(2 s w) falls off once one class carries the stable norm."""
        entries = []
        for h, count in ((3, 1), (2, 4), (1, 10), (0, 30), (-1, 10), (-2, 4), (-3, 1)):
            entries.extend([(10.0, (h, 0))] * count)
        table = make_table(entries, cutoff=10.5)
        rows = bound_comparison_scan(table, HarmonicForm((1.0, 0.0)), [1.0, 2.0, 4.0, 8.0], 0.5, False)
        assert rows[0]["snorm"] == pytest.approx(0.3)
        diffs = [r["weak_minus_press"] for r in rows]
        assert all(a > b for a, b in zip(diffs, diffs[1:]))
        assert diffs[-1] > 0.0
        for row in rows:
            assert row["weak_minus_press"] == pytest.approx(row["lb_weak"] - row["lb_press"])

    def test_scan_on_octagon(self, octagon_table_long):
        """At s = 0 the difference is -Pr(0) / 2."""
        rows = bound_comparison_scan(octagon_table_long, HarmonicForm((1.0, 0.0, 0.0, 0.0)),
                                     [0.0, 1.0, 2.0], 0.5, True)
        assert rows[0]["weak_minus_press"] == pytest.approx(-0.5 * rows[0]["pr1"], rel=1e-12)
        assert rows[0]["pr1"] == rows[0]["pr2"]
        assert all(r["snorm"] >= 0.0 for r in rows)
