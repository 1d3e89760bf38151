# Unit tests for pressure and critical exponent estimators
import math

import pytest

from src.analysis.forms import HarmonicForm
from src.analysis.thermo import (
    critical_exponent_estimate,
    estimator_coherence,
    pressure_at_tail,
    pressure_bounds_check,
    pressure_estimate,
    pressure_limit_scan,
    pressure_slack,
    tail_centers,
)
from src.core.exceptions import EmptyWindow, InsufficientRange, WindowBeyondCertifiedRange


@pytest.fixture
def tilted_table(make_table):
    """Lengths in [2, 4] carrying homology in every direction."""
    entries = []
    for i in range(40):
        length = 2.0 + 0.05 * i
        entries.append((length, (1, 0)))
        entries.append((length, (-1, 0)))
        entries.append((length, (0, 1 if i % 2 else -1)))
    return make_table(entries, cutoff=4.5)


class TestPressure:
    """Test cases for the windowed pressure estimator."""

    def test_synthetic_growth_rate(self, growth_table):
        """Known exponential growth 0.7 is recovered at the last certified window."""
        est = pressure_at_tail(growth_table, HarmonicForm.zero(2), 0.5, corrected=False)
        assert est.t == 10.0
        assert est.value == pytest.approx(0.70, abs=0.05)
        assert est.n_terms == int(math.exp(7.0))
        assert est.slack < 0.05

    def test_window_beyond_certified_range(self, growth_table):
        """A window reaching past complete_below is refused."""
        with pytest.raises(WindowBeyondCertifiedRange):
            pressure_estimate(growth_table, HarmonicForm.zero(2), 10.2, 0.5)

    def test_empty_window(self, make_table):
        """A window with no geodesic raises."""
        table = make_table([(1.0, (0, 0)), (5.0, (0, 0))], cutoff=6.0)
        with pytest.raises(EmptyWindow):
            pressure_estimate(table, HarmonicForm.zero(2), 3.0, 0.5)

    def test_center_must_be_positive(self, growth_table):
        """Window centers are positive."""
        with pytest.raises(ValueError):
            pressure_estimate(growth_table, HarmonicForm.zero(2), 0.0, 0.5)

    def test_symmetry_under_negation(self, octagon_table):
        """Pr(-w) and Pr(w) agree bit for bit on an inversion-closed table."""
        form = HarmonicForm((0.2, -0.1, 0.05, 0.3))
        plus = pressure_at_tail(octagon_table, form, 0.5, corrected=False)
        minus = pressure_at_tail(octagon_table, -form, 0.5, corrected=False)
        assert plus.value == minus.value

    def test_convex_in_scale(self, tilted_table):
        """Pr(s w) is convex in s."""
        form = HarmonicForm((1.0, 0.5))
        values = [pressure_at_tail(tilted_table, form * s, 0.5, corrected=False).value
                  for s in (0.0, 1.0, 2.0)]
        assert values[1] <= 0.5 * (values[0] + values[2]) + 1e-12

    def test_nondecreasing_in_scale(self, tilted_table):
        """Pr(s w) grows with s on a symmetric table."""
        form = HarmonicForm((1.0, 0.5))
        values = [pressure_at_tail(tilted_table, form * s, 0.5, corrected=False).value
                  for s in (0.0, 0.5, 1.0, 2.0)]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_correction_raises_estimate(self, growth_table):
        """The 1/t refinement adds log(t Pr) / t on a growing table."""
        plain = pressure_at_tail(growth_table, HarmonicForm.zero(2), 0.5, corrected=False)
        refined = pressure_at_tail(growth_table, HarmonicForm.zero(2), 0.5, corrected=True)
        assert refined.corrected == True
        assert refined.value > plain.value

    def test_to_dict(self, growth_table):
        """Rows carry the estimate and its window."""
        row = pressure_at_tail(growth_table, HarmonicForm.zero(2), 0.5, corrected=False).to_dict()
        assert set(row) >= {"value", "t", "halfwidth", "cutoff", "slack", "n_terms"}


class TestSlack:
    """Test cases for the finite-size slack."""

    def test_tail_centers(self, growth_table):
        """Last three disjoint unit windows."""
        assert tail_centers(growth_table, 0.5) == [10.0, 9.0, 8.0]

    def test_infinite_without_windows(self, make_table):
        """One nonempty window gives no spread."""
        table = make_table([(2.0, (0, 0))], cutoff=2.5)
        assert pressure_slack(table, HarmonicForm.zero(2)) == math.inf


class TestCriticalExponent:
    """Test cases for the least-squares growth rate."""

    def test_synthetic_slope(self, growth_table):
        """Growth rate 0.7 is recovered by the slope."""
        est = critical_exponent_estimate(growth_table, HarmonicForm.zero(2))
        assert est.value == pytest.approx(0.70, abs=0.05)
        assert est.n_windows >= 3

    def test_too_few_windows(self, make_table):
        """Fewer than three unit windows raise."""
        table = make_table([(1.0, (0, 0)), (1.5, (0, 0))], cutoff=2.0)
        with pytest.raises(InsufficientRange):
            critical_exponent_estimate(table, HarmonicForm.zero(2))


class TestBands:
    """Test cases for the stable-norm band and the scaling scan."""

    def test_band_on_growth_table(self, growth_table):
        """Zero form: the lower band edge is zero."""
        band = pressure_bounds_check(growth_table, HarmonicForm.zero(2), 0.5, corrected=False)
        assert band.stable_norm_lb == 0.0
        assert band.lower_ok == True

    def test_limit_scan_rows(self, tilted_table):
        """Each row subtracts the scaled stable norm."""
        rows = pressure_limit_scan(tilted_table, HarmonicForm((1.0, 0.0)), [0.0, 1.0, 4.0], 0.5, False)
        assert [r["scale"] for r in rows] == [0.0, 1.0, 4.0]
        for r in rows:
            assert r["difference"] == pytest.approx(r["pressure"] - r["stable_norm_lb"])


class TestOctagonSpectrum:
    """Test cases on the octagon table to L = 10."""

    def test_zero_form_pressure_near_one(self, octagon_table_long):
        """Pr(0) lands in [0.8, 1.2] at the largest certified window."""
        est = pressure_at_tail(octagon_table_long, HarmonicForm.zero(4), 0.5, corrected=True)
        assert est.t == pytest.approx(octagon_table_long.complete_below - 0.5)
        assert 0.8 <= est.value <= 1.2
        assert math.isfinite(est.slack)
        assert est.slack >= 0.0

    def test_symmetry_on_long_table(self, octagon_table_long):
        """Negating the form leaves the estimate unchanged."""
        form = HarmonicForm((0.4, 0.1, -0.2, 0.0))
        plus = pressure_at_tail(octagon_table_long, form, 0.5, corrected=True)
        minus = pressure_at_tail(octagon_table_long, -form, 0.5, corrected=True)
        assert plus.value == minus.value

    @pytest.mark.parametrize("scale", [0.0, 1.0, 2.0, 4.0])
    def test_exponent_matches_pressure(self, octagon_table_long, scale):
        """Slope and window estimates agree within slack along t e1, inside the band."""
        form = HarmonicForm((scale, 0.0, 0.0, 0.0))
        coherence = estimator_coherence(octagon_table_long, form, corrected=True)
        assert coherence.exponent.n_windows >= 3
        assert coherence.gap <= coherence.combined_slack
        assert coherence.holds == True
        band = pressure_bounds_check(octagon_table_long, form, 0.5, corrected=True)
        assert band.holds == True

    def test_coherence_on_growth_table(self, growth_table):
        """The synthetic oracle is coherent with and without the refinement."""
        for corrected in (False, True):
            coherence = estimator_coherence(growth_table, HarmonicForm.zero(2), corrected=corrected)
            assert coherence.holds == True
            assert coherence.pressure.corrected == corrected
