"""
Thermodynamic estimators over a geodesic table.

Pressure is estimated from windowed weighted counts
    (1/t) log sum_{|l_gamma - t| <= h} exp(int_gamma omega),
the critical exponent from the slope of those log-window sums in t.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from src.analysis.forms import HarmonicForm, integrals, stable_norm_lb
from src.config.settings import get_settings
from src.core.exceptions import (
    EmptyWindow,
    InsufficientRange,
    WindowBeyondCertifiedRange,
)
from src.core.geodesics import GeodesicTable
from src.utils.logger import get_logger
from src.utils.summation import compensated_logsumexp

logger = get_logger(__name__)

SLACK_WINDOWS = 3
# Documented finite-size entropy defect on the upper pressure inequality
ENTROPY_DEFECT_BAND = 0.3


@dataclass(frozen=True)
class PressureEstimate:
    value: float
    t: float
    halfwidth: float
    cutoff: float
    slack: float
    n_terms: int
    corrected: bool = False

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class CriticalExponentEstimate:
    value: float
    slack: float
    n_windows: int
    intercept: float


def log_window_sum(table: GeodesicTable, form: HarmonicForm, t: float, halfwidth: float,
                   weights: Optional[np.ndarray] = None) -> tuple:
    """(log sum exp(int omega), n_terms) over the window |l - t| <= halfwidth."""
    idx = table.window(t, halfwidth)
    if idx.size == 0:
        raise EmptyWindow(f"No geodesic with |l - {t}| <= {halfwidth}")
    w = integrals(form, table) if weights is None else weights
    return compensated_logsumexp(w[idx]), int(idx.size)


def _check_window(table: GeodesicTable, t: float, halfwidth: float):
    if not t > 0:
        raise ValueError(f"Window center must be positive, got {t}")
    if t + halfwidth > table.complete_below + 1e-12:
        raise WindowBeyondCertifiedRange(
            f"Window [{t - halfwidth}, {t + halfwidth}] exceeds certified radius {table.complete_below}"
        )


def _parry_pollicott(log_sum: float, t: float, iterations: int = 50) -> float:
    """Solve P = (log S + log(t P)) / t by fixed-point iteration."""
    value = log_sum / t
    for _ in range(iterations):
        if value <= 0:
            break
        updated = (log_sum + math.log(t * value)) / t
        if abs(updated - value) < 1e-15:
            value = updated
            break
        value = updated
    return value


def tail_centers(table: GeodesicTable, halfwidth: float, count: int = SLACK_WINDOWS) -> List[float]:
    """Centers of the last ``count`` disjoint windows inside the certified range."""
    centers = []
    for j in range(count):
        c = table.complete_below - halfwidth - 2.0 * halfwidth * j
        if c - halfwidth <= 0:
            break
        centers.append(c)
    return centers


def _point_estimate(table, form, t, halfwidth, weights, corrected) -> tuple:
    log_sum, n_terms = log_window_sum(table, form, t, halfwidth, weights)
    value = _parry_pollicott(log_sum, t) if corrected else log_sum / t
    return value, n_terms


def pressure_slack(table: GeodesicTable, form: HarmonicForm, halfwidth: float = 0.5,
                   corrected: bool = False, weights: Optional[np.ndarray] = None) -> float:
    """max - min of the estimate over the last three disjoint certified windows.

    Infinite when fewer than two of those windows are nonempty.
    """
    w = integrals(form, table) if weights is None else weights
    values = []
    for c in tail_centers(table, halfwidth):
        try:
            values.append(_point_estimate(table, form, c, halfwidth, w, corrected)[0])
        except EmptyWindow:
            continue
    if len(values) < 2:
        return math.inf
    return max(values) - min(values)


def pressure_estimate(table: GeodesicTable, form: HarmonicForm, t: float,
                      halfwidth: Optional[float] = None,
                      corrected: Optional[bool] = None) -> PressureEstimate:
    """Windowed pressure estimate at center ``t`` with its finite-size slack."""
    settings = get_settings()
    halfwidth = settings.default_halfwidth if halfwidth is None else halfwidth
    corrected = settings.parry_pollicott_correction if corrected is None else corrected
    _check_window(table, t, halfwidth)
    weights = integrals(form, table)
    value, n_terms = _point_estimate(table, form, t, halfwidth, weights, corrected)
    slack = pressure_slack(table, form, halfwidth, corrected, weights)
    return PressureEstimate(
        value=value, t=t, halfwidth=halfwidth, cutoff=table.cutoff,
        slack=slack, n_terms=n_terms, corrected=corrected,
    )


def largest_certified_center(table: GeodesicTable, halfwidth: float) -> float:
    return table.complete_below - halfwidth


def pressure_at_tail(table: GeodesicTable, form: HarmonicForm,
                     halfwidth: Optional[float] = None,
                     corrected: Optional[bool] = None) -> PressureEstimate:
    """Estimate at the largest certified window."""
    halfwidth = get_settings().default_halfwidth if halfwidth is None else halfwidth
    return pressure_estimate(table, form, largest_certified_center(table, halfwidth), halfwidth, corrected)


def critical_exponent_estimate(table: GeodesicTable, form: HarmonicForm,
                               t_min: Optional[float] = None,
                               corrected: Optional[bool] = None) -> CriticalExponentEstimate:
    """Least-squares slope of log window sums against t over certified unit windows.

    With ``corrected`` the fitted quantity is log S(t) + log t, removing the
    1/t factor of the window growth in the same way as the pressure refinement.
    """
    corrected = get_settings().parry_pollicott_correction if corrected is None else corrected
    weights = integrals(form, table)
    start = t_min if t_min is not None else (table.systole or 0.0)
    centers, logs = [], []
    c = table.complete_below - 0.5
    while c - 0.5 >= start and c > 0.5:
        try:
            log_sum, _ = log_window_sum(table, form, c, 0.5, weights)
            centers.append(c)
            logs.append(log_sum + math.log(c) if corrected else log_sum)
        except EmptyWindow:
            pass
        c -= 1.0
    if len(centers) < 3:
        raise InsufficientRange(
            f"Need 3 nonempty unit windows below {table.complete_below}, found {len(centers)}"
        )
    fit = stats.linregress(np.array(centers[::-1]), np.array(logs[::-1]))
    return CriticalExponentEstimate(
        value=float(fit.slope), slack=float(fit.stderr), n_windows=len(centers),
        intercept=float(fit.intercept),
    )


@dataclass(frozen=True)
class EstimatorCoherence:
    exponent: CriticalExponentEstimate
    pressure: PressureEstimate
    combined_slack: float

    @property
    def gap(self) -> float:
        return abs(self.exponent.value - self.pressure.value)

    @property
    def holds(self) -> bool:
        return self.gap <= self.combined_slack


def estimator_coherence(table: GeodesicTable, form: HarmonicForm,
                        corrected: Optional[bool] = None) -> EstimatorCoherence:
    """Compare the slope estimate with the unit-window pressure at the top window.

    Both read the same top unit window, so apart from fit scatter they differ
    by the fit intercept over t, plus log Pr over t for the refined estimator.
    That offset enters the combined slack next to the two reported slacks.
    """
    corrected = get_settings().parry_pollicott_correction if corrected is None else corrected
    crit = critical_exponent_estimate(table, form, corrected=corrected)
    est = pressure_at_tail(table, form, 0.5, corrected)
    offset = crit.intercept
    if corrected and est.value > 0:
        offset += math.log(est.value)
    slack = crit.slack + (est.slack if math.isfinite(est.slack) else 0.0) + abs(offset) / est.t
    result = EstimatorCoherence(crit, est, slack)
    if not result.holds:
        logger.warning(f"Exponent {crit.value:.4f} and pressure {est.value:.4f} differ by more than {slack:.4f}")
    return result


def pressure_limit_scan(table: GeodesicTable, form: HarmonicForm, scales: Sequence[float],
                        halfwidth: Optional[float] = None,
                        corrected: Optional[bool] = None) -> List[Dict[str, float]]:
    """Rows (scale, Pr(s w) - s * stable_norm_lb(w), slack) at the largest certified window."""
    snorm = stable_norm_lb(table, form)
    rows = []
    for s in scales:
        est = pressure_at_tail(table, form * s, halfwidth, corrected)
        rows.append({
            "scale": float(s),
            "pressure": est.value,
            "stable_norm_lb": s * snorm,
            "difference": est.value - s * snorm,
            "slack": est.slack,
        })
    return rows


@dataclass(frozen=True)
class PressureBand:
    pressure: float
    stable_norm_lb: float
    slack: float
    lower_ok: bool
    upper_ok: bool

    @property
    def holds(self) -> bool:
        return self.lower_ok and self.upper_ok


def pressure_bounds_check(table: GeodesicTable, form: HarmonicForm,
                          halfwidth: Optional[float] = None,
                          corrected: Optional[bool] = None) -> PressureBand:
    """Finite-size band  snorm - slack <= Pr <= 1 + snorm + slack + 0.3."""
    est = pressure_at_tail(table, form, halfwidth, corrected)
    snorm = stable_norm_lb(table, form)
    slack = est.slack if math.isfinite(est.slack) else 0.0
    lower_ok = snorm - slack <= est.value
    upper_ok = est.value <= 1.0 + snorm + slack + ENTROPY_DEFECT_BAND
    if not (lower_ok and upper_ok):
        logger.warning(f"Pressure band violated: Pr={est.value:.4f}, snorm={snorm:.4f}, slack={slack:.4f}")
    return PressureBand(est.value, snorm, est.slack, lower_ok, upper_ok)
