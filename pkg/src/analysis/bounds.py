"""
Essential spectral gap bounds assembled from pressure and stable-norm estimates.

    lb_weak  = 2 snorm - Pr(w) - 1/2
    lb_press = 3/2 Pr(2w) - 2 Pr(w) - 1/2
    lb_arith = Pr(w) - 5/4            (arithmetic surfaces only)
    ub_press = Pr(w) - 1/2,  ub_stable = snorm
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence

from src.analysis.forms import HarmonicForm, max_average, stable_norm_lb
from src.analysis.thermo import ENTROPY_DEFECT_BAND, pressure_at_tail
from src.core.exceptions import BadParameters, EmptyWindow, InconsistentInputs
from src.core.geodesics import GeodesicRecord, GeodesicTable
from src.data.models import AdmissibleRow, GapInputs, GapReport
from src.utils.logger import get_logger

logger = get_logger(__name__)

NONQUE_THRESHOLD = 1.5
ARITHMETIC_THRESHOLD = 1.25


def _finite(x: float) -> float:
    return x if math.isfinite(x) else 0.0


def gap_bounds(pr1: float, pr2: float, snorm: float, slack_pr1: float = 0.0, slack_pr2: float = 0.0,
               arithmetic: bool = False, check: bool = True,
               defect_band: float = ENTROPY_DEFECT_BAND) -> GapReport:
    """Evaluate every gap bound from (Pr(w), Pr(2w), stable norm lower bound).

    With ``check`` set, inputs must satisfy max(1, snorm) <= Pr(w) up to the
    pressure slack; the constant 1 side also allows the finite-size defect band.
    """
    if check and math.isfinite(slack_pr1):
        if pr1 < snorm - slack_pr1 - 1e-12 or pr1 < 1.0 - slack_pr1 - defect_band:
            raise InconsistentInputs(
                f"Pr(w)={pr1} is below max(1, {snorm}) beyond slack {slack_pr1}"
            )

    lb_weak = 2.0 * snorm - pr1 - 0.5
    lb_press = 1.5 * pr2 - 2.0 * pr1 - 0.5
    lb_arith = pr1 - 1.25
    s1, s2 = _finite(slack_pr1), _finite(slack_pr2)
    valid = [lb_weak, lb_press] + ([lb_arith] if arithmetic else [])
    return GapReport(
        lb_weak=lb_weak,
        lb_press=lb_press,
        lb_arith=lb_arith,
        ub_press=pr1 - 0.5,
        ub_stable=snorm,
        best_lb=max(lb_weak, lb_press, lb_arith),
        best_lb_valid=max(valid),
        im_r0=pr1 - 0.5,
        conjecture_line=0.5 * (pr2 - 1.0),
        weak_minus_press=2.0 * snorm + pr1 - 1.5 * pr2,
        weak_minus_arith=0.75 - 2.0 * (pr1 - snorm),
        conservative_lb_weak=lb_weak - s1,
        conservative_lb_press=lb_press - 2.0 * s1 - 1.5 * s2,
        conservative_lb_arith=lb_arith - s1,
        arithmetic_only=not arithmetic,
        inputs=GapInputs(pr1=pr1, pr2=pr2, snorm=snorm, slack_pr1=slack_pr1, slack_pr2=slack_pr2),
    )


def admissible_A(beta: float, pr1: float, snorm: float) -> float:
    """Strip-width threshold snorm - 1/2 - (Pr(w) - snorm) / (1 - beta)."""
    if not 0.0 < beta < 1.0:
        raise BadParameters(f"beta must lie in (0, 1), got {beta}")
    return snorm - 0.5 - (pr1 - snorm) / (1.0 - beta)


def admissible_A_press(beta: float, pr1: float, pr2: float) -> float:
    """Strip-width threshold (Pr(2w) - 1)/2 - (2 Pr(w) - Pr(2w)) / (1 - 2 beta)."""
    if not 0.0 < beta < 0.5:
        raise BadParameters(f"beta must lie in (0, 1/2), got {beta}")
    return 0.5 * (pr2 - 1.0) - (2.0 * pr1 - pr2) / (1.0 - 2.0 * beta)


def admissible_rows(betas: Sequence[float], press_betas: Sequence[float],
                    pr1: float, pr2: float, snorm: float) -> List[AdmissibleRow]:
    rows = []
    for beta in betas:
        a = admissible_A(beta, pr1, snorm)
        rows.append(AdmissibleRow(beta=beta, threshold=a, positive=a > 0, family="stable"))
    for beta in press_betas:
        a = admissible_A_press(beta, pr1, pr2)
        rows.append(AdmissibleRow(beta=beta, threshold=a, positive=a > 0, family="pressure"))
    return rows


def nonque_witness(table: GeodesicTable, form: HarmonicForm) -> Optional[GeodesicRecord]:
    """Record with the largest mean if that mean exceeds 3/2."""
    best = max_average(table, form)
    if best is None:
        raise EmptyWindow("Witness search needs a nonempty table")
    record, mean = best
    if mean > NONQUE_THRESHOLD:
        logger.info(f"Witness found: mean {mean:.4f} on a geodesic of length {record.length:.4f}")
        return record
    return None


def arithmetic_witness(table: GeodesicTable, form: HarmonicForm) -> Optional[GeodesicRecord]:
    """Primitive record whose mean exceeds 5/4, which makes lb_arith positive."""
    best = max_average(table, form, primitive_only=True)
    if best is None:
        return None
    record, mean = best
    return record if mean > ARITHMETIC_THRESHOLD else None


def bound_comparison_scan(table: GeodesicTable, form: HarmonicForm, scales: Sequence[float],
                          halfwidth: Optional[float] = None,
                          corrected: Optional[bool] = None) -> List[Dict[str, float]]:
    """Gap bounds for s * w along ``scales`` at the largest certified window."""
    snorm = stable_norm_lb(table, form)
    arithmetic = table.kind == "arithmetic"
    rows = []
    for s in scales:
        p1 = pressure_at_tail(table, form * s, halfwidth, corrected)
        p2 = pressure_at_tail(table, form * (2.0 * s), halfwidth, corrected)
        report = gap_bounds(p1.value, p2.value, s * snorm, p1.slack, p2.slack,
                            arithmetic=arithmetic, check=False)
        rows.append({
            "scale": float(s),
            "pr1": p1.value,
            "pr2": p2.value,
            "snorm": s * snorm,
            "lb_weak": report.lb_weak,
            "lb_press": report.lb_press,
            "lb_arith": report.lb_arith,
            "weak_minus_press": report.weak_minus_press,
            "slack": p1.slack,
        })
    return rows
