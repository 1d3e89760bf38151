"""
Truncated Euler product of the twisted Selberg zeta function.

    log Z(s) ~ sum_{k <= k_max} sum_{gamma primitive, l <= L} log(1 - exp(int omega - (s + k) l))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from src.analysis.forms import HarmonicForm, integrals
from src.analysis.thermo import critical_exponent_estimate
from src.config.settings import get_settings
from src.core.exceptions import BadParameters, OutsideConvergenceRegion
from src.core.geodesics import GeodesicTable
from src.utils.logger import get_logger
from src.utils.summation import fsum_complex, fsum_real

logger = get_logger(__name__)


@dataclass(frozen=True)
class ZetaValue:
    s: complex
    value: complex
    k_tail: float
    length_tail: Optional[float]
    n_terms: int
    k_max: int

    @property
    def tail_bound(self) -> float:
        return self.k_tail + (self.length_tail or 0.0)


def convergence_abscissa(table: GeodesicTable, form: HarmonicForm) -> float:
    """Estimated critical exponent plus its slack.

    The fit carries the log t factor of the window sums, which the plain
    slope would fold into the exponent and so place the abscissa too low.
    """
    est = critical_exponent_estimate(table, form, corrected=True)
    return est.value + est.slack


def _length_tail(table: GeodesicTable, ints: np.ndarray, sigma: float, abscissa: float) -> float:
    """Geometric continuation of the last unit window sum past the cutoff."""
    top = table.complete_below
    idx = table.window(top - 0.5, 0.5)
    if idx.size == 0 or not sigma > abscissa:
        return math.inf
    window = fsum_real(np.exp(ints[idx] - sigma * (top - 1.0)))
    q = math.exp(abscissa - sigma)
    return window * q / (1.0 - q)


def zeta_log_truncated(table: GeodesicTable, form: HarmonicForm, s: complex,
                       k_max: Optional[int] = None,
                       abscissa: Optional[float] = None,
                       check_convergence: bool = True) -> ZetaValue:
    """Truncated log Z(s) over the primitive records of ``table``.

    Re s must exceed the convergence abscissa, estimated from the table when
    not given. A table too short for that estimate raises InsufficientRange
    unless ``check_convergence`` is off. The k-tail is a bound over the
    tabulated classes; the length tail is an estimate from window growth.
    """
    s = complex(s)
    k_max = get_settings().zeta_k_max if k_max is None else int(k_max)
    if k_max < 0:
        raise BadParameters(f"k_max must be >= 0, got {k_max}")

    prim = table.primitive()
    if not len(prim):
        return ZetaValue(s, 0j, 0.0, 0.0, 0, k_max)

    if abscissa is None and check_convergence:
        abscissa = convergence_abscissa(table, form)
    if abscissa is not None and not s.real > abscissa:
        raise OutsideConvergenceRegion(f"Re s = {s.real} is not above the abscissa {abscissa:.6f}")

    ints = integrals(form, prim)
    lengths = prim.lengths
    base = np.exp(ints - s.real * lengths)
    q = float(np.max(base))
    if q >= 1.0:
        raise OutsideConvergenceRegion(f"Euler factor at s = {s} has |z| = {q:.4f} >= 1")

    logs = []
    for k in range(k_max + 1):
        z = np.exp(ints - (s + k) * lengths)
        logs.append(np.log1p(-z))
    value = fsum_complex(np.concatenate(logs))

    systole = float(lengths[0])
    k_tail = fsum_real(base) * math.exp(-(k_max + 1) * systole) / ((1.0 - math.exp(-systole)) * (1.0 - q))
    length_tail = None
    if abscissa is not None:
        length_tail = _length_tail(table, integrals(form, table), s.real, abscissa)
    return ZetaValue(s, value, k_tail, length_tail, len(prim) * (k_max + 1), k_max)


def zeta_grid(table: GeodesicTable, form: HarmonicForm, s_values: Sequence[complex],
              k_max: Optional[int] = None, check_convergence: bool = True,
              threads: Optional[int] = None) -> List[ZetaValue]:
    """Evaluate many points; results keep the order of ``s_values``.

    The abscissa is estimated once for the whole grid.
    """
    abscissa = None
    if check_convergence and len(table.primitive()):
        abscissa = convergence_abscissa(table, form)
        logger.info(f"Convergence abscissa {abscissa:.6f}")
    elif not check_convergence:
        logger.warning("Zeta grid evaluated without a convergence check")
    n_jobs = threads or get_settings().threads
    return Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(zeta_log_truncated)(table, form, s, k_max, abscissa, check_convergence) for s in s_values
    )
