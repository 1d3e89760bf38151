# Analysis module for GeoSpec
"""
Orbit sums over geodesic tables: forms, pressure, trace formula, bounds and zeta.
"""

from .bounds import admissible_A, admissible_A_press, gap_bounds, nonque_witness
from .forms import HarmonicForm, average, integral, stable_norm_lb
from .thermo import critical_exponent_estimate, pressure_estimate
from .traceformula import gaussian_average, geometric_sum, identity_term, s_sum
from .zeta import zeta_log_truncated

__all__ = [
    'HarmonicForm', 'integral', 'average', 'stable_norm_lb',
    'pressure_estimate', 'critical_exponent_estimate',
    'geometric_sum', 'identity_term', 's_sum', 'gaussian_average',
    'gap_bounds', 'admissible_A', 'admissible_A_press', 'nonque_witness',
    'zeta_log_truncated',
]
