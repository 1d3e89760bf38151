"""
Orbit sums of the twisted trace formula.

Geometric side  sum_gamma exp(int_gamma omega) l#_gamma g(l_gamma) / (2 sinh(l_gamma / 2)),
identity term   Vol / 4 pi  int r g^(r) tanh(pi r) dr,
and the windowed sums S(t, xi), I(t, sigma) and L(m) built from the plateau profile.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from src.analysis.forms import HarmonicForm, average, integrals
from src.analysis.testfunctions import (
    HatComponent,
    SymmetrizedG,
    base_hat_gauss_legendre,
    composite_gauss_legendre,
    fourier_hat,
    plateau,
)
from src.core.exceptions import (
    BadParameters,
    NonArithmeticTable,
    NonCertifiedSupport,
    WindowBeyondCertifiedRange,
)
from src.core.geodesics import GeodesicRecord, GeodesicTable
from src.core.surfaces import xm
from src.data.models import GaussianAverageRow
from src.utils.logger import get_logger
from src.utils.summation import fsum_complex, fsum_real

logger = get_logger(__name__)

TRUNCATION_RATIO = 1e-14
# Base transforms below this are within quadrature noise
AMP_FLOOR = 1e-15
QUIET_RUN = 32
RADIUS_CAP = 5000.0
TRUNCATION_BLOCK = 512
LM_TOLERANCE = 1e-6
GAUSSIAN_CUTOFF_SIGMAS = 10.0

Scalar = Union[float, complex]


def _orbit_weights(table: GeodesicTable, form: HarmonicForm, idx: np.ndarray) -> np.ndarray:
    """exp(int omega) l# / (2 sinh(l / 2)) for the selected records."""
    if idx.size == 0:
        return np.zeros(0)
    ints = integrals(form, table)[idx]
    lengths = table.lengths[idx]
    return np.exp(ints) * table.primitive_lengths[idx] / (2.0 * np.sinh(0.5 * lengths))


# -- geometric side ----------------------------------------------------------

@dataclass(frozen=True)
class GeometricSum:
    value: Scalar
    n_terms: int
    certified: bool
    message: str = ""
    orbit_bound: Optional[float] = None


def orbit_lower_bound(record: GeodesicRecord, form: HarmonicForm, k: int) -> float:
    """l0 exp(k l0 (mean(omega, gamma0) - 1/2)) for the k-th iterate of a primitive class."""
    if k < 1:
        raise BadParameters(f"k must be >= 1, got {k}")
    l0 = record.primitive_length
    return l0 * math.exp(k * l0 * (average(form, record) - 0.5))


def geometric_sum(table: GeodesicTable, form: HarmonicForm, g: SymmetrizedG,
                  orbit: Optional[Tuple[GeodesicRecord, int]] = None) -> GeometricSum:
    """Geometric side of the trace formula over every record in the support of g.

    A support reaching past ``complete_below`` still evaluates, but the result
    is flagged non-certified and a NonCertifiedSupport warning is issued.
    """
    radius = g.support_radius
    certified = radius <= table.complete_below
    message = ""
    if not certified:
        message = f"Support radius {radius} exceeds certified range {table.complete_below}"
        logger.warning(message)
        warnings.warn(message, NonCertifiedSupport, stacklevel=2)

    idx = table.window(0.5 * radius, 0.5 * radius)
    weights = _orbit_weights(table, form, idx)
    values = g(table.lengths[idx]) if idx.size else np.zeros(0)
    terms = weights * values
    total: Scalar = fsum_complex(terms) if g.is_complex else fsum_real(terms)

    bound = None if orbit is None else orbit_lower_bound(orbit[0], form, orbit[1])
    return GeometricSum(total, int(np.count_nonzero(terms)), certified, message, bound)


# -- identity term -----------------------------------------------------------

def _truncation_radius(comp: HatComponent) -> float:
    """Radius past which |r tanh(pi r) amp(r)| stays below 1e-14 of its peak."""
    step = 0.5 / comp.scale
    center = abs(comp.center)
    peak = center * abs(float(comp.amplitudes(comp.center)))
    count = int(math.ceil(RADIUS_CAP / comp.scale / step))
    quiet = 0
    for start in range(0, count, TRUNCATION_BLOCK):
        xs = step * np.arange(start + 1, min(start + TRUNCATION_BLOCK, count) + 1)
        amps = np.abs(base_hat_gauss_legendre(comp.base, comp.scale * xs))
        for x, a in zip(xs.tolist(), amps.tolist()):
            v = (center + x) * a
            peak = max(peak, v)
            if v < TRUNCATION_RATIO * peak or a < AMP_FLOOR:
                quiet += 1
                if quiet >= QUIET_RUN:
                    return center + x
            else:
                quiet = 0
    cap = center + count * step
    logger.warning(f"Identity-term integrand did not decay before r = {cap}")
    return cap


def _adaptive_component(comp: HatComponent, radius: float) -> complex:
    h = lambda r: r * math.tanh(math.pi * r) * float(comp.amplitudes(r))
    w = abs(comp.omega)
    panels = max(1, int(math.ceil(2.0 * radius * comp.scale / 16.0)))
    edges = np.linspace(-radius, radius, panels + 1)
    re_parts, im_parts = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if w == 0.0:
            val, _ = integrate.quad(h, lo, hi, epsabs=1e-15, epsrel=1e-11, limit=200)
            re_parts.append(val)
            continue
        c, _ = integrate.quad(h, lo, hi, weight="cos", wvar=w, epsabs=1e-15, epsrel=1e-11, limit=200)
        s, _ = integrate.quad(h, lo, hi, weight="sin", wvar=w, epsabs=1e-15, epsrel=1e-11, limit=200)
        re_parts.append(c)
        im_parts.append(-math.copysign(1.0, comp.omega) * s)
    return comp.coef * complex(math.fsum(re_parts), math.fsum(im_parts))


def _gauss_legendre_component(comp: HatComponent, radius: float, amp_cache: Dict) -> complex:
    # at most one full turn of amp(r) exp(-i omega r) per 16-point panel
    width = 2.0 * math.pi / (1.0 + comp.scale + abs(comp.omega))
    panels = max(1, int(math.ceil(2.0 * radius / width)))
    r, w = composite_gauss_legendre(-radius, radius, panels)
    key = (comp.base, comp.scale, comp.center, panels)
    if key not in amp_cache:
        amp_cache[key] = comp.amplitudes(r)
    vals = w * r * np.tanh(np.pi * r) * amp_cache[key]
    re = fsum_real(vals * np.cos(comp.omega * r))
    im = -fsum_real(vals * np.sin(comp.omega * r))
    return comp.coef * complex(re, im)


def identity_term(volume: float, g: SymmetrizedG, method: str = "gauss_legendre") -> complex:
    """Vol / 4 pi times the r-integral of r g^(r) tanh(pi r) over the real line.

    Base transforms come from a composite Gauss-Legendre rule on the
    profile's support whose panel count grows with the frequency.
    ``gauss_legendre`` integrates over r with a composite rule as well,
    ``adaptive`` with QUADPACK's oscillatory rules.
    """
    if volume is None or not volume > 0:
        raise BadParameters(f"Identity term needs a positive surface volume, got {volume}")
    if method not in ("adaptive", "gauss_legendre"):
        raise BadParameters(f"Unknown quadrature method: {method}")
    comps = g.hat_components()
    radius = max(_truncation_radius(c) for c in comps)
    if method == "adaptive":
        parts = [_adaptive_component(c, radius) for c in comps]
    else:
        amp_cache: Dict = {}
        parts = [_gauss_legendre_component(c, radius, amp_cache) for c in comps]
    logger.debug(f"Identity term truncated at |r| <= {radius:.1f} ({method})")
    return volume / (4.0 * math.pi) * fsum_complex(parts)


# -- Paley-Wiener envelope ---------------------------------------------------

@dataclass(frozen=True)
class PaleyWienerFit:
    constant: float
    order: int
    support_radius: float
    r_max: float
    points: int
    argmax: float
    scaled: bool = False

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _default_r_max(g: SymmetrizedG) -> float:
    if g.f.kind == "bump_scaled":
        return 40.0 / g.f.eps
    return 40.0 + abs(g.f.xi)


def paley_wiener_fit(g: SymmetrizedG, order: int = 3, r_max: Optional[float] = None,
                     points: int = 801, im_values: Sequence[float] = (0.0,)) -> PaleyWienerFit:
    """Smallest C with |g^(r)| <= C exp(T |Im r|) (1 + |Re r|)^-M on the sample grid."""
    r_max = _default_r_max(g) if r_max is None else r_max
    radius = g.support_radius
    grid = np.linspace(-r_max, r_max, points)
    best, arg = 0.0, 0.0
    for b in im_values:
        damp = math.exp(-radius * abs(b))
        for a in grid:
            val = abs(fourier_hat(g, complex(a, b))) * (1.0 + abs(a)) ** order * damp
            if val > best:
                best, arg = val, float(a)
    return PaleyWienerFit(best, order, radius, r_max, points, arg)


def scaled_paley_wiener_fit(g: SymmetrizedG, order: int = 3, r_max: Optional[float] = None,
                            points: int = 801) -> PaleyWienerFit:
    """sup |g^(r)| (1 + eps |r|)^M / eps over a real grid (eps = 1 for the modulated family)."""
    eps = g.f.eps if g.f.kind == "bump_scaled" else 1.0
    r_max = _default_r_max(g) if r_max is None else r_max
    grid = np.linspace(-r_max, r_max, points)
    vals = np.array([abs(fourier_hat(g, complex(a, 0.0))) for a in grid])
    env = vals * (1.0 + eps * np.abs(grid)) ** order / eps
    i = int(np.argmax(env))
    return PaleyWienerFit(float(env[i]), order, g.support_radius, r_max, points, float(grid[i]), True)


# -- windowed correlation sums -----------------------------------------------

def _check_correlation_window(table: GeodesicTable, t: float):
    if t + 1.0 > table.complete_below + 1e-12:
        raise WindowBeyondCertifiedRange(
            f"Window around t={t} needs complete_below >= {t + 1.0}, table has {table.complete_below}"
        )


def _plateau_window(table: GeodesicTable, form: HarmonicForm, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """(lengths, weights) with weight exp(int omega) l# psi(l - t) / (2 sinh(l/2)), zero weights dropped."""
    _check_correlation_window(table, t)
    idx = table.window(t, 1.0)
    lengths = table.lengths[idx]
    weights = _orbit_weights(table, form, idx) * plateau(lengths - t)
    keep = weights != 0.0
    return lengths[keep], weights[keep]


def s_sum(table: GeodesicTable, form: HarmonicForm, t: float, xi: float) -> complex:
    """S(t, xi) = sum_gamma exp(int omega + i l xi) l# psi(l - t) / (2 sinh(l/2))."""
    lengths, weights = _plateau_window(table, form, t)
    phase = lengths * xi
    return complex(fsum_real(weights * np.cos(phase)), fsum_real(weights * np.sin(phase)))


def gaussian_kernel(delta: float, sigma: float, method: str = "direct") -> float:
    """(1/(sqrt(2 pi) sigma)) int exp(i delta xi) exp(-xi^2 / 2 sigma^2) dxi."""
    if not sigma > 0:
        raise BadParameters(f"sigma must be positive, got {sigma}")
    if method == "direct":
        return math.exp(-0.5 * (sigma * delta) ** 2)
    if method != "quadrature":
        raise BadParameters(f"Unknown method: {method}")
    gauss = lambda x: math.exp(-0.5 * (x / sigma) ** 2)
    hi = 12.0 * sigma
    if delta == 0.0:
        val, _ = integrate.quad(gauss, 0.0, hi, epsabs=1e-14, epsrel=1e-12, limit=400)
    else:
        val, _ = integrate.quad(gauss, 0.0, hi, weight="cos", wvar=abs(delta),
                                epsabs=1e-14, epsrel=1e-12, limit=400)
    return 2.0 * val / (math.sqrt(2.0 * math.pi) * sigma)


def _average_direct(lengths: np.ndarray, weights: np.ndarray, sigma: float) -> float:
    delta = lengths[:, None] - lengths[None, :]
    kernel = np.exp(-0.5 * sigma ** 2 * delta ** 2)
    return fsum_real(weights[:, None] * weights[None, :] * kernel)


def _average_quadrature(lengths: np.ndarray, weights: np.ndarray, sigma: float) -> float:
    def integrand(x: float) -> float:
        phase = lengths * x
        re = float(np.dot(weights, np.cos(phase)))
        im = float(np.dot(weights, np.sin(phase)))
        return (re * re + im * im) * math.exp(-0.5 * (x / sigma) ** 2)

    hi = GAUSSIAN_CUTOFF_SIGMAS * sigma
    # |S|^2 oscillates with frequencies up to the window width 2
    edges = np.arange(0.0, hi + 0.5 * math.pi, 0.5 * math.pi)
    edges[-1] = hi
    scale = float(np.sum(weights)) ** 2
    parts = []
    for lo, up in zip(edges[:-1], edges[1:]):
        if up <= lo:
            continue
        val, _ = integrate.quad(integrand, lo, up, epsabs=1e-15 * scale, epsrel=1e-11, limit=200)
        parts.append(val)
    return 2.0 * math.fsum(parts) / (math.sqrt(2.0 * math.pi) * sigma)


def gaussian_average(table: GeodesicTable, form: HarmonicForm, t: float, sigma: float,
                     method: str = "direct") -> float:
    """I(t, sigma), the Gaussian-weighted mean of |S(t, xi)|^2 over xi."""
    if not sigma > 0:
        raise BadParameters(f"sigma must be positive, got {sigma}")
    lengths, weights = _plateau_window(table, form, t)
    if lengths.size == 0:
        return 0.0
    if method == "direct":
        return _average_direct(lengths, weights, sigma)
    if method == "quadrature":
        return _average_quadrature(lengths, weights, sigma)
    raise BadParameters(f"Unknown method: {method}")


def diagonal_lower_bound(table: GeodesicTable, form: HarmonicForm, t: float) -> float:
    """Diagonal terms with |l - t| <= 1/2, where the plateau equals one."""
    _check_correlation_window(table, t)
    idx = table.window(t, 0.5)
    weights = _orbit_weights(table, form, idx)
    return fsum_real(weights ** 2)


def gaussian_average_grid(table: GeodesicTable, form: HarmonicForm, t_values: Sequence[float],
                          sigmas: Sequence[float]) -> List[GaussianAverageRow]:
    rows = []
    for t in t_values:
        diag = diagonal_lower_bound(table, form, t)
        for sigma in sigmas:
            rows.append(GaussianAverageRow(
                t=float(t), sigma=float(sigma),
                direct=gaussian_average(table, form, t, sigma, "direct"),
                quadrature=gaussian_average(table, form, t, sigma, "quadrature"),
                diagonal_bound=diag,
            ))
    return rows


def correlation_growth_ratios(table: GeodesicTable, form: HarmonicForm, t_values: Sequence[float],
                              sigma: float, pr2: float) -> List[Dict[str, float]]:
    """Empirical ratio I(t, sigma) / exp((Pr(2 omega) - 1) t) over the given centers."""
    rows = []
    for t in t_values:
        value = gaussian_average(table, form, t, sigma, "direct")
        rows.append({
            "t": float(t),
            "sigma": float(sigma),
            "average": value,
            "ratio": value / math.exp((pr2 - 1.0) * t),
        })
    return rows


# -- arithmetic level sums ---------------------------------------------------

@dataclass(frozen=True)
class LevelSum:
    m: int
    length: float
    value: float
    count: int


def arithmetic_Lm(table: GeodesicTable, form: HarmonicForm, m: int) -> LevelSum:
    """L(m): orbit weights of the records whose length is the trace-2m length."""
    if table.kind != "arithmetic":
        raise NonArithmeticTable(f"L(m) needs an arithmetic table, got kind {table.kind!r}")
    target = xm(m)
    idx = table.window(target, LM_TOLERANCE)
    return LevelSum(m, target, fsum_real(_orbit_weights(table, form, idx)), int(idx.size))


@dataclass(frozen=True)
class LevelWindowCheck:
    t: float
    sigma: float
    levels: Tuple[int, ...]
    level_sum: float
    average: float

    @property
    def holds(self) -> bool:
        return self.level_sum <= self.average * (1.0 + 1e-12)


def lm_window_check(table: GeodesicTable, form: HarmonicForm, t: float, sigma: float) -> LevelWindowCheck:
    """Compare sum of L(m)^2 over |x_m - t| <= 1/2 with I(t, sigma)."""
    levels, squares = [], []
    m = 2
    while xm(m) <= t + 0.5:
        if abs(xm(m) - t) <= 0.5:
            levels.append(m)
            squares.append(arithmetic_Lm(table, form, m).value ** 2)
        m += 1
    avg = gaussian_average(table, form, t, sigma, "direct")
    check = LevelWindowCheck(float(t), float(sigma), tuple(levels), math.fsum(squares), avg)
    if not check.holds:
        logger.warning(f"Level sum {check.level_sum:.6g} exceeds I(t, sigma) = {avg:.6g} at t={t}")
    return check
