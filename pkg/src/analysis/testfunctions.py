"""
Test functions for the trace formula and their Fourier transforms.

Two families:
  bump_scaled   f(s) = phi((s - d) / eps),  phi(s) = exp(1 - 1/(1 - s^2)) on (-1, 1)
  modulated     f(s) = exp(i s xi) psi(s - t), psi even, 1 on [-1/2, 1/2], 0 off (-1, 1)

Transforms use the convention  f^(r) = int exp(-i r s) f(s) ds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Tuple

import numpy as np
from scipy import integrate

QUAD_LIMIT = 400
BASE_EPSABS = 1e-15
BASE_EPSREL = 1e-13


def bump(s) -> np.ndarray:
    """Smooth bump exp(1 - 1/(1 - s^2)) on (-1, 1); phi(0) = 1."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def _smooth_step(x) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 1.0, 1.0, 0.0)
    mid = (x > 0.0) & (x < 1.0)
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = a / (a + b)
    return out


def plateau(s) -> np.ndarray:
    """Even plateau: 1 on [-1/2, 1/2], smooth shoulders, support in (-1, 1)."""
    s = np.asarray(s, dtype=float)
    return _smooth_step(2.0 * (1.0 - np.abs(s)))


def _scalar(profile: Callable) -> Callable[[float], float]:
    return lambda s: float(profile(np.array([s]))[0])


_bump_scalar = _scalar(bump)
_plateau_scalar = _scalar(plateau)


def _even_transform(profile: Callable[[float], float], u: float) -> float:
    """2 int_0^1 profile(s) cos(u s) ds for an even profile supported in [-1, 1]."""
    u = abs(u)
    if u == 0.0:
        val, _ = integrate.quad(profile, 0.0, 1.0, epsabs=BASE_EPSABS, epsrel=BASE_EPSREL, limit=QUAD_LIMIT)
    else:
        val, _ = integrate.quad(profile, 0.0, 1.0, weight="cos", wvar=u,
                                epsabs=BASE_EPSABS, epsrel=BASE_EPSREL, limit=QUAD_LIMIT)
    return 2.0 * val


@lru_cache(maxsize=65536)
def _phi_hat(u: float) -> float:
    return _even_transform(_bump_scalar, u)


@lru_cache(maxsize=65536)
def _psi_hat(u: float) -> float:
    return _even_transform(_plateau_scalar, u)


def phi_hat(u: float) -> float:
    """Transform of the base bump at real frequency u (real and even)."""
    return _phi_hat(abs(float(u)))


def psi_hat(u: float) -> float:
    """Transform of the base plateau at real frequency u (real and even)."""
    return _psi_hat(abs(float(u)))


def oscillatory_integral(func: Callable[[float], complex], lo: float, hi: float, r: complex,
                         is_complex: bool, epsabs: float = 1e-13) -> complex:
    """int_lo^hi func(s) exp(-i r s) ds for complex r = a + ib.

    The factor exp(b s) is folded into the amplitude and the oscillation
    exp(-i a s) is handled by QUADPACK's cos/sin weighted rules.
    """
    a, b = float(np.real(r)), float(np.imag(r))

    def part(fn, weight):
        if a == 0.0:
            if weight == "sin":
                return 0.0
            val, _ = integrate.quad(fn, lo, hi, epsabs=epsabs, epsrel=1e-12, limit=QUAD_LIMIT)
            return val
        val, _ = integrate.quad(fn, lo, hi, weight=weight, wvar=a,
                                epsabs=epsabs, epsrel=1e-12, limit=QUAD_LIMIT)
        return val

    fr = lambda s: float(np.real(func(s))) * math.exp(b * s)
    re_val = part(fr, "cos")
    im_val = -part(fr, "sin")
    if is_complex:
        fi = lambda s: float(np.imag(func(s))) * math.exp(b * s)
        re_val += part(fi, "sin")
        im_val += part(fi, "cos")
    return complex(re_val, im_val)


def base_hat_complex(profile: Callable[[float], float], u: complex) -> complex:
    """Transform of an even base profile at complex frequency."""
    if np.imag(u) == 0.0:
        return complex(_even_transform(profile, float(np.real(u))))
    return oscillatory_integral(lambda s: profile(s), -1.0, 1.0, u, is_complex=False)


@dataclass(frozen=True)
class HatComponent:
    """One term coef * amp(r) * exp(-i omega r) of a transform on the real line."""

    coef: complex
    amp: Callable[[float], float]
    omega: float
    center: float
    scale: float
    base: str

    def amplitudes(self, r) -> np.ndarray:
        """amp on an array of real r through the Gauss-Legendre base transform."""
        u = self.scale * (np.asarray(r, dtype=float) - self.center)
        return base_hat_gauss_legendre(self.base, u)


@dataclass(frozen=True)
class TestFunction:
    """A member of one of the two test-function families."""

    __test__ = False

    kind: str
    eps: float = 1.0
    d: float = 0.0
    t: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        if self.kind not in ("bump_scaled", "modulated"):
            raise ValueError(f"Unknown test function kind: {self.kind}")
        if self.kind == "bump_scaled" and not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    @classmethod
    def bump_scaled(cls, eps: float, d: float) -> TestFunction:
        return cls(kind="bump_scaled", eps=float(eps), d=float(d))

    @classmethod
    def modulated(cls, t: float, xi: float) -> TestFunction:
        return cls(kind="modulated", t=float(t), xi=float(xi))

    @property
    def is_complex(self) -> bool:
        return self.kind == "modulated" and self.xi != 0.0

    @property
    def support(self) -> Tuple[float, float]:
        if self.kind == "bump_scaled":
            return self.d - self.eps, self.d + self.eps
        return self.t - 1.0, self.t + 1.0

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "bump_scaled":
            return bump((s - self.d) / self.eps)
        return np.exp(1j * s * self.xi) * plateau(s - self.t)

    def fourier_hat(self, r: complex) -> complex:
        """Closed scaling law from the base transforms."""
        if self.kind == "bump_scaled":
            base = base_hat_complex(_bump_scalar, self.eps * r)
            return self.eps * base * cmath.exp(-1j * self.d * r)
        base = base_hat_complex(_plateau_scalar, r - self.xi)
        return base * cmath.exp(-1j * (r - self.xi) * self.t)

    def hat_components(self) -> List[HatComponent]:
        if self.kind == "bump_scaled":
            eps = self.eps
            amp = lambda r: phi_hat(eps * r)
            return [HatComponent(eps, amp, self.d, 0.0, eps, self.kind)]
        xi = self.xi
        amp = lambda r: psi_hat(r - xi)
        return [HatComponent(cmath.exp(1j * xi * self.t), amp, self.t, xi, 1.0, self.kind)]


@dataclass(frozen=True)
class SymmetrizedG:
    """g(s) = f(s) + f(-s) for a test function f."""

    f: TestFunction

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.f(s) + self.f(-s)

    @property
    def is_complex(self) -> bool:
        return self.f.is_complex

    @property
    def support_radius(self) -> float:
        lo, hi = self.f.support
        return max(abs(lo), abs(hi))

    def hat_components(self) -> List[HatComponent]:
        """Components of g^(r) = f^(r) + f^(-r) on the real line."""
        comps = []
        for c in self.f.hat_components():
            comps.append(c)
            amp = c.amp
            comps.append(HatComponent(c.coef, (lambda a: (lambda r: a(-r)))(amp), -c.omega, -c.center, c.scale, c.base))
        return comps

    def hat_scaling(self, r: complex) -> complex:
        return self.f.fourier_hat(r) + self.f.fourier_hat(-r)


def fourier_hat(g: SymmetrizedG, r: complex) -> complex:
    """g^(r) by adaptive quadrature over the compact support.

    Absolute error target 1e-10 * exp(T |Im r|), T the support radius.
    """
    lo, hi = g.f.support
    epsabs = 1e-12 * math.exp(g.support_radius * abs(float(np.imag(r))))
    f = g.f
    direct = oscillatory_integral(lambda s: f(np.array([s]))[0], lo, hi, r, f.is_complex, epsabs)
    mirrored = oscillatory_integral(lambda s: f(np.array([-s]))[0], -hi, -lo, r, f.is_complex, epsabs)
    return direct + mirrored


def composite_gauss_legendre(lo: float, hi: float, panels: int, order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


BASE_PANEL_STEP = 64


@lru_cache(maxsize=64)
def _base_rule(kind: str, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = composite_gauss_legendre(0.0, 1.0, panels)
    profile = bump(nodes) if kind == "bump_scaled" else plateau(nodes)
    return nodes, 2.0 * weights * profile


def base_hat_gauss_legendre(kind: str, u, panels: int = 128, block_size: int = 4_000_000) -> np.ndarray:
    """Vectorised base transform by composite Gauss-Legendre on [0, 1].

    Panels are added for large frequencies so that no panel holds more than
    half an oscillation of cos(u s).
    """
    u = np.abs(np.asarray(u, dtype=float))
    if u.size == 0:
        return u.copy()
    needed = max(panels, int(math.ceil(float(u.max()) / math.pi)))
    needed = BASE_PANEL_STEP * int(math.ceil(needed / BASE_PANEL_STEP))
    nodes, wp = _base_rule(kind, needed)
    chunk = max(1, block_size // nodes.size)
    out = np.empty_like(u)
    flat_u, flat_out = u.ravel(), out.ravel()
    for start in range(0, flat_u.size, chunk):
        block = flat_u[start:start + chunk]
        flat_out[start:start + chunk] = np.cos(np.outer(block, nodes)) @ wp
    return flat_out.reshape(u.shape)
