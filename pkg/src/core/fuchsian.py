"""
Mobius-matrix algebra for cocompact Fuchsian groups.

Group elements live in PSL(2,R): a matrix and its negative are the same
element, so only |trace| is ever reported. Exact elements have entries in
Z[sqrt n], with the off-diagonal entries carrying an extra sqrt(p) factor,
which is the shape of the quaternion matrices of the arithmetic family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.exceptions import BackingMismatch, NonHyperbolic
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Lengths are plain floats in hyperbolic length units.
LengthValue = float

DET_TOLERANCE = 1e-12


@dataclass(frozen=True)
class QuadInt:
    """a + b*sqrt(n) with arbitrary-width integer components."""

    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"QuadInt radicand must be positive: {self.n}")

    @classmethod
    def of(cls, value: int, n: int) -> QuadInt:
        return cls(int(value), 0, n)

    def _check(self, other: QuadInt):
        if self.n != other.n:
            raise ValueError(f"QuadInt radicands differ: {self.n} vs {other.n}")

    def __add__(self, other: QuadInt) -> QuadInt:
        self._check(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.n)

    def __sub__(self, other: QuadInt) -> QuadInt:
        self._check(other)
        return QuadInt(self.a - other.a, self.b - other.b, self.n)

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b, self.n)

    def __mul__(self, other) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other, self.n)
        self._check(other)
        return QuadInt(
            self.a * other.a + self.b * other.b * self.n,
            self.a * other.b + self.b * other.a,
            self.n,
        )

    __rmul__ = __mul__

    def conj(self) -> QuadInt:
        return QuadInt(self.a, -self.b, self.n)

    def norm(self) -> int:
        return self.a * self.a - self.b * self.b * self.n

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.n)

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}*sqrt({self.n})"


@dataclass(frozen=True)
class ExactEntries:
    """[[alpha, beta*sqrt(p)], [gamma*sqrt(p), delta]] over Z[sqrt n]."""

    alpha: QuadInt
    beta: QuadInt
    gamma: QuadInt
    delta: QuadInt
    p: int

    def det(self) -> QuadInt:
        return self.alpha * self.delta - (self.beta * self.gamma) * self.p

    def trace(self) -> QuadInt:
        return self.alpha + self.delta

    def __matmul__(self, other: ExactEntries) -> ExactEntries:
        if self.p != other.p:
            raise BackingMismatch(f"sqrt(p) factors differ: {self.p} vs {other.p}")
        p = self.p
        return ExactEntries(
            alpha=self.alpha * other.alpha + (self.beta * other.gamma) * p,
            beta=self.alpha * other.beta + self.beta * other.delta,
            gamma=self.gamma * other.alpha + self.delta * other.gamma,
            delta=(self.gamma * other.beta) * p + self.delta * other.delta,
            p=p,
        )

    def inverse(self) -> ExactEntries:
        # det = 1, so the adjugate is the inverse
        return ExactEntries(self.delta, -self.beta, -self.gamma, self.alpha, self.p)

    def to_array(self) -> np.ndarray:
        root_p = math.sqrt(self.p)
        return np.array(
            [
                [self.alpha.to_float(), self.beta.to_float() * root_p],
                [self.gamma.to_float() * root_p, self.delta.to_float()],
            ],
            dtype=float,
        )


class GroupElement:
    """An element of PSL(2,R) with exact or float backing.

    Instances are immutable; the float matrix is a read-only array.
    """

    __slots__ = ("_matrix", "_exact")

    def __init__(self, matrix: np.ndarray, exact: Optional[ExactEntries] = None):
        m = np.array(matrix, dtype=float).reshape(2, 2)
        if exact is None:
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            scale = max(1.0, float(np.max(np.abs(m))) ** 2)
            if abs(det - 1.0) > DET_TOLERANCE * scale:
                raise ValueError(f"Determinant must be 1, got {det!r}")
        else:
            det = exact.det()
            if det != QuadInt.of(1, det.n):
                raise ValueError(f"Exact determinant must be 1, got {det}")
        m.setflags(write=False)
        self._matrix = m
        self._exact = exact

    @classmethod
    def from_exact(cls, entries: ExactEntries) -> GroupElement:
        return cls(entries.to_array(), entries)

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(np.eye(2))

    @property
    def backing(self) -> str:
        return "exact" if self._exact is not None else "float"

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def exact(self) -> Optional[ExactEntries]:
        return self._exact

    @property
    def det(self) -> float:
        m = self._matrix
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    @property
    def trace(self) -> float:
        """|trace| (PSL convention)."""
        if self._exact is not None:
            return abs(self._exact.trace().to_float())
        return abs(float(self._matrix[0, 0] + self._matrix[1, 1]))

    @property
    def exact_trace(self) -> Optional[QuadInt]:
        return None if self._exact is None else self._exact.trace()

    @property
    def length(self) -> LengthValue:
        return length_from_trace(self.trace)

    def to_float(self) -> GroupElement:
        return GroupElement(self._matrix)

    def inverse(self) -> GroupElement:
        if self._exact is not None:
            return GroupElement.from_exact(self._exact.inverse())
        m = self._matrix
        return GroupElement(np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]))

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return mul(self, other)

    def __repr__(self) -> str:
        return f"GroupElement(backing={self.backing}, trace={self.trace:.12g})"


def mul(g: GroupElement, h: GroupElement, exact: Optional[bool] = None) -> GroupElement:
    """Matrix product. exact x exact stays exact; anything with a float factor is float.

    Passing ``exact=True`` demands an exact result and raises BackingMismatch
    when either factor is float backed.
    """
    both_exact = g.exact is not None and h.exact is not None
    if exact and not both_exact:
        raise BackingMismatch("Exact product requested from a float-backed factor")
    if both_exact and exact is not False:
        return GroupElement.from_exact(g.exact @ h.exact)
    return GroupElement(g.matrix @ h.matrix)


def acosh_polished(x: float) -> float:
    """arccosh via the log form plus one Newton step on cosh(y) = x."""
    if x < 1.0:
        raise ValueError(f"arccosh argument below 1: {x!r}")
    # x - 1 is exact for x in [1, 2]; both the start and the residual are written in it
    u = x - 1.0
    y = math.log1p(u + math.sqrt(u * (x + 1.0)))
    sh = math.sinh(y)
    if sh > 0.0:
        y -= (2.0 * math.sinh(0.5 * y) ** 2 - u) / sh
    return y


def length_from_trace(t: float) -> LengthValue:
    """Translation length 2*arccosh(|t|/2) of a hyperbolic element."""
    at = abs(float(t))
    if not at > 2.0:
        raise NonHyperbolic(f"|trace| = {at!r} <= 2 has no translation length")
    return 2.0 * acosh_polished(at / 2.0)


def trace_from_length(length: float) -> float:
    return 2.0 * math.cosh(length / 2.0)


def power_trace(t: float, k: int) -> float:
    """Trace of g^k from trace t of g (Chebyshev recursion t_k = t t_{k-1} - t_{k-2})."""
    if k < 1:
        raise ValueError(f"Power must be >= 1, got {k}")
    prev, cur = 2.0 if isinstance(t, float) else 2, t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - prev
    return cur


def power_trace_exact(t: QuadInt, k: int) -> QuadInt:
    """Chebyshev recursion over Z[sqrt n]."""
    if k < 1:
        raise ValueError(f"Power must be >= 1, got {k}")
    prev, cur = QuadInt.of(2, t.n), t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - prev
    return cur
