"""
Harmonic 1-forms as period vectors.

A form is identified with the homomorphism gamma -> int_gamma omega on
homology; the integral over a closed geodesic is the pairing of the period
vector with the geodesic's homology vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import BadParameters, DimensionMismatch, EmptyWindow
from src.core.geodesics import GeodesicRecord, GeodesicTable
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class HarmonicForm:
    periods: Tuple[float, ...]

    @classmethod
    def from_decimal_strings(cls, values: Sequence[str]) -> HarmonicForm:
        try:
            return cls(tuple(float(Decimal(str(v))) for v in values))
        except InvalidOperation as e:
            raise BadParameters(f"Periods must be decimal strings: {values}") from e

    @classmethod
    def zero(cls, rank: int) -> HarmonicForm:
        return cls((0.0,) * rank)

    @classmethod
    def basis(cls, index: int, rank: int) -> HarmonicForm:
        return cls(tuple(1.0 if i == index else 0.0 for i in range(rank)))

    @property
    def dimension(self) -> int:
        return len(self.periods)

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.periods, dtype=float)

    def is_zero(self) -> bool:
        return not any(self.periods)

    def __mul__(self, scale: float) -> HarmonicForm:
        return HarmonicForm(tuple(scale * p for p in self.periods))

    __rmul__ = __mul__

    def __neg__(self) -> HarmonicForm:
        return HarmonicForm(tuple(-p for p in self.periods))

    def __add__(self, other: HarmonicForm) -> HarmonicForm:
        _check_dimension(self, other.dimension)
        return HarmonicForm(tuple(a + b for a, b in zip(self.periods, other.periods)))


def _check_dimension(form: HarmonicForm, rank: int):
    if form.dimension != rank:
        raise DimensionMismatch(f"Form has {form.dimension} periods, homology rank is {rank}")


def integral(form: HarmonicForm, rec: GeodesicRecord) -> float:
    """int_gamma omega = <periods, homology(gamma)>."""
    _check_dimension(form, len(rec.homology))
    return math.fsum(p * h for p, h in zip(form.periods, rec.homology))


def average(form: HarmonicForm, rec: GeodesicRecord) -> float:
    """Mean of omega along gamma; unchanged under gamma -> gamma^k."""
    if not rec.length > 0:
        raise ValueError("Geodesic length must be positive")
    return integral(form, rec) / rec.length


def integrals(form: HarmonicForm, table: GeodesicTable) -> np.ndarray:
    """Integrals over every record of ``table`` (same order).

    Each row is an exactly rounded sum, so reversed orientations give exactly
    negated values.
    """
    _check_dimension(form, table.rank)
    if not len(table):
        return np.zeros(0)
    terms = table.homology_matrix.astype(float) * form.vector
    return np.array([math.fsum(row) for row in terms.tolist()], dtype=float)


def averages(form: HarmonicForm, table: GeodesicTable) -> np.ndarray:
    return integrals(form, table) / table.lengths


def stable_norm_witness(table: GeodesicTable, form: HarmonicForm) -> GeodesicRecord:
    """Record attaining the largest average (first in table order on ties)."""
    if not len(table):
        raise EmptyWindow("Stable norm needs a nonempty table")
    return table.records[int(np.argmax(averages(form, table)))]


def stable_norm_lb(table: GeodesicTable, form: HarmonicForm) -> float:
    """Certified lower bound max_gamma mean(omega, gamma) for the stable norm."""
    if not len(table):
        raise EmptyWindow("Stable norm needs a nonempty table")
    return float(np.max(averages(form, table)))


def max_average(table: GeodesicTable, form: HarmonicForm, primitive_only: bool = False) -> Optional[Tuple[GeodesicRecord, float]]:
    """(record, average) with the largest average, optionally over primitive records."""
    source = table.primitive() if primitive_only else table
    if not len(source):
        return None
    values = averages(form, source)
    idx = int(np.argmax(values))
    return source.records[idx], float(values[idx])
