# Shared fixtures for GeoSpec tests
import math

import pytest

from src.core.geodesics import GeodesicRecord, GeodesicTable, enumerate_geodesics
from src.core.surfaces import octagon_group, xm

DIGEST = bytes(range(32))
LETTERS = (1, -1, 2, -2)


def dummy_word(i):
    """Distinct short word for the i-th synthetic class."""
    digits = []
    while True:
        i, r = divmod(i, 4)
        digits.append(LETTERS[r])
        if i == 0:
            return (1,) + tuple(digits)


def build_table(entries, rank=2, cutoff=None, complete_below=None, kind="synthetic"):
    """Table from (length, homology) pairs; each entry becomes its own primitive class."""
    records = []
    for i, (length, hom) in enumerate(entries):
        records.append(GeodesicRecord(
            canon=dummy_word(i),
            length=float(length),
            primitive_length=float(length),
            power=1,
            homology=tuple(hom),
        ))
    top = max((r.length for r in records), default=1.0)
    cutoff = top if cutoff is None else cutoff
    complete_below = cutoff if complete_below is None else complete_below
    return GeodesicTable(DIGEST, cutoff, complete_below, tuple(records), rank, kind)


@pytest.fixture
def make_table():
    return build_table


@pytest.fixture(scope="session")
def octagon():
    return octagon_group()


@pytest.fixture(scope="session")
def octagon_table(octagon):
    return enumerate_geodesics(octagon, 6.0)


@pytest.fixture(scope="session")
def growth_table():
    """Lengths 1..10 with multiplicity floor(exp(0.7 t)) and zero homology."""
    entries = []
    for t in range(1, 11):
        entries.extend([(t, (0, 0))] * int(math.floor(math.exp(0.7 * t))))
    return build_table(entries, cutoff=10.5)


@pytest.fixture(scope="session")
def arithmetic_table():
    """Classes at the trace-2m lengths, in inverse pairs, kind 'arithmetic'."""
    entries = []
    for m in range(2, 7):
        entries.append((xm(m), (1, 0)))
        entries.append((xm(m), (-1, 0)))
        entries.append((xm(m), (0, 0)))
    return build_table(entries, cutoff=8.0, kind="arithmetic")


@pytest.fixture(scope="session")
def octagon_table_long(octagon):
    """Octagon spectrum to L=10, long enough for unit pressure windows near 9."""
    return enumerate_geodesics(octagon, 10.0)
