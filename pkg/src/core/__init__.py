# Core module for GeoSpec
"""
Core components: Moebius algebra, surface models, words and geodesic enumeration.
"""

from .exceptions import GeospecError
from .fuchsian import GroupElement, QuadInt, length_from_trace, mul, power_trace
from .geodesics import GeodesicRecord, GeodesicTable, enumerate_geodesics
from .surfaces import SurfacePresentation, arithmetic_element, octagon_group, xm
from .words import canonical_cyclic, primitive_decompose

__all__ = [
    'GeospecError',
    'GroupElement', 'QuadInt', 'mul', 'length_from_trace', 'power_trace',
    'SurfacePresentation', 'octagon_group', 'arithmetic_element', 'xm',
    'canonical_cyclic', 'primitive_decompose',
    'GeodesicRecord', 'GeodesicTable', 'enumerate_geodesics',
]
