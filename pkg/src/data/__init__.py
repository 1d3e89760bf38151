# Data module for GeoSpec
"""
Run configuration, result models and geodesic table persistence.
"""

from .cache import get_cache
from .models import ReportBundle, RunConfig
from .table_io import export_csv, load_table, save_table

__all__ = ['RunConfig', 'ReportBundle', 'save_table', 'load_table', 'export_csv', 'get_cache']
