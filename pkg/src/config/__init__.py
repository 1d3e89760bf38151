# Config module for GeoSpec
"""
Configuration management for the length-spectrum laboratory.
"""

from .settings import Settings, get_settings, reload_settings

__all__ = ['Settings', 'get_settings', 'reload_settings']
