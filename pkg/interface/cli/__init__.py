"""
CLI Package - command-line entry point, configuration and output writers
"""

from .app import build_parser, main
from .config import RunConfig, Settings, build_params, build_run_config, get_settings, reset_settings
from .io import read_series_csv, write_json, write_series_csv
from .plot import save_svg

__all__ = [
    'build_parser',
    'main',
    'RunConfig',
    'Settings',
    'build_params',
    'build_run_config',
    'get_settings',
    'reset_settings',
    'read_series_csv',
    'write_json',
    'write_series_csv',
    'save_svg',
]
