# config/__init__.py
"""Configuration modules for the gNLS lab"""

from .settings import LabConfig, get_config

__all__ = ['LabConfig', 'get_config']
