"""Utility modules for the array design toolkit."""
from .config import Config
from .logger import setup_logger

__all__ = ['Config', 'setup_logger']
