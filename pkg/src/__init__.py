"""Sensor-array design by greedy mutual-information maximization."""
__version__ = '1.0.0'
