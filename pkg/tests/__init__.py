"""Test suite for the sensor-array design toolkit."""
