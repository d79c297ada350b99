"""Exercise quality scoring from wrist IMU recordings."""

__version__ = "0.1.0"
