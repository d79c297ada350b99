"""Signal types, filtering, scaling and file formats."""

from repsense.imu.filters import bandpass, lowpass
from repsense.imu.io import read_recording, write_json, write_recording
from repsense.imu.scaler import apply_scaler, fit_scaler, invert_scaler

__all__ = [
    "bandpass",
    "lowpass",
    "read_recording",
    "write_json",
    "write_recording",
    "apply_scaler",
    "fit_scaler",
    "invert_scaler",
]
