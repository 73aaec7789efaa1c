"""
Kinematic features of track sequences.
"""

import numpy as np

from ingestion import TrackSequence


def acceleration_profile(stamps: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """
    Acceleration magnitude at each interior sample.

    Non-uniform central second difference, exact for quadratic motion:
    ``a_i = 2 * (v_forward - v_backward) / (dt_backward + dt_forward)``.
    """
    stamps = np.asarray(stamps, dtype=float)
    positions = np.asarray(positions, dtype=float)
    if len(stamps) < 3:
        return np.zeros(0)
    dt = np.diff(stamps)
    velocity = np.diff(positions, axis=0) / dt[:, None]
    accel = 2.0 * (velocity[1:] - velocity[:-1]) / (dt[:-1] + dt[1:])[:, None]
    return np.linalg.norm(accel, axis=1)


def max_acceleration(seq: TrackSequence) -> float:
    """Largest interior acceleration; 0 when the sequence has fewer than 3 samples."""
    profile = acceleration_profile(seq.stamps, seq.positions)
    return float(profile.max()) if len(profile) else 0.0
