import math

import numpy as np

TWO_PI = 2.0 * math.pi


def hz_to_rad(value):
    """Convert a frequency or rate in Hz to rad/s."""
    return np.multiply(value, TWO_PI) if np.ndim(value) else value * TWO_PI


def rad_to_hz(value):
    """Convert a frequency or rate in rad/s to Hz."""
    return np.divide(value, TWO_PI) if np.ndim(value) else value / TWO_PI
