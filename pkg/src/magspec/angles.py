"""Angle arithmetic on the circle.

Every angle handled by the toolkit is reduced to the canonical interval
(-pi, pi].  Comparisons are made modulo 2*pi through `angle_distance`, which
returns min over k of |a - b - 2*pi*k|.
"""

import math

TAU = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Canonical representative of theta in (-pi, pi]."""
    phi = math.remainder(theta, TAU)
    if phi <= -math.pi:
        phi += TAU
    return phi


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    return abs(math.remainder(a - b, TAU))


def angles_close(a: float, b: float, tol: float = 1e-12) -> bool:
    """True when a and b agree modulo 2*pi within tol."""
    return angle_distance(a, b) <= tol
