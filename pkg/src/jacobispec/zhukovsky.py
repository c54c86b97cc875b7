"""The map ``lambda(z) = z + 1/z`` between the punctured disk and the off-band plane.

The open punctured unit disk maps bijectively onto the complement of the
segment ``[-2, 2]``; the unit circle maps onto the segment itself.  This
module provides the map, its stable inverse branch and the geometric
functionals built on it.
"""

from __future__ import annotations

import cmath
import math

BAND_TOL = 1e-14  # declared tolerance for "lambda sits on [-2, 2]"

_DISTORTION_LOW = 0.5
_DISTORTION_HIGH = (1.0 + math.sqrt(2.0)) / 2.0


def lambda_of_z(z: complex) -> complex:
    """Evaluate ``z + 1/z``; ``z = 0`` is rejected."""
    if z == 0:
        raise ValueError("z = 0 is not in the domain")
    return z + 1.0 / z


def z_of_lambda(lam: complex) -> complex:
    """Inverse branch: the root of ``z^2 - lam*z + 1 = 0`` inside the unit disk.

    Points within ``BAND_TOL`` of the segment ``[-2, 2]`` are rejected as
    boundary values.  The quadratic is solved cancellation-free: the larger
    root is formed by adding ``lam`` and the square root constructively, the
    small root is its exact reciprocal.
    """
    lam = complex(lam)
    if dist_to_band(lam) <= BAND_TOL:
        raise ValueError(f"lambda = {lam} lies on the spectral band [-2, 2]")
    s = cmath.sqrt(lam * lam - 4.0)
    if abs(lam + s) >= abs(lam - s):
        big = (lam + s) / 2.0
    else:
        big = (lam - s) / 2.0
    return 1.0 / big


def dist_to_band(lam: complex) -> float:
    """Euclidean distance from ``lam`` to the segment ``[-2, 2]``."""
    lam = complex(lam)
    x, y = lam.real, lam.imag
    if abs(x) <= 2.0:
        return abs(y)
    return math.hypot(abs(x) - 2.0, y)


def cassini_radius(lam: complex) -> float:
    """The Cassini functional ``|lambda^2 - 4|``."""
    lam = complex(lam)
    return abs(lam * lam - 4.0)


def omega(z: complex) -> complex:
    """The weight ``2z / (1 - z^2)``; poles at ``z = +-1`` are rejected."""
    z = complex(z)
    if z == 1 or z == -1:
        raise ValueError("omega has poles at z = +-1")
    return 2.0 * z / (1.0 - z * z)


def distortion_check(z: complex, slack: float = 1e-10) -> bool:
    """Verify the two-sided distortion bracket for the map at ``z``.

    With ``q = |1 - z^2| (1 - |z|) / |z|`` the distance from ``lambda(z)`` to
    the band is pinched between ``q/2`` and ``(1 + sqrt(2))/2 * q``.
    """
    z = complex(z)
    r = abs(z)
    if not 0.0 < r < 1.0:
        raise ValueError("z must lie in the punctured open unit disk")
    q = abs(1.0 - z * z) * (1.0 - r) / r
    d = dist_to_band(lambda_of_z(z))
    return (_DISTORTION_LOW * q <= d + slack) and (d <= _DISTORTION_HIGH * q + slack)
