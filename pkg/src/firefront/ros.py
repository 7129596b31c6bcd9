"""Anisotropic rate-of-spread kernel.

The local spread figure around a burning point is a wind-stretched oval
built from a head rate, a back rate and the wind speed. Its polar radius
r(theta) gives the rate of spread (m/min) in each direction; scaled by a
time step it becomes the wavelet polygon that drives front propagation.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpreadError
from .geometry import Angle, FireFront, Point2

# Radii are floored at this fraction of the oval's mean radius so the
# wavelet stays a valid star-shaped polygon even where the raw polar curve
# dips below zero (strongly wind-stretched ovals do, near the flanks).
_RADIUS_FLOOR = 1e-12


@dataclass(frozen=True)
class RosPair:
    """Head and back rate of spread at one point, in m/min."""

    head: float
    back: float

    def __post_init__(self):
        if not (math.isfinite(self.head) and math.isfinite(self.back)):
            raise DegenerateSpreadError(f"non-finite spread rates ({self.head}, {self.back})")
        if self.back < 0.0:
            raise DegenerateSpreadError(f"back rate must be >= 0, got {self.back}")
        if self.head < self.back:
            raise DegenerateSpreadError(
                f"head rate {self.head} must be >= back rate {self.back}"
            )


@dataclass(frozen=True)
class EnvSample:
    """Environment at one point: wind, spread orientation, moisture.

    `wind_dir` points where the wind blows toward (math convention,
    radians CCW from +x), which is also the heading of fastest spread.
    `max_spread_dir` is an extra rotation applied when observations show
    the fastest growth off the wind axis; None means no offset. `moisture`
    is live fuel moisture in percent of dry mass.
    """

    wind_speed: float
    wind_dir: Angle
    max_spread_dir: Angle | None = None
    moisture: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.wind_speed) or self.wind_speed < 0.0:
            raise DegenerateSpreadError(
                f"wind speed must be finite and >= 0, got {self.wind_speed}"
            )
        if not math.isfinite(self.moisture) or self.moisture < 0.0:
            raise DegenerateSpreadError(f"moisture must be finite and >= 0, got {self.moisture}")

    def heading(self) -> Angle:
        """Direction of maximum spread (wind direction plus offset)."""
        if self.max_spread_dir is None:
            return self.wind_dir
        return self.wind_dir + self.max_spread_dir


@dataclass(frozen=True)
class EllipseParams:
    """Coefficients (a, b, c) and orientation of the polar spread figure.

    r(phi) = a*b / sqrt(a^2 cos^2 phi + b^2 sin^2 phi) + c*cos(phi), with
    phi measured from `orientation`. b + c is the head rate, b - c the
    back rate, and a the flank rate.
    """

    a: float
    b: float
    c: float
    orientation: Angle

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise DegenerateSpreadError(
                f"non-finite spread shape ({self.a}, {self.b}, {self.c})"
            )
        if self.b <= 0.0:
            raise DegenerateSpreadError(f"mean radius b must be > 0, got {self.b}")
        if not 0.0 <= self.c < self.b:
            raise DegenerateSpreadError(
                f"offset c={self.c} must satisfy 0 <= c < b={self.b} (back rate must stay > 0)"
            )
        if self.a <= 0.0:
            raise DegenerateSpreadError(f"flank radius a must be > 0, got {self.a}")


def compute_abc(ros: RosPair, env: EnvSample) -> EllipseParams:
    """Map head/back rates and wind to the oval coefficients.

    a = (1 + 0.25 U) / (2 (R_H + R_B)),  b = (R_H + R_B) / 2,
    c = (R_H - R_B) / 2, oriented along the spread heading. The a formula
    is used verbatim even though it shrinks as total spread grows; the
    worked figures downstream depend on this exact form.
    """
    total = ros.head + ros.back
    if total <= 0.0:
        raise DegenerateSpreadError(
            f"head + back rates must be positive, got {ros.head} + {ros.back}"
        )
    return EllipseParams(
        a=(1.0 + 0.25 * env.wind_speed) / (2.0 * total),
        b=total / 2.0,
        c=(ros.head - ros.back) / 2.0,
        orientation=env.heading(),
    )


def spread_params(ros: RosPair, env: EnvSample) -> EllipseParams:
    """Oval coefficients for a point, with the isotropic special case.

    When the head and back rates agree and there is no wind the spread is
    a circle of radius R; the general mapping would still pinch the
    flanks, so that case short-circuits to a = b = R, c = 0.
    """
    if ros.head == ros.back and env.wind_speed == 0.0:
        if ros.head <= 0.0:
            raise DegenerateSpreadError(f"isotropic rate must be positive, got {ros.head}")
        return EllipseParams(a=ros.head, b=ros.head, c=0.0, orientation=env.heading())
    return compute_abc(ros, env)


def directional_ros(params: EllipseParams, theta: Angle) -> float:
    """Rate of spread (m/min) in absolute direction `theta`.

    The raw polar curve can dip below zero on the flank-adjacent arcs of
    strongly stretched ovals; the result is floored at a tiny positive
    value so downstream wavelets remain simple polygons.
    """
    phi = theta.radians - params.orientation.radians
    a, b, c = params.a, params.b, params.c
    r = a * b / math.sqrt((a * math.cos(phi)) ** 2 + (b * math.sin(phi)) ** 2) + c * math.cos(phi)
    return max(r, _RADIUS_FLOOR * b)


def directional_ros_profile(params: EllipseParams, thetas: np.ndarray) -> np.ndarray:
    """Vectorized `directional_ros` over an array of angles (radians)."""
    phi = np.asarray(thetas, dtype=float) - params.orientation.radians
    a, b, c = params.a, params.b, params.c
    r = a * b / np.sqrt((a * np.cos(phi)) ** 2 + (b * np.sin(phi)) ** 2) + c * np.cos(phi)
    return np.maximum(r, _RADIUS_FLOOR * b)


def wavelet_ring(params: EllipseParams, center: Point2, dt: float, n_theta: int) -> np.ndarray:
    """Wavelet vertices as a bare (n_theta, 2) array, CCW, ring open."""
    if dt <= 0.0 or not math.isfinite(dt):
        raise DegenerateSpreadError(f"dt must be a positive number of minutes, got {dt}")
    if n_theta < 16:
        raise DegenerateSpreadError(f"n_theta must be >= 16, got {n_theta}")
    thetas = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    r = directional_ros_profile(params, thetas) * dt
    return np.column_stack((center.x + r * np.cos(thetas), center.y + r * np.sin(thetas)))


def wavelet_polygon(params: EllipseParams, center: Point2, dt: float,
                    n_theta: int = 128) -> FireFront:
    """Polygonal wavelet grown from `center` over `dt` minutes.

    Vertices sample the spread figure at n_theta uniformly spaced
    directions, counterclockwise. An inscribed polygon underestimates
    each radius by at most r * (1 - cos(pi / n_theta)). The front's time
    is `dt` (minutes since the wavelet's own ignition).
    """
    ring = wavelet_ring(params, center, dt, n_theta)
    return FireFront(tuple(Point2(float(x), float(y)) for x, y in ring), time=dt)


# Spread conditions as a function of position: maps a point in the local
# plane to the head/back rates and the environment sample there.
RosField = Callable[[Point2], tuple[RosPair, EnvSample]]
