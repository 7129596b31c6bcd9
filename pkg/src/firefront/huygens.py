"""Wavefront propagation by per-vertex wavelet envelopes.

Each step grows an anisotropic wavelet from every front vertex, unions the
wavelets with the burned region and takes the outer boundary of the result
as the next front. Vertices whose head and back rates are both zero are
treated as stalled and spawn no wavelet; the burned region never shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.polygon import orient

from .errors import PropagationError
from .geometry import FireFront, Point2, densify_ring
from .ros import RosField, spread_params, wavelet_ring

# Near-coincident vertices in the unioned envelope are welded onto a grid
# this fine, relative to the envelope's bounding-box diagonal.
_SNAP_FRACTION = 1e-9


@dataclass(frozen=True)
class PropagationStep:
    """One propagation step: duration, spread field and discretization.

    `ros_field` supplies per-position rates and environment; it can also
    be passed to propagate_once directly. `resample_spacing` caps the
    vertex gap (meters) before wavelets are grown; None picks
    min(back_rate * dt) / 4 over the front's burning vertices.
    """

    dt: float
    ros_field: RosField | None = None
    n_theta: int = 128
    resample_spacing: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise PropagationError(f"step duration must be positive, got {self.dt}")
        if self.n_theta < 16:
            raise PropagationError(f"n_theta must be >= 16, got {self.n_theta}")
        if self.resample_spacing is not None and not self.resample_spacing > 0.0:
            raise PropagationError(
                f"resample spacing must be positive, got {self.resample_spacing}"
            )


def resample_front(front: FireFront, spacing: float) -> FireFront:
    """Subdivide edges so no vertex gap exceeds `spacing`.

    Original vertices are kept in place, so the polygon is unchanged as a
    point set; a front already fine enough passes through untouched.
    """
    xy = densify_ring(front.xy(), spacing)
    if len(xy) == len(front):
        return front
    return FireFront(tuple(Point2(float(x), float(y)) for x, y in xy), front.time)


def envelope_boundary(base: Polygon | None, rings: list[np.ndarray]) -> Polygon | MultiPolygon:
    """Union base polygon and wavelet rings, snap, and drop holes.

    Unburned islands enclosed by a merging front are considered overrun,
    so only exterior rings survive.
    """
    geoms: list[Polygon] = [Polygon(r) for r in rings]
    if base is not None:
        geoms.append(base)
    if not geoms:
        raise PropagationError("nothing to union: no base region and no wavelets")
    merged = shapely.union_all(geoms)
    minx, miny, maxx, maxy = merged.bounds
    diag = math.hypot(maxx - minx, maxy - miny)
    if diag > 0.0:
        merged = shapely.set_precision(merged, grid_size=_SNAP_FRACTION * diag)
    if merged.is_empty:
        raise PropagationError("envelope collapsed to an empty region")
    if isinstance(merged, Polygon):
        return Polygon(merged.exterior)
    if isinstance(merged, MultiPolygon):
        return MultiPolygon([Polygon(g.exterior) for g in merged.geoms])
    raise PropagationError(f"envelope union produced {merged.geom_type}")


def front_from_polygon(poly: Polygon, time: float) -> FireFront:
    ring = orient(poly, sign=1.0).exterior.coords[:-1]
    return FireFront(tuple(Point2(float(x), float(y)) for x, y in ring), time)


def propagate_once(front: FireFront, step: PropagationStep,
                   ros_field: RosField | None = None,
                   step_index: int | None = None) -> FireFront:
    """Advance a front by one step; returns the new front at time + dt.

    The field is taken from `ros_field` when given, else from the step.
    """
    field = ros_field if ros_field is not None else step.ros_field
    if field is None:
        raise PropagationError("no spread field: neither step.ros_field nor ros_field given")

    samples = [field(v) for v in front.vertices]
    spacing = step.resample_spacing
    if spacing is None:
        backs = [ros.back for ros, _ in samples if ros.back > 0.0]
        if backs:
            spacing = min(backs) * step.dt / 4.0
    if spacing is not None:
        resampled = resample_front(front, spacing)
        if resampled is not front:
            front = resampled
            samples = [field(v) for v in front.vertices]

    new_time = front.time + step.dt
    rings = [
        wavelet_ring(spread_params(ros, env), v, step.dt, step.n_theta)
        for v, (ros, env) in zip(front.vertices, samples)
        if ros.head + ros.back > 0.0
    ]
    if not rings:
        # Every vertex stalled: the front holds its shape.
        return FireFront(front.vertices, new_time)

    base = Polygon(front.xy())
    try:
        merged = envelope_boundary(base, rings)
    except shapely.errors.GEOSException as exc:
        raise PropagationError(f"envelope union failed: {exc}", step_index) from exc
    if isinstance(merged, MultiPolygon):
        # Snapping can shave off slivers; keep the dominant region.
        merged = max(merged.geoms, key=lambda g: g.area)
    if merged.area < base.area * (1.0 - 1e-9):
        raise PropagationError(
            f"burned area shrank from {base.area:.6g} to {merged.area:.6g}", step_index
        )
    return front_from_polygon(merged, new_time)


def propagate_sequence(initial: FireFront, steps: list[PropagationStep]) -> list[FireFront]:
    """Run steps in order; returns [initial, after step 0, after step 1, ...]."""
    if not steps:
        raise PropagationError("no propagation steps requested")
    fronts = [initial]
    for i, step in enumerate(steps):
        try:
            fronts.append(propagate_once(fronts[-1], step, step_index=i))
        except PropagationError as exc:
            if exc.step_index is None:
                raise PropagationError(f"step {i}: {exc.args[0]}", i) from exc
            raise
    return fronts
