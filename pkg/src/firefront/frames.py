"""Front growth by enclosing elliptical frames.

An alternative to per-vertex wavelet propagation for data-limited runs:
each time step is described by one spread oval per representative anchor
point, grown over the step's duration, and the burned region is the outer
boundary of those ovals unioned with the previous region. Useful when all
that is known per day is a handful of flare-up sites and bulk rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import shapely
from shapely.geometry import MultiPolygon, Point as ShapelyPoint, Polygon

from .errors import DisconnectedRegionError, PropagationError
from .geometry import FireFront, Point2
from .huygens import envelope_boundary, front_from_polygon
from .ros import EnvSample, RosPair, spread_params, wavelet_ring


@dataclass(frozen=True)
class FrameSpec:
    """One growth oval: where it is anchored, how it spreads, for how long."""

    anchor: Point2
    ros: RosPair
    env: EnvSample
    duration: float

    def __post_init__(self):
        if not math.isfinite(self.duration) or self.duration <= 0.0:
            raise PropagationError(f"frame duration must be positive, got {self.duration}")


def build_frame(spec: FrameSpec, n_theta: int = 128) -> FireFront:
    """Grow one frame: the spread oval at the anchor, scaled by duration.

    The returned front's time is the duration (minutes since the anchor
    started burning); enclose_frames or the caller restamps it as needed.
    """
    params = spread_params(spec.ros, spec.env)
    ring = wavelet_ring(params, spec.anchor, spec.duration, n_theta)
    return FireFront(tuple(Point2(float(x), float(y)) for x, y in ring), time=spec.duration)


def enclose_frames(frames: list[FireFront], previous_region: FireFront | None = None,
                   *, time: float | None = None) -> FireFront:
    """Outer boundary of the union of frames and the previous region.

    The union must come out connected; otherwise the sources are too far
    apart and a DisconnectedRegionError reports which frame indices ended
    up in which piece (index -1 stands for the previous region) so the
    caller can add bridging anchors. `time` stamps the result; default is
    the latest time among the inputs.
    """
    if not frames:
        raise PropagationError("enclose_frames needs at least one frame")
    base = Polygon(previous_region.xy()) if previous_region is not None else None
    rings = [f.xy() for f in frames]
    try:
        merged = envelope_boundary(base, rings)
    except shapely.errors.GEOSException as exc:
        raise PropagationError(f"frame union failed: {exc}") from exc
    if isinstance(merged, MultiPolygon):
        raise DisconnectedRegionError(
            f"frame union fell apart into {len(merged.geoms)} disjoint regions",
            _group_members(merged, frames, previous_region),
        )
    if time is None:
        time = max(f.time for f in frames)
        if previous_region is not None:
            time = max(time, previous_region.time)
    return front_from_polygon(merged, time)


def _group_members(merged: MultiPolygon, frames: list[FireFront],
                   previous_region: FireFront | None) -> list[list[int]]:
    """Assign each input (frame index, -1 for previous region) to the
    union piece it landed in, ordered by piece area, largest first."""
    pieces = sorted(merged.geoms, key=lambda g: g.area, reverse=True)
    members: list[tuple[int, FireFront]] = list(enumerate(frames))
    if previous_region is not None:
        members.append((-1, previous_region))
    groups: list[list[int]] = [[] for _ in pieces]
    for idx, front in members:
        probe = ShapelyPoint(front.vertices[0].x, front.vertices[0].y)
        dists = [piece.distance(probe) for piece in pieces]
        groups[dists.index(min(dists))].append(idx)
    return [sorted(g) for g in groups]
