"""Fire-front reconstruction from hotspot detections and thermal rates.

Consecutive satellite snapshots give two point clouds; their envelopes
(convex hull or alpha shape) become fronts, and the directional growth
between the two fronts, divided by the elapsed time, is the thermal rate
of spread R(theta) = d(theta) / dt. The fastest bin is the head fire, the
opposite bin the back fire.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .errors import TrackingError
from .geometry import Angle, FireFront, Point2, point_in_polygon, signed_area_of


@dataclass(frozen=True)
class HotspotRecord:
    """One thermal detection in the local plane.

    frp is fire radiative power in megawatts; confidence is the producer's
    label. Both are carried through unmodified when present.
    """

    position: Point2
    time: float
    frp: float | None = None
    confidence: str | None = None

    def __post_init__(self):
        if not math.isfinite(self.time):
            raise TrackingError(f"non-finite hotspot time {self.time}")
        if self.frp is not None and not (math.isfinite(self.frp) and self.frp >= 0.0):
            raise TrackingError(f"FRP must be finite and >= 0, got {self.frp}")


@dataclass(frozen=True)
class DirectionalRosProfile:
    """Binned thermal rates: one rate per direction, plus head and back.

    head is (bin angle, max rate); back is the rate at the bin exactly
    opposite the head bin.
    """

    angles: tuple[Angle, ...]
    rates: tuple[float, ...]
    head: tuple[Angle, float]
    back: tuple[Angle, float]

    def __post_init__(self):
        if len(self.angles) != len(self.rates):
            raise TrackingError(
                f"{len(self.angles)} angles vs {len(self.rates)} rates"
            )
        if any(r < 0.0 for r in self.rates):
            raise TrackingError("rates must be >= 0")


def bucket_hotspots(records: list[HotspotRecord],
                    window: float = 15.0) -> list[tuple[float, list[HotspotRecord]]]:
    """Group records by acquisition time rounded to `window` minutes.

    Returns (bucket time, members) pairs sorted by time; bucket time is
    the rounded value, so detections a few minutes apart in one overpass
    land together.
    """
    if window <= 0.0:
        raise TrackingError(f"bucket window must be positive, got {window}")
    buckets: dict[float, list[HotspotRecord]] = {}
    for rec in records:
        key = round(rec.time / window) * window
        buckets.setdefault(key, []).append(rec)
    return [(t, buckets[t]) for t in sorted(buckets)]


def front_from_hotspots(points: list[HotspotRecord],
                        alpha: float | None = None) -> FireFront:
    """Envelope of the detections: convex hull, or alpha shape when
    `alpha` (a radius in meters) is given.

    The front's time is the latest detection time in the set.
    """
    if len(points) < 3:
        raise TrackingError(f"need >= 3 hotspots to outline a front, got {len(points)}")
    xy = np.array([(p.position.x, p.position.y) for p in points])
    time = max(p.time for p in points)
    if alpha is None:
        ring = _convex_ring(xy)
    else:
        if alpha <= 0.0:
            raise TrackingError(f"alpha radius must be positive, got {alpha}")
        ring = _alpha_ring(xy, alpha)
    if signed_area_of(ring) < 0.0:
        ring = ring[::-1]
    return FireFront(tuple(Point2(float(x), float(y)) for x, y in ring), time)


def _convex_ring(xy: np.ndarray) -> np.ndarray:
    try:
        hull = ConvexHull(xy)
    except QhullError as exc:
        raise TrackingError(f"hotspots are degenerate (collinear?): {exc}") from exc
    return xy[hull.vertices]


def _alpha_ring(xy: np.ndarray, alpha: float) -> np.ndarray:
    """Boundary of the triangles whose circumradius is at most alpha."""
    try:
        tri = Delaunay(xy)
    except QhullError as exc:
        raise TrackingError(f"hotspots are degenerate (collinear?): {exc}") from exc
    boundary: dict[tuple[int, int], int] = {}
    kept = 0
    for simplex in tri.simplices:
        pa, pb, pc = xy[simplex]
        if _circumradius(pa, pb, pc) > alpha:
            continue
        kept += 1
        for i, j in ((0, 1), (1, 2), (2, 0)):
            edge = tuple(sorted((int(simplex[i]), int(simplex[j]))))
            boundary[edge] = boundary.get(edge, 0) + 1
    if kept == 0:
        raise TrackingError(
            f"alpha={alpha} keeps no triangles; increase the radius"
        )
    # Edges used by exactly one kept triangle form the outline.
    edges = [e for e, count in boundary.items() if count == 1]
    ring_idx = _chain_edges(edges)
    return xy[ring_idx]


def _circumradius(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    la, lb, lc = (np.hypot(*(b - c)), np.hypot(*(a - c)), np.hypot(*(a - b)))
    area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    if area2 == 0.0:
        return math.inf
    return float(la * lb * lc / (2.0 * area2))


def _chain_edges(edges: list[tuple[int, int]]) -> list[int]:
    adjacency: dict[int, list[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    if any(len(n) != 2 for n in adjacency.values()):
        raise TrackingError(
            "alpha-shape boundary is not a single loop; adjust the alpha radius"
        )
    start = min(adjacency)
    ring = [start]
    prev, cur = None, start
    while True:
        a, b = adjacency[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        ring.append(nxt)
        prev, cur = cur, nxt
        if len(ring) > len(edges):
            raise TrackingError("alpha-shape boundary failed to close into a loop")
    if len(ring) != len(adjacency):
        raise TrackingError(
            "alpha-shape boundary has multiple loops; increase the alpha radius"
        )
    return ring


def _max_ray_distance(front: FireFront, origin: Point2, theta: float) -> float:
    """Farthest boundary hit along the ray from origin in direction theta."""
    ux, uy = math.cos(theta), math.sin(theta)
    xy = front.xy()
    px, py = xy[:, 0], xy[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    ex, ey = qx - px, qy - py
    denom = ux * ey - uy * ex
    wx, wy = px - origin.x, py - origin.y
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx * ey - wy * ex) / denom
        s = (wx * uy - wy * ux) / denom
    hit = (np.abs(denom) > 1e-15) & (s >= -1e-12) & (s <= 1.0 + 1e-12) & (t > 0.0)
    if not hit.any():
        return 0.0
    return float(t[hit].max())


def directional_displacement(earlier: FireFront, later: FireFront, n_bins: int,
                             origin: Point2 | None = None) -> list[tuple[Angle, float]]:
    """Per-direction boundary advance between two fronts.

    For each of n_bins uniform directions, the displacement is the farthest
    ray hit on the later front minus the farthest hit on the earlier one,
    measured from `origin` (default: the earlier front's centroid) and
    clamped at zero since fronts do not retreat.
    """
    if n_bins < 1:
        raise TrackingError(f"n_bins must be >= 1, got {n_bins}")
    if origin is None:
        origin = earlier.centroid()
    if not point_in_polygon(origin, earlier):
        raise TrackingError(
            f"ray origin ({origin.x:.3f}, {origin.y:.3f}) lies outside the earlier front"
        )
    out: list[tuple[Angle, float]] = []
    for k in range(n_bins):
        theta = 2.0 * math.pi * k / n_bins
        d = (_max_ray_distance(later, origin, theta)
             - _max_ray_distance(earlier, origin, theta))
        out.append((Angle(theta), max(d, 0.0)))
    return out


def thermal_ros(earlier: FireFront, later: FireFront, dt: float,
                n_bins: int = 72, origin: Point2 | None = None) -> DirectionalRosProfile:
    """Directional thermal rates R(theta) = d(theta) / dt.

    n_bins must be even so the back bin sits exactly opposite the head.
    """
    if dt <= 0.0 or not math.isfinite(dt):
        raise TrackingError(f"dt must be positive, got {dt}")
    if n_bins < 4 or n_bins % 2 != 0:
        raise TrackingError(f"n_bins must be even and >= 4, got {n_bins}")
    displacement = directional_displacement(earlier, later, n_bins, origin)
    angles = tuple(a for a, _ in displacement)
    rates = tuple(d / dt for _, d in displacement)
    head_bin = int(np.argmax(rates))
    back_bin = (head_bin + n_bins // 2) % n_bins
    return DirectionalRosProfile(
        angles=angles,
        rates=rates,
        head=(angles[head_bin], rates[head_bin]),
        back=(angles[back_bin], rates[back_bin]),
    )
