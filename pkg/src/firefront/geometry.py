"""Planar geometry primitives shared by every other module.

All coordinates live in a local planar frame in meters (easting x,
northing y); time is minutes since the scenario epoch. Angles follow the
mathematical convention: radians counterclockwise from the +x axis.

Everything here is an immutable value; all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point2:
    """A point in the local planar frame (meters)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class Angle:
    """Direction in radians, CCW from +x, normalized to [0, 2*pi)."""

    radians: float

    def __post_init__(self):
        if not math.isfinite(self.radians):
            raise GeometryError(f"non-finite angle {self.radians}")
        object.__setattr__(self, "radians", self.radians % TWO_PI)

    @classmethod
    def from_degrees(cls, degrees: float) -> "Angle":
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)

    def __add__(self, other: "Angle") -> "Angle":
        return Angle(self.radians + other.radians)

    def opposite(self) -> "Angle":
        return Angle(self.radians + math.pi)

    def unit(self) -> tuple[float, float]:
        """Unit vector (cos, sin) for this direction."""
        return math.cos(self.radians), math.sin(self.radians)


def angle_between(a: Angle, b: Angle) -> float:
    """Smallest absolute separation between two directions, in radians."""
    d = abs(a.radians - b.radians) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class FireFront:
    """Closed planar polygon separating burned from unburned area.

    Vertices are ordered counterclockwise and stored open (first vertex is
    not repeated at the end; closure is implicit). `time` is minutes since
    the scenario epoch.
    """

    vertices: tuple[Point2, ...]
    time: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 3:
            raise GeometryError(f"fire front needs >= 3 vertices, got {len(self.vertices)}")
        if not math.isfinite(self.time):
            raise GeometryError("non-finite front time")
        if _signed_area(self.vertices) <= 0.0:
            raise GeometryError("fire front must be counterclockwise with positive area")

    def __len__(self) -> int:
        return len(self.vertices)

    def xy(self) -> np.ndarray:
        """Vertices as an (n, 2) float array."""
        return np.array([(v.x, v.y) for v in self.vertices], dtype=float)

    def perimeter(self) -> float:
        xy = self.xy()
        return float(np.sum(np.hypot(*(np.roll(xy, -1, axis=0) - xy).T)))

    def centroid(self) -> Point2:
        """Area-weighted polygon centroid."""
        xy = self.xy()
        x, y = xy[:, 0], xy[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cross = x * yn - xn * y
        area = cross.sum() / 2.0
        cx = float(((x + xn) * cross).sum() / (6.0 * area))
        cy = float(((y + yn) * cross).sum() / (6.0 * area))
        return Point2(cx, cy)

    def bounds(self) -> tuple[float, float, float, float]:
        xy = self.xy()
        return (
            float(xy[:, 0].min()),
            float(xy[:, 1].min()),
            float(xy[:, 0].max()),
            float(xy[:, 1].max()),
        )


def _signed_area(vertices: tuple[Point2, ...]) -> float:
    acc = 0.0
    n = len(vertices)
    for i in range(n):
        p, q = vertices[i], vertices[(i + 1) % n]
        acc += p.x * q.y - q.x * p.y
    return acc / 2.0


def polygon_signed_area(front: FireFront) -> float:
    """Shoelace signed area in square meters; positive for CCW fronts."""
    return _signed_area(front.vertices)


def signed_area_of(points: list[tuple[float, float]] | np.ndarray) -> float:
    """Shoelace area of a raw coordinate ring (open, any orientation)."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        raise GeometryError(f"polygon needs >= 3 vertices, got {len(pts)}")
    x, y = pts[:, 0], pts[:, 1]
    return float((x * np.roll(y, -1) - np.roll(x, -1) * y).sum() / 2.0)


def point_in_polygon(p: Point2, front: FireFront) -> bool:
    """Even-odd containment test; boundary points count as inside."""
    verts = front.vertices
    n = len(verts)
    # Boundary first: the tie-break is "on an edge means inside".
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if _on_segment(p, a, b):
            return True
    inside = False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_cross:
                inside = not inside
    return inside


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    if cross != 0.0:
        return False
    dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)
    return 0.0 <= dot <= (b.x - a.x) ** 2 + (b.y - a.y) ** 2


def front_is_simple(front: FireFront) -> bool:
    """Brute-force check that no pair of non-adjacent edges intersects.

    O(n^2); intended for validation and tests, not per-step hot paths.
    """
    verts = front.vertices
    n = len(verts)
    for i in range(n):
        a1, a2 = verts[i], verts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint
            b1, b2 = verts[j], verts[(j + 1) % n]
            if _segments_intersect(a1, a2, b1, b2):
                return False
    return True


def _segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _on_segment(p1, q1, q2):
        return True
    if d2 == 0 and _on_segment(p2, q1, q2):
        return True
    if d3 == 0 and _on_segment(q1, p1, p2):
        return True
    if d4 == 0 and _on_segment(q2, p1, p2):
        return True
    return False


def _orient(a: Point2, b: Point2, c: Point2) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def validate_front(front: FireFront) -> None:
    """Raise GeometryError unless the front satisfies all invariants
    (>= 3 vertices, CCW positive area, simple)."""
    if polygon_signed_area(front) <= 0.0:
        raise GeometryError("front has non-positive signed area")
    if not front_is_simple(front):
        raise GeometryError("front is self-intersecting")


def polygon_support(front: FireFront, direction: Angle) -> float:
    """Support function: max vertex projection onto the given direction."""
    ux, uy = direction.unit()
    xy = front.xy()
    return float((xy[:, 0] * ux + xy[:, 1] * uy).max())


def densify_ring(xy: np.ndarray, spacing: float) -> np.ndarray:
    """Insert evenly spaced points along each edge of a closed ring so no
    gap exceeds `spacing`. Input and output are open rings (n, 2)."""
    if spacing <= 0:
        raise GeometryError("spacing must be positive")
    out: list[np.ndarray] = []
    n = len(xy)
    for i in range(n):
        a = xy[i]
        b = xy[(i + 1) % n]
        seg = b - a
        length = float(np.hypot(*seg))
        k = max(1, int(math.ceil(length / spacing)))
        for j in range(k):
            out.append(a + seg * (j / k))
    return np.array(out)


def hausdorff_distance(a: FireFront, b: FireFront, densify: float | None = None) -> float:
    """Symmetric Hausdorff distance between two front boundaries.

    Both boundaries are densified to `densify` spacing (default: 1/2000 of
    the smaller perimeter) and compared point-to-point with a KD-tree, so
    the result overestimates the true value by at most half the spacing.
    """
    from scipy.spatial import cKDTree

    if densify is None:
        densify = min(a.perimeter(), b.perimeter()) / 2000.0
    pa = densify_ring(a.xy(), densify)
    pb = densify_ring(b.xy(), densify)
    d_ab = cKDTree(pb).query(pa)[0].max()
    d_ba = cKDTree(pa).query(pb)[0].max()
    return float(max(d_ab, d_ba))


@dataclass(frozen=True)
class ScalarGrid:
    """Row-major scalar raster in the local plane.

    `origin` is the lower-left corner of cell (0, 0); row index grows with
    y (row 0 is the southernmost row). Cell centers sit at
    origin + (j + 0.5, i + 0.5) * cell_size.
    """

    origin: Point2
    cell_size: float
    ncols: int
    nrows: int
    values: tuple[float, ...] = field(repr=False)
    nodata: float = -9999.0

    def __post_init__(self):
        if self.cell_size <= 0:
            raise GeometryError(f"cell_size must be positive, got {self.cell_size}")
        if self.ncols < 1 or self.nrows < 1:
            raise GeometryError("grid needs at least one column and row")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != self.ncols * self.nrows:
            raise GeometryError(
                f"grid body holds {len(self.values)} values, expected {self.ncols * self.nrows}"
            )

    @classmethod
    def constant(cls, value: float, origin: Point2 = Point2(0.0, 0.0),
                 cell_size: float = 1.0, ncols: int = 2, nrows: int = 2) -> "ScalarGrid":
        return cls(origin, cell_size, ncols, nrows, (value,) * (ncols * nrows))

    def value_at(self, row: int, col: int) -> float:
        return self.values[row * self.ncols + col]


def sample_grid(grid: ScalarGrid, p: Point2) -> float:
    """Bilinear interpolation of the four surrounding cell centers.

    Returns `grid.nodata` when p falls outside the hull of cell centers or
    any contributing cell is nodata.
    """
    qx = (p.x - grid.origin.x) / grid.cell_size - 0.5
    qy = (p.y - grid.origin.y) / grid.cell_size - 0.5
    if qx < 0.0 or qy < 0.0 or qx > grid.ncols - 1 or qy > grid.nrows - 1:
        return grid.nodata
    j0 = min(int(math.floor(qx)), grid.ncols - 2) if grid.ncols > 1 else 0
    i0 = min(int(math.floor(qy)), grid.nrows - 2) if grid.nrows > 1 else 0
    tx = qx - j0
    ty = qy - i0
    j1 = min(j0 + 1, grid.ncols - 1)
    i1 = min(i0 + 1, grid.nrows - 1)
    corners = (
        grid.value_at(i0, j0),
        grid.value_at(i0, j1),
        grid.value_at(i1, j0),
        grid.value_at(i1, j1),
    )
    if any(v == grid.nodata for v in corners):
        return grid.nodata
    v00, v01, v10, v11 = corners
    return (
        v00 * (1 - tx) * (1 - ty)
        + v01 * tx * (1 - ty)
        + v10 * (1 - tx) * ty
        + v11 * tx * ty
    )
