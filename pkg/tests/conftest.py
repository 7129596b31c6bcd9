"""Shared fixtures and reference implementations for the test suite."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest
import shapely
from scipy.spatial import cKDTree
from shapely.geometry import Polygon

from firefront import (
    Angle,
    EnvSample,
    FireFront,
    Point2,
    RosPair,
    directional_ros_profile,
    spread_params,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = REPO_ROOT / "scenarios"


@pytest.fixture(scope="session")
def scenario_dir() -> Path:
    return SCENARIO_DIR


def blob_front(n: int = 96, radius: float = 100.0, seed: int | None = None,
               time: float = 0.0) -> FireFront:
    """Deterministic wavy test polygon; irregular but simple and star-shaped."""
    rng = np.random.default_rng(seed)
    if seed is None:
        a1, a2, p1, p2 = 0.2, 0.1, 0.3, 1.1
    else:
        a1 = rng.uniform(0.05, 0.25)
        a2 = rng.uniform(0.02, 0.12)
        p1, p2 = rng.uniform(0, 2 * math.pi, size=2)
    ts = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    rs = radius * (1 + a1 * np.cos(2 * ts + p1) + a2 * np.cos(5 * ts + p2))
    vertices = tuple(
        Point2(float(r * math.cos(t)), float(r * math.sin(t)))
        for r, t in zip(rs, ts)
    )
    return FireFront(vertices, time)


def triangle_front(size: float = 1e-5, time: float = 0.0,
                   center: tuple[float, float] = (0.0, 0.0)) -> FireFront:
    """Smallest usable ignition: an equilateral-ish triangle of edge `size`."""
    cx, cy = center
    return FireFront((
        Point2(cx, cy),
        Point2(cx + size, cy),
        Point2(cx + 0.5 * size, cy + 0.866 * size),
    ), time)


def uniform_field(head: float, back: float, wind: float, wind_dir_deg: float):
    """Constant-everywhere spread field."""
    ros = RosPair(head, back)
    env = EnvSample(wind, Angle.from_degrees(wind_dir_deg))
    return lambda p: (ros, env)


# ------------------------------------------------- reference burned set

def reference_burned_boundary(
    front: FireFront,
    samples: list,
    dt: float,
    n_cells: int = 400,
) -> tuple[np.ndarray, float]:
    """Cell-by-cell burned set for one propagation step; no polygon union.

    A cell center burns if it already lies inside the front or if some
    vertex reaches it within dt at that vertex's directional rate.
    Returns (boundary cell centers as (m, 2) array, cell size).
    """
    params = [spread_params(ros, env) for ros, env in samples]
    reach = np.array([(p.b + abs(p.c)) * dt for p in params])
    xs = np.array([v.x for v in front.vertices])
    ys = np.array([v.y for v in front.vertices])
    minx = np.min(xs - reach)
    maxx = np.max(xs + reach)
    miny = np.min(ys - reach)
    maxy = np.max(ys + reach)
    span = max(maxx - minx, maxy - miny) * 1.05
    cx, cy = (minx + maxx) / 2, (miny + maxy) / 2
    cell = span / n_cells
    x0, y0 = cx - span / 2, cy - span / 2
    centers_x = x0 + (np.arange(n_cells) + 0.5) * cell
    centers_y = y0 + (np.arange(n_cells) + 0.5) * cell

    gx, gy = np.meshgrid(centers_x, centers_y)
    poly = Polygon([(v.x, v.y) for v in front.vertices])
    mask = shapely.contains_xy(poly, gx.ravel(), gy.ravel()).reshape(gx.shape)

    for (vx, vy), par, r in zip(zip(xs, ys), params, reach):
        if r <= 0:
            continue
        i0 = max(0, int((vy - r - y0) / cell) - 1)
        i1 = min(n_cells, int((vy + r - y0) / cell) + 2)
        j0 = max(0, int((vx - r - x0) / cell) - 1)
        j1 = min(n_cells, int((vx + r - x0) / cell) + 2)
        wx = gx[i0:i1, j0:j1] - vx
        wy = gy[i0:i1, j0:j1] - vy
        dist = np.hypot(wx, wy)
        theta = np.arctan2(wy, wx)
        rate = directional_ros_profile(par, theta)
        mask[i0:i1, j0:j1] |= dist <= rate * dt

    # holes in the burned set are dropped, matching the outer-boundary
    # semantics of the propagation output
    from scipy.ndimage import binary_fill_holes

    burned = binary_fill_holes(mask)
    inner = np.zeros_like(burned)
    inner[1:-1, 1:-1] = (
        burned[:-2, 1:-1] & burned[2:, 1:-1] & burned[1:-1, :-2] & burned[1:-1, 2:]
    )
    boundary = burned & ~inner
    ii, jj = np.nonzero(boundary)
    pts = np.column_stack([centers_x[jj], centers_y[ii]])
    return pts, cell


def two_sided_hausdorff(points: np.ndarray, front: FireFront, densify: float) -> float:
    """Max of (points to densified ring) and (densified ring to points)."""
    ring = np.array([(v.x, v.y) for v in front.vertices])
    dense = []
    for a, b in zip(ring, np.roll(ring, -1, axis=0)):
        length = float(np.hypot(*(b - a)))
        n = max(1, int(math.ceil(length / densify)))
        for t in range(n):
            dense.append(a + (b - a) * (t / n))
    dense = np.array(dense)
    d1 = cKDTree(dense).query(points)[0].max()
    d2 = cKDTree(points).query(dense)[0].max()
    return float(max(d1, d2))
