"""Frame construction and region enclosure."""

from __future__ import annotations

import math

import numpy as np
import pytest
from shapely.geometry import Polygon

from conftest import blob_front
from firefront import (
    Angle,
    DisconnectedRegionError,
    EnvSample,
    FireFront,
    FrameSpec,
    Point2,
    PropagationError,
    RosPair,
    build_frame,
    enclose_frames,
    polygon_signed_area,
)


def make_frame(anchor=(0.0, 0.0), head=2.0, back=1.0, wind=3.0, wind_dir=0.0,
               duration=60.0) -> FireFront:
    spec = FrameSpec(Point2(*anchor), RosPair(head, back),
                     EnvSample(wind, Angle.from_degrees(wind_dir)), duration)
    return build_frame(spec)


def test_frame_duration_must_be_positive():
    with pytest.raises(PropagationError):
        FrameSpec(Point2(0, 0), RosPair(1, 1), EnvSample(0, Angle(0)), 0.0)
    with pytest.raises(PropagationError):
        FrameSpec(Point2(0, 0), RosPair(1, 1), EnvSample(0, Angle(0)), -60.0)


def test_frame_extents_follow_rates_and_duration():
    """Head and back reach from the anchor scale with rate x duration."""
    frame = make_frame(head=2.0, back=1.0, wind=3.0, wind_dir=0.0, duration=60.0)
    xy = frame.xy()
    # heading 0 deg: +x reach = head distance, -x reach = back distance
    assert xy[:, 0].max() == pytest.approx(120.0, rel=1e-9)
    assert xy[:, 0].min() == pytest.approx(-60.0, rel=1e-9)
    assert frame.time == pytest.approx(60.0)


def test_frame_scales_linearly_with_duration():
    short = make_frame(duration=30.0).xy()
    long = make_frame(duration=90.0).xy()
    assert np.allclose(long, 3.0 * short, rtol=1e-12, atol=1e-9)


def test_isotropic_frame_is_a_circle():
    frame = make_frame(head=1.5, back=1.5, wind=0.0, duration=40.0)
    radii = np.hypot(*(frame.xy() - np.array([0.0, 0.0])).T)
    assert radii.max() == pytest.approx(60.0, rel=1e-12)
    assert radii.min() == pytest.approx(60.0, rel=1e-12)


def test_enclose_requires_frames():
    with pytest.raises(PropagationError):
        enclose_frames([])


def test_enclose_single_frame_round_trips():
    frame = make_frame()
    out = enclose_frames([frame])
    assert polygon_signed_area(out) == pytest.approx(
        polygon_signed_area(frame), rel=1e-9)
    assert out.time == pytest.approx(frame.time)


def test_enclose_matches_shapely_union():
    """Union area of overlapping frames agrees with a direct union."""
    a = make_frame(anchor=(0.0, 0.0))
    b = make_frame(anchor=(50.0, 10.0), wind_dir=90.0)
    out = enclose_frames([a, b])
    expected = Polygon(a.xy()).union(Polygon(b.xy())).area
    assert polygon_signed_area(out) == pytest.approx(expected, rel=1e-6)


def test_enclose_absorbs_previous_region():
    prev = blob_front(n=48, radius=30.0, seed=5, time=100.0)
    frame = make_frame(anchor=(10.0, 0.0), duration=30.0)
    out = enclose_frames([frame], previous_region=prev, time=130.0)
    assert out.time == pytest.approx(130.0)
    merged = Polygon(prev.xy()).union(Polygon(frame.xy()))
    assert polygon_signed_area(out) == pytest.approx(merged.area, rel=1e-6)


def test_enclose_default_time_is_latest_input():
    prev = blob_front(n=32, radius=200.0, seed=9, time=75.0)
    frame = make_frame(anchor=(20.0, 5.0), duration=60.0)
    out = enclose_frames([frame], previous_region=prev)
    assert out.time == pytest.approx(75.0)


def test_disconnected_frames_report_membership():
    a = make_frame(anchor=(0.0, 0.0), duration=10.0)
    b = make_frame(anchor=(10000.0, 0.0), duration=10.0)
    c = make_frame(anchor=(10010.0, 3.0), duration=10.0)
    with pytest.raises(DisconnectedRegionError) as err:
        enclose_frames([a, b, c])
    groups = err.value.components
    assert sorted(map(sorted, groups)) == [[0], [1, 2]]


def test_disconnected_previous_region_is_minus_one():
    prev = blob_front(n=32, radius=20.0, seed=1, time=0.0)
    far = make_frame(anchor=(5000.0, 5000.0), duration=10.0)
    with pytest.raises(DisconnectedRegionError) as err:
        enclose_frames([far], previous_region=prev)
    flat = sorted(i for g in err.value.components for i in g)
    assert flat == [-1, 0]


def test_union_area_at_least_largest_frame():
    frames = [
        make_frame(anchor=(0.0, 0.0), duration=45.0),
        make_frame(anchor=(30.0, 20.0), head=1.0, back=0.5, duration=45.0),
        make_frame(anchor=(-20.0, 15.0), head=1.2, back=0.8, duration=45.0),
    ]
    out = enclose_frames(frames)
    biggest = max(polygon_signed_area(f) for f in frames)
    assert polygon_signed_area(out) >= biggest - 1e-9


def test_contained_frame_changes_nothing():
    big = make_frame(duration=120.0)
    tiny = make_frame(anchor=(5.0, 0.0), duration=1.0)
    out = enclose_frames([big, tiny])
    assert polygon_signed_area(out) == pytest.approx(
        polygon_signed_area(big), rel=1e-9)
