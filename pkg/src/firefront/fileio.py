"""File formats and projection.

Readers: FIRMS-style hotspot CSV, ESRI ASCII grids, LFMC and ROS
calibration CSVs, front GeoJSON. Writers: front GeoJSON, per-step CSV,
deterministic SVG. Geographic coordinates are projected onto a local
azimuthal-equidistant plane (meters) about a scenario center; all
geometry stays planar from there on.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from datetime import datetime, timedelta

from .correction import RosObservation
from .errors import MissingColumnError, ParseError
from .geometry import Angle, FireFront, Point2, ScalarGrid, polygon_signed_area, signed_area_of
from .lfmc import LfmcObservation
from .tracking import HotspotRecord

EARTH_RADIUS_M = 6371008.8


# ---------------------------------------------------------------- projection

def project_to_plane(lon: float, lat: float, center: tuple[float, float]) -> tuple[float, float]:
    """Lon/lat degrees to local azimuthal-equidistant meters about center.

    Distances from the center are exact on the sphere; shape distortion
    stays negligible within ~100 km, which covers any single fire.
    """
    lon0, lat0 = math.radians(center[0]), math.radians(center[1])
    lam, phi = math.radians(lon), math.radians(lat)
    cos_c = math.sin(lat0) * math.sin(phi) + math.cos(lat0) * math.cos(phi) * math.cos(lam - lon0)
    cos_c = min(1.0, max(-1.0, cos_c))
    c = math.acos(cos_c)
    if c < 1e-12:
        k = EARTH_RADIUS_M  # limit of c/sin(c) times R
    else:
        k = EARTH_RADIUS_M * c / math.sin(c)
    x = k * math.cos(phi) * math.sin(lam - lon0)
    y = k * (math.cos(lat0) * math.sin(phi) - math.sin(lat0) * math.cos(phi) * math.cos(lam - lon0))
    return x, y


def project_to_lonlat(x: float, y: float, center: tuple[float, float]) -> tuple[float, float]:
    """Inverse of project_to_plane."""
    lon0, lat0 = math.radians(center[0]), math.radians(center[1])
    rho = math.hypot(x, y)
    if rho < 1e-12:
        return center[0], center[1]
    c = rho / EARTH_RADIUS_M
    sin_c, cos_c = math.sin(c), math.cos(c)
    phi = math.asin(cos_c * math.sin(lat0) + y * sin_c * math.cos(lat0) / rho)
    lam = lon0 + math.atan2(
        x * sin_c, rho * cos_c * math.cos(lat0) - y * sin_c * math.sin(lat0)
    )
    return math.degrees(lam), math.degrees(phi)


def wind_direction_angle(value_deg: float, convention: str) -> Angle:
    """Wind direction from config or grid to a planar heading.

    `meteorological_from`: degrees clockwise from north, direction the
    wind comes FROM (weather-station convention). `math_toward`: degrees
    counterclockwise from east, direction the wind blows TOWARD (what the
    spread kernel wants).
    """
    if convention == "math_toward":
        return Angle.from_degrees(value_deg)
    if convention == "meteorological_from":
        return Angle.from_degrees(270.0 - value_deg)
    raise ParseError(
        f"unknown wind direction convention '{convention}'; "
        "use 'meteorological_from' or 'math_toward'"
    )


# ------------------------------------------------------------- hotspot CSV

_REQUIRED_HOTSPOT_COLUMNS = ("latitude", "longitude", "acq_date", "acq_time")


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc


def _parse_acq_minutes(date_text: str, time_text: str) -> datetime:
    try:
        day = datetime.strptime(date_text.strip(), "%Y-%m-%d")
    except ValueError:
        raise ValueError(f"bad acq_date '{date_text}' (expected YYYY-MM-DD)") from None
    raw = time_text.strip()
    if not raw.isdigit() or len(raw) > 4:
        raise ValueError(f"bad acq_time '{time_text}' (expected HHMM)")
    value = int(raw)
    hours, minutes = divmod(value, 100)
    if hours > 23 or minutes > 59:
        raise ValueError(f"bad acq_time '{time_text}' (expected HHMM)")
    return day + timedelta(hours=hours, minutes=minutes)


def parse_hotspot_csv(
    data: bytes,
    center: tuple[float, float] | None = None,
    epoch: datetime | None = None,
) -> tuple[list[HotspotRecord], list[str], tuple[float, float], datetime]:
    """Parse thermal detections and project them onto the local plane.

    Needs columns latitude, longitude, acq_date (YYYY-MM-DD), acq_time
    (HHMM UTC); frp and confidence are carried when present, extra columns
    are ignored. Malformed rows are excluded and reported in the returned
    warning list. `center` defaults to the mean position of the valid
    rows; `epoch` defaults to midnight of the earliest acquisition date.
    Returns (records, warnings, center, epoch).
    """
    reader = csv.DictReader(io.StringIO(_decode(data)))
    if reader.fieldnames is None:
        raise ParseError("hotspot CSV is empty; a header row is required", line=1)
    fields = [f.strip().lower() for f in reader.fieldnames]
    for col in _REQUIRED_HOTSPOT_COLUMNS:
        if col not in fields:
            raise MissingColumnError(f"hotspot CSV is missing required column '{col}'", line=1)

    rows: list[dict[str, str]] = []
    warnings: list[str] = []
    parsed: list[tuple[float, float, datetime, float | None, str | None]] = []
    for line_no, raw in enumerate(reader, start=2):
        row = {k.strip().lower(): (v or "").strip() for k, v in raw.items() if k is not None}
        rows.append(row)
        try:
            lat = float(row["latitude"])
            lon = float(row["longitude"])
            if not -90.0 <= lat <= 90.0:
                raise ValueError(f"latitude {lat} outside [-90, 90]")
            if not -180.0 <= lon <= 180.0:
                raise ValueError(f"longitude {lon} outside [-180, 180]")
            when = _parse_acq_minutes(row["acq_date"], row["acq_time"])
            frp: float | None = None
            if row.get("frp"):
                frp = float(row["frp"])
                if not (math.isfinite(frp) and frp >= 0.0):
                    raise ValueError(f"FRP {frp} must be >= 0")
            confidence = row.get("confidence") or None
        except (ValueError, KeyError) as exc:
            warnings.append(f"line {line_no}: {exc}")
            continue
        parsed.append((lon, lat, when, frp, confidence))

    if not parsed:
        raise ParseError(f"no valid hotspot rows among {len(rows)} data lines")
    if center is None:
        center = (
            sum(p[0] for p in parsed) / len(parsed),
            sum(p[1] for p in parsed) / len(parsed),
        )
    if epoch is None:
        first = min(p[2] for p in parsed)
        epoch = first.replace(hour=0, minute=0, second=0, microsecond=0)

    records = []
    for lon, lat, when, frp, confidence in parsed:
        x, y = project_to_plane(lon, lat, center)
        minutes = (when - epoch).total_seconds() / 60.0
        records.append(HotspotRecord(Point2(x, y), minutes, frp, confidence))
    return records, warnings, center, epoch


# --------------------------------------------------------- ESRI ASCII grid

_HEADER_KEYS = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"}


def parse_ascii_grid(data: bytes) -> ScalarGrid:
    """ESRI ASCII raster to a ScalarGrid.

    Header keys are case-insensitive; NODATA_value defaults to -9999.
    The file stores rows north to south; they are flipped so row 0 of the
    grid is the southernmost, matching the grid's lower-left origin.
    """
    text = _decode(data)
    lines = text.splitlines()
    header: dict[str, float] = {}
    body_start = 0
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            body_start = i + 1
            continue
        parts = stripped.split()
        key = parts[0].lower()
        if key not in _HEADER_KEYS:
            body_start = i
            break
        if len(parts) != 2:
            raise ParseError(f"malformed header line '{stripped}'", line=i + 1)
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise ParseError(
                f"non-numeric header value '{parts[1]}' for {parts[0]}",
                line=i + 1, column=len(parts[0]) + 2,
            ) from None
        body_start = i + 1
    for key in ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize"):
        if key not in header:
            raise ParseError(f"grid header is missing '{key}'")
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    if ncols < 1 or nrows < 1 or ncols != header["ncols"] or nrows != header["nrows"]:
        raise ParseError(f"bad grid shape ncols={header['ncols']}, nrows={header['nrows']}")
    nodata = header.get("nodata_value", -9999.0)

    expected = ncols * nrows
    values: list[float] = []
    for i in range(body_start, len(lines)):
        for match in re.finditer(r"\S+", lines[i]):
            token = match.group(0)
            try:
                values.append(float(token))
            except ValueError:
                raise ParseError(
                    f"non-numeric grid value '{token}'",
                    line=i + 1, column=match.start() + 1,
                ) from None
            if len(values) > expected:
                raise ParseError(
                    f"grid body has more than the expected {expected} values",
                    line=i + 1, column=match.start() + 1,
                )
    if len(values) < expected:
        raise ParseError(f"grid body truncated: {len(values)} of {expected} values")

    flipped: list[float] = []
    for row in range(nrows - 1, -1, -1):  # file row 0 is the top
        flipped.extend(values[row * ncols:(row + 1) * ncols])
    return ScalarGrid(
        origin=Point2(header["xllcorner"], header["yllcorner"]),
        cell_size=header["cellsize"],
        ncols=ncols,
        nrows=nrows,
        values=tuple(flipped),
        nodata=nodata,
    )


# ------------------------------------------------------- calibration CSVs

def _dict_reader(data: bytes, required: tuple[str, ...], what: str) -> csv.DictReader:
    reader = csv.DictReader(io.StringIO(_decode(data)))
    if reader.fieldnames is None:
        raise ParseError(f"{what} CSV is empty; a header row is required", line=1)
    fields = [f.strip().lower() for f in reader.fieldnames]
    for col in required:
        if col not in fields:
            raise MissingColumnError(f"{what} CSV is missing required column '{col}'", line=1)
    return reader


def read_lfmc_csv(data: bytes) -> list[tuple[str, LfmcObservation]]:
    """Rows `stratum,ndvi,lst_k,doy,lfmc_pct` to labeled observations."""
    reader = _dict_reader(data, ("stratum", "ndvi", "lst_k", "doy", "lfmc_pct"), "LFMC")
    out: list[tuple[str, LfmcObservation]] = []
    for line_no, raw in enumerate(reader, start=2):
        row = {k.strip().lower(): (v or "").strip() for k, v in raw.items() if k is not None}
        try:
            obs = LfmcObservation(
                ndvi=float(row["ndvi"]),
                lst=float(row["lst_k"]),
                doy=float(row["doy"]),
                lfmc=float(row["lfmc_pct"]),
            )
        except Exception as exc:
            raise ParseError(f"bad LFMC row: {exc}", line=line_no) from exc
        out.append((row["stratum"], obs))
    if not out:
        raise ParseError("LFMC CSV has a header but no data rows")
    return out


def read_ros_csv(data: bytes) -> list[RosObservation]:
    """Rows `ros_m_per_min,wind_m_per_s,moisture_pct` to observations."""
    reader = _dict_reader(data, ("ros_m_per_min", "wind_m_per_s", "moisture_pct"), "ROS")
    out: list[RosObservation] = []
    for line_no, raw in enumerate(reader, start=2):
        row = {k.strip().lower(): (v or "").strip() for k, v in raw.items() if k is not None}
        try:
            out.append(RosObservation(
                ros=float(row["ros_m_per_min"]),
                wind=float(row["wind_m_per_s"]),
                moisture=float(row["moisture_pct"]),
            ))
        except Exception as exc:
            raise ParseError(f"bad ROS row: {exc}", line=line_no) from exc
    if not out:
        raise ParseError("ROS CSV has a header but no data rows")
    return out


# ----------------------------------------------------------------- GeoJSON

def _result_fronts(result) -> list[FireFront]:
    if isinstance(result, FireFront):
        return [result]
    fronts = getattr(result, "fronts", result)
    return list(fronts)


def write_fronts_geojson(result, center: tuple[float, float]) -> bytes:
    """Fronts as an RFC 7946 FeatureCollection (lon/lat, CCW closed rings).

    `result` may be a scenario result, a list of fronts, or one front.
    """
    features = []
    for step_index, front in enumerate(_result_fronts(result)):
        ring = [
            list(project_to_lonlat(v.x, v.y, center))
            for v in front.vertices
        ]
        ring.append(list(ring[0]))
        features.append({
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": [ring]},
            "properties": {
                "time_minutes": front.time,
                "step_index": step_index,
                "area_m2": polygon_signed_area(front),
            },
        })
    doc = {"type": "FeatureCollection", "features": features}
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")


def parse_fronts_geojson(data: bytes, center: tuple[float, float]) -> list[FireFront]:
    """Read a FeatureCollection written by write_fronts_geojson back into
    planar fronts, ordered by step_index when present."""
    try:
        doc = json.loads(_decode(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if doc.get("type") != "FeatureCollection" or not isinstance(doc.get("features"), list):
        raise ParseError("expected a GeoJSON FeatureCollection")
    entries: list[tuple[int, FireFront]] = []
    for i, feature in enumerate(doc["features"]):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Polygon":
            raise ParseError(f"feature {i}: expected Polygon, got {geom.get('type')}")
        rings = geom.get("coordinates") or []
        if not rings:
            raise ParseError(f"feature {i}: polygon has no rings")
        ring = rings[0]
        if len(ring) < 4 or ring[0] != ring[-1]:
            raise ParseError(f"feature {i}: exterior ring must be closed (first = last)")
        coords = ring[:-1]
        xy = [project_to_plane(lon, lat, center) for lon, lat in coords]
        if signed_area_of(xy) < 0.0:
            xy = xy[::-1]
        props = feature.get("properties") or {}
        time = float(props.get("time_minutes", 0.0))
        step = int(props.get("step_index", i))
        entries.append((step, FireFront(tuple(Point2(x, y) for x, y in xy), time)))
    entries.sort(key=lambda e: e[0])
    return [front for _, front in entries]


# -------------------------------------------------------------- CSV output

def write_fronts_csv(result) -> bytes:
    """Per-step summary table: index, time, area, and diagnostics."""
    fronts = _result_fronts(result)
    diags = list(getattr(result, "diagnostics", ()) or ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step_index", "time_minutes", "area_m2",
                     "mean_head_m_per_min", "mean_back_m_per_min", "stalled_vertices"])
    for i, front in enumerate(fronts):
        row: list[object] = [i, f"{front.time:.6f}", f"{polygon_signed_area(front):.3f}"]
        diag = diags[i - 1] if 1 <= i <= len(diags) else None
        if diag is None:
            row += ["", "", ""]
        else:
            row += [f"{diag.mean_head:.6f}", f"{diag.mean_back:.6f}", diag.stalled_vertices]
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


# -------------------------------------------------------------- SVG output

def render_fronts_svg(result, width: int = 800, stroke_width: float = 1.5) -> bytes:
    """Nested front outlines with a time legend, as deterministic SVG.

    Fronts are drawn oldest innermost in red, shading to green for the
    newest; identical input always yields identical bytes.
    """
    fronts = _result_fronts(result)
    if not fronts:
        raise ParseError("nothing to render: no fronts")
    xs = [v.x for f in fronts for v in f.vertices]
    ys = [v.y for f in fronts for v in f.vertices]
    minx, maxx, miny, maxy = min(xs), max(xs), min(ys), max(ys)
    span = max(maxx - minx, maxy - miny, 1e-9)
    margin = 0.05 * span
    minx, maxx = minx - margin, maxx + margin
    miny, maxy = miny - margin, maxy + margin
    scale = width / (maxx - minx)
    height = math.ceil((maxy - miny) * scale)

    def sx(x: float) -> float:
        return (x - minx) * scale

    def sy(y: float) -> float:
        return (maxy - y) * scale  # SVG y axis points down

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    n = len(fronts)
    for i, front in enumerate(fronts):
        hue = 0 if n == 1 else round(120.0 * i / (n - 1))
        color = f"hsl({hue},80%,40%)"
        points = " ".join(f"{sx(v.x):.3f},{sy(v.y):.3f}" for v in front.vertices)
        parts.append(
            f'<polygon points="{points}" fill="none" '
            f'stroke="{color}" stroke-width="{stroke_width}"/>'
        )
    for i, front in enumerate(fronts):
        hue = 0 if n == 1 else round(120.0 * i / (n - 1))
        color = f"hsl({hue},80%,40%)"
        y_text = 18 + 16 * i
        parts.append(
            f'<rect x="10" y="{y_text - 10}" width="12" height="12" fill="{color}"/>'
        )
        parts.append(
            f'<text x="28" y="{y_text}" font-family="monospace" font-size="12">'
            f"step {i}: t = {front.time:g} min</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")
