"""Scenario orchestration.

A scenario is a JSON document: a projection center, a propagation
strategy (vertex wavelets or anchored growth frames), and a list of
timed steps whose environment comes either from direct rate constants
and expressions or from gridded data run through the satellite
correction. `run_scenario` turns a parsed config plus input bundles
into the front sequence and per-step diagnostics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .correction import RosModelParams, SatReference, correct_ros
from .errors import ConfigError, FirefrontError, ScenarioError
from .expressions import compile_expression
from .fileio import parse_ascii_grid, parse_hotspot_csv, wind_direction_angle
from .frames import FrameSpec, build_frame, enclose_frames
from .geometry import (
    Angle,
    FireFront,
    Point2,
    ScalarGrid,
    hausdorff_distance,
    polygon_signed_area,
    sample_grid,
    signed_area_of,
)
from .huygens import PropagationStep, propagate_once
from .lfmc import LfmcCoefficients, LfmcObservation, predict_lfmc
from .ros import EnvSample, RosPair
from .tracking import HotspotRecord, bucket_hotspots, front_from_hotspots

Scalar = Callable[[float, float], float]


# ------------------------------------------------------------------- config

@dataclass(frozen=True)
class FrameSource:
    """One anchored growth oval within a frames-strategy step."""
    anchor: Point2
    head: Scalar
    back: Scalar
    wind_speed: Scalar
    wind_dir_deg: Scalar
    duration: float | None = None  # minutes; step dt when omitted


@dataclass(frozen=True)
class StepConfig:
    dt: float
    mode: str = "direct"  # direct | corrected
    head: Scalar | None = None
    back: Scalar | None = None
    wind_speed: Scalar | None = None
    wind_dir_deg: Scalar | None = None
    deviation_deg: Scalar | None = None
    sources: tuple[FrameSource, ...] = ()
    moisture: Scalar | None = None
    moisture_grid: str | None = None
    wind_speed_grid: str | None = None
    wind_dir_grid: str | None = None
    ndvi_grid: str | None = None
    lst_grid: str | None = None
    doy: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    strategy: str
    steps: tuple[StepConfig, ...]
    projection_center: tuple[float, float] = (0.0, 0.0)
    epoch: str | None = None
    wind_convention: str = "meteorological_from"
    n_theta: int = 128
    n_bins: int = 72
    resample_spacing: float | None = None
    m_min: float = 120.0
    constants: dict[str, float] = field(default_factory=dict)
    initial_front: FireFront | None = None
    hotspot_source: dict | None = None  # {"path", "bucket_minutes", "alpha"}
    grid_paths: dict[str, str] = field(default_factory=dict)
    lfmc_coefficients: LfmcCoefficients | None = None
    ros_params_head: RosModelParams | None = None
    ros_params_back: RosModelParams | None = None
    sat_head: SatReference | None = None
    sat_back: SatReference | None = None


@dataclass
class ScenarioInputs:
    """Parsed data bundles a scenario may draw on."""
    initial_front: FireFront | None = None
    hotspots: list[HotspotRecord] | None = None
    grids: dict[str, ScalarGrid] = field(default_factory=dict)


@dataclass(frozen=True)
class StepDiagnostics:
    mean_head: float
    mean_back: float
    stalled_vertices: int
    area: float


@dataclass(frozen=True)
class RunResult:
    fronts: list[FireFront]
    diagnostics: tuple[StepDiagnostics, ...]
    status: str  # "completed" | "extinguished"


# ------------------------------------------------------------ config loading

def _constant(value: float) -> Scalar:
    v = float(value)
    return lambda x, y: v


def _scalar(value, constants: dict[str, float], what: str) -> Scalar:
    if isinstance(value, bool) or value is None:
        raise ConfigError(f"{what} must be a number or an expression string")
    if isinstance(value, (int, float)):
        return _constant(value)
    if isinstance(value, str):
        try:
            return compile_expression(value, constants)
        except FirefrontError as exc:
            raise ConfigError(f"{what}: {exc}") from exc
    raise ConfigError(f"{what} must be a number or an expression string")


def _parse_polygon(doc: dict) -> FireFront:
    pts = doc.get("polygon")
    if not isinstance(pts, list) or len(pts) < 3:
        raise ConfigError("initial_front.polygon must list at least 3 [x, y] pairs")
    try:
        xy = [(float(p[0]), float(p[1])) for p in pts]
        if signed_area_of(xy) < 0.0:
            xy.reverse()
        vertices = tuple(Point2(x, y) for x, y in xy)
        return FireFront(vertices, float(doc.get("time", 0.0)))
    except (TypeError, ValueError, IndexError, FirefrontError) as exc:
        raise ConfigError(f"bad initial_front polygon: {exc}") from exc


def _parse_source(doc: dict, constants: dict[str, float], where: str) -> FrameSource:
    anchor = doc.get("anchor")
    if not isinstance(anchor, list) or len(anchor) != 2:
        raise ConfigError(f"{where}: anchor must be [x, y]")
    duration = doc.get("duration")
    if duration is not None and (not isinstance(duration, (int, float)) or duration <= 0):
        raise ConfigError(f"{where}: duration must be a positive number")
    return FrameSource(
        anchor=Point2(float(anchor[0]), float(anchor[1])),
        head=_scalar(doc.get("head"), constants, f"{where}.head"),
        back=_scalar(doc.get("back"), constants, f"{where}.back"),
        wind_speed=_scalar(doc.get("wind_speed", 0.0), constants, f"{where}.wind_speed"),
        wind_dir_deg=_scalar(doc.get("wind_dir_deg", 0.0), constants, f"{where}.wind_dir_deg"),
        duration=None if duration is None else float(duration),
    )


def _parse_step(doc: dict, strategy: str, constants: dict[str, float], index: int) -> StepConfig:
    where = f"steps[{index}]"
    dt = doc.get("dt")
    if not isinstance(dt, (int, float)) or not math.isfinite(dt) or dt <= 0:
        raise ConfigError(f"{where}: dt must be a positive number of minutes")
    mode = doc.get("mode", "corrected" if "wind_speed_grid" in doc else "direct")
    if mode not in ("direct", "corrected"):
        raise ConfigError(f"{where}: mode must be 'direct' or 'corrected'")

    if strategy == "frames":
        raw_sources = doc.get("sources")
        if not isinstance(raw_sources, list) or not raw_sources:
            raise ConfigError(f"{where}: frames strategy needs a non-empty 'sources' list")
        sources = tuple(
            _parse_source(s, constants, f"{where}.sources[{j}]")
            for j, s in enumerate(raw_sources)
        )
        return StepConfig(dt=float(dt), mode="direct", sources=sources)

    if mode == "direct":
        for key in ("head", "back"):
            if key not in doc:
                raise ConfigError(f"{where}: direct mode needs '{key}'")
        return StepConfig(
            dt=float(dt),
            mode="direct",
            head=_scalar(doc["head"], constants, f"{where}.head"),
            back=_scalar(doc["back"], constants, f"{where}.back"),
            wind_speed=_scalar(doc.get("wind_speed", 0.0), constants, f"{where}.wind_speed"),
            wind_dir_deg=_scalar(doc.get("wind_dir_deg", 0.0), constants,
                                 f"{where}.wind_dir_deg"),
            deviation_deg=(
                _scalar(doc["deviation_deg"], constants, f"{where}.deviation_deg")
                if "deviation_deg" in doc else None
            ),
        )

    # corrected mode: wind and moisture come from grids or constants
    moisture = doc.get("moisture")
    ndvi_grid, lst_grid = doc.get("ndvi_grid"), doc.get("lst_grid")
    if (ndvi_grid is None) != (lst_grid is None):
        raise ConfigError(f"{where}: ndvi_grid and lst_grid must be given together")
    if moisture is None and doc.get("moisture_grid") is None and ndvi_grid is None:
        raise ConfigError(
            f"{where}: corrected mode needs 'moisture', 'moisture_grid', "
            "or 'ndvi_grid'+'lst_grid'"
        )
    if ndvi_grid is not None and doc.get("doy") is None:
        raise ConfigError(f"{where}: fuel-moisture prediction from grids needs 'doy'")
    has_wind_grids = doc.get("wind_speed_grid") is not None
    if has_wind_grids != (doc.get("wind_dir_grid") is not None):
        raise ConfigError(f"{where}: wind_speed_grid and wind_dir_grid must be given together")
    if not has_wind_grids and "wind_speed" not in doc:
        raise ConfigError(f"{where}: corrected mode needs wind grids or 'wind_speed'")
    return StepConfig(
        dt=float(dt),
        mode="corrected",
        wind_speed=(_scalar(doc["wind_speed"], constants, f"{where}.wind_speed")
                    if "wind_speed" in doc else None),
        wind_dir_deg=(_scalar(doc.get("wind_dir_deg", 0.0), constants, f"{where}.wind_dir_deg")
                      if not has_wind_grids else None),
        moisture=(_scalar(moisture, constants, f"{where}.moisture")
                  if moisture is not None else None),
        moisture_grid=doc.get("moisture_grid"),
        wind_speed_grid=doc.get("wind_speed_grid"),
        wind_dir_grid=doc.get("wind_dir_grid"),
        ndvi_grid=ndvi_grid,
        lst_grid=lst_grid,
        doy=float(doc["doy"]) if doc.get("doy") is not None else None,
    )


def _parse_ros_params(doc: dict, default_m_min: float, where: str) -> RosModelParams:
    try:
        return RosModelParams(
            scale_a=float(doc["scale_a"]),
            alpha=float(doc["alpha"]),
            beta=float(doc["beta"]),
            m_min=float(doc.get("m_min", default_m_min)),
        )
    except (KeyError, TypeError, ValueError, FirefrontError) as exc:
        raise ConfigError(f"bad {where}: {exc}") from exc


def _parse_sat(doc: dict, where: str) -> SatReference:
    try:
        return SatReference(
            ros_thermal=float(doc["ros_thermal"]),
            wind_sat=float(doc["wind_sat"]),
            moisture_sat=float(doc["moisture_sat"]),
        )
    except (KeyError, TypeError, ValueError, FirefrontError) as exc:
        raise ConfigError(f"bad {where}: {exc}") from exc


def load_scenario(doc: dict | str | bytes) -> ScenarioConfig:
    """Parse and validate a scenario JSON document."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario is not valid JSON: {exc.msg} (line {exc.lineno})")
    if not isinstance(doc, dict):
        raise ConfigError("scenario must be a JSON object")

    strategy = doc.get("strategy", "huygens")
    if strategy not in ("huygens", "frames"):
        raise ConfigError(f"unknown strategy '{strategy}'; use 'huygens' or 'frames'")

    raw_steps = doc.get("steps")
    if not isinstance(raw_steps, list) or not raw_steps:
        raise ConfigError("steps must be non-empty")

    constants_doc = doc.get("constants", {})
    if not isinstance(constants_doc, dict):
        raise ConfigError("constants must map names to numbers")
    constants = {}
    for name, value in constants_doc.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"constant '{name}' must be a number")
        constants[str(name)] = float(value)

    center = doc.get("projection_center", [0.0, 0.0])
    if not isinstance(center, list) or len(center) != 2:
        raise ConfigError("projection_center must be [lon, lat]")

    wind_convention = doc.get("wind_convention", "meteorological_from")
    if wind_convention not in ("meteorological_from", "math_toward"):
        raise ConfigError(f"unknown wind_convention '{wind_convention}'")

    n_theta = doc.get("n_theta", 128)
    if not isinstance(n_theta, int) or n_theta < 16:
        raise ConfigError("n_theta must be an integer >= 16")
    n_bins = doc.get("n_bins", 72)
    if not isinstance(n_bins, int) or n_bins < 4 or n_bins % 2:
        raise ConfigError("n_bins must be an even integer >= 4")
    resample_spacing = doc.get("resample_spacing")
    if resample_spacing is not None and (
        not isinstance(resample_spacing, (int, float)) or resample_spacing <= 0
    ):
        raise ConfigError("resample_spacing must be a positive number")
    m_min = doc.get("m_min", 120.0)
    if not isinstance(m_min, (int, float)) or m_min <= 0:
        raise ConfigError("m_min must be a positive moisture percentage")

    steps = tuple(
        _parse_step(s, strategy, constants, i) if isinstance(s, dict)
        else _raise_step_type(i)
        for i, s in enumerate(raw_steps)
    )

    inputs_doc = doc.get("inputs", {})
    if not isinstance(inputs_doc, dict):
        raise ConfigError("inputs must be an object")
    initial = None
    if isinstance(inputs_doc.get("initial_front"), dict):
        initial = _parse_polygon(inputs_doc["initial_front"])
    hotspot_source = inputs_doc.get("hotspots")
    if hotspot_source is not None and not isinstance(hotspot_source, dict):
        raise ConfigError("inputs.hotspots must be an object with a 'path'")
    grid_paths = inputs_doc.get("grids", {})
    if not isinstance(grid_paths, dict):
        raise ConfigError("inputs.grids must map grid names to file paths")

    lfmc_coef = None
    if isinstance(doc.get("lfmc"), dict) and "coefficients" in doc["lfmc"]:
        c = doc["lfmc"]["coefficients"]
        try:
            lfmc_coef = LfmcCoefficients(
                intercept=float(c["intercept"]),
                ndvi_coef=float(c["ndvi"]),
                lst_coef=float(c["lst"]),
                season_sin=float(c["sin_doy"]),
                season_cos=float(c["cos_doy"]),
            )
        except (KeyError, TypeError, ValueError, FirefrontError) as exc:
            raise ConfigError(f"bad lfmc.coefficients: {exc}") from exc

    params_head = params_back = sat_head = sat_back = None
    if isinstance(doc.get("ros_params_head"), dict):
        params_head = _parse_ros_params(doc["ros_params_head"], m_min, "ros_params_head")
    if isinstance(doc.get("ros_params_back"), dict):
        params_back = _parse_ros_params(doc["ros_params_back"], m_min, "ros_params_back")
    if isinstance(doc.get("sat_reference"), dict):
        sat = doc["sat_reference"]
        if "head" in sat:
            sat_head = _parse_sat(sat["head"], "sat_reference.head")
        if "back" in sat:
            sat_back = _parse_sat(sat["back"], "sat_reference.back")

    needs_correction = any(s.mode == "corrected" for s in steps)
    if needs_correction:
        missing = [name for name, v in (
            ("ros_params_head", params_head), ("ros_params_back", params_back),
            ("sat_reference.head", sat_head), ("sat_reference.back", sat_back),
        ) if v is None]
        if missing:
            raise ConfigError(
                "corrected steps need " + ", ".join(missing)
            )
        if any(s.ndvi_grid is not None for s in steps) and lfmc_coef is None:
            raise ConfigError("fuel-moisture prediction from grids needs lfmc.coefficients")

    return ScenarioConfig(
        strategy=strategy,
        steps=steps,
        projection_center=(float(center[0]), float(center[1])),
        epoch=doc.get("epoch"),
        wind_convention=wind_convention,
        n_theta=n_theta,
        n_bins=n_bins,
        resample_spacing=None if resample_spacing is None else float(resample_spacing),
        m_min=float(m_min),
        constants=constants,
        initial_front=initial,
        hotspot_source=hotspot_source,
        grid_paths={str(k): str(v) for k, v in grid_paths.items()},
        lfmc_coefficients=lfmc_coef,
        ros_params_head=params_head,
        ros_params_back=params_back,
        sat_head=sat_head,
        sat_back=sat_back,
    )


def _raise_step_type(index: int) -> StepConfig:
    raise ConfigError(f"steps[{index}] must be an object")


def load_scenario_inputs(cfg: ScenarioConfig, base_dir) -> ScenarioInputs:
    """Read the files a config references, resolving paths against base_dir."""
    base = Path(base_dir)
    inputs = ScenarioInputs(initial_front=cfg.initial_front)
    if cfg.hotspot_source is not None:
        path = cfg.hotspot_source.get("path")
        if not path:
            raise ConfigError("inputs.hotspots needs a 'path'")
        records, _warnings, _center, _epoch = parse_hotspot_csv(
            (base / path).read_bytes(), center=cfg.projection_center
        )
        inputs.hotspots = records
        if inputs.initial_front is None:
            window = float(cfg.hotspot_source.get("bucket_minutes", 15.0))
            alpha = cfg.hotspot_source.get("alpha")
            buckets = bucket_hotspots(records, window)
            inputs.initial_front = front_from_hotspots(
                buckets[0][1], alpha=None if alpha is None else float(alpha)
            )
    for name, rel in cfg.grid_paths.items():
        inputs.grids[name] = parse_ascii_grid((base / rel).read_bytes())
    return inputs


# ---------------------------------------------------------------- execution

def _grid_value(grids: dict[str, ScalarGrid], name: str, p: Point2,
                step_index: int, what: str) -> float:
    grid = grids.get(name)
    if grid is None:
        raise ScenarioError(f"step {step_index}: {what} grid '{name}' was not loaded",
                            step_index)
    value = sample_grid(grid, p)
    if value == grid.nodata or not math.isfinite(value):
        raise ScenarioError(
            f"step {step_index}: {what} grid '{name}' has no data at "
            f"({p.x:.1f}, {p.y:.1f})", step_index,
        )
    return value


def _direct_sampler(cfg: ScenarioConfig, step: StepConfig):
    def sample(p: Point2) -> tuple[RosPair, EnvSample]:
        head = step.head(p.x, p.y)
        back = step.back(p.x, p.y)
        wind = step.wind_speed(p.x, p.y)
        direction = wind_direction_angle(step.wind_dir_deg(p.x, p.y), cfg.wind_convention)
        deviation = None
        if step.deviation_deg is not None:
            deviation = Angle.from_degrees(step.deviation_deg(p.x, p.y))
        return RosPair(head, back), EnvSample(wind, direction, deviation)
    return sample


def _corrected_sampler(cfg: ScenarioConfig, step: StepConfig,
                       grids: dict[str, ScalarGrid], step_index: int):
    def moisture_at(p: Point2) -> float:
        if step.moisture_grid is not None:
            return _grid_value(grids, step.moisture_grid, p, step_index, "moisture")
        if step.ndvi_grid is not None:
            ndvi = _grid_value(grids, step.ndvi_grid, p, step_index, "NDVI")
            lst = _grid_value(grids, step.lst_grid, p, step_index, "LST")
            obs = LfmcObservation(ndvi=ndvi, lst=lst, doy=step.doy)
            return predict_lfmc(cfg.lfmc_coefficients, obs)
        return step.moisture(p.x, p.y)

    def wind_at(p: Point2) -> tuple[float, Angle]:
        if step.wind_speed_grid is not None:
            speed = _grid_value(grids, step.wind_speed_grid, p, step_index, "wind speed")
            deg = _grid_value(grids, step.wind_dir_grid, p, step_index, "wind direction")
        else:
            speed = step.wind_speed(p.x, p.y)
            deg = step.wind_dir_deg(p.x, p.y)
        return speed, wind_direction_angle(deg, cfg.wind_convention)

    def sample(p: Point2) -> tuple[RosPair, EnvSample]:
        moisture = moisture_at(p)
        speed, direction = wind_at(p)
        head = correct_ros(cfg.sat_head, cfg.ros_params_head, speed, moisture)
        back = correct_ros(cfg.sat_back, cfg.ros_params_back, speed, moisture)
        back = min(back, head)  # corrected pair must stay orientable
        return RosPair(head, back), EnvSample(speed, direction, moisture=moisture)
    return sample


def _step_sampler(cfg: ScenarioConfig, step: StepConfig,
                  inputs: ScenarioInputs, step_index: int):
    if step.mode == "corrected":
        return _corrected_sampler(cfg, step, inputs.grids, step_index)
    return _direct_sampler(cfg, step)


def _diagnose(samples: list[tuple[RosPair, EnvSample]], area: float) -> StepDiagnostics:
    heads = [ros.head for ros, _ in samples]
    backs = [ros.back for ros, _ in samples]
    stalled = sum(1 for ros, _ in samples if ros.head == 0.0 and ros.back == 0.0)
    return StepDiagnostics(
        mean_head=float(np.mean(heads)),
        mean_back=float(np.mean(backs)),
        stalled_vertices=stalled,
        area=area,
    )


def _initial_front(cfg: ScenarioConfig, inputs: ScenarioInputs) -> FireFront:
    if inputs.initial_front is not None:
        return inputs.initial_front
    if cfg.initial_front is not None:
        return cfg.initial_front
    if inputs.hotspots:
        buckets = bucket_hotspots(inputs.hotspots)
        return front_from_hotspots(buckets[0][1])
    raise ScenarioError(
        "an initial front is required: give inputs.initial_front.polygon "
        "or a hotspot source"
    )


def run_scenario(cfg: ScenarioConfig, inputs: ScenarioInputs | None = None) -> RunResult:
    """Execute every step of the scenario.

    Returns the initial front plus one front per completed step. When
    every sampled vertex reports zero spread at some step (for corrected
    runs: moisture at or above the burnable cutoff everywhere), the run
    stops with status "extinguished" and the fronts produced so far.
    """
    if inputs is None:
        inputs = ScenarioInputs(initial_front=cfg.initial_front)
    current = _initial_front(cfg, inputs)
    fronts = [current]
    diagnostics: list[StepDiagnostics] = []

    for k, step in enumerate(cfg.steps):
        try:
            if cfg.strategy == "frames":
                current, diag, burning = _run_frames_step(cfg, step, inputs, current, k)
            else:
                current, diag, burning = _run_huygens_step(cfg, step, inputs, current, k)
        except ScenarioError:
            raise
        except FirefrontError as exc:
            raise ScenarioError(f"step {k}: {exc}", step_index=k) from exc
        if not burning:
            return RunResult(fronts, tuple(diagnostics), "extinguished")
        fronts.append(current)
        diagnostics.append(diag)
    return RunResult(fronts, tuple(diagnostics), "completed")


def _run_huygens_step(cfg: ScenarioConfig, step: StepConfig, inputs: ScenarioInputs,
                      current: FireFront, k: int):
    sampler = _step_sampler(cfg, step, inputs, k)
    samples = [sampler(v) for v in current.vertices]
    if all(ros.head == 0.0 and ros.back == 0.0 for ros, _ in samples):
        return current, None, False
    prop = PropagationStep(dt=step.dt, n_theta=cfg.n_theta,
                           resample_spacing=cfg.resample_spacing)
    new_front = propagate_once(current, prop, sampler, step_index=k)
    return new_front, _diagnose(samples, polygon_signed_area(new_front)), True


def _run_frames_step(cfg: ScenarioConfig, step: StepConfig, inputs: ScenarioInputs,
                     current: FireFront, k: int):
    samples = []
    specs = []
    for source in step.sources:
        p = source.anchor
        head = source.head(p.x, p.y)
        back = source.back(p.x, p.y)
        wind = source.wind_speed(p.x, p.y)
        direction = wind_direction_angle(source.wind_dir_deg(p.x, p.y), cfg.wind_convention)
        ros, env = RosPair(head, back), EnvSample(wind, direction)
        samples.append((ros, env))
        if head > 0.0:
            specs.append(FrameSpec(anchor=p, ros=ros, env=env,
                                   duration=source.duration or step.dt))
    if not specs:
        return current, None, False
    frames = [build_frame(spec, cfg.n_theta) for spec in specs]
    region = enclose_frames(frames, previous_region=current, time=current.time + step.dt)
    return region, _diagnose(samples, polygon_signed_area(region)), True


# ------------------------------------------------------------- sensitivity

@dataclass(frozen=True)
class Perturbation:
    """Named variation on a base scenario.

    Scales multiply the sampled value; the wind direction offset is
    added in degrees. `steps` replaces the whole step list (same JSON
    schema as the config's steps).
    """
    name: str
    wind_dir_offset_deg: float = 0.0
    wind_speed_scale: float = 1.0
    head_scale: float = 1.0
    back_scale: float = 1.0
    steps: tuple[StepConfig, ...] | None = None


def parse_perturbation(doc: dict, cfg: ScenarioConfig) -> Perturbation:
    if not isinstance(doc, dict) or "name" not in doc:
        raise ConfigError("each perturbation must be an object with a 'name'")
    steps = None
    if "steps" in doc:
        raw = doc["steps"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"perturbation '{doc['name']}': steps must be non-empty")
        steps = tuple(
            _parse_step(s, cfg.strategy, cfg.constants, i) for i, s in enumerate(raw)
        )
    return Perturbation(
        name=str(doc["name"]),
        wind_dir_offset_deg=float(doc.get("wind_dir_offset_deg", 0.0)),
        wind_speed_scale=float(doc.get("wind_speed_scale", 1.0)),
        head_scale=float(doc.get("head_scale", 1.0)),
        back_scale=float(doc.get("back_scale", 1.0)),
        steps=steps,
    )


def load_perturbations(doc: dict | str | bytes, cfg: ScenarioConfig) -> list[Perturbation]:
    """Parse a sweep document: {"perturbations": [...], "constants"?: {...}}.

    Extra constants extend the base config's for compiling replacement
    step expressions.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"sweep file is not valid JSON: {exc.msg} (line {exc.lineno})")
    if not isinstance(doc, dict) or not isinstance(doc.get("perturbations"), list):
        raise ConfigError("sweep document needs a 'perturbations' list")
    extra = doc.get("constants", {})
    if extra:
        cfg = replace(cfg, constants={**cfg.constants, **{
            str(k): float(v) for k, v in extra.items()
        }})
    return [parse_perturbation(p, cfg) for p in doc["perturbations"]]


def _scaled(fn: Scalar | None, factor: float) -> Scalar | None:
    if fn is None or factor == 1.0:
        return fn
    return lambda x, y: factor * fn(x, y)


def _offset(fn: Scalar | None, delta: float) -> Scalar | None:
    if fn is None or delta == 0.0:
        return fn
    return lambda x, y: fn(x, y) + delta


def _perturbed_config(cfg: ScenarioConfig, pert: Perturbation) -> ScenarioConfig:
    if pert.steps is not None:
        return replace(cfg, steps=pert.steps)
    new_steps = []
    for step in cfg.steps:
        # meteorological bearings grow clockwise, planar headings the
        # other way; flip the sign so the offset always turns the same way
        dir_delta = (
            -pert.wind_dir_offset_deg
            if cfg.wind_convention == "meteorological_from"
            else pert.wind_dir_offset_deg
        )
        sources = tuple(
            replace(
                s,
                head=_scaled(s.head, pert.head_scale),
                back=_scaled(s.back, pert.back_scale),
                wind_speed=_scaled(s.wind_speed, pert.wind_speed_scale),
                wind_dir_deg=_offset(s.wind_dir_deg, dir_delta),
            )
            for s in step.sources
        )
        new_steps.append(replace(
            step,
            head=_scaled(step.head, pert.head_scale),
            back=_scaled(step.back, pert.back_scale),
            wind_speed=_scaled(step.wind_speed, pert.wind_speed_scale),
            wind_dir_deg=_offset(step.wind_dir_deg, dir_delta),
            sources=sources,
        ))
    return replace(cfg, steps=tuple(new_steps))


def sensitivity_sweep(
    cfg: ScenarioConfig,
    perturbations: list[Perturbation],
    inputs: ScenarioInputs | None = None,
) -> tuple[list[RunResult], np.ndarray]:
    """Run the base scenario and each perturbed variant.

    Returns (results, matrix): results[0] is the base run followed by
    one result per perturbation, and matrix[i][j] is the symmetric
    Hausdorff distance between final fronts i and j.
    """
    results = [run_scenario(cfg, inputs)]
    for pert in perturbations:
        results.append(run_scenario(_perturbed_config(cfg, pert), inputs))
    n = len(results)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = hausdorff_distance(results[i].fronts[-1], results[j].fronts[-1])
            matrix[i, j] = matrix[j, i] = d
    return results, matrix
