"""Fire-front growth modeling from satellite observations.

Anisotropic spread kernel, Huygens-style envelope propagation, anchored
growth frames, fuel-moisture and spread-rate calibration, hotspot front
tracking, and the scenario pipeline tying them together.
"""

from .correction import (
    LiteratureRanges,
    RosModelParams,
    RosObservation,
    SatReference,
    base_ros,
    calibrate_ros,
    correct_ros,
    params_from_literature,
)
from .errors import (
    CalibrationError,
    ConfigError,
    DegenerateSpreadError,
    DisconnectedRegionError,
    ExpressionError,
    FirefrontError,
    GeometryError,
    MissingColumnError,
    ParseError,
    PropagationError,
    ScenarioError,
    SingularFitError,
    TrackingError,
    UnknownLabelError,
)
from .expressions import compile_expression, evaluate_expression
from .fileio import (
    parse_ascii_grid,
    parse_fronts_geojson,
    parse_hotspot_csv,
    project_to_lonlat,
    project_to_plane,
    read_lfmc_csv,
    read_ros_csv,
    render_fronts_svg,
    wind_direction_angle,
    write_fronts_csv,
    write_fronts_geojson,
)
from .frames import FrameSpec, build_frame, enclose_frames
from .geometry import (
    Angle,
    FireFront,
    Point2,
    ScalarGrid,
    angle_between,
    front_is_simple,
    hausdorff_distance,
    point_in_polygon,
    polygon_signed_area,
    polygon_support,
    sample_grid,
)
from .huygens import (
    PropagationStep,
    envelope_boundary,
    front_from_polygon,
    propagate_once,
    propagate_sequence,
    resample_front,
)
from .lfmc import (
    FitReport,
    LfmcCoefficients,
    LfmcObservation,
    ViFallback,
    calibrate_lfmc,
    calibrate_lfmc_stratified,
    calibrate_vi_fallback,
    cross_validate_lfmc,
    fit_metrics,
    predict_lfmc,
    predict_lfmc_vi,
)
from .pipeline import (
    load_perturbations,
    Perturbation,
    RunResult,
    ScenarioConfig,
    ScenarioInputs,
    StepDiagnostics,
    load_scenario,
    load_scenario_inputs,
    run_scenario,
    sensitivity_sweep,
)
from .ros import (
    EllipseParams,
    EnvSample,
    RosPair,
    compute_abc,
    directional_ros,
    directional_ros_profile,
    spread_params,
    wavelet_polygon,
)
from .tracking import (
    DirectionalRosProfile,
    HotspotRecord,
    bucket_hotspots,
    directional_displacement,
    front_from_hotspots,
    thermal_ros,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
