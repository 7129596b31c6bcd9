"""Command-line front end.

Subcommands: simulate (scenario JSON to GeoJSON/CSV/SVG), calibrate-lfmc,
calibrate-ros (both print JSON to stdout), estimate-ros (directional rates
from two hotspot snapshots), render (GeoJSON to SVG). Exit codes: 0 on
success, 2 for input or validation problems, 3 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import datetime
from pathlib import Path

from .correction import calibrate_ros
from .errors import (
    CalibrationError,
    ConfigError,
    ExpressionError,
    FirefrontError,
    ParseError,
    TrackingError,
    UnknownLabelError,
)
from .fileio import (
    parse_fronts_geojson,
    parse_hotspot_csv,
    read_lfmc_csv,
    read_ros_csv,
    render_fronts_svg,
    write_fronts_csv,
    write_fronts_geojson,
)
from .lfmc import FitReport, calibrate_lfmc, calibrate_lfmc_stratified, cross_validate_lfmc
from .pipeline import load_scenario, load_scenario_inputs, run_scenario
from .tracking import front_from_hotspots, thermal_ros


def _report_json(report: FitReport) -> dict:
    return {
        "n_rows": report.n_rows,
        "rmse": report.rmse,
        "mae": report.mae,
        "r2": report.r2,
        "warnings": list(report.warnings),
    }


def _coefficients_json(coef) -> dict:
    return {
        "intercept": coef.intercept,
        "ndvi": coef.ndvi_coef,
        "lst": coef.lst_coef,
        "sin_doy": coef.season_sin,
        "cos_doy": coef.season_cos,
    }


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


# ------------------------------------------------------------- subcommands

def _cmd_simulate(args) -> int:
    config_path = Path(args.config)
    cfg = load_scenario(config_path.read_bytes())
    if args.strategy and args.strategy != cfg.strategy:
        # steps are parsed against the config's own strategy, so an
        # override only works when they carry the other strategy's fields
        if args.strategy == "frames" and any(not s.sources for s in cfg.steps):
            raise ConfigError("--strategy frames needs 'sources' in every step")
        if args.strategy == "huygens" and any(
            s.mode == "direct" and s.head is None for s in cfg.steps
        ):
            raise ConfigError(
                "--strategy huygens needs direct rates or corrected mode in every step"
            )
        cfg = replace(cfg, strategy=args.strategy)
    inputs = load_scenario_inputs(cfg, config_path.parent)
    result = run_scenario(cfg, inputs)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    formats = {"geojson", "csv", "svg"} if args.format == "all" else {args.format}
    if "geojson" in formats:
        path = out_dir / "fronts.geojson"
        path.write_bytes(write_fronts_geojson(result, cfg.projection_center))
        written.append(path)
    if "csv" in formats:
        path = out_dir / "fronts.csv"
        path.write_bytes(write_fronts_csv(result))
        written.append(path)
    if "svg" in formats:
        path = out_dir / "fronts.svg"
        path.write_bytes(render_fronts_svg(result))
        written.append(path)
    summary = out_dir / "run.json"
    summary.write_text(json.dumps({
        "status": result.status,
        "fronts": len(result.fronts),
        "steps_completed": len(result.diagnostics),
    }, indent=2, sort_keys=True))
    written.append(summary)

    for path in written:
        print(path)
    if result.status == "extinguished":
        print("fire extinguished before the last step", file=sys.stderr)
    return 0


def _cmd_calibrate_lfmc(args) -> int:
    rows = read_lfmc_csv(Path(args.rows).read_bytes())
    if args.cv_folds is not None and args.cv_folds != "stratum":
        raise ConfigError(
            f"--cv-folds supports only the 'stratum' column, not '{args.cv_folds}'"
        )
    doc: dict = {}
    if args.stratified:
        fits = calibrate_lfmc_stratified(rows)
        doc["strata"] = {
            label: {"coefficients": _coefficients_json(coef)}
            for label, coef in fits.items()
        }
    else:
        coef, report = calibrate_lfmc([obs for _, obs in rows])
        doc["coefficients"] = _coefficients_json(coef)
        doc["report"] = _report_json(report)
    if args.cv_folds is not None:
        folds = cross_validate_lfmc(rows)
        doc["cross_validation"] = {label: _report_json(rep) for label, rep in folds.items()}
    _emit(doc)
    return 0


def _cmd_calibrate_ros(args) -> int:
    rows = read_ros_csv(Path(args.rows).read_bytes())
    params, report = calibrate_ros(rows)
    _emit({
        "params": {"scale_a": params.scale_a, "alpha": params.alpha, "beta": params.beta},
        "report": _report_json(report),
    })
    return 0


def _parse_iso(text: str, flag: str) -> datetime:
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise ConfigError(f"{flag} must be an ISO timestamp, got '{text}'") from None


def _cmd_estimate_ros(args) -> int:
    records, warnings, _center, epoch = parse_hotspot_csv(Path(args.hotspots).read_bytes())
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    t0 = (_parse_iso(args.t0, "--t0") - epoch).total_seconds() / 60.0
    t1 = (_parse_iso(args.t1, "--t1") - epoch).total_seconds() / 60.0
    if t1 <= t0:
        raise ConfigError("--t1 must be later than --t0")
    half = args.window / 2.0
    snap0 = [r for r in records if abs(r.time - t0) <= half]
    snap1 = [r for r in records if abs(r.time - t1) <= half]
    earlier = front_from_hotspots(snap0, alpha=args.alpha_shape)
    later = front_from_hotspots(snap1, alpha=args.alpha_shape)
    profile = thermal_ros(earlier, later, dt=t1 - t0, n_bins=args.bins)
    head_angle, head_rate = profile.head
    back_angle, back_rate = profile.back
    _emit({
        "dt_minutes": t1 - t0,
        "snapshot_sizes": [len(snap0), len(snap1)],
        "angles_deg": [a.degrees for a in profile.angles],
        "rates_m_per_min": list(profile.rates),
        "head": {"angle_deg": head_angle.degrees, "rate_m_per_min": head_rate},
        "back": {"angle_deg": back_angle.degrees, "rate_m_per_min": back_rate},
    })
    return 0


def _cmd_render(args) -> int:
    data = Path(args.fronts).read_bytes()
    if args.center:
        try:
            lon, lat = (float(v) for v in args.center.split(","))
        except ValueError:
            raise ConfigError("--center must be 'lon,lat'") from None
        center = (lon, lat)
    else:
        # fall back to the first ring's mean position
        doc = json.loads(data.decode("utf-8"))
        try:
            ring = doc["features"][0]["geometry"]["coordinates"][0]
            center = (
                sum(c[0] for c in ring) / len(ring),
                sum(c[1] for c in ring) / len(ring),
            )
        except (KeyError, IndexError, TypeError, ZeroDivisionError):
            raise ParseError("cannot infer a projection center; pass --center lon,lat")
    fronts = parse_fronts_geojson(data, center)
    out = Path(args.out)
    out.write_bytes(render_fronts_svg(fronts, width=args.width))
    print(out)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firefront",
        description="Fire-front growth simulation and satellite-driven calibration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario config and write front products")
    p.add_argument("--config", required=True, help="scenario JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=["geojson", "csv", "svg", "all"], default="all")
    p.add_argument("--strategy", choices=["huygens", "frames"], default=None,
                   help="override the config's propagation strategy")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("calibrate-lfmc", help="fit fuel-moisture regression from a CSV")
    p.add_argument("--rows", required=True, help="CSV: stratum,ndvi,lst_k,doy,lfmc_pct")
    p.add_argument("--stratified", action="store_true",
                   help="fit each stratum separately")
    p.add_argument("--cv-folds", metavar="LABELCOL", default=None,
                   help="leave-one-label-out cross validation (column: stratum)")
    p.set_defaults(func=_cmd_calibrate_lfmc)

    p = sub.add_parser("calibrate-ros", help="fit spread-rate model from a CSV")
    p.add_argument("--rows", required=True,
                   help="CSV: ros_m_per_min,wind_m_per_s,moisture_pct")
    p.set_defaults(func=_cmd_calibrate_ros)

    p = sub.add_parser("estimate-ros",
                       help="directional spread rates from two hotspot snapshots")
    p.add_argument("--hotspots", required=True, help="FIRMS-style CSV path")
    p.add_argument("--t0", required=True, help="earlier snapshot time (ISO)")
    p.add_argument("--t1", required=True, help="later snapshot time (ISO)")
    p.add_argument("--bins", type=int, default=72, help="angular bins (even)")
    p.add_argument("--alpha-shape", type=float, default=None, metavar="R",
                   help="alpha-shape radius in meters (default: convex hull)")
    p.add_argument("--window", type=float, default=15.0,
                   help="snapshot matching window in minutes")
    p.set_defaults(func=_cmd_estimate_ros)

    p = sub.add_parser("render", help="draw a fronts GeoJSON as SVG")
    p.add_argument("--fronts", required=True, help="GeoJSON written by simulate")
    p.add_argument("--out", required=True, help="SVG output path")
    p.add_argument("--center", default=None, help="projection center 'lon,lat'")
    p.add_argument("--width", type=int, default=800)
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad flags exit 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ParseError, CalibrationError, TrackingError,
            UnknownLabelError, ExpressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FirefrontError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
