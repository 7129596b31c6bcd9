"""Bulk spread-rate model, satellite correction factor, calibration."""

from __future__ import annotations

import math

import numpy as np
import pytest

from firefront import (
    CalibrationError,
    RosModelParams,
    RosObservation,
    SatReference,
    SingularFitError,
    UnknownLabelError,
    base_ros,
    calibrate_ros,
    correct_ros,
    params_from_literature,
)

PARAMS = RosModelParams(scale_a=2.0, alpha=0.70, beta=0.039)
REF = SatReference(ros_thermal=2.00, wind_sat=4.0, moisture_sat=8.0)

# corrected rate (m/min) over wind (rows, m/s) and moisture (cols, %)
GRID_WINDS = (2.0, 4.0, 6.0, 8.0)
GRID_MOISTURES = (6.0, 8.0, 10.0, 12.0)
GRID_RATES = (
    (1.331, 1.231, 1.139, 1.053),
    (2.162, 2.000, 1.850, 1.711),
    (2.872, 2.656, 2.457, 2.273),
    (3.513, 3.249, 3.005, 2.780),
)


# -------------------------------------------------------------- bulk model

def test_base_rate_worked_example():
    assert base_ros(PARAMS, 4.0, 8.0) == pytest.approx(3.863421668147564, rel=1e-12)


def test_base_rate_calm_air_is_zero():
    assert base_ros(PARAMS, 0.0, 8.0) == 0.0


def test_base_rate_rejects_negative_wind():
    with pytest.raises(ValueError):
        base_ros(PARAMS, -1.0, 8.0)


def test_moisture_cutoff_kills_spread():
    damped = RosModelParams(scale_a=2.0, alpha=0.7, beta=0.039, m_min=120.0)
    assert base_ros(damped, 4.0, 119.9) > 0.0
    assert base_ros(damped, 4.0, 120.0) == 0.0
    assert base_ros(damped, 4.0, 200.0) == 0.0


def test_param_validation():
    with pytest.raises(CalibrationError):
        RosModelParams(scale_a=0.0, alpha=0.7, beta=0.039)
    with pytest.raises(CalibrationError):
        RosModelParams(scale_a=2.0, alpha=0.0, beta=0.039)
    with pytest.raises(CalibrationError):
        RosModelParams(scale_a=2.0, alpha=0.7, beta=-0.01)
    with pytest.raises(CalibrationError):
        RosModelParams(scale_a=2.0, alpha=0.7, beta=0.039, m_min=0.0)
    # beta = 0 disables moisture damping but is legal
    RosModelParams(scale_a=2.0, alpha=0.7, beta=0.0)


# -------------------------------------------------------------- correction

def test_identity_cell_returns_thermal_rate():
    assert correct_ros(REF, PARAMS, 4.0, 8.0) == pytest.approx(2.000, abs=1e-12)


def test_corrected_rate_grid():
    """Full wind x moisture table reproduced to three decimals."""
    for u, row in zip(GRID_WINDS, GRID_RATES):
        for m, expected in zip(GRID_MOISTURES, row):
            got = correct_ros(REF, PARAMS, u, m)
            assert got == pytest.approx(expected, abs=5e-4), (u, m)


def test_correction_consistent_with_bulk_model():
    """When the thermal rate equals the bulk model at reference conditions,
    the corrected rate equals the bulk model everywhere."""
    ref = SatReference(base_ros(PARAMS, 4.0, 8.0), 4.0, 8.0)
    for u in (0.5, 2.0, 7.3):
        for m in (3.0, 8.0, 15.0):
            assert correct_ros(ref, PARAMS, u, m) == pytest.approx(
                base_ros(PARAMS, u, m), rel=1e-12)


def test_correction_honors_cutoff():
    damped = RosModelParams(scale_a=2.0, alpha=0.7, beta=0.039, m_min=30.0)
    assert correct_ros(REF, damped, 4.0, 29.0) > 0.0
    assert correct_ros(REF, damped, 4.0, 30.0) == 0.0


def test_correction_rejects_negative_wind():
    with pytest.raises(ValueError):
        correct_ros(REF, PARAMS, -2.0, 8.0)


def test_reference_validation():
    with pytest.raises(CalibrationError):
        SatReference(2.0, 0.0, 8.0)
    with pytest.raises(CalibrationError):
        SatReference(-1.0, 4.0, 8.0)


# ------------------------------------------------------------- calibration

def synth_obs(n: int, params: RosModelParams = PARAMS, seed: int = 0):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        u = float(rng.uniform(0.5, 9.0))
        m = float(rng.uniform(2.0, 20.0))
        rows.append(RosObservation(base_ros(params, u, m), u, m))
    return rows


def test_calibration_recovers_parameters():
    fitted, report = calibrate_ros(synth_obs(25, seed=3))
    assert fitted.scale_a == pytest.approx(2.0, rel=1e-9)
    assert fitted.alpha == pytest.approx(0.70, rel=1e-9)
    assert fitted.beta == pytest.approx(0.039, rel=1e-9)
    assert fitted.m_min is None
    assert report.rmse == pytest.approx(0.0, abs=1e-10)


def test_calibration_needs_three_rows():
    with pytest.raises(CalibrationError, match=">= 3"):
        calibrate_ros(synth_obs(2))


def test_constant_wind_is_rank_deficient():
    rows = [RosObservation(base_ros(PARAMS, 4.0, m), 4.0, m)
            for m in (4.0, 6.0, 8.0, 10.0)]
    with pytest.raises(SingularFitError) as err:
        calibrate_ros(rows)
    assert err.value.columns == ["ln_wind"]


def test_constant_moisture_is_rank_deficient():
    rows = [RosObservation(base_ros(PARAMS, u, 8.0), u, 8.0)
            for u in (1.0, 3.0, 5.0, 7.0)]
    with pytest.raises(SingularFitError) as err:
        calibrate_ros(rows)
    assert err.value.columns == ["moisture"]


def test_wind_slowing_fire_is_rejected():
    inverted = [RosObservation(5.0 / u * math.exp(-0.05 * m), u, m)
                for u, m in [(1, 5), (2, 12), (4, 6), (8, 15)]]
    with pytest.raises(CalibrationError, match="not positive"):
        calibrate_ros(inverted)


def test_moisture_speeding_fire_is_rejected():
    rows = [RosObservation(2.0 * u**0.7 * math.exp(+0.05 * m), u, m)
            for u, m in [(1, 5), (2, 12), (4, 6), (8, 15)]]
    with pytest.raises(CalibrationError, match="increase spread"):
        calibrate_ros(rows)


def test_observation_validation():
    with pytest.raises(CalibrationError):
        RosObservation(0.0, 4.0, 8.0)
    with pytest.raises(CalibrationError):
        RosObservation(2.0, 0.0, 8.0)
    with pytest.raises(CalibrationError):
        RosObservation(2.0, 4.0, math.nan)


# --------------------------------------------------------------- fallbacks

def test_literature_ranges():
    grass_dry = params_from_literature("grass", "dry")
    assert grass_dry.alpha_range == (1.0, 1.5)
    assert grass_dry.beta_range == (0.05, 0.1)
    litter_green = params_from_literature("forest-litter", "live-green")
    assert litter_green.alpha_range == (0.3, 0.8)
    assert litter_green.beta_range == (0.15, 0.25)
    shrub_mod = params_from_literature("shrub", "moderate")
    assert shrub_mod.alpha_range == (0.8, 1.2)
    assert shrub_mod.beta_range == (0.1, 0.15)


def test_literature_labels_are_normalized():
    a = params_from_literature("Forest Litter", "Live Green")
    b = params_from_literature("forest-litter", "live-green")
    assert a == b


def test_unknown_labels():
    with pytest.raises(UnknownLabelError):
        params_from_literature("tundra", "dry")
    with pytest.raises(UnknownLabelError):
        params_from_literature("grass", "soggy")


def test_midpoint_params():
    mid = params_from_literature("grass", "dry").midpoint_params(scale_a=2.0)
    assert mid.alpha == pytest.approx(1.25)
    assert mid.beta == pytest.approx(0.075)
    assert mid.scale_a == 2.0
