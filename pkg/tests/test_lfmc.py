"""Fuel-moisture regression: prediction, calibration, validation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from firefront import (
    CalibrationError,
    FitReport,
    LfmcCoefficients,
    LfmcObservation,
    SingularFitError,
    ViFallback,
    calibrate_lfmc,
    calibrate_lfmc_stratified,
    calibrate_vi_fallback,
    cross_validate_lfmc,
    fit_metrics,
    predict_lfmc,
    predict_lfmc_vi,
)

TRUE = LfmcCoefficients(80.0, 60.0, -0.2, 10.0, -5.0)


def synth_rows(n: int, coef: LfmcCoefficients = TRUE, seed: int = 0,
               noise: float = 0.0) -> list[LfmcObservation]:
    """Rows drawn from the model itself, optionally with Gaussian noise."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        ndvi = float(rng.uniform(0.05, 0.9))
        lst = float(rng.uniform(280.0, 330.0))
        doy = float(rng.uniform(1.0, 366.0))
        phase = 2.0 * math.pi * doy / 365.0
        lfmc = (coef.intercept + coef.ndvi_coef * ndvi + coef.lst_coef * lst
                + coef.season_sin * math.sin(phase)
                + coef.season_cos * math.cos(phase)
                + float(rng.normal(0.0, noise)) if noise else
                coef.intercept + coef.ndvi_coef * ndvi + coef.lst_coef * lst
                + coef.season_sin * math.sin(phase)
                + coef.season_cos * math.cos(phase))
        rows.append(LfmcObservation(ndvi, lst, doy, lfmc))
    return rows


# ------------------------------------------------------------- prediction

def test_prediction_worked_example():
    obs = LfmcObservation(0.4, 300.0, 91.0)
    assert predict_lfmc(TRUE, obs) == pytest.approx(53.97838970588068, rel=1e-12)


def test_prediction_clamps_at_zero():
    dry = LfmcCoefficients(-500.0, 0.0, 0.0, 0.0, 0.0)
    assert predict_lfmc(dry, LfmcObservation(0.5, 300.0, 180.0)) == 0.0


def test_fallback_prediction_and_clamp():
    fb = ViFallback(200.0, -20.0)
    assert predict_lfmc_vi(fb, 0.6) == pytest.approx(100.0)
    assert predict_lfmc_vi(fb, 0.0) == 0.0


def test_observation_validation():
    with pytest.raises(CalibrationError):
        LfmcObservation(1.5, 300.0, 100.0)
    with pytest.raises(CalibrationError):
        LfmcObservation(0.5, 300.0, 0.0)
    with pytest.raises(CalibrationError):
        LfmcObservation(0.5, math.nan, 100.0)


def test_coefficients_must_be_finite():
    with pytest.raises(CalibrationError):
        LfmcCoefficients(math.inf, 0.0, 0.0, 0.0, 0.0)


# ------------------------------------------------------------ calibration

def test_noiseless_rows_recover_coefficients():
    rows = synth_rows(40, seed=2)
    coef, report = calibrate_lfmc(rows)
    assert coef.as_array() == pytest.approx(TRUE.as_array(), abs=1e-6)
    assert report.rmse == pytest.approx(0.0, abs=1e-7)
    assert report.r2 == pytest.approx(1.0, abs=1e-9)
    assert report.n_rows == 40


def test_noisy_fit_stays_close():
    rows = synth_rows(400, seed=5, noise=3.0)
    coef, report = calibrate_lfmc(rows)
    assert coef.ndvi_coef == pytest.approx(TRUE.ndvi_coef, abs=3.0)
    assert coef.lst_coef == pytest.approx(TRUE.lst_coef, abs=0.05)
    assert report.rmse == pytest.approx(3.0, abs=1.0)


def test_too_few_rows():
    with pytest.raises(CalibrationError, match=">= 5"):
        calibrate_lfmc(synth_rows(4))


def test_rows_without_lfmc_are_rejected():
    rows = synth_rows(6)
    rows[3] = LfmcObservation(rows[3].ndvi, rows[3].lst, rows[3].doy, None)
    with pytest.raises(CalibrationError, match="row 3"):
        calibrate_lfmc(rows)


def test_single_doy_is_rank_deficient():
    """Fixed DOY makes the seasonal pair constant, hence collinear with
    the intercept; the error must name the degenerate columns."""
    rng = np.random.default_rng(7)
    rows = [
        LfmcObservation(float(rng.uniform(0.1, 0.9)),
                        float(rng.uniform(280, 330)), 150.0, 80.0)
        for _ in range(12)
    ]
    with pytest.raises(SingularFitError) as err:
        calibrate_lfmc(rows)
    named = set(err.value.columns)
    assert len(named) == 2
    assert named <= {"intercept", "sin_doy", "cos_doy"}


def test_sign_warnings_on_implausible_coefficients():
    flipped = LfmcCoefficients(80.0, -60.0, +0.2, 10.0, -5.0)
    rows = synth_rows(30, coef=flipped, seed=9)
    coef, report = calibrate_lfmc(rows)
    assert coef.ndvi_coef < 0.0
    joined = " ".join(report.warnings)
    assert "NDVI" in joined
    assert "LST" in joined


# ------------------------------------------------------------- stratified

def test_stratified_fits_each_label():
    other = LfmcCoefficients(120.0, 30.0, -0.3, 5.0, 2.0)
    rows = [("shrub", o) for o in synth_rows(20, seed=1)]
    rows += [("grass", o) for o in synth_rows(20, coef=other, seed=2)]
    fits = calibrate_lfmc_stratified(rows)
    assert sorted(fits) == ["grass", "shrub"]
    assert fits["shrub"].as_array() == pytest.approx(TRUE.as_array(), abs=1e-6)
    assert fits["grass"].as_array() == pytest.approx(other.as_array(), abs=1e-6)


def test_stratified_rejects_thin_stratum():
    rows = [("a", o) for o in synth_rows(10, seed=3)]
    rows += [("b", o) for o in synth_rows(4, seed=4)]
    with pytest.raises(CalibrationError, match="'b'"):
        calibrate_lfmc_stratified(rows)


# ------------------------------------------------------- cross-validation

def test_cross_validation_by_label():
    rows = [("north", o) for o in synth_rows(15, seed=11)]
    rows += [("south", o) for o in synth_rows(15, seed=12)]
    reports = cross_validate_lfmc(rows)
    assert sorted(reports) == ["north", "south"]
    # same generating model everywhere: held-out error stays near zero
    for rep in reports.values():
        assert rep.n_rows == 15
        assert rep.rmse == pytest.approx(0.0, abs=1e-6)


def test_cross_validation_needs_two_folds():
    rows = [("only", o) for o in synth_rows(12, seed=13)]
    with pytest.raises(CalibrationError, match=">= 2 folds"):
        cross_validate_lfmc(rows)


def test_cross_validation_needs_training_rows():
    rows = [("big", o) for o in synth_rows(8, seed=14)]
    rows += [("small", o) for o in synth_rows(3, seed=15)]
    with pytest.raises(CalibrationError, match="'big'"):
        cross_validate_lfmc(rows)


def test_cross_validation_unknown_fold():
    rows = [("a", o) for o in synth_rows(8, seed=16)]
    rows += [("b", o) for o in synth_rows(8, seed=17)]
    with pytest.raises(CalibrationError, match="'c'"):
        cross_validate_lfmc(rows, folds=["a", "c"])


# ---------------------------------------------------------------- fallback

def test_vi_fallback_recovers_line():
    fb_true = ViFallback(150.0, 12.0)
    pairs = [(v, 150.0 * v + 12.0) for v in np.linspace(0.1, 0.8, 9)]
    fb, report = calibrate_vi_fallback(pairs)
    assert fb.slope == pytest.approx(150.0, rel=1e-9)
    assert fb.offset == pytest.approx(12.0, rel=1e-9)
    assert report.r2 == pytest.approx(1.0, abs=1e-12)
    assert predict_lfmc_vi(fb, 0.5) == pytest.approx(predict_lfmc_vi(fb_true, 0.5))


def test_vi_fallback_identical_vi_is_singular():
    pairs = [(0.4, 80.0), (0.4, 90.0), (0.4, 100.0)]
    with pytest.raises(SingularFitError):
        calibrate_vi_fallback(pairs)


def test_vi_fallback_needs_two_pairs():
    with pytest.raises(CalibrationError):
        calibrate_vi_fallback([(0.4, 80.0)])


# ------------------------------------------------------------------ metrics

def test_fit_metrics_perfect_and_constant():
    y = np.array([3.0, 3.0, 3.0])
    assert fit_metrics(y, y).r2 == 1.0
    off = fit_metrics(y, y + 1.0)
    assert off.r2 == 0.0
    assert off.rmse == pytest.approx(1.0)
    assert off.mae == pytest.approx(1.0)


def test_fit_report_fields():
    rep = FitReport(n_rows=4, rmse=1.5, mae=1.0, r2=0.8)
    assert rep.warnings == ()
