"""Live fuel moisture content (LFMC) regression.

LFMC is predicted from NDVI, land surface temperature and a seasonal
sine/cosine pair on day-of-year:

    LFMC = A + B*NDVI + C*LST + D1*sin(2*pi*DOY/365) + D2*cos(2*pi*DOY/365)

Coefficients are estimated by ordinary least squares from coincident
satellite and field observations, optionally stratified by region or fuel
class. A single-index linear fallback (slope * VI + offset) covers sites
where only one vegetation index is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import CalibrationError, SingularFitError

_DESIGN_COLUMNS = ("intercept", "ndvi", "lst", "sin_doy", "cos_doy")


@dataclass(frozen=True)
class LfmcCoefficients:
    """Regression coefficients: intercept, NDVI, LST and seasonal terms.

    Units: intercept and seasonal terms in percent; ndvi_coef in percent
    per unit NDVI; lst_coef in percent per kelvin.
    """

    intercept: float
    ndvi_coef: float
    lst_coef: float
    season_sin: float
    season_cos: float

    def __post_init__(self):
        vals = (self.intercept, self.ndvi_coef, self.lst_coef, self.season_sin, self.season_cos)
        if not all(math.isfinite(v) for v in vals):
            raise CalibrationError(f"non-finite coefficients {vals}")

    def as_array(self) -> np.ndarray:
        return np.array([self.intercept, self.ndvi_coef, self.lst_coef,
                         self.season_sin, self.season_cos])


@dataclass(frozen=True)
class LfmcObservation:
    """One sample: NDVI (unitless), LST (kelvin), DOY, optional LFMC %."""

    ndvi: float
    lst: float
    doy: float
    lfmc: float | None = None

    def __post_init__(self):
        if not -1.0 <= self.ndvi <= 1.0:
            raise CalibrationError(f"NDVI must lie in [-1, 1], got {self.ndvi}")
        if not 1.0 <= self.doy <= 366.0:
            raise CalibrationError(f"DOY must lie in [1, 366], got {self.doy}")
        if not math.isfinite(self.lst):
            raise CalibrationError(f"non-finite LST {self.lst}")
        if self.lfmc is not None and not math.isfinite(self.lfmc):
            raise CalibrationError(f"non-finite LFMC {self.lfmc}")


@dataclass(frozen=True)
class ViFallback:
    """Single-index linear fallback: LFMC = slope * VI + offset."""

    slope: float
    offset: float

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.offset)):
            raise CalibrationError(f"non-finite fallback ({self.slope}, {self.offset})")


@dataclass(frozen=True)
class FitReport:
    """Goodness-of-fit metrics over one set of rows.

    For calibration this describes the training rows; for cross-validation
    it describes the held-out fold. `warnings` lists soft issues such as
    coefficient signs contradicting physical expectations.
    """

    n_rows: int
    rmse: float
    mae: float
    r2: float
    warnings: tuple[str, ...] = field(default=())


def _seasonal(doy: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    phase = 2.0 * math.pi * np.asarray(doy, dtype=float) / 365.0
    return np.sin(phase), np.cos(phase)


def predict_lfmc(coef: LfmcCoefficients, obs: LfmcObservation) -> float:
    """Model prediction in percent, clamped below at zero."""
    s, c = _seasonal(obs.doy)
    raw = (coef.intercept + coef.ndvi_coef * obs.ndvi + coef.lst_coef * obs.lst
           + coef.season_sin * float(s) + coef.season_cos * float(c))
    return max(raw, 0.0)


def predict_lfmc_vi(fb: ViFallback, vi: float) -> float:
    """Fallback prediction slope * VI + offset, clamped below at zero."""
    return max(fb.slope * vi + fb.offset, 0.0)


def _design_matrix(rows: list[LfmcObservation]) -> tuple[np.ndarray, np.ndarray]:
    for i, r in enumerate(rows):
        if r.lfmc is None:
            raise CalibrationError(f"row {i} has no LFMC value; calibration rows need one")
    ndvi = np.array([r.ndvi for r in rows])
    lst = np.array([r.lst for r in rows])
    s, c = _seasonal(np.array([r.doy for r in rows]))
    x = np.column_stack((np.ones(len(rows)), ndvi, lst, s, c))
    y = np.array([r.lfmc for r in rows])
    return x, y


def _collinear_columns(x: np.ndarray) -> list[str]:
    # Pivoted QR: columns pivoted past the numerical rank are the ones
    # expressible from the others.
    r, piv = scipy.linalg.qr(x, mode="r", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = diag.max() * max(x.shape) * np.finfo(float).eps
    rank = int((diag > tol).sum())
    return sorted(_DESIGN_COLUMNS[i] for i in piv[rank:])


def _solve_ols(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if np.linalg.matrix_rank(x) < x.shape[1]:
        bad = _collinear_columns(x)
        raise SingularFitError(
            f"design matrix is rank deficient; collinear columns: {', '.join(bad)}", bad
        )
    gram = x.T @ x
    return np.linalg.solve(gram, x.T @ y)


def fit_metrics(y: np.ndarray, pred: np.ndarray, warnings: tuple[str, ...] = ()) -> FitReport:
    resid = y - pred
    rmse = float(np.sqrt(np.mean(resid**2)))
    mae = float(np.mean(np.abs(resid)))
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        r2 = 1.0 if np.allclose(resid, 0.0) else 0.0
    else:
        r2 = 1.0 - float(np.sum(resid**2)) / sst
    return FitReport(n_rows=len(y), rmse=rmse, mae=mae, r2=r2, warnings=warnings)


def calibrate_lfmc(rows: list[LfmcObservation]) -> tuple[LfmcCoefficients, FitReport]:
    """Ordinary least squares over the five-term model.

    Needs at least 5 rows (one per unknown) and a full-rank design matrix;
    collinear inputs (e.g. all rows sharing one DOY) raise SingularFitError
    naming the offending columns. Coefficient signs that contradict the
    physical expectation (NDVI positive, LST negative) are reported as
    warnings, not errors.
    """
    if len(rows) < 5:
        raise CalibrationError(f"need >= 5 rows to fit 5 coefficients, got {len(rows)}")
    x, y = _design_matrix(rows)
    beta = _solve_ols(x, y)
    coef = LfmcCoefficients(*map(float, beta))
    warns = []
    if coef.ndvi_coef <= 0.0:
        warns.append(f"NDVI coefficient {coef.ndvi_coef:.4g} <= 0; expected positive")
    if coef.lst_coef >= 0.0:
        warns.append(f"LST coefficient {coef.lst_coef:.4g} >= 0; expected negative")
    report = fit_metrics(y, x @ beta, tuple(warns))
    return coef, report


def calibrate_lfmc_stratified(
    rows: list[tuple[str, LfmcObservation]],
) -> dict[str, LfmcCoefficients]:
    """Independent OLS per stratum label; every stratum needs >= 5 rows."""
    groups: dict[str, list[LfmcObservation]] = {}
    for label, obs in rows:
        groups.setdefault(label, []).append(obs)
    out: dict[str, LfmcCoefficients] = {}
    for label in sorted(groups):
        members = groups[label]
        if len(members) < 5:
            raise CalibrationError(
                f"stratum '{label}' has {len(members)} rows; needs >= 5"
            )
        out[label], _ = calibrate_lfmc(members)
    return out


def cross_validate_lfmc(
    rows: list[tuple[str, LfmcObservation]],
    folds: list[str] | None = None,
) -> dict[str, FitReport]:
    """Leave-region-out validation using stratum labels as folds.

    For each fold label: fit on every other row, evaluate on the fold.
    The returned FitReport metrics describe the held-out rows.
    """
    labels = sorted({label for label, _ in rows}) if folds is None else list(folds)
    if len(labels) < 2:
        raise CalibrationError(f"cross-validation needs >= 2 folds, got {len(labels)}")
    reports: dict[str, FitReport] = {}
    for fold in labels:
        train = [obs for label, obs in rows if label != fold]
        test = [obs for label, obs in rows if label == fold]
        if len(train) < 5:
            raise CalibrationError(
                f"fold '{fold}' leaves only {len(train)} training rows; needs >= 5"
            )
        if not test:
            raise CalibrationError(f"fold '{fold}' matches no rows")
        coef, _ = calibrate_lfmc(train)
        xt, yt = _design_matrix(test)
        reports[fold] = fit_metrics(yt, xt @ coef.as_array())
    return reports


def calibrate_vi_fallback(pairs: list[tuple[float, float]]) -> tuple[ViFallback, FitReport]:
    """Least-squares line through (VI, LFMC) pairs for the fallback model."""
    if len(pairs) < 2:
        raise CalibrationError(f"need >= 2 (VI, LFMC) pairs, got {len(pairs)}")
    vi = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    x = np.column_stack((vi, np.ones(len(pairs))))
    if np.linalg.matrix_rank(x) < 2:
        raise SingularFitError("all VI values identical; slope is unidentifiable", ["vi"])
    slope, offset = np.linalg.solve(x.T @ x, x.T @ y)
    fb = ViFallback(float(slope), float(offset))
    return fb, fit_metrics(y, x @ np.array([slope, offset]))
