"""Exponential rate-of-spread model and satellite-to-regional correction.

The bulk model is R = A * U^alpha * exp(-beta * M) with wind U in m/s and
moisture M in percent (A absorbs the mixed units). A thermal rate observed
under satellite-sampled conditions (U_sat, M_sat) is transported to local
conditions by the multiplicative factor

    R = R_thermal * (U_reg / U_sat)^alpha * exp(-beta * (M_reg - M_sat))

and both rates drop to zero once moisture reaches the combustion cutoff
m_min. Head and back fires use separate parameter sets; this module is
agnostic, callers keep one instance per spread mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError, SingularFitError, UnknownLabelError
from .lfmc import FitReport, fit_metrics


@dataclass(frozen=True)
class RosModelParams:
    """Coefficients (scale_a, alpha, beta) plus the moisture cutoff.

    beta is stored positive and applied with a leading minus, so larger
    beta means stronger moisture damping. m_min is the moisture percent at
    and above which spread is zero; None disables the cutoff (calibration
    cannot infer it from rate data).
    """

    scale_a: float
    alpha: float
    beta: float
    m_min: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.scale_a) and self.scale_a > 0.0):
            raise CalibrationError(f"scale must be finite and > 0, got {self.scale_a}")
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise CalibrationError(f"wind exponent must be finite and > 0, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise CalibrationError(f"moisture coefficient must be finite and >= 0, got {self.beta}")
        if self.m_min is not None and not (math.isfinite(self.m_min) and self.m_min > 0.0):
            raise CalibrationError(f"moisture cutoff must be finite and > 0, got {self.m_min}")


@dataclass(frozen=True)
class RosObservation:
    """Matched (rate, wind, moisture) row for log-linear calibration."""

    ros: float
    wind: float
    moisture: float

    def __post_init__(self):
        if not (math.isfinite(self.ros) and self.ros > 0.0):
            raise CalibrationError(f"rate must be finite and > 0 for the log fit, got {self.ros}")
        if not (math.isfinite(self.wind) and self.wind > 0.0):
            raise CalibrationError(f"wind must be finite and > 0 for the log fit, got {self.wind}")
        if not math.isfinite(self.moisture):
            raise CalibrationError(f"non-finite moisture {self.moisture}")


@dataclass(frozen=True)
class SatReference:
    """Thermal rate and the conditions it was observed under."""

    ros_thermal: float
    wind_sat: float
    moisture_sat: float

    def __post_init__(self):
        if not (math.isfinite(self.wind_sat) and self.wind_sat > 0.0):
            raise CalibrationError(
                f"reference wind must be finite and > 0, got {self.wind_sat}"
            )
        if not (math.isfinite(self.ros_thermal) and self.ros_thermal >= 0.0):
            raise CalibrationError(f"thermal rate must be finite and >= 0, got {self.ros_thermal}")
        if not math.isfinite(self.moisture_sat):
            raise CalibrationError(f"non-finite reference moisture {self.moisture_sat}")


def base_ros(params: RosModelParams, wind: float, moisture: float) -> float:
    """Bulk rate A * U^alpha * exp(-beta * M); zero at or above the cutoff.

    wind = 0 gives rate 0 (the U^alpha limit), not an error.
    """
    if wind < 0.0:
        raise ValueError(f"wind must be >= 0, got {wind}")
    if params.m_min is not None and moisture >= params.m_min:
        return 0.0
    return params.scale_a * wind**params.alpha * math.exp(-params.beta * moisture)


def correct_ros(ref: SatReference, params: RosModelParams,
                wind_reg: float, moisture_reg: float) -> float:
    """Transport a thermal rate from satellite to regional conditions."""
    if wind_reg < 0.0:
        raise ValueError(f"regional wind must be >= 0, got {wind_reg}")
    if params.m_min is not None and moisture_reg >= params.m_min:
        return 0.0
    factor = (wind_reg / ref.wind_sat) ** params.alpha
    damping = math.exp(-params.beta * (moisture_reg - ref.moisture_sat))
    return ref.ros_thermal * factor * damping


_ROS_COLUMNS = ("intercept", "ln_wind", "moisture")


def calibrate_ros(rows: list[RosObservation]) -> tuple[RosModelParams, FitReport]:
    """Log-linear least squares: ln R = ln A + alpha ln U - beta M.

    Returns parameters without a moisture cutoff (rate data cannot reveal
    it; set m_min from fuel knowledge afterwards). Metrics are computed in
    log space, where the model is linear.
    """
    if len(rows) < 3:
        raise CalibrationError(f"need >= 3 rows to fit 3 parameters, got {len(rows)}")
    ln_r = np.array([math.log(r.ros) for r in rows])
    ln_u = np.array([math.log(r.wind) for r in rows])
    m = np.array([r.moisture for r in rows])
    x = np.column_stack((np.ones(len(rows)), ln_u, m))
    if np.linalg.matrix_rank(x) < 3:
        bad = []
        if np.ptp(ln_u) == 0.0:
            bad.append("ln_wind")
        if np.ptp(m) == 0.0:
            bad.append("moisture")
        bad = bad or list(_ROS_COLUMNS)
        raise SingularFitError(
            f"design matrix is rank deficient; collinear columns: {', '.join(bad)}", bad
        )
    beta_vec = np.linalg.solve(x.T @ x, x.T @ ln_r)
    ln_a, alpha, neg_beta = map(float, beta_vec)
    if alpha <= 0.0:
        raise CalibrationError(f"fitted wind exponent {alpha:.4g} is not positive")
    if -neg_beta < 0.0:
        raise CalibrationError(
            f"fitted moisture coefficient {-neg_beta:.4g} is negative; "
            "moisture appears to increase spread in these rows"
        )
    params = RosModelParams(scale_a=math.exp(ln_a), alpha=alpha, beta=-neg_beta)
    return params, fit_metrics(ln_r, x @ beta_vec)


# Plausible literature ranges keyed by coarse fuel and moisture classes.
_ALPHA_RANGES = {
    "grass": (1.0, 1.5),
    "shrub": (0.8, 1.2),
    "forest-litter": (0.3, 0.8),
}
_BETA_RANGES = {
    "dry": (0.05, 0.1),
    "moderate": (0.1, 0.15),
    "live-green": (0.15, 0.25),
}


@dataclass(frozen=True)
class LiteratureRanges:
    """Plausible (alpha, beta) intervals for a fuel/moisture class pair."""

    alpha_range: tuple[float, float]
    beta_range: tuple[float, float]

    def midpoint_params(self, scale_a: float, m_min: float | None = None) -> RosModelParams:
        """Convenience: parameters at the middle of both ranges."""
        return RosModelParams(
            scale_a=scale_a,
            alpha=sum(self.alpha_range) / 2.0,
            beta=sum(self.beta_range) / 2.0,
            m_min=m_min,
        )


def _normalize_label(label: str) -> str:
    return label.strip().lower().replace(" ", "-").replace("_", "-")


def params_from_literature(fuel_class: str, moisture_class: str) -> LiteratureRanges:
    """Plausible parameter ranges when no calibration data exists.

    fuel_class: grass | shrub | forest-litter; moisture_class: dry |
    moderate | live-green.
    """
    fuel = _normalize_label(fuel_class)
    moist = _normalize_label(moisture_class)
    if fuel not in _ALPHA_RANGES:
        raise UnknownLabelError(
            f"unknown fuel class '{fuel_class}'; expected one of {sorted(_ALPHA_RANGES)}"
        )
    if moist not in _BETA_RANGES:
        raise UnknownLabelError(
            f"unknown moisture class '{moisture_class}'; expected one of {sorted(_BETA_RANGES)}"
        )
    return LiteratureRanges(alpha_range=_ALPHA_RANGES[fuel], beta_range=_BETA_RANGES[moist])
