"""Local level/slope coordinates from kernel-weighted ridge fits.

For every series and every year t0 we fit the penalized weighted objective

    sum_t w_t (v[t] - b0 - b1 (t - t0))^2 + lambda b1^2,
    w_t = tricube((t - t0) / h),

and report b0 as the local level (the fitted value at t0, since time is
centered there) and b1 as the local slope. Only the slope is penalized, so a
constant series is reproduced exactly for any lambda. Boundary years reuse
the same one-sided window. Grids are fitted on each series rescaled to unit
max and the outputs scaled back, so one lambda default behaves comparably
across consumption scales that differ by orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyWindow
from .ingest import SeriesKey
from .transform import DenseSeries

DEFAULT_BANDWIDTH_YEARS = 7.0
DEFAULT_RIDGE_LAMBDA = 0.01


@dataclass(frozen=True)
class TrendParams:
    bandwidth_years: float = DEFAULT_BANDWIDTH_YEARS
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA
    kernel: str = "tricube"

    def __post_init__(self):
        if not self.bandwidth_years > 0:
            raise ValueError(f"bandwidth_years must be > 0, got {self.bandwidth_years!r}")
        if self.ridge_lambda < 0:
            raise ValueError(f"ridge_lambda must be >= 0, got {self.ridge_lambda!r}")
        if self.kernel != "tricube":
            raise ValueError(f"unsupported kernel {self.kernel!r}")


@dataclass(frozen=True, eq=False)
class TrendGrid:
    """Per-year (level, slope) arrays for one series, plus the fit parameters."""

    key: SeriesKey
    first_year: int
    level: np.ndarray
    slope: np.ndarray
    params: TrendParams

    def __post_init__(self):
        level = np.asarray(self.level, dtype=float)
        slope = np.asarray(self.slope, dtype=float)
        if level.shape != slope.shape or level.ndim != 1:
            raise ValueError("level and slope must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(level)) and np.all(np.isfinite(slope))):
            raise ValueError("trend values must be finite")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "slope", slope)

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.first_year, self.first_year + len(self.level))


def tricube_weight(u):
    """Tricube kernel (1 - |u|^3)^3 on |u| < 1, zero outside; accepts scalars or arrays."""
    u = np.abs(np.asarray(u, dtype=float))
    w = np.where(u < 1.0, (1.0 - u**3) ** 3, 0.0)
    return float(w) if w.ndim == 0 else w


def local_ridge_fit(dense: DenseSeries, t0: int, params: TrendParams) -> tuple[float, float]:
    """Exact minimizer of the slope-penalized weighted objective around t0.

    Solved in centered form, which is algebraically the 2x2 weighted normal
    equations with lambda added to the slope diagonal. With lambda = 0 and
    all weight on a single year the system is singular; the degenerate rule
    returns the weighted mean with slope 0.
    """
    tau = dense.years.astype(float) - float(t0)
    w = tricube_weight(tau / params.bandwidth_years)
    sw = float(w.sum())
    if sw <= 0.0:
        raise EmptyWindow(f"no year within bandwidth {params.bandwidth_years} of {t0}")
    v = dense.values
    tau_bar = float((w * tau).sum()) / sw
    v_bar = float((w * v).sum()) / sw
    ct = tau - tau_bar
    denom = float((w * ct * ct).sum()) + params.ridge_lambda
    # With several years in the window denom is O(sw); anything at rounding
    # scale means all weight sits on one year, where slope is undefined.
    tiny = 1e-12 * max(1.0, sw * float((tau * tau).max()))
    if denom <= tiny:
        return v_bar, 0.0
    slope = float((w * ct * (v - v_bar)).sum()) / denom
    level = v_bar - slope * tau_bar
    return level, slope


def penalized_objective(
    dense: DenseSeries, t0: int, params: TrendParams, level: float, slope: float
) -> float:
    """Objective value at (level, slope); exposed so fits can be checked externally."""
    tau = dense.years.astype(float) - float(t0)
    w = tricube_weight(tau / params.bandwidth_years)
    resid = dense.values - level - slope * tau
    return float((w * resid * resid).sum()) + params.ridge_lambda * slope * slope


def trend_grid(dense: DenseSeries, params: TrendParams) -> TrendGrid:
    """Fit every year of the span; series are rescaled to unit max internally."""
    if len(dense.values) < 2:
        raise ValueError(f"series {dense.key} spans fewer than 2 years")
    scale = float(np.abs(dense.values).max())
    if scale == 0.0 or not math.isfinite(scale):
        scale = 1.0
    scaled = DenseSeries(key=dense.key, first_year=dense.first_year, values=dense.values / scale)
    level = np.empty(len(dense.values))
    slope = np.empty(len(dense.values))
    for i, year in enumerate(dense.years):
        b0, b1 = local_ridge_fit(scaled, int(year), params)
        level[i] = b0 * scale
        slope[i] = b1 * scale
    return TrendGrid(
        key=dense.key,
        first_year=dense.first_year,
        level=level,
        slope=slope,
        params=params,
    )
