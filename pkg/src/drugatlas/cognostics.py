"""Per-series scalar summaries used to order the dot-plot view.

All cognostics are computed on morphine-equivalent series before any
cube-root scaling, and "measured" means present: a reported zero counts,
a missing year never does. One-year changes pair adjacent calendar years
only; a gap breaks the pair even if both endpoints were measured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import EmptySeries
from .ingest import Series, SeriesKey


@dataclass(frozen=True)
class CognosticVector:
    """Named summaries for one series.

    net_change and max_annual_increase are the core pair; the other three
    are auxiliary conveniences for the dot-plot axis menu. The consecutive
    -pair fields are None when no two adjacent years are both measured.
    """

    key: SeriesKey
    net_change: float
    max_annual_increase: Optional[float]
    max_annual_decrease: Optional[float]
    mean_level: float
    latest_value: float


def _require_present(series: Series) -> None:
    if not series.values:
        raise EmptySeries(series.key)


def net_change(series: Series) -> float:
    """Value at the last measured year minus value at the first measured year."""
    _require_present(series)
    return series.values[series.last_present] - series.values[series.first_present]


def _consecutive_diffs(series: Series) -> list[float]:
    values = series.values
    return [values[y + 1] - values[y] for y in sorted(values) if y + 1 in values]


def max_annual_increase(series: Series) -> Optional[float]:
    """Largest one-year change over adjacent measured years, or None when no pair exists."""
    diffs = _consecutive_diffs(series)
    return max(diffs) if diffs else None


def max_annual_decrease(series: Series) -> Optional[float]:
    """Smallest one-year change over adjacent measured years, or None when no pair exists.

    Defined as the minimum consecutive difference so it stays total: when the
    series never decreases this is the smallest increase, and callers that
    only care about true declines should check the sign.
    """
    diffs = _consecutive_diffs(series)
    return min(diffs) if diffs else None


def mean_level(series: Series) -> float:
    """Mean over measured values (exactly rounded, order-independent)."""
    _require_present(series)
    return math.fsum(series.values.values()) / len(series.values)


def latest_value(series: Series) -> float:
    _require_present(series)
    return series.values[series.last_present]


def compute_cognostics(series: Series) -> CognosticVector:
    _require_present(series)
    return CognosticVector(
        key=series.key,
        net_change=net_change(series),
        max_annual_increase=max_annual_increase(series),
        max_annual_decrease=max_annual_decrease(series),
        mean_level=mean_level(series),
        latest_value=latest_value(series),
    )
