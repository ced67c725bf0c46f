"""Unit conversion and dense-vector preparation for the numeric stages.

Series enter in raw kilograms and leave as morphine-equivalent kilograms
(one editable multiplier per drug, morphine pinned at 1.0). Densification
zero-fills missing years over the global span so every downstream vector
aligns; cube-rooting is applied only inside the embedding pipeline.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import MissingFactor, NegativeValue
from .ingest import Series, SeriesKey


@dataclass(frozen=True)
class ConversionTable:
    """Drug -> morphine-equivalence multiplier (per kg of raw drug)."""

    factors: Mapping[str, float]

    def __post_init__(self):
        for drug, factor in self.factors.items():
            if not math.isfinite(factor) or factor <= 0:
                raise ValueError(f"factor for {drug!r} must be finite and > 0, got {factor!r}")
        morphine = self.factors.get("morphine")
        if morphine is not None and morphine != 1.0:
            raise ValueError(f"morphine factor must be exactly 1.0, got {morphine!r}")

    def factor_for(self, drug: str) -> float:
        try:
            return self.factors[drug]
        except KeyError:
            raise MissingFactor(drug) from None


@dataclass(frozen=True)
class DenseSeries:
    """Gap-free per-year vector over a contiguous year range."""

    key: SeriesKey
    first_year: int
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("values must be a non-empty 1-D vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", arr)

    @property
    def last_year(self) -> int:
        return self.first_year + len(self.values) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.first_year, self.first_year + len(self.values))


def to_morphine_equivalent(series: Series, table: ConversionTable) -> Series:
    """Multiply every present value by the drug's equivalence factor.

    Missing years stay missing; key and span are unchanged. Raises
    MissingFactor when the table has no entry for the series' drug.
    """
    factor = table.factor_for(series.key[1].canonical_name)
    return Series(
        key=series.key,
        span=series.span,
        values={year: v * factor for year, v in series.values.items()},
    )


def densify(series: Series, policy: str = "zero_fill") -> DenseSeries:
    """Expand a Series to a gap-free vector over its span, filling missing years with 0.0."""
    if policy != "zero_fill":
        raise ValueError(f"unsupported densify policy {policy!r}")
    first, last = series.span
    values = np.zeros(last - first + 1)
    for year, v in series.values.items():
        values[year - first] = v
    return DenseSeries(key=series.key, first_year=first, values=values)


def cube_root(dense: DenseSeries) -> DenseSeries:
    """Element-wise real cube root; strictly monotone, so rankings survive."""
    if np.any(dense.values < 0):
        raise NegativeValue(f"negative value in dense series {dense.key}")
    return DenseSeries(key=dense.key, first_year=dense.first_year, values=np.cbrt(dense.values))


def load_conversion_table(path) -> ConversionTable:
    """Read a two-column CSV (drug,factor); '#' lines are comments."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(io.StringIO("".join(lines)))
    factors = {}
    for row in reader:
        factors[row["drug"].strip().lower()] = float(row["factor"])
    return ConversionTable(factors)


def convert_all(series_map: Mapping[SeriesKey, Series], table: ConversionTable) -> dict[SeriesKey, Series]:
    return {key: to_morphine_equivalent(s, table) for key, s in series_map.items()}


def densify_all(series_map: Mapping[SeriesKey, Series]) -> dict[SeriesKey, DenseSeries]:
    return {key: densify(s) for key, s in series_map.items()}
