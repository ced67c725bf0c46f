"""Exception hierarchy shared across the pipeline.

Three families map onto the CLI exit codes: ConfigError (2), DataError (3),
NumericError (4). IoFailure is grouped with data errors for exit purposes.
"""

from __future__ import annotations


class AtlasError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AtlasError):
    """Invalid pipeline configuration. Carries every problem found, not just the first."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DataError(AtlasError):
    """Defective input data (parse failures, registry misses, duplicates)."""


class NumericError(AtlasError):
    """Numeric-stage failure (bad shapes, non-finite input, degenerate systems)."""


class IoFailure(AtlasError):
    """Filesystem read/write failure, wrapping the underlying OSError."""


# --- ingest ---------------------------------------------------------------

class MalformedRow(DataError):
    def __init__(self, row: int, reason: str):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class NegativeQuantity(DataError):
    def __init__(self, row: int, value: float):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: negative quantity {value!r}")


class YearOutOfBounds(DataError):
    def __init__(self, row: int, year: int, bounds: tuple[int, int]):
        self.row = row
        self.year = year
        self.bounds = bounds
        super().__init__(f"row {row}: year {year} outside {bounds[0]}-{bounds[1]}")


class UnknownDrug(DataError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"unknown drug {token!r}")


class UnknownCountry(DataError):
    def __init__(self, raw_name: str):
        self.raw_name = raw_name
        super().__init__(f"unknown country {raw_name!r}")


class DuplicateCell(DataError):
    def __init__(self, iso3: str, drug: str, year: int):
        self.iso3 = iso3
        self.drug = drug
        self.year = year
        super().__init__(f"duplicate cell ({iso3}, {drug}, {year})")


# --- transform / cognostics ------------------------------------------------

class MissingFactor(DataError):
    def __init__(self, drug: str):
        self.drug = drug
        super().__init__(f"no conversion factor for drug {drug!r}")


class EmptySeries(DataError):
    def __init__(self, key=None):
        self.key = key
        super().__init__("series has no present values" + (f" ({key})" if key else ""))


class NegativeValue(NumericError):
    """A dense vector contained a negative entry where only >= 0 is legal."""


# --- embedding --------------------------------------------------------------

class SpanMismatch(NumericError):
    """Dense series passed together do not share one year range."""


class TooFewPoints(NumericError):
    """Fewer than three points; no planar layout is defined."""


class NonFiniteInput(NumericError):
    """A matrix handed to the embedding stage contained NaN or infinity."""


class DimensionMismatch(NumericError):
    """Coordinate array or key list does not match the distance matrix."""


# --- trends ------------------------------------------------------------------

class EmptyWindow(NumericError):
    """No year received positive kernel weight around the requested fit point."""


class SingularSystem(NumericError):
    """The weighted normal equations were singular (unreachable for lambda > 0)."""


# --- export ------------------------------------------------------------------

class DanglingKey(DataError):
    def __init__(self, key: str, section: str):
        self.key = key
        self.section = section
        super().__init__(f"{section} references unknown series key {key!r}")
