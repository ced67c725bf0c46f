"""Parsing and assembly of per-(country, drug) consumption series.

Raw input is a long-format CSV (one row per country/drug/year cell, quantity
in kilograms). Country names are joined to an ISO-3166 alpha-3 registry via an
editable alias table; drug tokens are resolved against an editable registry of
canonical names. A reported 0 is a present value; an absent row is a missing
year, and the two are kept distinct everywhere downstream.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import (
    DuplicateCell,
    MalformedRow,
    NegativeQuantity,
    UnknownCountry,
    UnknownDrug,
    YearOutOfBounds,
)

REGIONS = frozenset({"Africa", "Americas", "Asia", "Europe", "Oceania"})

DEFAULT_YEAR_BOUNDS = (1989, 2013)

_ISO3_RE = re.compile(r"^[A-Z]{3}$")


@dataclass(frozen=True, order=True)
class CountryRef:
    """One registry entry: ISO alpha-3 code, display name, world region."""

    iso3: str
    display_name: str
    region: str

    def __post_init__(self):
        if not _ISO3_RE.match(self.iso3):
            raise ValueError(f"bad iso3 code {self.iso3!r}")
        if self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r} for {self.iso3}")


@dataclass(frozen=True, order=True)
class DrugKind:
    """A canonical drug name: lowercase, no whitespace, registry-backed."""

    canonical_name: str

    def __post_init__(self):
        name = self.canonical_name
        if not name or name != name.lower() or any(c.isspace() for c in name):
            raise ValueError(f"bad canonical drug name {name!r}")


SeriesKey = tuple[CountryRef, DrugKind]


def key_id(key: SeriesKey) -> str:
    """Stable string id 'ISO3:drug' used for sorting and serialization."""
    country, drug = key
    return f"{country.iso3}:{drug.canonical_name}"


@dataclass(frozen=True)
class ConsumptionRecord:
    country: CountryRef
    drug: DrugKind
    year: int
    quantity_kg: float

    def __post_init__(self):
        if not math.isfinite(self.quantity_kg) or self.quantity_kg < 0:
            raise ValueError(f"quantity must be finite and >= 0, got {self.quantity_kg!r}")


@dataclass(frozen=True)
class Series:
    """One (country, drug) time series: present years map to kg, absent years are missing."""

    key: SeriesKey
    span: tuple[int, int]
    values: Mapping[int, float]

    def __post_init__(self):
        first, last = self.span
        if first > last:
            raise ValueError(f"span {self.span} is reversed")
        if not self.values:
            raise ValueError("series must have at least one present value")
        for year, v in self.values.items():
            if not first <= year <= last:
                raise ValueError(f"year {year} outside span {self.span}")
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"value for {year} must be finite and >= 0, got {v!r}")

    def present_years(self) -> list[int]:
        return sorted(self.values)

    @property
    def first_present(self) -> int:
        return min(self.values)

    @property
    def last_present(self) -> int:
        return max(self.values)


def _fold(name: str) -> str:
    return " ".join(name.split()).casefold()


class CountryRegistry:
    """ISO3-keyed country table plus a folded-name lookup (display names, aliases, codes)."""

    def __init__(self, countries: Iterable[CountryRef], aliases: Mapping[str, str] | None = None):
        self._by_iso3: dict[str, CountryRef] = {}
        for c in countries:
            if c.iso3 in self._by_iso3:
                raise ValueError(f"duplicate iso3 {c.iso3} in country registry")
            self._by_iso3[c.iso3] = c
        self._lookup: dict[str, str] = {}
        for c in self._by_iso3.values():
            self._lookup[_fold(c.display_name)] = c.iso3
            self._lookup[_fold(c.iso3)] = c.iso3
        for raw, iso3 in (aliases or {}).items():
            if iso3 not in self._by_iso3:
                raise ValueError(f"alias {raw!r} points at unregistered iso3 {iso3!r}")
            self._lookup[_fold(raw)] = iso3

    def __len__(self) -> int:
        return len(self._by_iso3)

    def __iter__(self):
        return iter(sorted(self._by_iso3.values()))

    def by_iso3(self, code: str) -> CountryRef:
        try:
            return self._by_iso3[code]
        except KeyError:
            raise UnknownCountry(code) from None

    def normalize(self, raw_name: str) -> CountryRef:
        iso3 = self._lookup.get(_fold(raw_name))
        if iso3 is None:
            raise UnknownCountry(raw_name)
        return self._by_iso3[iso3]


def normalize_country(raw_name: str, registry: CountryRegistry) -> CountryRef:
    """Resolve a raw country name (case/whitespace-folded) to its registry entry."""
    return registry.normalize(raw_name)


class DrugRegistry:
    """Canonical drug names plus alias resolution; tokens are lowercased and trimmed."""

    def __init__(self, canonical: Iterable[str], aliases: Mapping[str, str] | None = None):
        self._drugs = {name: DrugKind(name) for name in canonical}
        self._lookup = {name: name for name in self._drugs}
        for alias, target in (aliases or {}).items():
            if target not in self._drugs:
                raise ValueError(f"drug alias {alias!r} points at unregistered {target!r}")
            self._lookup[alias.strip().lower()] = target

    def __len__(self) -> int:
        return len(self._drugs)

    def __iter__(self):
        return iter(sorted(self._drugs.values()))

    def __contains__(self, name: str) -> bool:
        return name in self._drugs

    def resolve(self, token: str) -> DrugKind:
        name = self._lookup.get(token.strip().lower())
        if name is None:
            raise UnknownDrug(token)
        return self._drugs[name]


@dataclass(frozen=True)
class CsvSchema:
    """Column names of the long-format consumption CSV."""

    country: str = "country"
    drug: str = "drug"
    year: str = "year"
    quantity: str = "quantity"


def _as_text(stream: IO) -> IO[str]:
    if isinstance(stream, io.TextIOBase):
        return stream
    data = stream.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8"))
    return io.StringIO(data)


def parse_consumption_csv(
    stream: IO,
    schema: CsvSchema,
    countries: CountryRegistry,
    drugs: DrugRegistry,
    year_bounds: tuple[int, int] = DEFAULT_YEAR_BOUNDS,
    unknown_countries: list[str] | None = None,
) -> list[ConsumptionRecord]:
    """Parse a long-format consumption CSV into validated records.

    Row indices in errors are 1-based over data rows (the header is row 0).
    When ``unknown_countries`` is a list, rows whose country cannot be
    resolved are skipped and the raw names collected there instead of
    raising (report mode).
    """
    reader = csv.reader(_as_text(stream))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRow(0, "empty input, expected a header row") from None
    columns = {name.strip(): i for i, name in enumerate(header)}
    indices = {}
    for role in ("country", "drug", "year", "quantity"):
        name = getattr(schema, role)
        if name not in columns:
            raise MalformedRow(0, f"header is missing column {name!r} for {role}")
        indices[role] = columns[name]

    records: list[ConsumptionRecord] = []
    for row_idx, row in enumerate(reader, start=1):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(header):
            raise MalformedRow(row_idx, f"expected {len(header)} columns, got {len(row)}")
        year_text = row[indices["year"]].strip()
        qty_text = row[indices["quantity"]].strip()
        try:
            year = int(year_text)
        except ValueError:
            raise MalformedRow(row_idx, f"unparsable year {year_text!r}") from None
        try:
            qty = float(qty_text)
        except ValueError:
            raise MalformedRow(row_idx, f"unparsable quantity {qty_text!r}") from None
        if not math.isfinite(qty):
            raise MalformedRow(row_idx, f"non-finite quantity {qty_text!r}")
        if qty < 0:
            raise NegativeQuantity(row_idx, qty)
        if not year_bounds[0] <= year <= year_bounds[1]:
            raise YearOutOfBounds(row_idx, year, year_bounds)
        drug = drugs.resolve(row[indices["drug"]])
        try:
            country = countries.normalize(row[indices["country"]])
        except UnknownCountry as exc:
            if unknown_countries is not None:
                unknown_countries.append(exc.raw_name)
                continue
            raise
        records.append(ConsumptionRecord(country, drug, year, qty))
    return records


def build_series(
    records: Iterable[ConsumptionRecord],
    duplicate_policy: str = "error",
    year_bounds: tuple[int, int] = DEFAULT_YEAR_BOUNDS,
) -> dict[SeriesKey, Series]:
    """Group records into Series keyed by (country, drug), spanning the year bounds.

    duplicate_policy: 'error' raises DuplicateCell on a repeated
    (country, drug, year) triple; 'sum' adds the quantities.
    """
    if duplicate_policy not in ("error", "sum"):
        raise ValueError(f"duplicate_policy must be 'error' or 'sum', got {duplicate_policy!r}")
    cells: dict[SeriesKey, dict[int, float]] = {}
    for rec in records:
        key = (rec.country, rec.drug)
        per_year = cells.setdefault(key, {})
        if rec.year in per_year:
            if duplicate_policy == "error":
                raise DuplicateCell(rec.country.iso3, rec.drug.canonical_name, rec.year)
            per_year[rec.year] += rec.quantity_kg
        else:
            per_year[rec.year] = rec.quantity_kg
    return {
        key: Series(key=key, span=year_bounds, values=dict(sorted(per_year.items())))
        for key, per_year in sorted(cells.items(), key=lambda kv: key_id(kv[0]))
    }


def write_consumption_csv(series_map: Mapping[SeriesKey, Series], schema: CsvSchema = CsvSchema()) -> str:
    """Serialize a series map back to long-format rows (present cells only, sorted)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([schema.country, schema.drug, schema.year, schema.quantity])
    for key in sorted(series_map, key=key_id):
        series = series_map[key]
        country, drug = key
        for year in series.present_years():
            writer.writerow([country.display_name, drug.canonical_name, year, repr(series.values[year])])
    return out.getvalue()


# --- registry file loaders ---------------------------------------------------

def load_country_registry(path, alias_path=None) -> CountryRegistry:
    """Read a country registry CSV (iso3,display_name,region) plus optional alias CSV."""
    countries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            countries.append(
                CountryRef(row["iso3"].strip(), row["display_name"].strip(), row["region"].strip())
            )
    aliases = load_alias_table(alias_path) if alias_path else None
    return CountryRegistry(countries, aliases)


def load_alias_table(path) -> dict[str, str]:
    """Read a two-column alias CSV (raw_name,iso3) into a plain mapping."""
    aliases: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            aliases[row["raw_name"].strip()] = row["iso3"].strip()
    return aliases


def load_drug_registry(path) -> DrugRegistry:
    """Read a drug registry file: one canonical name per line, aliases after commas."""
    canonical: list[str] = []
    aliases: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip().lower() for p in line.split(",")]
            canonical.append(parts[0])
            for alias in parts[1:]:
                if alias:
                    aliases[alias] = parts[0]
    return DrugRegistry(canonical, aliases)
