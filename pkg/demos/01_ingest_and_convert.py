#!/usr/bin/env python3
"""Walk through ingestion: parse the bundled consumption CSV, normalize
country names through the alias table, assemble per-(country, drug) series,
and convert everything to morphine-equivalent kilograms.

Run from the repo root: python demos/01_ingest_and_convert.py
"""

from pathlib import Path

from drugatlas import CsvSchema, build_series, key_id, parse_consumption_csv, to_morphine_equivalent
from drugatlas.defaults import (
    default_conversion_table,
    default_country_registry,
    default_drug_registry,
)

CSV = Path(__file__).resolve().parents[1] / "tests" / "data" / "fixture_consumption.csv"

if __name__ == "__main__":
    countries = default_country_registry()
    drugs = default_drug_registry()
    table = default_conversion_table()

    # The fixture uses the INCB-style alias "Hong Kong SAR of China"; the
    # registry folds it (and case/whitespace noise) onto ISO codes.
    with open(CSV, encoding="utf-8") as fh:
        records = parse_consumption_csv(fh, CsvSchema(), countries, drugs)
    print(f"parsed {len(records)} records from {CSV.name}")

    series_map = build_series(records, duplicate_policy="error")
    print(f"assembled {len(series_map)} series over span 1989-2013\n")

    for key, series in series_map.items():
        me = to_morphine_equivalent(series, table)
        present = series.present_years()
        missing = (series.span[1] - series.span[0] + 1) - len(present)
        factor = table.factor_for(key[1].canonical_name)
        print(
            f"{key_id(key):18s} {len(present):2d} measured years, {missing:2d} missing, "
            f"factor x{factor:<5g} latest {me.values[me.last_present]:9.2f} kg-eq"
        )

    # A reported zero is data; an absent row is not. Zambia morphine has both.
    zmb = next(s for k, s in series_map.items() if key_id(k) == "ZMB:morphine")
    print(f"\nZMB:morphine 1989-1999: ", end="")
    print(
        " ".join(
            f"{y}={zmb.values[y]!r}" if y in zmb.values else f"{y}=missing"
            for y in range(1989, 2000)
        )
    )
