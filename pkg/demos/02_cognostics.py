#!/usr/bin/env python3
"""Rank the series collection by single-number summaries (cognostics).

The dot-plot view in the UI orders series by one of these numbers so an
analyst can jump straight to the extremes; here we print the same ranking.

Run from the repo root: python demos/02_cognostics.py
"""

from pathlib import Path

from drugatlas import CsvSchema, build_series, compute_cognostics, key_id, parse_consumption_csv, to_morphine_equivalent
from drugatlas.defaults import (
    default_conversion_table,
    default_country_registry,
    default_drug_registry,
)

CSV = Path(__file__).resolve().parents[1] / "tests" / "data" / "fixture_consumption.csv"

if __name__ == "__main__":
    with open(CSV, encoding="utf-8") as fh:
        records = parse_consumption_csv(
            fh, CsvSchema(), default_country_registry(), default_drug_registry()
        )
    table = default_conversion_table()
    series_me = {
        key: to_morphine_equivalent(s, table)
        for key, s in build_series(records).items()
    }

    vectors = {key: compute_cognostics(s) for key, s in series_me.items()}

    print(f"{'series':18s} {'net_change':>11s} {'max_incr':>9s} {'max_decr':>9s} {'mean':>9s} {'latest':>9s}")
    fmt = lambda v: f"{v:9.2f}" if v is not None else "   absent"
    for key, vec in sorted(vectors.items(), key=lambda kv: -(kv[1].max_annual_increase or 0)):
        print(
            f"{key_id(key):18s} {vec.net_change:11.2f} {fmt(vec.max_annual_increase)} "
            f"{fmt(vec.max_annual_decrease)} {vec.mean_level:9.2f} {vec.latest_value:9.2f}"
        )

    top = max(vectors.values(), key=lambda v: v.max_annual_increase or float("-inf"))
    print(f"\nsteepest one-year rise: {key_id(top.key)} (+{top.max_annual_increase:.2f} kg-eq)")
    print("the toggling pair shows up as one large positive and one large negative extreme")
