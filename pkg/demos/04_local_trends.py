#!/usr/bin/env python3
"""Local level/slope coordinates: where is each series, and which way is it moving?

Every year gets a tricube-weighted ridge fit centered on it; the fitted value
is the local level and the fitted slope the local slope. Watch Denmark's
oxycodone slope flip negative after its 2007 peak while the level is still
high: exactly the kind of reversal the year-animated scatter surfaces.

Run from the repo root: python demos/04_local_trends.py
"""

from pathlib import Path

from drugatlas import (
    CsvSchema,
    TrendParams,
    build_series,
    densify,
    parse_consumption_csv,
    to_morphine_equivalent,
    trend_grid,
)
from drugatlas.defaults import (
    default_conversion_table,
    default_country_registry,
    default_drug_registry,
)
from drugatlas.ingest import key_id

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

    params = TrendParams(bandwidth_years=7.0, ridge_lambda=0.01)
    print(f"kernel={params.kernel}, bandwidth={params.bandwidth_years} years, lambda={params.ridge_lambda}\n")

    dnk_oxy = next(s for k, s in series_me.items() if key_id(k) == "DNK:oxycodone")
    grid = trend_grid(densify(dnk_oxy), params)
    print("DNK:oxycodone local coordinates around the 2007 reversal:")
    print(f"{'year':>6s} {'raw kg-eq':>10s} {'level':>9s} {'slope':>8s}")
    dense = densify(dnk_oxy)
    for year in range(2003, 2013):
        i = year - grid.first_year
        print(f"{year:6d} {dense.values[i]:10.1f} {grid.level[i]:9.1f} {grid.slope[i]:8.2f}")

    flip = next(
        (int(y) for y, s in zip(grid.years, grid.slope) if y >= 2008 and s < 0), None
    )
    print(f"\nfirst negative local slope after the peak: {flip}")

    print("\nsame-year snapshot across all series (the trend-scatter frame for 2009):")
    year = 2009
    for key in sorted(series_me, key=key_id):
        g = trend_grid(densify(series_me[key]), params)
        i = year - g.first_year
        arrow = "rising" if g.slope[i] > 0.05 else ("falling" if g.slope[i] < -0.05 else "flat")
        print(f"{key_id(key):18s} level {g.level[i]:9.2f}  slope {g.slope[i]:7.2f}  {arrow}")
