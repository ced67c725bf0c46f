#!/usr/bin/env python3
"""Lay the series collection out in the plane so similar shapes sit together.

Pipeline: densify (missing -> 0), cube-root to tame the scale spread, take
pairwise Euclidean distances, then classical double-centering MDS refined by
stress majorization. Saves a scatter of the joint layout next to this script.

Run from the repo root: python demos/03_distance_embedding.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from drugatlas import (
    CsvSchema,
    build_series,
    cube_root,
    densify,
    embed_distances,
    key_id,
    pairwise_distances,
    parse_consumption_csv,
    to_morphine_equivalent,
)
from drugatlas.defaults import (
    default_conversion_table,
    default_country_registry,
    default_drug_registry,
)

CSV = Path(__file__).resolve().parents[1] / "tests" / "data" / "fixture_consumption.csv"
OUT = Path(__file__).resolve().parent / "embedding_scatter.png"

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

    keys = sorted(series_me, key=key_id)
    cubed = [cube_root(densify(series_me[k])) for k in keys]
    distances = pairwise_distances(cubed)

    print("pairwise cube-root distances (kg-eq^(1/3) space):")
    labels = [key_id(k) for k in keys]
    print(" " * 18 + " ".join(f"{l.split(':')[0]:>7s}" for l in labels))
    for i, label in enumerate(labels):
        print(f"{label:18s} " + " ".join(f"{distances.d[i, j]:7.2f}" for j in range(len(keys))))

    layout = embed_distances(distances)
    print(f"\nlayout stress {layout.stress:.4f} after {layout.iterations} majorization steps")
    print("a stress near 0 means the 2-D picture honestly reproduces the distances")

    colors = {"morphine": "tab:green", "oxycodone": "tab:red", "pethidine": "tab:blue"}
    fig, ax = plt.subplots(figsize=(7, 6))
    for (country, drug), (x, y) in zip(layout.keys, layout.coords):
        ax.scatter(x, y, color=colors[drug.canonical_name], s=60)
        ax.annotate(f"{country.iso3}:{drug.canonical_name[:3]}", (x, y), fontsize=8,
                    xytext=(4, 4), textcoords="offset points")
    ax.set_title("Joint layout of cube-rooted series (color = drug)")
    ax.set_xlabel("axis 1")
    ax.set_ylabel("axis 2")
    fig.tight_layout()
    fig.savefig(OUT, dpi=120)
    print(f"scatter written to {OUT}")
