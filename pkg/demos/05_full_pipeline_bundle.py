#!/usr/bin/env python3
"""End to end: configuration -> staged pipeline -> deterministic bundle.

Equivalent to `drugatlas run --input-csv ... --output-dir ...`. The bundle is
canonical JSON (sorted keys, shortest-round-trip floats, trailing newline), so
rerunning on the same inputs reproduces it byte for byte; the UI consumes it
as-is from any static host, e.g. `drugatlas serve --output-dir demos/out`.

Run from the repo root: python demos/05_full_pipeline_bundle.py
"""

import json
from pathlib import Path

from drugatlas import PipelineConfig, run_pipeline
from drugatlas.export import bundle_schema

ROOT = Path(__file__).resolve().parents[1]
CSV = ROOT / "tests" / "data" / "fixture_consumption.csv"
OUT = Path(__file__).resolve().parent / "out"

if __name__ == "__main__":
    import logging

    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = PipelineConfig(input_csv=CSV, output_dir=OUT, threads=4)
    bundle = run_pipeline(cfg)

    print(f"\nbundle written to {OUT / 'bundle.json'}")
    print(f"schema version {bundle.schema_version}, years {bundle.years[0]}-{bundle.years[1]}")
    print(f"{len(bundle.series)} series, {len(bundle.countries)} registry countries")

    joint = bundle.embedding["joint"]
    print(f"joint layout: {joint['status']}, stress {joint.get('stress', float('nan')):.4f}")

    first = run_pipeline(cfg)
    assert json.dumps(first.data, sort_keys=True) == json.dumps(bundle.data, sort_keys=True)
    print("re-run produced an identical bundle (determinism contract)")

    schema = bundle_schema()
    print(f"published schema: {schema['$id']} with {len(schema['properties'])} top-level sections")
    print(f"\nnext: drugatlas serve --output-dir {OUT.relative_to(Path.cwd()) if OUT.is_relative_to(Path.cwd()) else OUT}")
    print("then open the frontend (see frontend/README.md) pointed at bundle.json")
