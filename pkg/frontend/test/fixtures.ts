/** Test fixtures: the golden bundle produced by the backend pipeline, plus
 * deliberately corrupted variants. The bundle file is the only interface the
 * frontend has to the backend, so tests consume it straight from disk.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Bundle, WorldGrid } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export const GOLDEN_PATH = join(here, "..", "..", "tests", "data", "golden_bundle.json");

export function goldenBundleDoc(): unknown {
  return JSON.parse(readFileSync(GOLDEN_PATH, "utf-8"));
}

export function goldenBundle(): Bundle {
  return goldenBundleDoc() as Bundle;
}

export function worldGrid(): WorldGrid {
  return JSON.parse(readFileSync(join(here, "..", "assets", "worldgrid.json"), "utf-8"));
}

/** Valid-shaped bundle with a cognostic entry pointing at a missing series. */
export function corruptedBundleDoc(): unknown {
  const doc = goldenBundleDoc() as Bundle;
  doc.cognostics["HKG:codeine"] = {
    net_change: 1.0,
    max_annual_increase: null,
    max_annual_decrease: null,
    mean_level: 1.0,
    latest_value: 1.0,
  };
  return doc;
}

export function emptyBundleDoc(): Bundle {
  return {
    schema_version: 1,
    years: { first: 1989, last: 2013 },
    countries: [{ iso3: "DNK", display_name: "Denmark", region: "Europe" }],
    drugs: ["morphine"],
    series: {},
    cognostics: {},
    embedding: {
      joint: { status: "empty", reason: "no series ingested" },
      per_drug: {},
    },
    trends: {
      params: { bandwidth_years: 7, ridge_lambda: 0.01, kernel: "tricube" },
      grids: {},
    },
  };
}
