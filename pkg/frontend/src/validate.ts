/** Structural validation of a bundle document, mirroring the published schema.
 *
 * Returns a list of problems; an empty list means the document is safe to
 * index and render. A bundle that fails here must render zero views.
 */

import type { Bundle } from "./types.js";

const KEY_RE = /^[A-Z]{3}:[a-z][a-z0-9_-]*$/;
const ISO3_RE = /^[A-Z]{3}$/;
const DRUG_RE = /^[a-z][a-z0-9_-]*$/;
const REGIONS = new Set(["Africa", "Americas", "Asia", "Europe", "Oceania"]);
const COGNOSTIC_FIELDS = [
  "net_change",
  "max_annual_increase",
  "max_annual_decrease",
  "mean_level",
  "latest_value",
];

function isObject(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function checkLayout(layout: unknown, label: string, problems: string[]): void {
  if (!isObject(layout)) {
    problems.push(`${label}: not an object`);
    return;
  }
  if (layout.status === "empty") {
    if (typeof layout.reason !== "string" || !layout.reason) {
      problems.push(`${label}: empty layout needs a reason`);
    }
    return;
  }
  if (layout.status !== "ok") {
    problems.push(`${label}: status must be "ok" or "empty"`);
    return;
  }
  const keys = layout.keys;
  const coords = layout.coords;
  if (!Array.isArray(keys) || !keys.every((k) => typeof k === "string" && KEY_RE.test(k))) {
    problems.push(`${label}: bad keys array`);
    return;
  }
  if (
    !Array.isArray(coords) ||
    !coords.every((c) => Array.isArray(c) && c.length === 2 && c.every(isFiniteNumber))
  ) {
    problems.push(`${label}: bad coords array`);
    return;
  }
  if (keys.length !== coords.length) {
    problems.push(`${label}: keys and coords lengths differ`);
  }
  if (!isFiniteNumber(layout.stress) || (layout.stress as number) < 0) {
    problems.push(`${label}: bad stress`);
  }
  if (!Number.isInteger(layout.iterations) || (layout.iterations as number) < 0) {
    problems.push(`${label}: bad iterations`);
  }
}

export function validateBundle(doc: unknown): string[] {
  const problems: string[] = [];
  if (!isObject(doc)) return ["bundle is not an object"];

  if (!Number.isInteger(doc.schema_version) || (doc.schema_version as number) < 1) {
    problems.push("schema_version must be a positive integer");
  }

  const years = doc.years;
  let span = 0;
  let first = 0;
  if (
    !isObject(years) ||
    !Number.isInteger(years.first) ||
    !Number.isInteger(years.last) ||
    (years.first as number) > (years.last as number)
  ) {
    problems.push("years must be {first, last} with first <= last");
  } else {
    first = years.first as number;
    span = (years.last as number) - first + 1;
  }

  const iso3s = new Set<string>();
  if (!Array.isArray(doc.countries)) {
    problems.push("countries must be an array");
  } else {
    for (const c of doc.countries) {
      if (
        !isObject(c) ||
        typeof c.iso3 !== "string" ||
        !ISO3_RE.test(c.iso3) ||
        typeof c.display_name !== "string" ||
        !c.display_name ||
        !REGIONS.has(c.region as string)
      ) {
        problems.push("countries contains a malformed entry");
        break;
      }
      iso3s.add(c.iso3);
    }
  }

  const drugs = new Set<string>();
  if (!Array.isArray(doc.drugs) || !doc.drugs.every((d) => typeof d === "string" && DRUG_RE.test(d))) {
    problems.push("drugs must be an array of lowercase tokens");
  } else {
    for (const d of doc.drugs) drugs.add(d as string);
  }

  const series = doc.series;
  const seriesKeys = new Set<string>();
  if (!isObject(series)) {
    problems.push("series must be an object");
  } else {
    for (const [key, cells] of Object.entries(series)) {
      if (!KEY_RE.test(key)) {
        problems.push(`series key ${key} is malformed`);
        continue;
      }
      if (!Array.isArray(cells) || !cells.every((v) => v === null || isFiniteNumber(v))) {
        problems.push(`series ${key} has non-numeric cells`);
        continue;
      }
      if (span > 0 && cells.length !== span) {
        problems.push(`series ${key} has ${cells.length} cells, expected ${span}`);
      }
      if (!iso3s.has(key.slice(0, 3))) {
        problems.push(`series ${key} references an unregistered country`);
      }
      if (!drugs.has(key.slice(4))) {
        problems.push(`series ${key} references an unregistered drug`);
      }
      seriesKeys.add(key);
    }
  }

  if (!isObject(doc.cognostics)) {
    problems.push("cognostics must be an object");
  } else {
    for (const [key, entry] of Object.entries(doc.cognostics)) {
      if (!seriesKeys.has(key)) {
        problems.push(`cognostics references unknown series key ${key}`);
        continue;
      }
      if (!isObject(entry)) {
        problems.push(`cognostics ${key} is not an object`);
        continue;
      }
      for (const field of COGNOSTIC_FIELDS) {
        const v = (entry as Record<string, unknown>)[field];
        const nullable = field === "max_annual_increase" || field === "max_annual_decrease";
        if (!(isFiniteNumber(v) || (nullable && v === null))) {
          problems.push(`cognostics ${key}.${field} is invalid`);
        }
      }
    }
  }

  const embedding = doc.embedding;
  if (!isObject(embedding) || !isObject(embedding.per_drug)) {
    problems.push("embedding must be {joint, per_drug}");
  } else {
    checkLayout(embedding.joint, "embedding.joint", problems);
    for (const [drug, layout] of Object.entries(embedding.per_drug)) {
      checkLayout(layout, `embedding.per_drug.${drug}`, problems);
      if (isObject(layout) && layout.status === "ok") {
        for (const key of layout.keys as string[]) {
          if (!seriesKeys.has(key)) {
            problems.push(`embedding.per_drug.${drug} references unknown series key ${key}`);
          }
        }
      }
    }
    const joint = embedding.joint;
    if (isObject(joint) && joint.status === "ok") {
      for (const key of joint.keys as string[]) {
        if (!seriesKeys.has(key)) {
          problems.push(`embedding.joint references unknown series key ${key}`);
        }
      }
    }
  }

  const trends = doc.trends;
  if (!isObject(trends) || !isObject(trends.grids) || !isObject(trends.params)) {
    problems.push("trends must be {params, grids}");
  } else {
    for (const [key, grid] of Object.entries(trends.grids)) {
      if (!seriesKeys.has(key)) {
        problems.push(`trends references unknown series key ${key}`);
        continue;
      }
      if (
        !isObject(grid) ||
        !Array.isArray(grid.level) ||
        !Array.isArray(grid.slope) ||
        !grid.level.every(isFiniteNumber) ||
        !grid.slope.every(isFiniteNumber)
      ) {
        problems.push(`trends grid ${key} is malformed`);
        continue;
      }
      if (span > 0 && (grid.level.length !== span || grid.slope.length !== span)) {
        problems.push(`trends grid ${key} does not cover the year span`);
      }
    }
  }

  return problems;
}

export function assertValidBundle(doc: unknown): Bundle {
  const problems = validateBundle(doc);
  if (problems.length > 0) {
    throw new BundleValidationError(problems);
  }
  return doc as Bundle;
}

export class BundleValidationError extends Error {
  problems: string[];

  constructor(problems: string[]) {
    super(`invalid bundle: ${problems.join("; ")}`);
    this.problems = problems;
  }
}
