/** Bundle fetching and indexing. The bundle URL is the only contract with
 * the backend; anything that fails validation is rejected whole.
 */

import type { Bundle, WorldGrid } from "./types.js";
import { keyCountry } from "./types.js";
import { assertValidBundle } from "./validate.js";

export interface BundleIndex {
  bundle: Bundle;
  keysByCountry: Map<string, string[]>;
  countryNames: Map<string, string>;
}

export function indexBundle(bundle: Bundle): BundleIndex {
  const keysByCountry = new Map<string, string[]>();
  for (const key of Object.keys(bundle.series).sort()) {
    const iso3 = keyCountry(key);
    const existing = keysByCountry.get(iso3);
    if (existing) {
      existing.push(key);
    } else {
      keysByCountry.set(iso3, [key]);
    }
  }
  const countryNames = new Map(bundle.countries.map((c) => [c.iso3, c.display_name]));
  return { bundle, keysByCountry, countryNames };
}

export async function loadBundle(url: string): Promise<BundleIndex> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`failed to fetch bundle from ${url}: HTTP ${response.status}`);
  }
  const doc = await response.json();
  return indexBundle(assertValidBundle(doc));
}

export async function loadWorldGrid(url: string): Promise<WorldGrid> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`failed to fetch world grid from ${url}: HTTP ${response.status}`);
  }
  return (await response.json()) as WorldGrid;
}
