/** Draw-list derivations: (bundle, state) in, plain data out.
 *
 * Everything a view paints comes from here, so the linking and transition
 * contracts are testable without a browser. Two hard rules: a missing value
 * is never rendered as zero anywhere, and the same inputs always produce the
 * same draw list.
 */

import { highlightedKeys } from "./state.js";
import type {
  Bundle,
  CognosticAxis,
  Layout,
  ViewState,
  WorldGrid,
} from "./types.js";
import { keyCountry, keyDrug } from "./types.js";

export interface SeriesPanelLine {
  key: string;
  drug: string;
  points: { year: number; value: number }[]; // missing years skipped, zeros kept
  pinned: boolean;
}

export interface SeriesPanelVM {
  iso3: string | null;
  countryName: string | null;
  lines: SeriesPanelLine[];
}

/** All drugs for the focus country (hovered first, else first pinned). */
export function seriesPanel(bundle: Bundle, state: ViewState): SeriesPanelVM {
  const focusKey = state.hoveredKey ?? state.pinnedKeys[0] ?? null;
  if (focusKey === null) return { iso3: null, countryName: null, lines: [] };
  const iso3 = keyCountry(focusKey);
  const country = bundle.countries.find((c) => c.iso3 === iso3);
  const first = bundle.years.first;
  const lines: SeriesPanelLine[] = Object.keys(bundle.series)
    .filter((key) => keyCountry(key) === iso3)
    .sort()
    .map((key) => ({
      key,
      drug: keyDrug(key),
      points: bundle.series[key]
        .map((value, i) => ({ year: first + i, value }))
        .filter((p): p is { year: number; value: number } => p.value !== null),
      pinned: state.pinnedKeys.includes(key),
    }));
  return { iso3, countryName: country?.display_name ?? iso3, lines };
}

export type TileKind = "value" | "no-data";

export interface ChoroplethTile {
  iso3: string;
  col: number;
  row: number;
  kind: TileKind;
  value: number | null;
  hoverKey: string | null;
  highlighted: boolean;
}

export interface ChoroplethVM {
  year: number;
  drug: string;
  cols: number;
  rows: number;
  tiles: ChoroplethTile[];
  maxValue: number;
}

/** Map tiles for the selected (year, drug); null cells stay visually distinct from 0. */
export function choropleth(bundle: Bundle, state: ViewState, grid: WorldGrid): ChoroplethVM {
  const first = bundle.years.first;
  const index = state.selectedYear - first;
  const highlight = highlightedKeys(state);
  const highlightCountries = new Set([...highlight].map(keyCountry));
  const tiles: ChoroplethTile[] = [];
  let maxValue = 0;
  for (const country of bundle.countries) {
    const cell = grid.cells[country.iso3];
    if (!cell) continue;
    const key = `${country.iso3}:${state.selectedDrug}`;
    const cells = bundle.series[key];
    const value = cells ? cells[index] : null;
    const hoverKey =
      key in bundle.series
        ? key
        : Object.keys(bundle.series)
            .filter((k) => keyCountry(k) === country.iso3)
            .sort()[0] ?? null;
    if (value !== null && value > maxValue) maxValue = value;
    tiles.push({
      iso3: country.iso3,
      col: cell.col,
      row: cell.row,
      kind: value === null ? "no-data" : "value",
      value,
      hoverKey,
      highlighted: highlightCountries.has(country.iso3),
    });
  }
  return {
    year: state.selectedYear,
    drug: state.selectedDrug,
    cols: grid.cols,
    rows: grid.rows,
    tiles,
    maxValue,
  };
}

export interface CognosticDot {
  key: string;
  value: number;
  highlighted: boolean;
}

export interface CognosticsVM {
  axis: CognosticAxis;
  dots: CognosticDot[]; // descending by value; null-valued entries omitted
  omitted: string[]; // keys whose axis value is absent
}

export function cognosticsDots(
  bundle: Bundle,
  state: ViewState,
  axis: CognosticAxis,
): CognosticsVM {
  const highlight = highlightedKeys(state);
  const dots: CognosticDot[] = [];
  const omitted: string[] = [];
  for (const [key, entry] of Object.entries(bundle.cognostics)) {
    const value = entry[axis];
    if (value === null) {
      omitted.push(key);
    } else {
      dots.push({ key, value, highlighted: highlight.has(key) });
    }
  }
  dots.sort((a, b) => b.value - a.value || a.key.localeCompare(b.key));
  omitted.sort();
  return { axis, dots, omitted };
}

export interface ScatterPoint {
  key: string;
  x: number;
  y: number;
  drug: string;
  highlighted: boolean;
}

export interface MdsVM {
  status: "ok" | "empty";
  reason: string | null;
  points: ScatterPoint[];
  stress: number | null;
}

function layoutFor(bundle: Bundle, state: ViewState, perDrug: boolean): Layout {
  if (!perDrug) return bundle.embedding.joint;
  return (
    bundle.embedding.per_drug[state.selectedDrug] ?? {
      status: "empty",
      reason: `no per-drug layout for ${state.selectedDrug}`,
    }
  );
}

/** Joint layout by default; per-drug layout when the drug filter is active. */
export function mdsScatter(bundle: Bundle, state: ViewState, perDrug = false): MdsVM {
  const layout = layoutFor(bundle, state, perDrug);
  if (layout.status === "empty") {
    return { status: "empty", reason: layout.reason, points: [], stress: null };
  }
  const highlight = highlightedKeys(state);
  const points = layout.keys.map((key, i) => ({
    key,
    x: layout.coords[i][0],
    y: layout.coords[i][1],
    drug: keyDrug(key),
    highlighted: highlight.has(key),
  }));
  return { status: "ok", reason: null, points, stress: layout.stress };
}

export interface TrendPoint {
  key: string;
  x: number; // local level at the selected year
  y: number; // local slope at the selected year
  drug: string;
  highlighted: boolean;
}

export interface TrendsVM {
  year: number;
  points: TrendPoint[];
}

/** Target positions for the year-animated scatter: exactly the stored grids. */
export function trendScatter(bundle: Bundle, state: ViewState): TrendsVM {
  const index = state.selectedYear - bundle.years.first;
  const highlight = highlightedKeys(state);
  const points = Object.entries(bundle.trends.grids)
    .map(([key, grid]) => ({
      key,
      x: grid.level[index],
      y: grid.slope[index],
      drug: keyDrug(key),
      highlighted: highlight.has(key),
    }))
    .sort((a, b) => a.key.localeCompare(b.key));
  return { year: state.selectedYear, points };
}

export const ALL_VIEWS = ["map", "cognostics", "mds", "trends"] as const;

/** Gate: a bundle that failed validation renders nothing at all. */
export function viewsToRender(validationProblems: string[]): readonly string[] {
  return validationProblems.length > 0 ? [] : ALL_VIEWS;
}
