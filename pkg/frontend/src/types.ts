/** Shape of the atlas bundle document and of the UI's view state. */

export interface CountryEntry {
  iso3: string;
  display_name: string;
  region: string;
}

export interface CognosticEntry {
  net_change: number;
  max_annual_increase: number | null;
  max_annual_decrease: number | null;
  mean_level: number;
  latest_value: number;
}

export interface OkLayout {
  status: "ok";
  keys: string[];
  coords: [number, number][];
  stress: number;
  iterations: number;
}

export interface EmptyLayout {
  status: "empty";
  reason: string;
}

export type Layout = OkLayout | EmptyLayout;

export interface TrendGridEntry {
  level: number[];
  slope: number[];
}

export interface Bundle {
  schema_version: number;
  years: { first: number; last: number };
  countries: CountryEntry[];
  drugs: string[];
  series: Record<string, (number | null)[]>;
  cognostics: Record<string, CognosticEntry>;
  embedding: { joint: Layout; per_drug: Record<string, Layout> };
  trends: {
    params: { bandwidth_years: number; ridge_lambda: number; kernel: string };
    grids: Record<string, TrendGridEntry>;
  };
}

export type ViewName = "map" | "cognostics" | "mds" | "trends";

/** Axes the cognostic dot plot can be ordered by. */
export const COGNOSTIC_AXES = [
  "max_annual_increase",
  "net_change",
  "max_annual_decrease",
  "mean_level",
  "latest_value",
] as const;
export type CognosticAxis = (typeof COGNOSTIC_AXES)[number];

export interface ViewState {
  selectedDrug: string;
  selectedYear: number;
  hoveredKey: string | null;
  pinnedKeys: string[];
  activeView: ViewName;
}

export interface WorldGrid {
  cols: number;
  rows: number;
  cells: Record<string, { col: number; row: number }>;
}

export function keyCountry(keyId: string): string {
  return keyId.slice(0, 3);
}

export function keyDrug(keyId: string): string {
  return keyId.slice(4);
}
