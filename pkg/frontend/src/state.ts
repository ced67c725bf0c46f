/** Pure view-state transitions. Every function returns a new state object;
 * unknown keys and out-of-range selections are ignored or clamped, never
 * thrown, so a stray event can't wedge the UI.
 */

import type { Bundle, ViewName, ViewState } from "./types.js";

export function initialState(bundle: Bundle): ViewState {
  const drug = bundle.drugs.includes("morphine") ? "morphine" : bundle.drugs[0] ?? "";
  return {
    selectedDrug: drug,
    selectedYear: bundle.years.last,
    hoveredKey: null,
    pinnedKeys: [],
    activeView: "map",
  };
}

export function linkHover(bundle: Bundle, state: ViewState, keyId: string): ViewState {
  if (!(keyId in bundle.series)) return state;
  return { ...state, hoveredKey: keyId };
}

export function clearHover(state: ViewState): ViewState {
  return { ...state, hoveredKey: null };
}

export function selectYearDrug(
  bundle: Bundle,
  state: ViewState,
  year: number,
  drug: string,
): ViewState {
  const clamped = Math.min(Math.max(Math.round(year), bundle.years.first), bundle.years.last);
  const nextDrug = bundle.drugs.includes(drug) ? drug : state.selectedDrug;
  return { ...state, selectedYear: clamped, selectedDrug: nextDrug };
}

export function togglePin(bundle: Bundle, state: ViewState, keyId: string): ViewState {
  if (!(keyId in bundle.series)) return state;
  const pinned = state.pinnedKeys.includes(keyId)
    ? state.pinnedKeys.filter((k) => k !== keyId)
    : [...state.pinnedKeys, keyId];
  return { ...state, pinnedKeys: pinned };
}

export function setActiveView(state: ViewState, view: ViewName): ViewState {
  return { ...state, activeView: view };
}

/** Keys that should be highlighted in every view that contains them. */
export function highlightedKeys(state: ViewState): Set<string> {
  const keys = new Set(state.pinnedKeys);
  if (state.hoveredKey) keys.add(state.hoveredKey);
  return keys;
}
