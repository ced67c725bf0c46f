/** Bootstrap and event loop: fetch the bundle named by the `bundle` query
 * parameter (default ./bundle.json), validate it, and keep the four linked
 * views plus the series panel in sync with one immutable ViewState.
 */

import { indexBundle, loadWorldGrid, type BundleIndex } from "./bundle.js";
import {
  renderChoropleth,
  renderCognostics,
  renderErrorBanner,
  renderMds,
  renderSeriesPanel,
  renderTrends,
} from "./render.js";
import {
  clearHover,
  initialState,
  linkHover,
  selectYearDrug,
  setActiveView,
  togglePin,
} from "./state.js";
import type { CognosticAxis, ViewName, ViewState, WorldGrid } from "./types.js";
import { COGNOSTIC_AXES } from "./types.js";
import { validateBundle } from "./validate.js";
import {
  choropleth,
  cognosticsDots,
  mdsScatter,
  seriesPanel,
  trendScatter,
  viewsToRender,
} from "./viewmodels.js";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function svg(id: string): SVGSVGElement {
  return $(id) as unknown as SVGSVGElement;
}

interface App {
  index: BundleIndex;
  grid: WorldGrid;
  state: ViewState;
  axis: CognosticAxis;
  mdsPerDrug: boolean;
}

let app: App | null = null;

function update(next: ViewState): void {
  if (!app) return;
  app.state = next;
  paint();
}

const handlers = {
  onHover: (keyId: string) => app && update(linkHover(app.index.bundle, app.state, keyId)),
  onLeave: () => app && update(clearHover(app.state)),
  onPin: (keyId: string) => app && update(togglePin(app.index.bundle, app.state, keyId)),
};

function paint(): void {
  if (!app) return;
  const { bundle } = app.index;
  const state = app.state;
  renderSeriesPanel(svg("series-panel"), seriesPanel(bundle, state), bundle.years);
  renderChoropleth(svg("view-map"), choropleth(bundle, state, app.grid), handlers);
  renderCognostics(svg("view-cognostics"), cognosticsDots(bundle, state, app.axis), handlers);
  renderMds(svg("view-mds"), mdsScatter(bundle, state, app.mdsPerDrug), handlers);
  renderTrends(svg("view-trends"), trendScatter(bundle, state), handlers);
  for (const view of ["map", "cognostics", "mds", "trends"] as ViewName[]) {
    $(`panel-${view}`).classList.toggle("active", state.activeView === view);
    $(`tab-${view}`).classList.toggle("active", state.activeView === view);
  }
  ($("year-slider") as HTMLInputElement).value = String(state.selectedYear);
  $("year-label").textContent = String(state.selectedYear);
  ($("drug-select") as HTMLSelectElement).value = state.selectedDrug;
}

function wireControls(): void {
  if (!app) return;
  const { bundle } = app.index;
  const slider = $("year-slider") as HTMLInputElement;
  slider.min = String(bundle.years.first);
  slider.max = String(bundle.years.last);
  slider.addEventListener("input", () => {
    if (!app) return;
    update(selectYearDrug(bundle, app.state, Number(slider.value), app.state.selectedDrug));
  });
  const drugSelect = $("drug-select") as HTMLSelectElement;
  for (const drug of bundle.drugs) {
    const option = document.createElement("option");
    option.value = drug;
    option.textContent = drug;
    drugSelect.appendChild(option);
  }
  drugSelect.addEventListener("change", () => {
    if (!app) return;
    update(selectYearDrug(bundle, app.state, app.state.selectedYear, drugSelect.value));
  });
  const axisSelect = $("axis-select") as HTMLSelectElement;
  for (const axis of COGNOSTIC_AXES) {
    const option = document.createElement("option");
    option.value = axis;
    option.textContent = axis;
    axisSelect.appendChild(option);
  }
  axisSelect.value = app.axis;
  axisSelect.addEventListener("change", () => {
    if (!app) return;
    app.axis = axisSelect.value as CognosticAxis;
    paint();
  });
  const mdsToggle = $("mds-per-drug") as HTMLInputElement;
  mdsToggle.addEventListener("change", () => {
    if (!app) return;
    app.mdsPerDrug = mdsToggle.checked;
    paint();
  });
  for (const view of ["map", "cognostics", "mds", "trends"] as ViewName[]) {
    $(`tab-${view}`).addEventListener("click", () => {
      if (!app) return;
      update(setActiveView(app.state, view));
    });
  }
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const bundleUrl = params.get("bundle") ?? "./bundle.json";
  try {
    const response = await fetch(bundleUrl);
    if (!response.ok) throw new Error(`HTTP ${response.status} fetching ${bundleUrl}`);
    const doc = await response.json();
    const problems = validateBundle(doc);
    if (viewsToRender(problems).length === 0) {
      renderErrorBanner($("app"), problems);
      return;
    }
    const grid = await loadWorldGrid("./assets/worldgrid.json");
    const index = indexBundle(doc);
    app = {
      index,
      grid,
      state: initialState(index.bundle),
      axis: "max_annual_increase",
      mdsPerDrug: false,
    };
    $("loading").remove();
    wireControls();
    paint();
  } catch (error) {
    renderErrorBanner($("app"), [String(error)]);
  }
}

boot();
