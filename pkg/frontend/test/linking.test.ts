import { describe, expect, it } from "vitest";

import { clearHover, initialState, linkHover, togglePin } from "../src/state.js";
import {
  choropleth,
  cognosticsDots,
  mdsScatter,
  seriesPanel,
  trendScatter,
} from "../src/viewmodels.js";
import { goldenBundle, worldGrid } from "./fixtures.js";

const KEY = "HKG:morphine";

describe("linking contract", () => {
  const bundle = goldenBundle();
  const grid = worldGrid();
  const base = initialState(bundle);

  it("hover from each of the four views yields the identical series panel", () => {
    // Collect the hover key each view would emit for the same underlying series.
    const mapTile = choropleth(bundle, base, grid).tiles.find((t) => t.iso3 === "HKG");
    const dot = cognosticsDots(bundle, base, "net_change").dots.find((d) => d.key === KEY);
    const mdsPoint = mdsScatter(bundle, base).points.find((p) => p.key === KEY);
    const trendPoint = trendScatter(bundle, base).points.find((p) => p.key === KEY);
    expect(mapTile?.hoverKey).toBe(KEY); // morphine is the default selected drug
    expect(dot).toBeDefined();
    expect(mdsPoint).toBeDefined();
    expect(trendPoint).toBeDefined();

    const panels = [mapTile!.hoverKey!, dot!.key, mdsPoint!.key, trendPoint!.key].map((k) =>
      seriesPanel(bundle, linkHover(bundle, base, k)),
    );
    for (const panel of panels.slice(1)) {
      expect(panel).toEqual(panels[0]);
    }
    expect(panels[0].iso3).toBe("HKG");
    expect(panels[0].lines.map((l) => l.drug)).toEqual(["morphine", "oxycodone", "pethidine"]);
  });

  it("hovering highlights the same key in every view that contains it", () => {
    const hovered = linkHover(bundle, base, KEY);
    expect(
      choropleth(bundle, hovered, grid).tiles.find((t) => t.iso3 === "HKG")?.highlighted,
    ).toBe(true);
    expect(
      cognosticsDots(bundle, hovered, "net_change").dots.find((d) => d.key === KEY)?.highlighted,
    ).toBe(true);
    expect(mdsScatter(bundle, hovered).points.find((p) => p.key === KEY)?.highlighted).toBe(true);
    expect(trendScatter(bundle, hovered).points.find((p) => p.key === KEY)?.highlighted).toBe(true);
    // And nothing else lights up.
    expect(mdsScatter(bundle, hovered).points.filter((p) => p.highlighted)).toHaveLength(1);
  });

  it("hover then un-hover returns to the prior pinned selection", () => {
    const pinned = togglePin(bundle, base, "DNK:oxycodone");
    const beforePanel = seriesPanel(bundle, pinned);
    const afterPanel = seriesPanel(bundle, clearHover(linkHover(bundle, pinned, KEY)));
    expect(afterPanel).toEqual(beforePanel);
    expect(afterPanel.iso3).toBe("DNK");
  });

  it("unknown keys are ignored defensively", () => {
    expect(linkHover(bundle, base, "XXX:nothing")).toBe(base);
    expect(togglePin(bundle, base, "XXX:nothing")).toBe(base);
  });

  it("series panel separates zeros from missing years", () => {
    const panel = seriesPanel(bundle, linkHover(bundle, base, "ZMB:morphine"));
    const line = panel.lines.find((l) => l.key === "ZMB:morphine")!;
    const years = line.points.map((p) => p.year);
    // 1989 is unreported in the fixture and must simply not appear...
    expect(years).not.toContain(1989);
    // ...while 1990 is a reported zero and must appear with value 0.
    expect(line.points.find((p) => p.year === 1990)).toEqual({ year: 1990, value: 0.0 });
  });
});
