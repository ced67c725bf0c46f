/** SVG/DOM painting of the view models. Logic-free by design: every number
 * and flag comes from viewmodels.ts, this file only places shapes.
 */

import type { ChoroplethVM, CognosticsVM, MdsVM, SeriesPanelVM, TrendsVM } from "./viewmodels.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const DRUG_COLORS: Record<string, string> = {
  morphine: "#2f9e44",
  oxycodone: "#e03131",
  pethidine: "#1971c2",
  hydrocodone: "#f08c00",
  fentanyl: "#9c36b5",
  hydromorphone: "#0c8599",
  codeine: "#846358",
  methadone: "#5f3dc4",
};

export function drugColor(drug: string): string {
  return DRUG_COLORS[drug] ?? "#495057";
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    el.setAttribute(name, String(value));
  }
  return el;
}

function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

type HoverHandlers = {
  onHover: (keyId: string) => void;
  onLeave: () => void;
  onPin: (keyId: string) => void;
};

function wireHover(el: SVGElement, keyId: string | null, handlers: HoverHandlers): void {
  if (!keyId) return;
  el.addEventListener("mouseenter", () => handlers.onHover(keyId));
  el.addEventListener("mouseleave", () => handlers.onLeave());
  el.addEventListener("click", () => handlers.onPin(keyId));
}

export function renderChoropleth(svg: SVGSVGElement, vm: ChoroplethVM, handlers: HoverHandlers): void {
  clear(svg);
  const size = 22;
  svg.setAttribute("viewBox", `0 0 ${vm.cols * size} ${vm.rows * size}`);
  for (const tile of vm.tiles) {
    const fill =
      tile.kind === "no-data"
        ? "url(#nodata)"
        : shade(tile.value ?? 0, vm.maxValue);
    const rect = svgEl("rect", {
      x: tile.col * size,
      y: tile.row * size,
      width: size - 2,
      height: size - 2,
      rx: 3,
      fill,
      stroke: tile.highlighted ? "#111" : "#ced4da",
      "stroke-width": tile.highlighted ? 2.5 : 0.6,
    });
    rect.appendChild(titleEl(`${tile.iso3}: ${tile.kind === "no-data" ? "no data" : `${tile.value} kg-eq`}`));
    wireHover(rect, tile.hoverKey, handlers);
    svg.appendChild(rect);
    const label = svgEl("text", {
      x: tile.col * size + (size - 2) / 2,
      y: tile.row * size + size / 2 + 2,
      "text-anchor": "middle",
      "font-size": 6,
      fill: tile.kind === "no-data" ? "#868e96" : "#212529",
      "pointer-events": "none",
    });
    label.textContent = tile.iso3;
    svg.appendChild(label);
  }
}

function shade(value: number, max: number): string {
  // Zero is a real value and gets the lightest data shade, not the no-data hatch.
  const t = max > 0 ? Math.pow(value / max, 0.4) : 0;
  const light = Math.round(95 - 55 * t);
  return `hsl(210 70% ${light}%)`;
}

function titleEl(text: string): SVGTitleElement {
  const el = document.createElementNS(SVG_NS, "title");
  el.textContent = text;
  return el;
}

export function renderSeriesPanel(svg: SVGSVGElement, vm: SeriesPanelVM, years: { first: number; last: number }): void {
  clear(svg);
  const width = 460;
  const height = 260;
  const pad = 34;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (vm.iso3 === null) {
    const msg = svgEl("text", { x: width / 2, y: height / 2, "text-anchor": "middle", "font-size": 13, fill: "#868e96" });
    msg.textContent = "hover or pin anything to see its country's series";
    svg.appendChild(msg);
    return;
  }
  let maxValue = 0;
  for (const line of vm.lines) {
    for (const p of line.points) maxValue = Math.max(maxValue, p.value);
  }
  const x = (year: number) =>
    pad + ((year - years.first) / Math.max(1, years.last - years.first)) * (width - 2 * pad);
  const y = (value: number) =>
    height - pad - (maxValue > 0 ? (value / maxValue) * (height - 2 * pad) : 0);
  svg.appendChild(svgEl("line", { x1: pad, y1: height - pad, x2: width - pad, y2: height - pad, stroke: "#adb5bd" }));
  const title = svgEl("text", { x: pad, y: 16, "font-size": 13, "font-weight": 600, fill: "#212529" });
  title.textContent = `${vm.countryName} — all drugs, kg morphine-equivalent`;
  svg.appendChild(title);
  for (const line of vm.lines) {
    // Gaps break the polyline: missing is never drawn as zero.
    const segments: { year: number; value: number }[][] = [];
    let current: { year: number; value: number }[] = [];
    let prevYear: number | null = null;
    for (const p of line.points) {
      if (prevYear !== null && p.year !== prevYear + 1 && current.length) {
        segments.push(current);
        current = [];
      }
      current.push(p);
      prevYear = p.year;
    }
    if (current.length) segments.push(current);
    for (const segment of segments) {
      if (segment.length === 1) {
        svg.appendChild(
          svgEl("circle", { cx: x(segment[0].year), cy: y(segment[0].value), r: 2.4, fill: drugColor(line.drug) }),
        );
        continue;
      }
      const path = segment.map((p, i) => `${i === 0 ? "M" : "L"}${x(p.year)},${y(p.value)}`).join(" ");
      svg.appendChild(
        svgEl("path", {
          d: path,
          fill: "none",
          stroke: drugColor(line.drug),
          "stroke-width": line.pinned ? 3 : 1.8,
        }),
      );
    }
    const last = line.points[line.points.length - 1];
    if (last) {
      const label = svgEl("text", { x: x(last.year) + 4, y: y(last.value) + 3, "font-size": 9, fill: drugColor(line.drug) });
      label.textContent = line.drug;
      svg.appendChild(label);
    }
  }
}

export function renderCognostics(svg: SVGSVGElement, vm: CognosticsVM, handlers: HoverHandlers): void {
  clear(svg);
  const width = 460;
  const rowHeight = 18;
  const height = Math.max(60, vm.dots.length * rowHeight + 30);
  const pad = 120;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (vm.dots.length === 0) {
    const msg = svgEl("text", { x: width / 2, y: 30, "text-anchor": "middle", "font-size": 12, fill: "#868e96" });
    msg.textContent = `no series has a value for ${vm.axis}`;
    svg.appendChild(msg);
    return;
  }
  const values = vm.dots.map((d) => d.value);
  const lo = Math.min(...values, 0);
  const hi = Math.max(...values, 0);
  const x = (v: number) => pad + ((v - lo) / Math.max(hi - lo, 1e-9)) * (width - pad - 20);
  vm.dots.forEach((dot, i) => {
    const cy = 20 + i * rowHeight;
    const label = svgEl("text", { x: pad - 8, y: cy + 3, "text-anchor": "end", "font-size": 10, fill: "#212529" });
    label.textContent = dot.key;
    svg.appendChild(label);
    svg.appendChild(svgEl("line", { x1: pad, y1: cy, x2: width - 20, y2: cy, stroke: "#f1f3f5" }));
    const circle = svgEl("circle", {
      cx: x(dot.value),
      cy,
      r: dot.highlighted ? 6 : 4,
      fill: drugColor(dot.key.slice(4)),
      stroke: dot.highlighted ? "#111" : "none",
      "stroke-width": 1.5,
    });
    circle.appendChild(titleEl(`${dot.key}: ${dot.value.toFixed(2)}`));
    wireHover(circle, dot.key, handlers);
    svg.appendChild(circle);
  });
}

function scatterScales(points: { x: number; y: number }[], width: number, height: number, pad: number) {
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const sx = (v: number) => pad + ((v - xLo) / Math.max(xHi - xLo, 1e-9)) * (width - 2 * pad);
  const sy = (v: number) => height - pad - ((v - yLo) / Math.max(yHi - yLo, 1e-9)) * (height - 2 * pad);
  return { sx, sy };
}

export function renderMds(svg: SVGSVGElement, vm: MdsVM, handlers: HoverHandlers): void {
  clear(svg);
  const width = 460;
  const height = 340;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (vm.status === "empty") {
    const msg = svgEl("text", { x: width / 2, y: height / 2, "text-anchor": "middle", "font-size": 12, fill: "#868e96" });
    msg.textContent = `no layout: ${vm.reason}`;
    svg.appendChild(msg);
    return;
  }
  const { sx, sy } = scatterScales(vm.points, width, height, 30);
  for (const point of vm.points) {
    const circle = svgEl("circle", {
      cx: sx(point.x),
      cy: sy(point.y),
      r: point.highlighted ? 8 : 5,
      fill: drugColor(point.drug),
      "fill-opacity": 0.85,
      stroke: point.highlighted ? "#111" : "#fff",
      "stroke-width": 1.2,
    });
    circle.appendChild(titleEl(point.key));
    wireHover(circle, point.key, handlers);
    svg.appendChild(circle);
  }
  const note = svgEl("text", { x: 8, y: height - 8, "font-size": 10, fill: "#868e96" });
  note.textContent = `stress ${vm.stress?.toFixed(4) ?? "?"} — closer points have more similar series`;
  svg.appendChild(note);
}

/** Trend scatter keeps one circle per key and moves it, so the browser can
 * animate year changes via the CSS transition on cx/cy. */
export function renderTrends(svg: SVGSVGElement, vm: TrendsVM, handlers: HoverHandlers): void {
  const width = 460;
  const height = 340;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (vm.points.length === 0) {
    clear(svg);
    const msg = svgEl("text", { x: width / 2, y: height / 2, "text-anchor": "middle", "font-size": 12, fill: "#868e96" });
    msg.textContent = "no trend grids in this bundle";
    svg.appendChild(msg);
    return;
  }
  const { sx, sy } = scatterScales(vm.points, width, height, 36);
  for (const point of vm.points) {
    const id = `trend-${point.key}`;
    let circle = svg.querySelector<SVGCircleElement>(`[data-id="${CSS.escape(id)}"]`);
    if (!circle) {
      circle = svgEl("circle", { r: 5, fill: drugColor(point.drug), "fill-opacity": 0.85 });
      circle.dataset.id = id;
      circle.style.transition = "cx 0.5s ease, cy 0.5s ease";
      circle.appendChild(titleEl(point.key));
      wireHover(circle, point.key, handlers);
      svg.appendChild(circle);
    }
    circle.setAttribute("cx", String(sx(point.x)));
    circle.setAttribute("cy", String(sy(point.y)));
    circle.setAttribute("r", point.highlighted ? "8" : "5");
    circle.setAttribute("stroke", point.highlighted ? "#111" : "#fff");
    circle.setAttribute("stroke-width", "1.2");
  }
  let axisNote = svg.querySelector<SVGTextElement>("[data-id='trend-axes']");
  if (!axisNote) {
    axisNote = svgEl("text", { x: 8, y: height - 8, "font-size": 10, fill: "#868e96" });
    axisNote.dataset.id = "trend-axes";
    svg.appendChild(axisNote);
  }
  axisNote.textContent = `x: local level (kg-eq), y: local slope (kg-eq/yr) at ${vm.year}`;
}

export function renderErrorBanner(container: HTMLElement, problems: string[]): void {
  clear(container);
  const banner = document.createElement("div");
  banner.className = "error-banner";
  const head = document.createElement("strong");
  head.textContent = "bundle rejected — nothing rendered";
  banner.appendChild(head);
  const list = document.createElement("ul");
  for (const problem of problems.slice(0, 12)) {
    const item = document.createElement("li");
    item.textContent = problem;
    list.appendChild(item);
  }
  banner.appendChild(list);
  container.appendChild(banner);
}
