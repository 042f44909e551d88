/**
 * Per-epoch trend chart for compared treatments.
 *
 * Rendered as inline SVG: one polyline per treatment and a dashed one for
 * the epoch-wise overlap of all selected treatments. Each polyline carries
 * its source counts in data attributes, which keeps the rendering directly
 * checkable against the comparison endpoint response.
 */

import type { CompareResponse } from "./api";

const WIDTH = 640;
const HEIGHT = 300;
const MARGIN = { top: 16, right: 24, bottom: 40, left: 44 };

const SERIES_COLORS = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
];

const SVG_NS = "http://www.w3.org/2000/svg";

interface Series {
  key: string;
  label: string;
  counts: number[];
  total: number;
  color: string;
  dashed: boolean;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  return node;
}

export class TrendChart {
  readonly element: HTMLDivElement;

  constructor() {
    this.element = document.createElement("div");
    this.element.className = "trend-chart";
  }

  clear(): void {
    this.element.textContent = "";
  }

  update(data: CompareResponse): void {
    this.clear();

    const series: Series[] = data.treatments.map((t, i) => ({
      key: t.cui,
      label: t.name,
      counts: t.counts,
      total: t.total,
      color: SERIES_COLORS[i % SERIES_COLORS.length],
      dashed: false,
    }));
    if (data.treatments.length > 1) {
      series.push({
        key: "intersection",
        label: "All selected together",
        counts: data.intersection.counts,
        total: data.intersection.total,
        color: "#000000",
        dashed: true,
      });
    }

    const peak = Math.max(1, ...series.flatMap((s) => s.counts));
    const innerWidth = WIDTH - MARGIN.left - MARGIN.right;
    const innerHeight = HEIGHT - MARGIN.top - MARGIN.bottom;
    const step = data.epochs.length > 1 ? innerWidth / (data.epochs.length - 1) : 0;
    const x = (i: number) => MARGIN.left + i * step;
    const y = (count: number) => MARGIN.top + innerHeight * (1 - count / peak);

    const svg = svgElement("svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      width: String(WIDTH),
      height: String(HEIGHT),
      role: "img",
    });

    svg.appendChild(
      svgElement("line", {
        x1: String(MARGIN.left),
        y1: String(MARGIN.top + innerHeight),
        x2: String(WIDTH - MARGIN.right),
        y2: String(MARGIN.top + innerHeight),
        stroke: "#888",
      }),
    );
    svg.appendChild(
      svgElement("line", {
        x1: String(MARGIN.left),
        y1: String(MARGIN.top),
        x2: String(MARGIN.left),
        y2: String(MARGIN.top + innerHeight),
        stroke: "#888",
      }),
    );

    data.epochs.forEach((label, i) => {
      const text = svgElement("text", {
        x: String(x(i)),
        y: String(HEIGHT - MARGIN.bottom + 16),
        "text-anchor": "middle",
        class: "epoch-label",
      });
      text.textContent = label;
      svg.appendChild(text);
    });

    const peakLabel = svgElement("text", {
      x: String(MARGIN.left - 6),
      y: String(y(peak) + 4),
      "text-anchor": "end",
      class: "axis-label",
    });
    peakLabel.textContent = String(peak);
    svg.appendChild(peakLabel);

    for (const s of series) {
      const points = s.counts
        .map((count, i) => `${x(i)},${y(count)}`)
        .join(" ");
      const line = svgElement("polyline", {
        points,
        fill: "none",
        stroke: s.color,
        "stroke-width": "2",
        "data-series": s.key,
        "data-counts": s.counts.join(","),
        "data-total": String(s.total),
      });
      if (s.dashed) {
        line.setAttribute("stroke-dasharray", "6 4");
      }
      svg.appendChild(line);
    }

    this.element.appendChild(svg);

    const legend = document.createElement("ul");
    legend.className = "chart-legend";
    for (const s of series) {
      const item = document.createElement("li");
      item.dataset.series = s.key;
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = s.color;
      item.appendChild(swatch);
      item.appendChild(
        document.createTextNode(`${s.label} (${s.total} abstracts)`),
      );
      legend.appendChild(item);
    }
    this.element.appendChild(legend);
  }
}
