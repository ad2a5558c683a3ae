/** Panel primitives: line plots, bar charts, and (theta, phi) heatmaps. */

import { divergingHex, symmetricLimit } from "./colormap.js";
import { fmt, linearScale, tag, text, ticks } from "./svg.js";

export interface PanelBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label?: string;
}

const MARGIN = { left: 44, right: 10, top: 20, bottom: 32 };

export const SERIES_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}

function frame(
  box: PanelBox,
  xs: ReturnType<typeof linearScale>,
  ys: ReturnType<typeof linearScale>,
  opts: { title?: string; xlabel?: string; ylabel?: string },
): string {
  const parts: string[] = [];
  const [px0, px1] = xs.range;
  const [py0, py1] = ys.range;
  parts.push(
    tag("rect", {
      x: Math.min(px0, px1),
      y: Math.min(py0, py1),
      width: Math.abs(px1 - px0),
      height: Math.abs(py0 - py1),
      fill: "none",
      stroke: "#444444",
      "stroke-width": 0.8,
    }),
  );
  for (const tv of ticks(xs.domain)) {
    const px = xs(tv);
    parts.push(
      tag("line", {
        x1: px, y1: py0, x2: px, y2: py0 + 4,
        stroke: "#444444", "stroke-width": 0.8,
      }),
      text(px, py0 + 14, String(tv), { size: 8 }),
    );
  }
  for (const tv of ticks(ys.domain, 4)) {
    const py = ys(tv);
    parts.push(
      tag("line", {
        x1: px0, y1: py, x2: px0 - 4, y2: py,
        stroke: "#444444", "stroke-width": 0.8,
      }),
      text(px0 - 6, py + 3, String(tv), { size: 8, anchor: "end" }),
    );
  }
  if (opts.title) {
    parts.push(text((px0 + px1) / 2, box.y + 12, opts.title, { size: 10 }));
  }
  if (opts.xlabel) {
    parts.push(text((px0 + px1) / 2, box.y + box.height - 4, opts.xlabel, { size: 9 }));
  }
  if (opts.ylabel) {
    parts.push(
      text(box.x + 10, (py0 + py1) / 2, opts.ylabel, { size: 9, rotate: -90 }),
    );
  }
  return parts.join("\n");
}

export function linePanel(
  box: PanelBox,
  series: Series[],
  opts: { title?: string; xlabel?: string; ylabel?: string; yDomain?: [number, number] } = {},
): string {
  if (series.length === 0 || series.every((s) => s.x.length === 0)) {
    throw new Error(`empty series for panel '${opts.title ?? "?"}'`);
  }
  const allX = series.flatMap((s) => s.x);
  const allY = series.flatMap((s) => s.y);
  const xs = linearScale(extent(allX), [box.x + MARGIN.left, box.x + box.width - MARGIN.right]);
  const ys = linearScale(opts.yDomain ?? extent(allY), [box.y + box.height - MARGIN.bottom, box.y + MARGIN.top]);
  const parts = [frame(box, xs, ys, opts)];
  series.forEach((s, i) => {
    const pts = s.x.map((v, k) => `${fmt(xs(v))},${fmt(ys(s.y[k]))}`).join(" ");
    parts.push(
      tag("polyline", {
        points: pts,
        fill: "none",
        stroke: s.color,
        "stroke-width": 1.2,
      }),
    );
    if (s.label) {
      const lx = box.x + box.width - MARGIN.right - 4;
      const ly = box.y + MARGIN.top + 10 + 10 * i;
      parts.push(text(lx, ly, s.label, { size: 8, anchor: "end" }));
      parts.push(
        tag("line", {
          x1: lx - 58, y1: ly - 3, x2: lx - 46, y2: ly - 3,
          stroke: s.color, "stroke-width": 1.2,
        }),
      );
    }
  });
  return parts.join("\n");
}

export function barPanel(
  box: PanelBox,
  values: number[],
  opts: { title?: string; xlabel?: string; ylabel?: string; yMax?: number } = {},
): string {
  if (values.length === 0) {
    throw new Error(`empty bar data for panel '${opts.title ?? "?"}'`);
  }
  const n = values.length;
  const xs = linearScale([-0.5, n - 0.5], [box.x + MARGIN.left, box.x + box.width - MARGIN.right]);
  const yMax = opts.yMax ?? Math.max(0.001, ...values);
  const ys = linearScale([0, yMax], [box.y + box.height - MARGIN.bottom, box.y + MARGIN.top]);
  const parts: string[] = [];
  const width = (xs(1) - xs(0)) * 0.7;
  values.forEach((v, i) => {
    parts.push(
      tag("rect", {
        x: xs(i) - width / 2,
        y: ys(v),
        width,
        height: Math.max(0, ys(0) - ys(v)),
        fill: "#4477aa",
        stroke: "#222222",
        "stroke-width": 0.4,
      }),
    );
  });
  const f = frame(box, linearScale([0, n - 1], [xs(0), xs(n - 1)]), ys, opts);
  return f + "\n" + parts.join("\n");
}

/**
 * Equirectangular heatmap over (phi horizontal, theta vertical) with a
 * diverging colormap and symmetric limits about zero.
 */
export function heatmapPanel(
  box: PanelBox,
  thetas: number[],
  phis: number[],
  values: number[][],
  opts: { title?: string; limit?: number } = {},
): string {
  if (thetas.length === 0 || phis.length === 0) {
    throw new Error(`empty heatmap grid for panel '${opts.title ?? "?"}'`);
  }
  const limit = opts.limit ?? symmetricLimit(values.flat());
  const x0 = box.x + 14;
  const y0 = box.y + 18;
  const w = box.width - 28;
  const h = box.height - 34;
  const cellW = w / phis.length;
  const cellH = h / thetas.length;
  const parts: string[] = [];
  for (let i = 0; i < thetas.length; i++) {
    for (let k = 0; k < phis.length; k++) {
      parts.push(
        tag("rect", {
          x: x0 + k * cellW,
          y: y0 + i * cellH,
          width: cellW + 0.05,
          height: cellH + 0.05,
          fill: divergingHex(values[i][k], limit),
        }),
      );
    }
  }
  if (opts.title) {
    parts.push(text(x0 + w / 2, box.y + 12, opts.title, { size: 10 }));
  }
  parts.push(
    tag("rect", {
      x: x0, y: y0, width: w, height: h,
      fill: "none", stroke: "#444444", "stroke-width": 0.8,
    }),
    text(x0 + w / 2, y0 + h + 12, "phi 0..2pi", { size: 8 }),
    text(box.x + 8, y0 + h / 2, "theta 0..pi", { size: 8, rotate: -90 }),
  );
  return parts.join("\n");
}
