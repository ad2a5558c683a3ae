/** Figure composition: one layout per simulation preset, built from the
 * runner's CSV outputs. */

import { existsSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { SERIES_COLORS, Series, barPanel, heatmapPanel, linePanel } from "./charts.js";
import { CsvSchemaError, Table, column, distinct, filterRows, readCsv, requireColumns } from "./csv.js";
import { document as svgDocument } from "./svg.js";

export interface FigureSpec {
  figure: string;
  inputDir: string;
  output: string;
}

export const FIGURE_IDS = ["fig2", "fig3", "fig4", "s8", "s9", "s12", "s13", "pairswap"] as const;

const PANEL_W = 300;
const PANEL_H = 220;

interface QuenchInputs {
  populations?: Table;
  correlations?: Table;
  fringes?: Table;
  fringeFits?: Table;
  wigner?: Table;
  schedule?: { omega0: number; tf: number; duration: number };
}

function loadQuench(dir: string): QuenchInputs {
  const out: QuenchInputs = {};
  const read = (name: string) => {
    const p = join(dir, name);
    return existsSync(p) ? readCsv(p) : undefined;
  };
  out.populations = read("populations.csv");
  out.correlations = read("correlations.csv");
  out.fringes = read("fringes.csv");
  out.fringeFits = read("fringe_fits.csv");
  out.wigner = read("wigner.csv");
  const manifest = join(dir, "manifest.json");
  if (existsSync(manifest)) {
    const cfg = JSON.parse(readFileSync(manifest, "utf8")).config;
    const sched = cfg?.schedule;
    if (sched) {
      out.schedule = {
        omega0: sched.omega0_mhz_over_2pi,
        tf: sched.tf_ns,
        duration: sched.duration_ns,
      };
    }
  }
  return out;
}

function drivePanel(box: { x: number; y: number; width: number; height: number },
                    sched: { omega0: number; tf: number; duration: number }): string {
  const n = 151;
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    const t = (sched.duration * i) / (n - 1);
    x.push(t);
    y.push(sched.omega0 * Math.exp(-t / sched.tf));
  }
  return linePanel(box, [{ x, y, color: SERIES_COLORS[0] }], {
    title: "drive amplitude",
    xlabel: "tau (ns)",
    ylabel: "Omega/2pi (MHz)",
  });
}

function populationPanels(t: Table, times: number[], cols: number, originY: number): string {
  const parts: string[] = [];
  const timeCol = column(t, "time_ns", "populations.csv");
  const nQubits = t.columns.filter((c) => c.startsWith("p")).length - 1;
  times.forEach((tau, i) => {
    const ri = timeCol.findIndex((v) => Math.abs(v - tau) < 1e-9);
    if (ri < 0) {
      throw new CsvSchemaError("populations.csv", `no checkpoint at ${tau} ns`);
    }
    const values: number[] = [];
    for (let k = 0; k <= nQubits; k++) {
      values.push(column(t, `p${k}`, "populations.csv")[ri]);
    }
    parts.push(
      barPanel(
        {
          x: (i % cols) * PANEL_W,
          y: originY + Math.floor(i / cols) * PANEL_H,
          width: PANEL_W,
          height: PANEL_H,
        },
        values,
        { title: `populations at ${tau} ns`, xlabel: "excitation n", yMax: 1.0 },
      ),
    );
  });
  return parts.join("\n");
}

/** Four bar-panel times: prefer the canonical set, else spread evenly. */
function pickTimes(available: number[], wanted: number[]): number[] {
  const ok = wanted.every((w) => available.some((a) => Math.abs(a - w) < 1e-9));
  if (ok) return wanted;
  const n = available.length;
  return [0, Math.floor((n - 1) / 3), Math.floor((2 * (n - 1)) / 3), n - 1].map(
    (i) => available[i],
  );
}

export function renderFig2(dir: string): string {
  const inp = loadQuench(dir);
  if (!inp.populations) {
    throw new CsvSchemaError(join(dir, "populations.csv"), "missing input");
  }
  requireColumns(inp.populations, ["time_ns", "p0"], "populations.csv");
  const times = column(inp.populations, "time_ns", "populations.csv");
  const p0 = column(inp.populations, "p0", "populations.csv");
  const parts: string[] = [];
  if (inp.schedule) {
    parts.push(drivePanel({ x: 0, y: 0, width: PANEL_W, height: PANEL_H }, inp.schedule));
  }
  parts.push(
    linePanel(
      { x: PANEL_W, y: 0, width: PANEL_W, height: PANEL_H },
      [{ x: times, y: p0, color: SERIES_COLORS[0] }],
      { title: "ground-component population", xlabel: "tau (ns)", ylabel: "P0" },
    ),
  );
  const barTimes = pickTimes(distinct(times), [0, 50, 100, 150]);
  parts.push(populationPanels(inp.populations, barTimes, 2, PANEL_H));
  return svgDocument(2 * PANEL_W, 3 * PANEL_H, parts.join("\n"));
}

export function renderFig3(dir: string): string {
  const inp = loadQuench(dir);
  if (!inp.fringes || !inp.fringeFits || !inp.correlations) {
    throw new CsvSchemaError(dir, "fig3 needs fringes.csv, fringe_fits.csv, correlations.csv");
  }
  requireColumns(inp.fringes, ["time_ns", "beta_rad", "value"], "fringes.csv");
  const fringeTimes = distinct(column(inp.fringes, "time_ns", "fringes.csv"));
  const shown = pickTimes(fringeTimes, [0, 75, 105, 150]);
  const series: Series[] = shown.map((tau, i) => {
    const sub = filterRows(inp.fringes!, "time_ns", tau, "fringes.csv");
    return {
      x: column(sub, "beta_rad", "fringes.csv"),
      y: column(sub, "value", "fringes.csv"),
      color: SERIES_COLORS[i % SERIES_COLORS.length],
      label: `${tau} ns`,
    };
  });
  const parts = [
    linePanel({ x: 0, y: 0, width: 2 * PANEL_W, height: PANEL_H }, series, {
      title: "transverse correlation fringes",
      xlabel: "beta (rad)",
      ylabel: "C_N",
    }),
  ];
  requireColumns(inp.fringeFits, ["time_ns", "visibility"], "fringe_fits.csv");
  parts.push(
    linePanel(
      { x: 0, y: PANEL_H, width: PANEL_W, height: PANEL_H },
      [{
        x: column(inp.fringeFits, "time_ns", "fringe_fits.csv"),
        y: column(inp.fringeFits, "visibility", "fringe_fits.csv"),
        color: SERIES_COLORS[1],
      }],
      { title: "fringe visibility", xlabel: "tau (ns)", ylabel: "visibility" },
    ),
  );
  requireColumns(inp.correlations, ["time_ns", "c2_long"], "correlations.csv");
  parts.push(
    linePanel(
      { x: PANEL_W, y: PANEL_H, width: PANEL_W, height: PANEL_H },
      [{
        x: column(inp.correlations, "time_ns", "correlations.csv"),
        y: column(inp.correlations, "c2_long", "correlations.csv"),
        color: SERIES_COLORS[2],
      }],
      { title: "pair z-correlation", xlabel: "tau (ns)", ylabel: "C2" },
    ),
  );
  return svgDocument(2 * PANEL_W, 2 * PANEL_H, parts.join("\n"));
}

export function renderWignerMaps(dir: string): string {
  const inp = loadQuench(dir);
  if (!inp.wigner) {
    throw new CsvSchemaError(join(dir, "wigner.csv"), "missing input");
  }
  requireColumns(inp.wigner, ["time_ns", "theta_rad", "phi_rad", "value"], "wigner.csv");
  const times = distinct(column(inp.wigner, "time_ns", "wigner.csv"));
  const parts: string[] = [];
  times.forEach((tau, i) => {
    const sub = filterRows(inp.wigner!, "time_ns", tau, "wigner.csv");
    const thetas = distinct(column(sub, "theta_rad", "wigner.csv"));
    const phis = distinct(column(sub, "phi_rad", "wigner.csv"));
    const byKey = new Map<string, number>();
    const ti = sub.columns.indexOf("theta_rad");
    const pi = sub.columns.indexOf("phi_rad");
    const vi = sub.columns.indexOf("value");
    for (const row of sub.rows) {
      byKey.set(`${row[ti]}|${row[pi]}`, row[vi]);
    }
    const values = thetas.map((th) =>
      phis.map((ph) => byKey.get(`${th}|${ph}`) ?? 0),
    );
    parts.push(
      heatmapPanel(
        {
          x: (i % 2) * PANEL_W,
          y: Math.floor(i / 2) * PANEL_H,
          width: PANEL_W,
          height: PANEL_H,
        },
        thetas,
        phis,
        values,
        { title: `Wigner at ${tau} ns` },
      ),
    );
  });
  const rows = Math.ceil(times.length / 2);
  return svgDocument(2 * PANEL_W, Math.max(1, rows) * PANEL_H, parts.join("\n"));
}

export function renderQuenchOverview(dir: string): string {
  const inp = loadQuench(dir);
  const parts: string[] = [];
  let row = 0;
  if (inp.schedule) {
    parts.push(drivePanel({ x: 0, y: 0, width: PANEL_W, height: PANEL_H }, inp.schedule));
  }
  if (inp.populations) {
    const times = column(inp.populations, "time_ns", "populations.csv");
    parts.push(
      linePanel(
        { x: PANEL_W, y: 0, width: PANEL_W, height: PANEL_H },
        [{ x: times, y: column(inp.populations, "p0", "populations.csv"), color: SERIES_COLORS[0] }],
        { title: "ground-component population", xlabel: "tau (ns)", ylabel: "P0" },
      ),
    );
    row = 1;
    const barTimes = pickTimes(distinct(times), [0, 50, 100, 150]);
    parts.push(populationPanels(inp.populations, barTimes, 2, PANEL_H * row));
    row += 2;
  }
  if (inp.fringes && inp.fringeFits && inp.correlations) {
    const fringeTimes = distinct(column(inp.fringes, "time_ns", "fringes.csv"));
    const shown = pickTimes(fringeTimes, [0, 75, 105, 150]);
    const series: Series[] = shown.map((tau, i) => {
      const sub = filterRows(inp.fringes!, "time_ns", tau, "fringes.csv");
      return {
        x: column(sub, "beta_rad", "fringes.csv"),
        y: column(sub, "value", "fringes.csv"),
        color: SERIES_COLORS[i % SERIES_COLORS.length],
        label: `${tau} ns`,
      };
    });
    parts.push(
      linePanel({ x: 0, y: row * PANEL_H, width: PANEL_W, height: PANEL_H }, series, {
        title: "transverse fringes",
        xlabel: "beta (rad)",
      }),
      linePanel(
        { x: PANEL_W, y: row * PANEL_H, width: PANEL_W, height: PANEL_H },
        [
          {
            x: column(inp.fringeFits, "time_ns", "fringe_fits.csv"),
            y: column(inp.fringeFits, "visibility", "fringe_fits.csv"),
            color: SERIES_COLORS[1],
            label: "visibility",
          },
          {
            x: column(inp.correlations, "time_ns", "correlations.csv"),
            y: column(inp.correlations, "c2_long", "correlations.csv"),
            color: SERIES_COLORS[2],
            label: "C2",
          },
        ],
        { title: "visibility and pair correlation", xlabel: "tau (ns)" },
      ),
    );
    row += 1;
  }
  if (inp.wigner) {
    const times = distinct(column(inp.wigner, "time_ns", "wigner.csv"));
    times.forEach((tau, i) => {
      const sub = filterRows(inp.wigner!, "time_ns", tau, "wigner.csv");
      const thetas = distinct(column(sub, "theta_rad", "wigner.csv"));
      const phis = distinct(column(sub, "phi_rad", "wigner.csv"));
      const ti = sub.columns.indexOf("theta_rad");
      const pi = sub.columns.indexOf("phi_rad");
      const vi = sub.columns.indexOf("value");
      const byKey = new Map<string, number>();
      for (const r of sub.rows) byKey.set(`${r[ti]}|${r[pi]}`, r[vi]);
      const values = thetas.map((th) => phis.map((ph) => byKey.get(`${th}|${ph}`) ?? 0));
      parts.push(
        heatmapPanel(
          {
            x: (i % 2) * PANEL_W,
            y: (row + Math.floor(i / 2)) * PANEL_H,
            width: PANEL_W,
            height: PANEL_H,
          },
          thetas,
          phis,
          values,
          { title: `Wigner at ${tau} ns` },
        ),
      );
    });
    row += Math.ceil(times.length / 2);
  }
  if (parts.length === 0) {
    throw new CsvSchemaError(dir, "no renderable quench outputs found");
  }
  return svgDocument(2 * PANEL_W, Math.max(1, row) * PANEL_H, parts.join("\n"));
}

export function renderPairSwap(dir: string): string {
  const oscPath = join(dir, "pairswap_oscillation.csv");
  const ratesPath = join(dir, "pairswap_rates.csv");
  if (!existsSync(oscPath) || !existsSync(ratesPath)) {
    throw new CsvSchemaError(dir, "pairswap needs pairswap_oscillation.csv and pairswap_rates.csv");
  }
  const osc = readCsv(oscPath);
  requireColumns(osc, ["model", "omega_op_ghz_over_2pi", "time_ns", "p_eg"], oscPath);
  const rates = readCsv(ratesPath);
  requireColumns(
    rates,
    ["omega_op_ghz_over_2pi", "xi_over_delta", "fitted_rate_mhz_over_2pi"],
    ratesPath,
  );
  // oscillations of the first model at each operating point
  const ops = distinct(column(osc, "omega_op_ghz_over_2pi", oscPath));
  const parts: string[] = [];
  ops.slice(0, 3).forEach((op, i) => {
    const sub = filterRows(osc, "omega_op_ghz_over_2pi", op, oscPath);
    parts.push(
      linePanel(
        { x: i * PANEL_W, y: 0, width: PANEL_W, height: PANEL_H },
        [{
          x: column(sub, "time_ns", oscPath),
          y: column(sub, "p_eg", oscPath),
          color: SERIES_COLORS[i % SERIES_COLORS.length],
        }],
        { title: `exchange at ${op} GHz`, xlabel: "t (ns)", ylabel: "P(eg)", yDomain: [0, 1] },
      ),
    );
  });
  const xsAll = column(rates, "xi_over_delta", ratesPath);
  const ysAll = column(rates, "fitted_rate_mhz_over_2pi", ratesPath);
  const order = xsAll.map((_, i) => i).sort((a, b) => xsAll[a] - xsAll[b]);
  parts.push(
    linePanel(
      { x: 0, y: PANEL_H, width: PANEL_W * Math.max(1, Math.min(3, ops.length)), height: PANEL_H },
      [{
        x: order.map((i) => xsAll[i]),
        y: order.map((i) => ysAll[i]),
        color: SERIES_COLORS[0],
        label: "fitted rate",
      }],
      { title: "exchange rate vs xi/Delta", xlabel: "xi/Delta", ylabel: "rate (MHz)" },
    ),
  );
  const cols = Math.max(1, Math.min(3, ops.length));
  return svgDocument(cols * PANEL_W, 2 * PANEL_H, parts.join("\n"));
}

const RENDERERS: Record<string, (dir: string) => string> = {
  fig2: renderFig2,
  fig3: renderFig3,
  fig4: renderWignerMaps,
  s8: renderQuenchOverview,
  s9: renderQuenchOverview,
  s12: renderQuenchOverview,
  s13: renderWignerMaps,
  pairswap: renderPairSwap,
};

export function render(spec: FigureSpec): string {
  const renderer = RENDERERS[spec.figure];
  if (!renderer) {
    throw new Error(`unknown figure id '${spec.figure}' (known: ${Object.keys(RENDERERS).join(", ")})`);
  }
  return renderer(spec.inputDir);
}

/** Infer the figure id for a run directory from its manifest, if present. */
export function inferFigureId(dir: string): string {
  const manifest = join(dir, "manifest.json");
  if (existsSync(manifest)) {
    const meta = JSON.parse(readFileSync(manifest, "utf8"));
    const preset = meta?.config?.preset;
    if (typeof preset === "string" && preset in RENDERERS) return preset;
    if (meta?.config?.models) return "pairswap";
  }
  if (existsSync(join(dir, "pairswap_rates.csv"))) return "pairswap";
  if (existsSync(join(dir, "populations.csv")) || existsSync(join(dir, "correlations.csv"))) {
    return "s9";
  }
  if (existsSync(join(dir, "wigner.csv"))) return "fig4";
  throw new Error(`no renderable outputs in ${dir}`);
}
