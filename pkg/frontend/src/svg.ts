/** Minimal deterministic SVG string building (no DOM). */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children = "",
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  return children === ""
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${children}</${name}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { size?: number; anchor?: string; rotate?: number } = {},
): string {
  const attrs: Record<string, string | number> = {
    x,
    y,
    "font-size": opts.size ?? 10,
    "font-family": "Helvetica, Arial, sans-serif",
    "text-anchor": opts.anchor ?? "middle",
    fill: "#222222",
  };
  if (opts.rotate !== undefined) {
    attrs.transform = `rotate(${fmt(opts.rotate)} ${fmt(x)} ${fmt(y)})`;
  }
  return tag("text", attrs, esc(content));
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    "\n</svg>\n"
  );
}

/** Linear data-to-pixel scale. */
export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

/** 1-2-5 tick values covering the domain (deterministic). */
export function ticks(domain: [number, number], target = 5): number[] {
  const [a, b] = domain;
  const span = Math.abs(b - a);
  if (span === 0) return [a];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const lo = Math.ceil(Math.min(a, b) / step) * step;
  const out: number[] = [];
  for (let v = lo; v <= Math.max(a, b) + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : Number(v.toPrecision(12)));
  }
  return out;
}
