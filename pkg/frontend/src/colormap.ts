/** Diverging blue-white-red colormap with symmetric limits about zero. */

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

// cool-to-warm anchors (dark blue, light blue, white, light red, dark red)
const ANCHORS: Array<[number, Rgb]> = [
  [0.0, { r: 33, g: 102, b: 172 }],
  [0.25, { r: 146, g: 197, b: 222 }],
  [0.5, { r: 247, g: 247, b: 247 }],
  [0.75, { r: 244, g: 165, b: 130 }],
  [1.0, { r: 178, g: 24, b: 43 }],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

export function divergingColor(t: number): Rgb {
  const x = Math.min(1, Math.max(0, t));
  for (let i = 1; i < ANCHORS.length; i++) {
    const [x1, c1] = ANCHORS[i];
    const [x0, c0] = ANCHORS[i - 1];
    if (x <= x1) {
      const u = x1 === x0 ? 0 : (x - x0) / (x1 - x0);
      return {
        r: Math.round(lerp(c0.r, c1.r, u)),
        g: Math.round(lerp(c0.g, c1.g, u)),
        b: Math.round(lerp(c0.b, c1.b, u)),
      };
    }
  }
  return ANCHORS[ANCHORS.length - 1][1];
}

export function hex(c: Rgb): string {
  const h = (v: number) => v.toString(16).padStart(2, "0");
  return `#${h(c.r)}${h(c.g)}${h(c.b)}`;
}

/** Symmetric color limit: max(|values|), at least `floor` to avoid 0/0. */
export function symmetricLimit(values: number[], floor = 1e-12): number {
  let m = floor;
  for (const v of values) {
    const a = Math.abs(v);
    if (a > m) m = a;
  }
  return m;
}

/** Map a value to a hex color with limits [-limit, +limit] centered on white. */
export function divergingHex(value: number, limit: number): string {
  return hex(divergingColor(0.5 + 0.5 * (value / limit)));
}
