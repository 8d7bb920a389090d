/** Perceptually uniform colormap for IP values in [0, 1] plus marker colors. */

export type Rgb = [number, number, number];

// viridis control points (matplotlib's table, subsampled every 16 entries)
const VIRIDIS: Rgb[] = [
  [68, 1, 84],
  [71, 18, 101],
  [72, 35, 116],
  [69, 52, 127],
  [64, 67, 135],
  [58, 82, 139],
  [52, 96, 141],
  [46, 108, 142],
  [41, 121, 142],
  [36, 134, 141],
  [32, 146, 140],
  [30, 158, 137],
  [34, 170, 131],
  [47, 181, 121],
  [68, 192, 112],
  [94, 201, 97],
  [121, 209, 81],
  [154, 216, 60],
  [189, 222, 38],
  [223, 227, 24],
  [253, 231, 36],
];

export function viridis(t: number): Rgb {
  if (!Number.isFinite(t)) {
    return [128, 128, 128]; // failed cells
  }
  const clamped = Math.min(1, Math.max(0, t));
  const x = clamped * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(x));
  const f = x - i;
  const a = VIRIDIS[i];
  const b = VIRIDIS[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

/** Inverse lookup: colormap value whose color is nearest to the pixel. */
export function viridisValue(rgb: Rgb): number {
  let best = 0;
  let bestDist = Infinity;
  const steps = 512;
  for (let k = 0; k <= steps; k++) {
    const t = k / steps;
    const c = viridis(t);
    const d =
      (c[0] - rgb[0]) * (c[0] - rgb[0]) +
      (c[1] - rgb[1]) * (c[1] - rgb[1]) +
      (c[2] - rgb[2]) * (c[2] - rgb[2]);
    if (d < bestDist) {
      bestDist = d;
      best = t;
    }
  }
  return best;
}

export const WHITE: Rgb = [255, 255, 255];
export const BLACK: Rgb = [0, 0, 0];
export const OVERLAY: Rgb = [255, 0, 255];
export const MARKER: Rgb = [255, 64, 64];
export const AXIS: Rgb = [180, 180, 180];
export const SERIES: Rgb[] = [
  [31, 119, 180],
  [255, 127, 14],
  [44, 160, 44],
];
