/**
 * Figure rendering from the simulation CLI's CSV outputs.
 *
 * Map kinds draw one colormapped block per grid cell (cellSize pixels on a
 * side) with gamma increasing upward and omega increasing to the right, plus
 * an 8-pixel top gutter for resonance ticks. Every render writes the PNG and
 * a .meta.json sidecar describing the exact pixel <-> parameter mapping, so
 * downstream tooling never has to guess offsets.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { AXIS, BLACK, MARKER, OVERLAY, SERIES, viridis } from "./colormap";
import { readContourTable, readSweepGrid, readTrajectory, SweepGrid } from "./csv";
import { encodePng } from "./png";
import { Raster } from "./raster";
import { FigureRecipe } from "./recipe";

const GUTTER = 8;

export interface RenderResult {
  pngPath: string;
  metaPath: string;
  width: number;
  height: number;
}

interface MapGeometry {
  cell: number;
  dataRect: { x: number; y: number; width: number; height: number };
  omegaPitch: number;
  gammaPitch: number;
}

function mapGeometry(grid: SweepGrid, cell: number): MapGeometry {
  return {
    cell,
    dataRect: {
      x: 0,
      y: GUTTER,
      width: grid.omegas.length * cell,
      height: grid.gammas.length * cell,
    },
    omegaPitch: grid.omegas.length > 1 ? grid.omegas[1] - grid.omegas[0] : 1,
    gammaPitch: grid.gammas.length > 1 ? grid.gammas[1] - grid.gammas[0] : 1,
  };
}

function omegaToX(grid: SweepGrid, geo: MapGeometry, omega: number): number {
  const col = (omega - grid.omegas[0]) / geo.omegaPitch;
  return geo.dataRect.x + Math.round(col * geo.cell + geo.cell / 2 - 0.5);
}

function gammaToY(grid: SweepGrid, geo: MapGeometry, gamma: number): number {
  const row = (gamma - grid.gammas[0]) / geo.gammaPitch;
  const fromBottom = Math.round(row * geo.cell + geo.cell / 2 - 0.5);
  return geo.dataRect.y + geo.dataRect.height - 1 - fromBottom;
}

function renderMap(recipe: FigureRecipe): { raster: Raster; meta: object } {
  const grid = readSweepGrid(recipe.input);
  const cell = recipe.cellSize ?? 1;
  const geo = mapGeometry(grid, cell);
  const raster = new Raster(geo.dataRect.width, GUTTER + geo.dataRect.height);
  for (let i = 0; i < grid.gammas.length; i++) {
    const y = geo.dataRect.y + (grid.gammas.length - 1 - i) * cell;
    for (let j = 0; j < grid.omegas.length; j++) {
      raster.fillRect(j * cell, y, cell, cell, viridis(grid.ip[i][j]));
    }
  }
  for (const omega of recipe.resonances ?? []) {
    if (omega >= grid.omegas[0] && omega <= grid.omegas[grid.omegas.length - 1]) {
      const x = omegaToX(grid, geo, omega);
      raster.line(x, 0, x, GUTTER - 2, MARKER);
    }
  }
  let overlayCount = 0;
  if (recipe.kind === "contour-overlay") {
    const contour = readContourTable(recipe.overlay!);
    for (const [omega, gamma] of contour.points) {
      if (
        omega >= grid.omegas[0] &&
        omega <= grid.omegas[grid.omegas.length - 1] &&
        gamma >= grid.gammas[0] &&
        gamma <= grid.gammas[grid.gammas.length - 1]
      ) {
        raster.set(omegaToX(grid, geo, omega), gammaToY(grid, geo, gamma), OVERLAY);
        overlayCount += 1;
      }
    }
  }
  const meta = {
    kind: recipe.kind,
    input: recipe.input,
    overlay: recipe.overlay ?? null,
    overlayPointsDrawn: overlayCount,
    cellSize: cell,
    dataRect: geo.dataRect,
    gammaRange: [grid.gammas[0], grid.gammas[grid.gammas.length - 1]],
    omegaRange: [grid.omegas[0], grid.omegas[grid.omegas.length - 1]],
    gammaCount: grid.gammas.length,
    omegaCount: grid.omegas.length,
  };
  return { raster, meta };
}

function renderLocus(recipe: FigureRecipe): { raster: Raster; meta: object } {
  const grid = readSweepGrid(recipe.input);
  const size = recipe.size ?? 321;
  const raster = new Raster(size, size);
  const center = Math.floor(size / 2);
  const radius = Math.floor(size * 0.42);
  raster.line(0, center, size - 1, center, AXIS);
  raster.line(center, 0, center, size - 1, AXIS);
  raster.circle(center, center, radius, BLACK);
  const resolved: object[] = [];
  for (let k = 0; k < recipe.points!.length; k++) {
    const want = recipe.points![k];
    let bi = 0;
    let bj = 0;
    let best = Infinity;
    for (let i = 0; i < grid.gammas.length; i++) {
      for (let j = 0; j < grid.omegas.length; j++) {
        const d =
          Math.abs(grid.gammas[i] - want.gamma) + Math.abs(grid.omegas[j] - want.omega);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    const color = SERIES[k % SERIES.length];
    for (const [re, im] of grid.eigenvalues[bi][bj]) {
      if (Number.isFinite(re) && Number.isFinite(im)) {
        raster.marker(
          center + Math.round(re * radius),
          center - Math.round(im * radius),
          color,
          1
        );
      }
    }
    resolved.push({ gamma: grid.gammas[bi], omega: grid.omegas[bj], color });
  }
  const meta = {
    kind: recipe.kind,
    input: recipe.input,
    center,
    radius,
    points: resolved,
  };
  return { raster, meta };
}

function renderTrajectory(recipe: FigureRecipe): { raster: Raster; meta: object } {
  const traj = readTrajectory(recipe.input);
  const width = recipe.width ?? 640;
  const height = recipe.height ?? 320;
  const raster = new Raster(width, height);
  const pad = 4;
  const t0 = traj.t[0];
  const t1 = traj.t[traj.t.length - 1];
  const span = t1 > t0 ? t1 - t0 : 1;
  const toX = (t: number) => pad + ((t - t0) / span) * (width - 1 - 2 * pad);
  const toY = (v: number) => {
    const clamped = Math.min(1.1, Math.max(-1.1, v));
    return pad + ((1.1 - clamped) / 2.2) * (height - 1 - 2 * pad);
  };
  raster.line(pad, Math.round(toY(0)), width - 1 - pad, Math.round(toY(0)), AXIS);
  for (let comp = 0; comp < 3; comp++) {
    for (let k = 1; k < traj.t.length; k++) {
      raster.line(
        Math.round(toX(traj.t[k - 1])),
        Math.round(toY(traj.s[k - 1][comp])),
        Math.round(toX(traj.t[k])),
        Math.round(toY(traj.s[k][comp])),
        SERIES[comp]
      );
    }
  }
  const meta = {
    kind: recipe.kind,
    input: recipe.input,
    tRange: [t0, t1],
    valueRange: [-1.1, 1.1],
    pad,
    seriesColors: { s_x: SERIES[0], s_y: SERIES[1], s_z: SERIES[2] },
  };
  return { raster, meta };
}

export function metaPathFor(output: string): string {
  const parsed = path.parse(output);
  return path.join(parsed.dir, `${parsed.name}.meta.json`);
}

export function render(recipe: FigureRecipe): RenderResult {
  let out: { raster: Raster; meta: object };
  switch (recipe.kind) {
    case "heatmap":
    case "contour-overlay":
      out = renderMap(recipe);
      break;
    case "eigenvalue-locus":
      out = renderLocus(recipe);
      break;
    case "trajectory":
      out = renderTrajectory(recipe);
      break;
  }
  const png = encodePng(out.raster.width, out.raster.height, out.raster.rgb);
  fs.writeFileSync(recipe.output, png);
  const metaPath = metaPathFor(recipe.output);
  fs.writeFileSync(metaPath, JSON.stringify(out.meta, null, 2) + "\n");
  return {
    pngPath: recipe.output,
    metaPath,
    width: out.raster.width,
    height: out.raster.height,
  };
}
