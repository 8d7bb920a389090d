/** Readers for the CSV contracts of the simulation CLI. */

import * as fs from "node:fs";

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function readCsv(path: string): CsvTable {
  const text = fs.readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`empty CSV: ${path}`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  return { header, rows };
}

export function requireColumns(table: CsvTable, names: string[], path: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of names) {
    const i = table.header.indexOf(name);
    if (i < 0) {
      throw new Error(`missing column '${name}' in ${path}`);
    }
    index.set(name, i);
  }
  return index;
}

export interface SweepGrid {
  gammas: number[];
  omegas: number[];
  /** ip[gammaIndex][omegaIndex]; NaN for failed cells */
  ip: number[][];
  /** eigenvalues[gammaIndex][omegaIndex] as [re, im] pairs */
  eigenvalues: [number, number][][][];
}

/** Reconstruct the (gamma, omega) grid from the sweep CSV row stream. */
export function readSweepGrid(path: string): SweepGrid {
  const table = readCsv(path);
  if (table.rows.length === 0) {
    throw new Error(`no data rows in ${path}`);
  }
  const lambdaNames = [1, 2, 3, 4].flatMap((k) => [`lambda_re_${k}`, `lambda_im_${k}`]);
  const cols = requireColumns(table, ["gamma", "omega", "ip", ...lambdaNames], path);
  const gammas: number[] = [];
  const omegas: number[] = [];
  const seenGamma = new Set<string>();
  const seenOmega = new Set<string>();
  for (const row of table.rows) {
    const g = row[cols.get("gamma")!];
    const om = row[cols.get("omega")!];
    if (!seenGamma.has(g)) {
      seenGamma.add(g);
      gammas.push(Number(g));
    }
    if (!seenOmega.has(om)) {
      seenOmega.add(om);
      omegas.push(Number(om));
    }
  }
  const ip: number[][] = gammas.map(() => new Array(omegas.length).fill(NaN));
  const eigenvalues: [number, number][][][] = gammas.map(() =>
    omegas.map(() => [] as [number, number][])
  );
  const gammaIndex = new Map(gammas.map((g, i) => [g, i] as const));
  const omegaIndex = new Map(omegas.map((om, j) => [om, j] as const));
  for (const row of table.rows) {
    const i = gammaIndex.get(Number(row[cols.get("gamma")!]))!;
    const j = omegaIndex.get(Number(row[cols.get("omega")!]))!;
    ip[i][j] = Number(row[cols.get("ip")!]);
    const lams: [number, number][] = [];
    for (let k = 1; k <= 4; k++) {
      lams.push([
        Number(row[cols.get(`lambda_re_${k}`)!]),
        Number(row[cols.get(`lambda_im_${k}`)!]),
      ]);
    }
    eigenvalues[i][j] = lams;
  }
  return { gammas, omegas, ip, eigenvalues };
}

export interface ContourTable {
  /** (omega, gamma) points collected from every root column */
  points: [number, number][];
}

/** Root tables written by the analytic contour command: omega,gamma_root_k. */
export function readContourTable(path: string): ContourTable {
  const table = readCsv(path);
  const omegaIdx = table.header.indexOf("omega");
  if (omegaIdx < 0) {
    throw new Error(`missing column 'omega' in ${path}`);
  }
  const rootIdx = table.header
    .map((name, i) => (name.startsWith("gamma_root") ? i : -1))
    .filter((i) => i >= 0);
  if (rootIdx.length === 0) {
    throw new Error(`missing column 'gamma_root_1' in ${path}`);
  }
  const points: [number, number][] = [];
  for (const row of table.rows) {
    const omega = Number(row[omegaIdx]);
    for (const i of rootIdx) {
      if (row[i] !== undefined && row[i] !== "") {
        points.push([omega, Number(row[i])]);
      }
    }
  }
  return { points };
}

export interface Trajectory {
  t: number[];
  s: [number, number, number][];
}

export function readTrajectory(path: string): Trajectory {
  const table = readCsv(path);
  const cols = requireColumns(table, ["t", "s_x", "s_y", "s_z"], path);
  if (table.rows.length === 0) {
    throw new Error(`no data rows in ${path}`);
  }
  const t: number[] = [];
  const s: [number, number, number][] = [];
  for (const row of table.rows) {
    t.push(Number(row[cols.get("t")!]));
    s.push([
      Number(row[cols.get("s_x")!]),
      Number(row[cols.get("s_y")!]),
      Number(row[cols.get("s_z")!]),
    ]);
  }
  return { t, s };
}
