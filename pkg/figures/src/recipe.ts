/** Figure recipe schema and validation. */

export type FigureKind = "heatmap" | "contour-overlay" | "eigenvalue-locus" | "trajectory";

export interface LocusPoint {
  gamma: number;
  omega: number;
}

export interface FigureRecipe {
  kind: FigureKind;
  /** primary input CSV (sweep CSV for map/locus kinds, trajectory CSV otherwise) */
  input: string;
  output: string;
  /** integer pixels per grid cell for the map kinds */
  cellSize?: number;
  /** analytic root table drawn over a contour-overlay map */
  overlay?: string;
  /** omega positions marked with ticks in the gutter of map kinds */
  resonances?: number[];
  /** locus kind: parameter points whose eigenvalues are drawn */
  points?: LocusPoint[];
  /** locus canvas size in pixels (square) */
  size?: number;
  /** trajectory canvas */
  width?: number;
  height?: number;
}

const KINDS: FigureKind[] = ["heatmap", "contour-overlay", "eigenvalue-locus", "trajectory"];

export function validateRecipe(raw: unknown): FigureRecipe {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("recipe must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const kind = obj.kind;
  if (typeof kind !== "string" || !KINDS.includes(kind as FigureKind)) {
    throw new Error(`recipe.kind must be one of ${KINDS.join(", ")}`);
  }
  for (const field of ["input", "output"] as const) {
    if (typeof obj[field] !== "string" || obj[field] === "") {
      throw new Error(`recipe.${field} must be a non-empty string`);
    }
  }
  const recipe: FigureRecipe = {
    kind: kind as FigureKind,
    input: obj.input as string,
    output: obj.output as string,
  };
  if (obj.cellSize !== undefined) {
    if (typeof obj.cellSize !== "number" || !Number.isInteger(obj.cellSize) || obj.cellSize < 1) {
      throw new Error("recipe.cellSize must be a positive integer");
    }
    recipe.cellSize = obj.cellSize;
  }
  if (obj.overlay !== undefined) {
    if (typeof obj.overlay !== "string") {
      throw new Error("recipe.overlay must be a path string");
    }
    recipe.overlay = obj.overlay;
  }
  if (kind === "contour-overlay" && recipe.overlay === undefined) {
    throw new Error("contour-overlay recipes need recipe.overlay");
  }
  if (obj.resonances !== undefined) {
    if (!Array.isArray(obj.resonances) || obj.resonances.some((v) => typeof v !== "number")) {
      throw new Error("recipe.resonances must be an array of numbers");
    }
    recipe.resonances = obj.resonances as number[];
  }
  if (kind === "eigenvalue-locus") {
    if (!Array.isArray(obj.points) || obj.points.length === 0) {
      throw new Error("eigenvalue-locus recipes need a non-empty recipe.points");
    }
    recipe.points = (obj.points as unknown[]).map((p, i) => {
      const pt = p as Record<string, unknown>;
      if (typeof pt?.gamma !== "number" || typeof pt?.omega !== "number") {
        throw new Error(`recipe.points[${i}] must carry numeric gamma and omega`);
      }
      return { gamma: pt.gamma, omega: pt.omega };
    });
  }
  for (const field of ["size", "width", "height"] as const) {
    if (obj[field] !== undefined) {
      const v = obj[field];
      if (typeof v !== "number" || !Number.isInteger(v) || v < 16) {
        throw new Error(`recipe.${field} must be an integer >= 16`);
      }
      recipe[field] = v as number;
    }
  }
  return recipe;
}
