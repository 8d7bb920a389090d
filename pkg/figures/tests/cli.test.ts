import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { main } from "../src/cli";

let dir: string;
beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "figcli-"));
});
afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

const SWEEP_HEADER =
  "gamma,omega,ip,damping,n_real_transients," +
  "lambda_re_1,lambda_re_2,lambda_re_3,lambda_re_4," +
  "lambda_im_1,lambda_im_2,lambda_im_3,lambda_im_4,flags";

describe("render CLI", () => {
  it("renders a recipe with paths relative to the recipe file", () => {
    const lines = [SWEEP_HEADER];
    for (const g of [0.1, 0.2]) {
      for (const om of [1.0, 2.0]) {
        lines.push(`${g},${om},0.5,underdamped,1,1,0,0,0,0,0,0,0,`);
      }
    }
    fs.writeFileSync(path.join(dir, "sweep.csv"), lines.join("\n") + "\n");
    const recipe = path.join(dir, "recipe.json");
    fs.writeFileSync(
      recipe,
      JSON.stringify({ kind: "heatmap", input: "sweep.csv", output: "fig.png" })
    );
    expect(main(["--recipe", recipe])).toBe(0);
    expect(fs.existsSync(path.join(dir, "fig.png"))).toBe(true);
    expect(fs.existsSync(path.join(dir, "fig.meta.json"))).toBe(true);
  });

  it("returns 2 on usage errors and 1 on recipe/data errors", () => {
    expect(main([])).toBe(2);
    expect(main(["--bogus"])).toBe(2);
    const recipe = path.join(dir, "bad.json");
    fs.writeFileSync(recipe, JSON.stringify({ kind: "pie", input: "a", output: "b" }));
    expect(main(["--recipe", recipe])).toBe(1);
  });
});
