import { describe, expect, it } from "vitest";

import { validateRecipe } from "../src/recipe";

describe("recipe validation", () => {
  it("accepts a minimal heatmap recipe", () => {
    const recipe = validateRecipe({ kind: "heatmap", input: "a.csv", output: "a.png" });
    expect(recipe.kind).toBe("heatmap");
  });

  it("rejects unknown kinds and missing paths", () => {
    expect(() => validateRecipe({ kind: "pie", input: "a", output: "b" })).toThrow(/kind/);
    expect(() => validateRecipe({ kind: "heatmap", output: "b" })).toThrow(/input/);
    expect(() => validateRecipe(null)).toThrow(/JSON object/);
  });

  it("requires overlay for contour-overlay", () => {
    expect(() =>
      validateRecipe({ kind: "contour-overlay", input: "a.csv", output: "a.png" })
    ).toThrow(/overlay/);
  });

  it("requires points for eigenvalue-locus", () => {
    expect(() =>
      validateRecipe({ kind: "eigenvalue-locus", input: "a.csv", output: "a.png" })
    ).toThrow(/points/);
    expect(() =>
      validateRecipe({
        kind: "eigenvalue-locus",
        input: "a.csv",
        output: "a.png",
        points: [{ gamma: "x" }],
      })
    ).toThrow(/points\[0\]/);
  });

  it("validates numeric fields", () => {
    expect(() =>
      validateRecipe({ kind: "heatmap", input: "a", output: "b", cellSize: 0 })
    ).toThrow(/cellSize/);
    expect(() =>
      validateRecipe({ kind: "trajectory", input: "a", output: "b", width: 4 })
    ).toThrow(/width/);
    expect(() =>
      validateRecipe({ kind: "heatmap", input: "a", output: "b", resonances: ["x"] })
    ).toThrow(/resonances/);
  });
});
