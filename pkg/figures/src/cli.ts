#!/usr/bin/env node
/** `render --recipe recipe.json`: render one figure from a recipe file. */

import * as fs from "node:fs";
import * as path from "node:path";

import { render } from "./render";
import { validateRecipe } from "./recipe";

export function main(argv: string[]): number {
  const args = [...argv];
  let recipePath: string | undefined;
  while (args.length > 0) {
    const arg = args.shift()!;
    if (arg === "--recipe") {
      recipePath = args.shift();
    } else if (arg === "--help" || arg === "-h") {
      console.log("usage: render --recipe recipe.json");
      return 0;
    } else {
      console.error(`unknown argument: ${arg}`);
      return 2;
    }
  }
  if (!recipePath) {
    console.error("usage: render --recipe recipe.json");
    return 2;
  }
  try {
    const raw = JSON.parse(fs.readFileSync(recipePath, "utf8"));
    const recipe = validateRecipe(raw);
    // input/output paths resolve relative to the recipe file
    const base = path.dirname(path.resolve(recipePath));
    const resolve = (p: string) => (path.isAbsolute(p) ? p : path.join(base, p));
    recipe.input = resolve(recipe.input);
    recipe.output = resolve(recipe.output);
    if (recipe.overlay) {
      recipe.overlay = resolve(recipe.overlay);
    }
    const result = render(recipe);
    console.log(`wrote ${result.pngPath} (${result.width}x${result.height}) and ${result.metaPath}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
