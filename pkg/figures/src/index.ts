export { render, metaPathFor, RenderResult } from "./render";
export { validateRecipe, FigureRecipe, FigureKind } from "./recipe";
export { encodePng, decodePng } from "./png";
export { viridis, viridisValue } from "./colormap";
export { readCsv, readSweepGrid, readContourTable, readTrajectory } from "./csv";
