#!/usr/bin/env node
/**
 * Render SVG figures from gittins data files.
 *
 *   gittins-plots --kind regret-grid --input results/regret_n1000_d10.dat \
 *                 --out regret.svg [--errorbars]
 */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { loadDataFile } from "./datafile.js";
import { buildFigure, type FigureKind } from "./figures.js";
import { renderSvg } from "./render.js";

export function run(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", {
      choices: ["regret-grid", "index-approx", "bayes-compare"] as const,
      demandOption: true,
      describe: "figure kind",
    })
    .option("input", { type: "string", demandOption: true })
    .option("out", { type: "string", demandOption: true })
    .option("errorbars", {
      type: "boolean",
      default: false,
      describe: "draw +-3 stderr bars (regret-grid only)",
    })
    .option("width", { type: "number", default: 800 })
    .option("height", { type: "number", default: 500 })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    const data = loadDataFile(args.input);
    const option = buildFigure(args.kind as FigureKind, data, {
      errorbars: args.errorbars,
    });
    const svg = renderSvg(option, args.width, args.height);
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (invokedDirectly) {
  process.exit(run(hideBin(process.argv)));
}
