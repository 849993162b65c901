/** CLI: render a figure from scenario CSV output.
 *
 *  Usage: node dist/main.js <timeseries|overlay|amplitude>
 *             --in <csv> [--in2 <csv>] --out <png>
 */

import { writeFileSync } from "node:fs";
import { renderFigure } from "./chart.js";
import { loadCsv } from "./csv.js";
import { amplitudeFigure, overlayFigure, timeseriesFigure } from "./figures.js";
import { encodePng } from "./png.js";

interface Args {
  kind: string;
  inPath: string;
  in2Path?: string;
  outPath: string;
}

export function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!["timeseries", "overlay", "amplitude"].includes(kind)) {
    throw new Error(`unknown figure kind "${kind}" (timeseries|overlay|amplitude)`);
  }
  const flags = new Map<string, string>();
  for (let i = 0; i < rest.length; i += 2) {
    if (!rest[i].startsWith("--") || i + 1 >= rest.length) {
      throw new Error(`malformed flag near "${rest[i]}"`);
    }
    flags.set(rest[i].slice(2), rest[i + 1]);
  }
  const inPath = flags.get("in");
  const outPath = flags.get("out");
  if (!inPath || !outPath) throw new Error("--in and --out are required");
  if (kind === "overlay" && !flags.get("in2")) {
    throw new Error("overlay requires --in2");
  }
  return { kind, inPath, in2Path: flags.get("in2"), outPath };
}

export function renderToPng(args: Args): Buffer {
  const table = loadCsv(args.inPath);
  const model =
    args.kind === "timeseries" ? timeseriesFigure(table)
      : args.kind === "amplitude" ? amplitudeFigure(table)
        : overlayFigure(table, loadCsv(args.in2Path as string));
  const raster = renderFigure(model);
  return encodePng(raster.width, raster.height, raster.data);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    writeFileSync(args.outPath, renderToPng(args));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  console.log(`wrote ${args.outPath}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
