#!/usr/bin/env node
/**
 * render_figs <csv-dir> <out-dir> [--only N]
 *
 * Renders fig01.csv .. fig13.csv from <csv-dir> into <out-dir>/figNN.svg.
 * A malformed or empty CSV aborts with a nonzero exit naming the file and
 * line; no image is written for it.
 */

import { existsSync, mkdirSync, readFileSync, writeFileSync } from "fs";
import path from "path";

import { buildChart } from "./chart";
import { CsvError, parseCsv } from "./csv";
import { figureMeta } from "./figures";

export function renderFigure(csvPath: string, outPath: string, figureId: number): void {
  const raw = readFileSync(csvPath, "utf-8");
  const data = parseCsv(raw, csvPath);
  const meta = figureMeta(figureId);
  const svg = buildChart(data, {
    title: `Figure ${figureId}`,
    yLabel: meta.yLabel,
    referenceLine: meta.referenceLine,
  });
  writeFileSync(outPath, svg);
}

export function runCli(argv: string[]): number {
  const positional: string[] = [];
  let only: number | null = null;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--only") {
      const value = Number(argv[++i]);
      if (!Number.isInteger(value) || value < 1 || value > 13) {
        console.error(`--only expects a figure id 1..13, got ${argv[i]}`);
        return 2;
      }
      only = value;
    } else {
      positional.push(argv[i]);
    }
  }
  if (positional.length !== 2) {
    console.error("usage: render_figs <csv-dir> <out-dir> [--only N]");
    return 2;
  }
  const [csvDir, outDir] = positional;
  if (!existsSync(csvDir)) {
    console.error(`no such directory: ${csvDir}`);
    return 1;
  }
  mkdirSync(outDir, { recursive: true });

  const figures = only === null ? Array.from({ length: 13 }, (_, i) => i + 1) : [only];
  for (const fig of figures) {
    const name = `fig${String(fig).padStart(2, "0")}`;
    const csvPath = path.join(csvDir, `${name}.csv`);
    const outPath = path.join(outDir, `${name}.svg`);
    try {
      renderFigure(csvPath, outPath, fig);
    } catch (err) {
      if (err instanceof CsvError) {
        console.error(err.message);
      } else {
        console.error(`${csvPath}: ${(err as Error).message}`);
      }
      return 1;
    }
    console.log(outPath);
  }
  return 0;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
