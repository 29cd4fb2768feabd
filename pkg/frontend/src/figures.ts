/**
 * Figure builders: turn a parsed data file into an echarts option.
 *
 * Three kinds, matching the primary component's outputs:
 *  - regret-grid:  sweep file, x = Delta, one regret curve per policy column
 *                  (columns named *_stderr carry the error bars);
 *  - index-approx: index curve file, x = m, exact and approximate curves;
 *  - bayes-compare: two-armed decision file, x = nu2, one step curve per
 *                  decision column.
 */

import type { DataFile } from "./datafile.js";
import { column } from "./datafile.js";

export type FigureKind = "regret-grid" | "index-approx" | "bayes-compare";

export interface FigureOptions {
  errorbars?: boolean;
  width?: number;
  height?: number;
}

// echarts option types are too loose to be worth importing here
type EChartsOption = Record<string, unknown>;

function baseOption(xName: string, yName: string): EChartsOption {
  return {
    animation: false,
    backgroundColor: "#ffffff",
    grid: { left: 60, right: 30, top: 40, bottom: 50 },
    legend: { top: 8 },
    xAxis: { type: "value", name: xName, nameLocation: "middle", nameGap: 30 },
    yAxis: { type: "value", name: yName, nameLocation: "middle", nameGap: 45 },
    series: [] as unknown[],
  };
}

function lineSeries(name: string, x: number[], y: number[], step = false) {
  return {
    type: "line",
    name,
    showSymbol: false,
    step: step ? "end" : false,
    data: x.map((v, i) => [v, y[i]]),
  };
}

function errorBarSeries(name: string, x: number[], y: number[], se: number[]) {
  // vertical bar of +-3 standard errors per point, drawn as a custom series
  const data = x.map((v, i) => [v, y[i] - 3 * se[i], y[i] + 3 * se[i]]);
  return {
    type: "custom",
    name: `${name} stderr`,
    legendHoverLink: false,
    data,
    renderItem: (_params: unknown, api: any) => {
      const lo = api.coord([api.value(0), api.value(1)]);
      const hi = api.coord([api.value(0), api.value(2)]);
      return {
        type: "line",
        shape: { x1: lo[0], y1: lo[1], x2: hi[0], y2: hi[1] },
        style: { stroke: "#333", lineWidth: 1 },
      };
    },
  };
}

export function buildFigure(
  kind: FigureKind,
  data: DataFile,
  opts: FigureOptions = {},
): EChartsOption {
  if (data.rows.length === 0) {
    throw new Error("data file has no rows; refusing to render an empty figure");
  }
  switch (kind) {
    case "regret-grid":
      return regretGrid(data, opts);
    case "index-approx":
      return indexApprox(data);
    case "bayes-compare":
      return bayesCompare(data);
    default:
      throw new Error(`unknown figure kind '${kind as string}'`);
  }
}

function regretGrid(data: DataFile, opts: FigureOptions): EChartsOption {
  const x = column(data, "Delta");
  const policies = data.columns.filter(
    (c) => c !== "Delta" && !c.endsWith("_stderr"),
  );
  if (policies.length === 0) {
    throw new Error("missing column: no policy regret columns besides Delta");
  }
  const option = baseOption("Delta", "expected regret");
  const series: unknown[] = [];
  for (const name of policies) {
    const y = column(data, name);
    series.push(lineSeries(name, x, y));
    if (opts.errorbars) {
      const se = column(data, `${name}_stderr`);
      series.push(errorBarSeries(name, x, y, se));
    }
  }
  option.series = series;
  return option;
}

function indexApprox(data: DataFile): EChartsOption {
  const x = column(data, "m");
  const curves = data.columns.filter((c) => c !== "m");
  for (const required of ["exact", "approx"]) {
    if (!curves.includes(required)) {
      throw new Error(`missing column '${required}' (have: ${data.columns.join(", ")})`);
    }
  }
  const option = baseOption("m", "index at zero mean");
  option.series = curves.map((name) => lineSeries(name, x, column(data, name)));
  return option;
}

function bayesCompare(data: DataFile): EChartsOption {
  const x = column(data, "nu2");
  const curves = data.columns.filter((c) => c !== "nu2");
  if (curves.length === 0) {
    throw new Error("missing column: no decision columns besides nu2");
  }
  const option = baseOption("nu2", "chosen arm");
  option.series = curves.map((name) =>
    lineSeries(name, x, column(data, name), true),
  );
  return option;
}
