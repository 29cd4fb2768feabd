import { describe, expect, it } from "vitest";
import { parseDataFile } from "../src/datafile.js";
import { buildFigure } from "../src/figures.js";
import { renderSvg } from "../src/render.js";

const SWEEP = parseDataFile(`% columns: Delta ucb thompson gittins ucb_stderr thompson_stderr gittins_stderr
0.5 9.0 9.4 8.7 0.4 0.6 0.8
1 10.3 8.2 6.0 0.5 0.8 0.7
2 8.1 6.9 4.4 0.4 0.5 0.5
`);

const INDEX = parseDataFile(`% columns: m exact approx
1 0 0
2 0.195 0
10 0.77 0.31
100 1.58 1.18
`);

const BAYES = parseDataFile(`% columns: nu2 gittins_arm bayes_arm
0.05 1 1
0.1 2 1
0.13 2 2
`);

describe("buildFigure", () => {
  it("regret-grid: one curve per policy column", () => {
    const opt = buildFigure("regret-grid", SWEEP);
    const series = opt.series as { name: string; type: string }[];
    expect(series.map((s) => s.name)).toEqual(["ucb", "thompson", "gittins"]);
    expect(series.every((s) => s.type === "line")).toBe(true);
  });

  it("regret-grid: errorbars add one custom series per curve", () => {
    const opt = buildFigure("regret-grid", SWEEP, { errorbars: true });
    const series = opt.series as { type: string }[];
    expect(series).toHaveLength(6);
    expect(series.filter((s) => s.type === "custom")).toHaveLength(3);
  });

  it("regret-grid: requires the Delta column", () => {
    const noDelta = parseDataFile("% columns: x ucb\n1 2\n");
    expect(() => buildFigure("regret-grid", noDelta)).toThrow(
      /missing column 'Delta'/,
    );
  });

  it("index-approx: exact and approximate curves over m", () => {
    const opt = buildFigure("index-approx", INDEX);
    const series = opt.series as { name: string }[];
    expect(series.map((s) => s.name)).toEqual(["exact", "approx"]);
  });

  it("index-approx: names the missing column", () => {
    const broken = parseDataFile("% columns: m exact\n1 0\n");
    expect(() => buildFigure("index-approx", broken)).toThrow(
      /missing column 'approx'/,
    );
  });

  it("bayes-compare: one step curve per decision column", () => {
    const opt = buildFigure("bayes-compare", BAYES);
    const series = opt.series as { name: string; step: string }[];
    expect(series.map((s) => s.name)).toEqual(["gittins_arm", "bayes_arm"]);
    expect(series.every((s) => s.step === "end")).toBe(true);
  });

  it("refuses empty data", () => {
    const empty = parseDataFile("% columns: Delta ucb\n");
    expect(() => buildFigure("regret-grid", empty)).toThrow(/no rows/);
  });
});

describe("renderSvg", () => {
  it("renders a well-formed SVG with all curves", () => {
    const svg = renderSvg(buildFigure("regret-grid", SWEEP));
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("</svg>");
    for (const name of ["ucb", "thompson", "gittins"]) {
      expect(svg).toContain(name); // legend labels
    }
  });

  it("is deterministic for identical input", () => {
    const a = renderSvg(buildFigure("index-approx", INDEX));
    const b = renderSvg(buildFigure("index-approx", INDEX));
    expect(a).toEqual(b);
  });
});
